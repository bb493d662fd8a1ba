"""Monte Carlo engine: sample deployments, pick the zero-outage rate, check it.

Each trial places B, the associated MTDs and the unassociated interferers on
the disk, draws block Rayleigh fading, forms that slot's noise-plus-
interference power and the resulting SNRs, then asks the MAC engine whether
U decodes the rate B selected from ``gamma_b`` alone.

Trials run in fixed-size chunks. Every trial owns its own random draws
(see :mod:`underlay.streams`), so results are bit-identical for any number
of workers, and all points of a sweep reuse the same deployments.
"""

from __future__ import annotations

import dataclasses
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import mac
from .analysis import MeanRateResult, mean_rate_jd, mean_rate_sd
from .core import dbm_to_mw, inv_capacity
from .geometry import (
    PathLossParams,
    density_to_count,
    distance_from_uniform,
    expected_received_power,
    expected_snr_lower_bound,
    fading_from_uniform,
    interference_variance,
)
from .rates import DecoderKind
from .streams import TrialStream, block_uniforms

log = logging.getLogger(__name__)

CHUNK_TRIALS = 8192
SWEEP_VARIABLES = ("r_m", "n_m", "lambda_i")


@dataclass(frozen=True)
class ScenarioConfig:
    """One simulated scenario. Physics defaults are the reference deployment settings."""

    sigma2_dbm: float = -97.5
    alpha: float = 4.0
    p_m_dbm: float = -10.0
    p_b_dbm: float = 30.0
    k_db: float = -30.0
    radius_m: float = 200.0
    n_m: int = 1
    n_i: int | None = None
    lambda_i: float | None = None
    r_m: float = 0.01
    decoder: DecoderKind = DecoderKind.JD
    trials: int = 100_000
    master_seed: int = 0
    # Place B at this fixed distance instead of uniformly on the disk.
    b_distance_m: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "decoder", DecoderKind.parse(self.decoder))
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 1 <= self.n_m <= mac.MAX_MTDS:
            raise ValueError(f"n_m must be in 1..{mac.MAX_MTDS}, got {self.n_m}")
        if self.n_i is not None and self.lambda_i is not None:
            raise ValueError("give n_i or lambda_i, not both")
        if self.n_i is not None and self.n_i < 0:
            raise ValueError(f"n_i must be >= 0, got {self.n_i}")
        if self.lambda_i is not None and not self.lambda_i >= 0:
            raise ValueError(f"lambda_i must be >= 0, got {self.lambda_i}")
        if not (math.isfinite(self.r_m) and self.r_m >= 0):
            raise ValueError(f"r_m must be >= 0, got {self.r_m}")
        if not self.radius_m > 0:
            raise ValueError(f"radius_m must be > 0, got {self.radius_m}")
        if self.b_distance_m is not None and not 0 <= self.b_distance_m <= self.radius_m:
            raise ValueError("b_distance_m must lie in [0, radius_m]")
        if self.master_seed < 0 or self.master_seed >= 2**64:
            raise ValueError("master_seed must be an unsigned 64-bit integer")
        PathLossParams.from_db(self.k_db, self.alpha)

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    @property
    def interferers(self) -> int:
        if self.n_i is not None:
            return self.n_i
        if self.lambda_i is not None:
            return density_to_count(self.lambda_i, self.radius_m)
        return 0

    @property
    def density(self) -> float:
        if self.lambda_i is not None:
            return self.lambda_i
        return self.interferers / (math.pi * self.radius_m**2)

    @property
    def gamma_m_threshold(self) -> float:
        return inv_capacity(self.r_m)

    @property
    def params(self) -> PathLossParams:
        return PathLossParams.from_db(self.k_db, self.alpha)

    @property
    def n_draws(self) -> int:
        # (distance, fading) for B, each associated MTD and each interferer
        return 2 * (1 + self.n_m + self.interferers)

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["decoder"] = self.decoder.value
        return d


@dataclass
class TrialResult:
    gamma_b: float
    mtd_snrs: list[float]
    selected_rate: float
    decoded: bool
    n_mtds_decoded: int


@dataclass
class SweepPoint:
    x: float
    mean_rate_sim: float
    std_err: float
    mean_rate_analytic: float
    analytic_kind: str
    outage_rate: float
    trials: int
    seed: int
    mean_mtds_decoded: float = 0.0


@dataclass
class SweepResult:
    variable: str
    decoder: DecoderKind
    points: list[SweepPoint] = field(default_factory=list)
    config: ScenarioConfig | None = None

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(p, name) for p in self.points])


def _snrs_from_uniforms(cfg: ScenarioConfig, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Turn per-trial uniforms into ``(gamma_b, mtd_snrs)``.

    Column layout: node ``j`` uses ``u[:, 2j]`` for distance and
    ``u[:, 2j + 1]`` for fading; node 0 is B, then the associated MTDs,
    then the interferers.
    """
    params = cfg.params
    n_nodes = u.shape[1] // 2
    r = distance_from_uniform(u[:, 0::2], cfg.radius_m)
    if cfg.b_distance_m is not None:
        r[:, 0] = cfg.b_distance_m
    h = fading_from_uniform(u[:, 1::2])
    gain = h * params.k_loss * (1.0 + r) ** (-params.alpha)
    p_m = dbm_to_mw(cfg.p_m_dbm)
    sigma2 = dbm_to_mw(cfg.sigma2_dbm)
    first_i = 1 + cfg.n_m
    if n_nodes > first_i:
        sigma_tilde2 = p_m * gain[:, first_i:].sum(axis=1) + sigma2
    else:
        sigma_tilde2 = np.full(u.shape[0], sigma2)
    gamma_b = dbm_to_mw(cfg.p_b_dbm) * gain[:, 0] / sigma_tilde2
    mtd = p_m * gain[:, 1:first_i] / sigma_tilde2[:, None]
    return gamma_b, mtd


def _selected_rate(cfg: ScenarioConfig, gamma_b: np.ndarray) -> np.ndarray:
    gm = cfg.gamma_m_threshold
    if cfg.decoder is DecoderKind.JD:
        return np.log2(1.0 + gamma_b / (1.0 + gm) ** cfg.n_m)
    if cfg.n_m > 1:
        return np.zeros_like(gamma_b)
    return np.log2(1.0 + gamma_b / (1.0 + gm * (1.0 + gamma_b)))


def _evaluate(cfg: ScenarioConfig, u: np.ndarray, rate_inflation: float) -> dict[str, np.ndarray]:
    gamma_b, mtd = _snrs_from_uniforms(cfg, u)
    gm = cfg.gamma_m_threshold
    selected = _selected_rate(cfg, gamma_b) * rate_inflation
    if cfg.decoder is DecoderKind.JD:
        reachable = mac.batch_max_downlink_rate(gamma_b, mtd, gm)
    else:
        reachable = mac.batch_sd_max_downlink_rate(gamma_b, mtd, gm)
    decoded = selected <= reachable + mac.RATE_SLACK
    return {
        "gamma_b": gamma_b,
        "mtd_snrs": mtd,
        "selected_rate": selected,
        "decoded": decoded,
        "n_mtds_decoded": mac.batch_decodable_count(mtd, gm),
    }


def simulate_block(
    cfg: ScenarioConfig, first_trial: int, n_trials: int, rate_inflation: float = 1.0
) -> dict[str, np.ndarray]:
    """Run trials ``first_trial .. first_trial + n_trials - 1`` vectorised."""
    u = block_uniforms(cfg.master_seed, cfg.n_m, cfg.interferers, first_trial, n_trials)
    return _evaluate(cfg, u, rate_inflation)


def run_trial(stream: TrialStream, cfg: ScenarioConfig, rate_inflation: float = 1.0) -> TrialResult:
    """One trial from its own stream, decided through the scalar MAC API.

    ``stream`` must have been opened for ``cfg``'s node counts.
    """
    if stream.remaining != cfg.n_draws:
        raise ValueError(f"stream holds {stream.remaining} draws, scenario needs {cfg.n_draws}")
    u = stream.random((1, cfg.n_draws))
    gamma_b, mtd = _snrs_from_uniforms(cfg, u)
    gb = float(gamma_b[0])
    scenario = mac.MacScenario(gb, tuple(mtd[0]), cfg.gamma_m_threshold)
    selected = float(_selected_rate(cfg, gamma_b)[0]) * rate_inflation
    if cfg.decoder is DecoderKind.JD:
        decoded = mac.downlink_decodable(scenario, selected)
    else:
        decoded = selected <= mac.sd_max_downlink_rate(scenario) + mac.RATE_SLACK
    return TrialResult(
        gamma_b=gb,
        mtd_snrs=[float(x) for x in mtd[0]],
        selected_rate=selected,
        decoded=bool(decoded),
        n_mtds_decoded=len(mac.decodable_mtd_set(scenario)),
    )


def _chunk_task(args) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    cfg, first, count, inflation = args
    out = simulate_block(cfg, first, count, inflation)
    return out["selected_rate"], out["decoded"], out["n_mtds_decoded"]


def default_workers() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def _run_trials(cfg: ScenarioConfig, workers: int | None, rate_inflation: float = 1.0):
    tasks = [
        (cfg, first, min(CHUNK_TRIALS, cfg.trials - first), rate_inflation)
        for first in range(0, cfg.trials, CHUNK_TRIALS)
    ]
    workers = default_workers() if workers is None else workers
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    if workers == 1 or len(tasks) == 1:
        parts = [_chunk_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
            parts = list(pool.map(_chunk_task, tasks))
    rates = np.concatenate([p[0] for p in parts])
    decoded = np.concatenate([p[1] for p in parts])
    counts = np.concatenate([p[2] for p in parts])
    return rates, decoded, counts


def _mean_and_stderr(values: np.ndarray) -> tuple[float, float]:
    n = values.size
    mean = math.fsum(values) / n
    if n < 2:
        return mean, 0.0
    var = math.fsum((values - mean) ** 2) / (n - 1)
    return mean, math.sqrt(var / n)


def analytic_mean_rate(cfg: ScenarioConfig) -> MeanRateResult:
    """Closed-form mean downlink rate matching ``cfg``."""
    params = cfg.params
    p_b = dbm_to_mw(cfg.p_b_dbm)
    if cfg.b_distance_m is None:
        e_zeta_b = expected_received_power(p_b, params, cfg.radius_m)
    else:
        e_zeta_b = p_b * params.k_loss * (1.0 + cfg.b_distance_m) ** (-params.alpha)
    n_i = cfg.interferers
    sigma_tilde2 = interference_variance(n_i, dbm_to_mw(cfg.p_m_dbm), params, cfg.radius_m, dbm_to_mw(cfg.sigma2_dbm))
    e_gamma_b = expected_snr_lower_bound(e_zeta_b, sigma_tilde2)
    noisy = n_i > 0
    if cfg.decoder is DecoderKind.JD:
        return mean_rate_jd(e_gamma_b, cfg.gamma_m_threshold, cfg.n_m, noisy)
    if cfg.n_m > 1:
        # nothing positive is safe with SIC and several MTDs
        return MeanRateResult(0.0, "approximation" if noisy else "upper_bound")
    return mean_rate_sd(e_gamma_b, cfg.gamma_m_threshold, noisy)


def point_config(cfg: ScenarioConfig, variable: str, value) -> ScenarioConfig:
    if variable == "r_m":
        return cfg.replace(r_m=float(value))
    if variable == "n_m":
        if float(value) != int(value):
            raise ValueError(f"n_m sweep values must be integers, got {value!r}")
        return cfg.replace(n_m=int(value))
    if variable == "lambda_i":
        return cfg.replace(lambda_i=float(value), n_i=None)
    raise ValueError(f"unsupported sweep variable {variable!r}; choose from {', '.join(SWEEP_VARIABLES)}")


def run_sweep(
    cfg: ScenarioConfig, variable: str, values: Sequence[float], workers: int | None = None
) -> SweepResult:
    """Simulate every sweep value with ``cfg.trials`` trials each.

    All points, and any other sweep with the same seed, share the same
    deployments trial by trial.
    """
    if variable not in SWEEP_VARIABLES:
        raise ValueError(f"unsupported sweep variable {variable!r}; choose from {', '.join(SWEEP_VARIABLES)}")
    values = list(values)
    if not values:
        raise ValueError("sweep needs at least one value")
    result = SweepResult(variable=variable, decoder=cfg.decoder, config=cfg)
    for value in values:
        pcfg = point_config(cfg, variable, value)
        log.info("sweep %s=%s: %d trials (%s)", variable, value, pcfg.trials, pcfg.decoder.value)
        rates, decoded, counts = _run_trials(pcfg, workers)
        mean, se = _mean_and_stderr(rates)
        analytic = analytic_mean_rate(pcfg)
        result.points.append(
            SweepPoint(
                x=float(value),
                mean_rate_sim=mean,
                std_err=se,
                mean_rate_analytic=analytic.value,
                analytic_kind=analytic.kind,
                outage_rate=float(np.count_nonzero(~decoded)) / decoded.size,
                trials=pcfg.trials,
                seed=pcfg.master_seed,
                mean_mtds_decoded=math.fsum(counts) / counts.size,
            )
        )
    return result


def estimate_outage(cfg: ScenarioConfig, rate_inflation: float = 1.0, workers: int | None = None) -> float:
    """Fraction of trials where U fails to decode ``rate_inflation`` x the selected rate."""
    if not rate_inflation >= 1.0:
        raise ValueError(f"rate_inflation must be >= 1, got {rate_inflation}")
    _, decoded, _ = _run_trials(cfg, workers, rate_inflation)
    return float(np.count_nonzero(~decoded)) / decoded.size
