"""Multiple-access-channel decodability engine.

The receiver U hears the base station B plus ``N_M`` fixed-rate MTDs. For a
given realisation of SNRs this module answers which MTD signals can be
decoded, how fast B may transmit and still be decoded, and what a
successive single-user (SIC) receiver achieves instead.

Everything is exact: the joint-decoding routines enumerate all ``2**N_M``
candidate decoded sets. That is what makes this module usable as the oracle
for the closed-form rates in :mod:`underlay.rates`.

MTD indices are 0-based throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ._backend import kernels
from .core import RATE_SLACK, LinSnr, Rate, SnrThreshold, capacity

MAX_MTDS = 20


@dataclass(frozen=True)
class MacScenario:
    gamma_b: LinSnr
    gamma_mtds: tuple[LinSnr, ...]
    gamma_m_threshold: SnrThreshold

    def __post_init__(self):
        gammas = tuple(float(g) for g in self.gamma_mtds)
        object.__setattr__(self, "gamma_mtds", gammas)
        object.__setattr__(self, "gamma_b", float(self.gamma_b))
        object.__setattr__(self, "gamma_m_threshold", float(self.gamma_m_threshold))
        if not 1 <= len(gammas) <= MAX_MTDS:
            raise ValueError(f"need 1..{MAX_MTDS} MTDs, got {len(gammas)}")
        for name, v in [("gamma_b", self.gamma_b), ("gamma_m_threshold", self.gamma_m_threshold)]:
            if not (math.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")
        if not all(math.isfinite(g) and g >= 0.0 for g in gammas):
            raise ValueError(f"MTD SNRs must be finite and >= 0, got {gammas!r}")

    @property
    def n_m(self) -> int:
        return len(self.gamma_mtds)

    @property
    def r_m(self) -> Rate:
        return capacity(self.gamma_m_threshold)


@dataclass(frozen=True)
class DecodeVerdict:
    decodable_mtds: frozenset[int]
    downlink_decodable: bool
    max_downlink_rate: Rate


def _feasible_sum(total: float, k: int, gm: float) -> bool:
    return 1.0 + total >= (1.0 + gm) ** k * 2.0 ** (-RATE_SLACK)


def mtd_subset_feasible(scenario: MacScenario, subset: Iterable[int]) -> bool:
    """Whether the MTDs in ``subset`` pass their own sum-rate MAC inequality.

    Checks ``1 + sum(gamma_i) >= (1 + Gamma_M)**|S|`` on unscaled SNRs.
    Equality counts as feasible.
    """
    subset = set(subset)
    if not subset:
        raise ValueError("subset must be nonempty")
    bad = [i for i in subset if not 0 <= i < scenario.n_m]
    if bad:
        raise IndexError(f"MTD indices out of range 0..{scenario.n_m - 1}: {sorted(bad)}")
    total = math.fsum(scenario.gamma_mtds[i] for i in subset)
    return _feasible_sum(total, len(subset), scenario.gamma_m_threshold)


def decodable_mtd_set(scenario: MacScenario) -> frozenset[int]:
    """Largest set of MTDs a joint decoder can recover, the rest left as noise.

    Only the MTD SNRs and the threshold are consulted; B's SNR plays no part.
    """
    gammas = np.asarray([scenario.gamma_mtds], dtype=np.float64)
    mask = int(kernels.decodable_masks(gammas, _thresholds(scenario.gamma_m_threshold, 1), RATE_SLACK)[0])
    return frozenset(i for i in range(gammas.shape[1]) if (mask >> i) & 1)


def max_downlink_rate(scenario: MacScenario) -> Rate:
    """Largest R_B a joint decoder recovers for this exact SNR realisation."""
    return float(
        kernels.jd_max_rate(
            np.asarray([scenario.gamma_b], dtype=np.float64),
            np.asarray([scenario.gamma_mtds], dtype=np.float64),
            _thresholds(scenario.gamma_m_threshold, 1),
            RATE_SLACK,
        )[0]
    )


def downlink_decodable(scenario: MacScenario, r_b: Rate) -> bool:
    if not (math.isfinite(r_b) and r_b >= 0.0):
        raise ValueError(f"r_b must be finite and >= 0, got {r_b!r}")
    return r_b <= max_downlink_rate(scenario) + RATE_SLACK


def sd_max_downlink_rate(scenario: MacScenario) -> Rate:
    """Downlink rate of a successive single-user decoder.

    The strongest remaining MTD is attempted first with everything else,
    B included, as noise. Decoded MTDs are cancelled; B goes last.
    """
    return float(
        kernels.sd_max_rate(
            np.asarray([scenario.gamma_b], dtype=np.float64),
            np.asarray([scenario.gamma_mtds], dtype=np.float64),
            _thresholds(scenario.gamma_m_threshold, 1),
            RATE_SLACK,
        )[0]
    )


def verdict(scenario: MacScenario, r_b: Rate) -> DecodeVerdict:
    best = max_downlink_rate(scenario)
    return DecodeVerdict(
        decodable_mtds=decodable_mtd_set(scenario),
        downlink_decodable=r_b <= best + RATE_SLACK,
        max_downlink_rate=best,
    )


def worst_case_mtd_snrs(gamma_m_threshold: SnrThreshold, n_m: int) -> list[LinSnr]:
    """Equal MTD SNRs that meet the full-set MAC inequality with equality.

    At this point the joint-decoding rate drops to its zero-outage floor.
    """
    if n_m < 1:
        raise ValueError(f"n_m must be >= 1, got {n_m}")
    value = ((1.0 + gamma_m_threshold) ** n_m - 1.0) / n_m
    return [value] * n_m


# Batched entry points for the Monte Carlo engine: one row per scenario.
# ``gamma_m_threshold`` may be a scalar or one value per row.


def _thresholds(gamma_m_threshold, n: int) -> np.ndarray:
    gm = np.array(np.broadcast_to(np.asarray(gamma_m_threshold, dtype=np.float64), (n,)))
    if not np.all(np.isfinite(gm) & (gm >= 0)):
        raise ValueError("gamma_m_threshold must be finite and >= 0")
    return gm


def _as_batch(gamma_b, gammas) -> tuple[np.ndarray, np.ndarray]:
    gamma_b = np.ascontiguousarray(gamma_b, dtype=np.float64)
    gammas = np.ascontiguousarray(gammas, dtype=np.float64)
    if gammas.ndim != 2 or gammas.shape[0] != gamma_b.shape[0]:
        raise ValueError("gammas must have shape (len(gamma_b), n_m)")
    if gammas.shape[1] > MAX_MTDS:
        raise ValueError(f"at most {MAX_MTDS} MTDs supported")
    return gamma_b, gammas


def batch_max_downlink_rate(gamma_b, gammas, gamma_m_threshold) -> np.ndarray:
    gamma_b, gammas = _as_batch(gamma_b, gammas)
    gm = _thresholds(gamma_m_threshold, gamma_b.size)
    return kernels.jd_max_rate(gamma_b, gammas, gm, RATE_SLACK)


def batch_sd_max_downlink_rate(gamma_b, gammas, gamma_m_threshold) -> np.ndarray:
    gamma_b, gammas = _as_batch(gamma_b, gammas)
    gm = _thresholds(gamma_m_threshold, gamma_b.size)
    return kernels.sd_max_rate(gamma_b, gammas, gm, RATE_SLACK)


def batch_decodable_masks(gammas, gamma_m_threshold) -> np.ndarray:
    """Decodable sets as bit masks over original MTD indices."""
    gammas = np.ascontiguousarray(gammas, dtype=np.float64)
    if gammas.ndim != 2 or gammas.shape[1] > MAX_MTDS:
        raise ValueError(f"gammas must be 2-D with at most {MAX_MTDS} columns")
    return kernels.decodable_masks(gammas, _thresholds(gamma_m_threshold, gammas.shape[0]), RATE_SLACK)


def batch_decodable_count(gammas, gamma_m_threshold) -> np.ndarray:
    masks = batch_decodable_masks(gammas, gamma_m_threshold)
    return np.bitwise_count(masks).astype(np.int64)
