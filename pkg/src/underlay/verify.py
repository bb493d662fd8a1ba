"""Oracle-equivalence suites behind ``underlay verify``.

Each check compares one route against an independent one (closed form
against exhaustive MAC search, closed form against numerical quadrature,
sampler against its target CDF) and keeps the first counterexample it finds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import integrate, stats

from . import mac
from .core import capacity
from .geometry import (
    PathLossParams,
    asymptotic_interference_variance,
    channel_power_gain,
    density_to_count,
    expected_received_power,
    interference_variance,
    sample_distance,
    sample_fading,
)
from .rates import jd_profile_rates, sd_profile_rates

SUITES = ("mac-oracle", "closed-form", "geometry")


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    counterexample: dict | None = None


@dataclass
class Report:
    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def random_scenarios(rng: np.random.Generator, n: int, n_m: int, snr_range=(1e-3, 1e3), gm_range=(1e-2, 10.0)):
    """Log-uniform ``(gamma_b, gammas, gm)`` draws; one threshold per scenario."""
    lo, hi = np.log10(snr_range)
    gamma_b = 10.0 ** rng.uniform(lo, hi, n)
    gammas = 10.0 ** rng.uniform(lo, hi, (n, n_m))
    glo, ghi = np.log10(gm_range)
    gm = 10.0 ** rng.uniform(glo, ghi, n)
    return gamma_b, gammas, gm


def _scenario(gamma_b, gammas, gm, i) -> dict:
    return {"gamma_b": float(gamma_b[i]), "gammas": gammas[i].tolist(), "gamma_m_threshold": float(gm[i])}


def zero_outage_check(n_m: int, n_scenarios: int, seed: int = 1) -> Check:
    rng = np.random.default_rng([seed, n_m])
    gamma_b, gammas, gm = random_scenarios(rng, n_scenarios, n_m)
    target = np.log2(1.0 + gamma_b / (1.0 + gm) ** n_m)
    best = mac.batch_max_downlink_rate(gamma_b, gammas, gm)
    bad = np.flatnonzero(target > best + mac.RATE_SLACK)
    name = f"zero-outage n_m={n_m}"
    if bad.size:
        i = bad[0]
        return Check(
            name,
            False,
            f"{bad.size} failures; rate {target[i]:.12g} exceeds MAC maximum {best[i]:.12g}",
            _scenario(gamma_b, gammas, gm, i),
        )
    return Check(name, True, f"{n_scenarios} scenarios decodable")


def representation_floor(gamma_b: float, gammas, gm: float) -> float:
    """Relative rate error forced by storing the worst-case SNRs as doubles.

    The stored SNRs put the full MTD set off the exact MAC boundary by
    ``1 + sum(gammas) - (1 + gm)**n``; against ``gamma_b`` that offset is
    the relative change of the downlink rate, which no kernel can undo.
    """
    n = len(gammas)
    offset = 1 + sum(Fraction(x) for x in gammas) - (1 + Fraction(gm)) ** n
    return abs(float(offset)) / gamma_b


def tightness_check(
    n_m: int, n_draws: int = 100, seed: int = 2, rel_tol: float = 1e-9, allow_representation: bool = True
) -> Check:
    """Closed-form zero-outage rate against the MAC maximum at the worst case.

    With ``allow_representation`` the tolerance grows by twice the
    :func:`representation_floor` of each draw.
    """
    rng = np.random.default_rng([seed, n_m])
    gamma_b, _, gm = random_scenarios(rng, n_draws, 1)
    worst = 0.0
    for gb, g in zip(gamma_b, gm):
        sc = mac.MacScenario(gb, mac.worst_case_mtd_snrs(g, n_m), g)
        got = mac.max_downlink_rate(sc)
        want = capacity(gb / (1.0 + g) ** n_m)
        err = abs(got - want) / want
        worst = max(worst, err)
        tol = rel_tol
        if allow_representation:
            tol += 2.0 * representation_floor(gb, sc.gamma_mtds, g)
        if err > tol:
            return Check(
                f"tightness n_m={n_m}",
                False,
                f"MAC maximum {got:.15g} vs closed form {want:.15g}",
                {"gamma_b": gb, "gammas": list(sc.gamma_mtds), "gamma_m_threshold": g},
            )
    return Check(f"tightness n_m={n_m}", True, f"max relative error {worst:.2e}")


def sd_below_jd_check(n_scenarios: int = 20000, seed: int = 3) -> Check:
    rng = np.random.default_rng(seed)
    for n_m in range(1, 6):
        gamma_b, gammas, gm = random_scenarios(rng, n_scenarios // 5, n_m)
        jd = mac.batch_max_downlink_rate(gamma_b, gammas, gm)
        sd = mac.batch_sd_max_downlink_rate(gamma_b, gammas, gm)
        bad = np.flatnonzero(sd > jd + mac.RATE_SLACK)
        if bad.size:
            i = bad[0]
            return Check("SD <= JD", False, f"SD {sd[i]:.12g} > JD {jd[i]:.12g}", _scenario(gamma_b, gammas, gm, i))
    return Check("SD <= JD", True, f"{n_scenarios} scenarios")


def profile_oracle_check(n_draws: int = 200, points: int = 200, seed: int = 4, tol: float = 1e-12) -> Check:
    rng = np.random.default_rng(seed)
    gamma_b, _, gm = random_scenarios(rng, n_draws, 1)
    for gb, g in zip(gamma_b, gm):
        grid = np.linspace(0.0, 3.0 * g * (1.0 + gb), points)
        gbs = np.full(points, gb)
        for name, profile, oracle in [
            ("JD", jd_profile_rates, mac.batch_max_downlink_rate),
            ("SD", sd_profile_rates, mac.batch_sd_max_downlink_rate),
        ]:
            a = profile(gb, g, grid)
            b = oracle(gbs, grid[:, None], g)
            k = int(np.argmax(np.abs(a - b)))
            if abs(a[k] - b[k]) > tol:
                return Check(
                    "profile vs MAC oracle",
                    False,
                    f"{name} profile {a[k]:.15g} vs oracle {b[k]:.15g}",
                    {"gamma_b": gb, "gammas": [grid[k]], "gamma_m_threshold": g},
                )
    return Check("profile vs MAC oracle", True, f"{n_draws} profiles x {points} points")


def mac_oracle_suite(n_scenarios: int = 20000) -> Report:
    report = Report("mac-oracle")
    report.checks += [zero_outage_check(n, n_scenarios) for n in range(1, 6)]
    report.checks += [tightness_check(n, 20) for n in range(1, 9)]
    report.checks.append(sd_below_jd_check())
    report.checks.append(profile_oracle_check())
    return report


def received_power_quadrature(p_tx_mw: float, params: PathLossParams, radius_m: float) -> float:
    """Mean received power by 2-D quadrature over fading and distance."""
    K, a, R = params.k_loss, params.alpha, float(radius_m)

    def integrand(v, u):
        return K * p_tx_mw * v * (1.0 + u) ** (-a) * math.exp(-v) * 2.0 * u / (R * R)

    opts_v = {"epsabs": 0.0, "epsrel": 1e-12, "limit": 200}
    opts_u = {"epsabs": 0.0, "epsrel": 1e-12, "limit": 200, "points": [p for p in (1.0, 10.0) if p < R]}
    value, _ = integrate.nquad(integrand, [[0.0, math.inf], [0.0, R]], opts=[opts_v, opts_u])
    return value


def closed_form_suite(rel_tol: float = 1e-6) -> Report:
    report = Report("closed-form")
    for a in (2.5, 3.0, 4.0, 6.0):
        for R in (10.0, 200.0, 1000.0):
            params = PathLossParams(1e-3, a)
            cf = expected_received_power(1000.0, params, R)
            quad = received_power_quadrature(1000.0, params, R)
            err = abs(cf - quad) / quad
            report.checks.append(
                Check(
                    f"E[zeta] alpha={a} R={R:g}",
                    err <= rel_tol,
                    f"closed {cf:.10e} quad {quad:.10e} rel {err:.1e}",
                    None if err <= rel_tol else {"alpha": a, "radius_m": R},
                )
            )
    params = PathLossParams(1e-3, 4.0)
    sigma2 = 10 ** (-9.75)
    for lam in (1e-4, 1e-3, 1e-2):
        n_i = density_to_count(lam, 200.0)
        finite = interference_variance(n_i, 0.1, params, 200.0, sigma2)
        limit = asymptotic_interference_variance(n_i / (math.pi * 200.0**2), 0.1, params, sigma2)
        err = abs(limit - finite) / finite
        report.checks.append(
            Check(
                f"asymptotic variance lambda={lam:g}",
                err <= 0.05,
                f"finite {finite:.6e} limit {limit:.6e} rel {err:.1e}",
                None if err <= 0.05 else {"lambda_i": lam},
            )
        )
    return report


def geometry_suite(n_samples: int = 100_000, seed: int = 5) -> Report:
    report = Report("geometry")
    rng = np.random.default_rng(seed)
    R = 200.0
    r = sample_distance(rng, R, n_samples)
    ks = stats.kstest(r, lambda x: np.clip(x / R, 0.0, 1.0) ** 2)
    report.checks.append(
        Check(
            "distance sampler KS",
            ks.pvalue > 0.01,
            f"D={ks.statistic:.4g} p={ks.pvalue:.3f}",
            None if ks.pvalue > 0.01 else {"statistic": ks.statistic},
        )
    )
    h = sample_fading(rng, n_samples)
    z = abs(h.mean() - 1.0) / (h.std(ddof=1) / math.sqrt(n_samples))
    report.checks.append(Check("fading unit mean", z <= 3.0, f"mean {h.mean():.5f} z={z:.2f}"))
    params = PathLossParams(1e-3, 4.0)
    zeta = 1000.0 * channel_power_gain(sample_distance(rng, R, n_samples), params, sample_fading(rng, n_samples))
    want = expected_received_power(1000.0, params, R)
    z = abs(zeta.mean() - want) / (zeta.std(ddof=1) / math.sqrt(n_samples))
    report.checks.append(Check("Monte Carlo E[zeta]", z <= 3.0, f"MC {zeta.mean():.5e} closed {want:.5e} z={z:.2f}"))
    return report


def run_suite(name: str) -> Report:
    if name == "mac-oracle":
        return mac_oracle_suite()
    if name == "closed-form":
        return closed_form_suite()
    if name == "geometry":
        return geometry_suite()
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
