"""Disk deployment, bounded path loss with Rayleigh fading, interference moments.

Every node sits uniformly on a disk of radius ``R`` centred on the receiver
U. Only distances to U matter, so angles are never sampled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import db_to_linear


@dataclass(frozen=True)
class PathLossParams:
    k_loss: float
    alpha: float

    def __post_init__(self):
        if not (math.isfinite(self.k_loss) and self.k_loss > 0):
            raise ValueError(f"k_loss must be > 0, got {self.k_loss!r}")
        if not (math.isfinite(self.alpha) and self.alpha > 2):
            raise ValueError(f"alpha must be > 2 for the closed forms, got {self.alpha!r}")

    @classmethod
    def from_db(cls, k_db: float, alpha: float) -> "PathLossParams":
        return cls(k_loss=db_to_linear(k_db), alpha=float(alpha))


@dataclass
class DiskDeployment:
    radius_m: float
    distances: np.ndarray
    fadings: np.ndarray

    def __post_init__(self):
        self.distances = np.asarray(self.distances, dtype=np.float64)
        self.fadings = np.asarray(self.fadings, dtype=np.float64)
        if self.distances.shape != self.fadings.shape:
            raise ValueError("distances and fadings must have the same shape")
        if np.any(self.distances < 0) or np.any(self.distances > self.radius_m):
            raise ValueError("distances must lie in [0, radius_m]")
        if np.any(self.fadings < 0):
            raise ValueError("fading draws must be >= 0")

    def gains(self, params: PathLossParams) -> np.ndarray:
        return channel_power_gain(self.distances, params, self.fadings)


@dataclass(frozen=True)
class InterferenceField:
    n_i: int
    lambda_i: float
    sigma2_mw: float
    total_variance_mw: float


def _check_radius(radius_m: float) -> None:
    if not (math.isfinite(radius_m) and radius_m > 0):
        raise ValueError(f"radius_m must be > 0, got {radius_m!r}")


def distance_from_uniform(u, radius_m: float):
    """Inverse CDF of the distance to U: ``R * sqrt(u)``."""
    _check_radius(radius_m)
    return radius_m * np.sqrt(u)


def sample_distance(rng, radius_m: float, size=None):
    """Distance of a uniformly placed node; pdf ``2 r / R**2`` on [0, R].

    ``rng`` is anything with a numpy-style ``random(size)`` method.
    """
    _check_radius(radius_m)
    return distance_from_uniform(rng.random(size), radius_m)


def fading_from_uniform(u):
    """Unit-mean exponential power gain (Rayleigh amplitude) by inversion."""
    return -np.log1p(-np.asarray(u))


def sample_fading(rng, size=None):
    return fading_from_uniform(rng.random(size))


def channel_power_gain(r, params: PathLossParams, h):
    """``h * K * (1 + r)**-alpha``; finite at r = 0, never above ``h * K``."""
    r = np.asarray(r, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    if np.any(r < 0) or np.any(h < 0):
        raise ValueError("distance and fading must be >= 0")
    out = h * params.k_loss * (1.0 + r) ** (-params.alpha)
    return float(out) if out.ndim == 0 else out


def expected_received_power(p_tx_mw: float, params: PathLossParams, radius_m: float) -> float:
    """Mean received power from a uniformly placed node with unit-mean fading."""
    _check_radius(radius_m)
    a, R, K = params.alpha, float(radius_m), params.k_loss
    num = R * a + R * R * a - (R + 1.0) ** a - R * R + 1.0
    den = R * R * (R + 1.0) ** a * (a * a - 3.0 * a + 2.0)
    return -2.0 * K * p_tx_mw * num / den


def interference_variance(n_i: int, p_m_mw: float, params: PathLossParams, radius_m: float, sigma2_mw: float) -> float:
    """Noise plus mean aggregate power of ``n_i`` unassociated MTDs on the disk."""
    if n_i < 0:
        raise ValueError(f"n_i must be >= 0, got {n_i}")
    return n_i * expected_received_power(p_m_mw, params, radius_m) + sigma2_mw


def asymptotic_interference_variance(lambda_i: float, p_m_mw: float, params: PathLossParams, sigma2_mw: float) -> float:
    """Limit of :func:`interference_variance` as R grows at fixed density."""
    if lambda_i < 0:
        raise ValueError(f"lambda_i must be >= 0, got {lambda_i}")
    a = params.alpha
    return 2.0 * math.pi * params.k_loss * p_m_mw * lambda_i / (a * a - 3.0 * a + 2.0) + sigma2_mw


def density_to_count(lambda_i: float, radius_m: float) -> int:
    """Number of interferers on the disk for density ``lambda_i`` (rounded)."""
    _check_radius(radius_m)
    return int(round(lambda_i * math.pi * radius_m**2))


def count_to_density(n_i: int, radius_m: float) -> float:
    _check_radius(radius_m)
    return n_i / (math.pi * radius_m**2)


def interference_field(n_i: int, p_m_mw: float, params: PathLossParams, radius_m: float, sigma2_mw: float) -> InterferenceField:
    return InterferenceField(
        n_i=n_i,
        lambda_i=count_to_density(n_i, radius_m),
        sigma2_mw=sigma2_mw,
        total_variance_mw=interference_variance(n_i, p_m_mw, params, radius_m, sigma2_mw),
    )


def expected_snr_lower_bound(e_zeta_mw: float, sigma_tilde2_mw: float) -> float:
    """Jensen lower bound on the mean SNR: ``E[zeta] / sigma_tilde**2``.

    Exact when there is no interference.
    """
    if not sigma_tilde2_mw > 0:
        raise ValueError(f"sigma_tilde2_mw must be > 0, got {sigma_tilde2_mw!r}")
    if e_zeta_mw < 0:
        raise ValueError(f"e_zeta_mw must be >= 0, got {e_zeta_mw!r}")
    return e_zeta_mw / sigma_tilde2_mw
