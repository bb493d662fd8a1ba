"""Closed-form zero-outage downlink rates and single-MTD rate profiles."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .core import RATE_SLACK, LinSnr, Rate, SnrThreshold, capacity


class DecoderKind(str, enum.Enum):
    JD = "jd"
    SD = "sd"

    @classmethod
    def parse(cls, value) -> "DecoderKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"decoder must be one of jd, sd; got {value!r}") from None


def _check(gamma_b: float, gamma_m_threshold: float, n_m: int) -> None:
    if n_m < 1:
        raise ValueError(f"n_m must be >= 1, got {n_m}")
    if gamma_b < 0 or gamma_m_threshold < 0:
        raise ValueError("SNR arguments must be >= 0")


def jd_zero_outage_snr(gamma_b: LinSnr, gamma_m_threshold: SnrThreshold, n_m: int) -> SnrThreshold:
    """Largest SNR B can target that a joint decoder always recovers.

    Holds for every realisation of the ``n_m`` MTD SNRs:
    ``gamma_b / (1 + Gamma_M)**n_m``.
    """
    _check(gamma_b, gamma_m_threshold, n_m)
    return gamma_b / (1.0 + gamma_m_threshold) ** n_m


def sd_zero_outage_snr(gamma_b: LinSnr, gamma_m_threshold: SnrThreshold, n_m: int) -> SnrThreshold:
    """Zero-outage SNR for successive single-user decoding.

    Positive only for a single MTD. With two or more, all of them can sit
    just under their decoding threshold, so no positive rate is safe.
    """
    _check(gamma_b, gamma_m_threshold, n_m)
    if n_m > 1:
        return 0.0
    return gamma_b / (1.0 + gamma_m_threshold * (1.0 + gamma_b))


def jd_zero_outage_rate(gamma_b: LinSnr, gamma_m_threshold: SnrThreshold, n_m: int) -> Rate:
    return capacity(jd_zero_outage_snr(gamma_b, gamma_m_threshold, n_m))


def sd_zero_outage_rate(gamma_b: LinSnr, gamma_m_threshold: SnrThreshold, n_m: int) -> Rate:
    return capacity(sd_zero_outage_snr(gamma_b, gamma_m_threshold, n_m))


def zero_outage_snr(decoder, gamma_b: LinSnr, gamma_m_threshold: SnrThreshold, n_m: int) -> SnrThreshold:
    if DecoderKind.parse(decoder) is DecoderKind.JD:
        return jd_zero_outage_snr(gamma_b, gamma_m_threshold, n_m)
    return sd_zero_outage_snr(gamma_b, gamma_m_threshold, n_m)


@dataclass
class RateProfile:
    decoder: DecoderKind
    gamma_b: LinSnr
    gamma_m_threshold: SnrThreshold
    gamma_1_grid: np.ndarray
    rates: np.ndarray
    breakpoints: dict[str, float] = field(default_factory=dict)


def breakpoints(decoder, gamma_b: LinSnr, gamma_m_threshold: SnrThreshold) -> dict[str, float]:
    """Regime boundaries in gamma_1 for the single-MTD profiles.

    JD: ``tau_1`` where the MTD becomes decodable and ``tau_2`` where its
    interference disappears. SD: ``phi_1``, the SIC decoding threshold.
    """
    strong = gamma_m_threshold * (1.0 + gamma_b)
    if DecoderKind.parse(decoder) is DecoderKind.JD:
        return {"tau_1": gamma_m_threshold, "tau_2": strong}
    return {"phi_1": strong}


def jd_profile_rates(gamma_b: float, gamma_m_threshold: float, gamma_1) -> np.ndarray:
    g1 = np.asarray(gamma_1, dtype=np.float64)
    noise_branch = np.log2(1.0 + gamma_b / (1.0 + g1))
    joint = np.minimum(np.log2(1.0 + gamma_b), np.log2(1.0 + g1 + gamma_b) - np.log2(1.0 + gamma_m_threshold))
    return np.where(g1 < gamma_m_threshold, noise_branch, np.maximum(noise_branch, joint))


def sd_profile_rates(gamma_b: float, gamma_m_threshold: float, gamma_1) -> np.ndarray:
    g1 = np.asarray(gamma_1, dtype=np.float64)
    # The threshold point belongs to the decodable branch (supremum
    # envelope), with the same slack the MAC engine applies.
    decodable = 1.0 + g1 / (1.0 + gamma_b) >= (1.0 + gamma_m_threshold) * 2.0**-RATE_SLACK
    return np.where(decodable, np.log2(1.0 + gamma_b), np.log2(1.0 + gamma_b / (1.0 + g1)))


def rate_profile(decoder, gamma_b: LinSnr, gamma_m_threshold: SnrThreshold, grid) -> RateProfile:
    """Max decodable R_B against the single MTD's SNR ``gamma_1``."""
    decoder = DecoderKind.parse(decoder)
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a nonempty 1-D sequence")
    if not np.all(np.isfinite(grid)) or np.any(grid < 0):
        raise ValueError("grid values must be finite and >= 0")
    if np.any(np.diff(grid) < 0):
        raise ValueError("grid must be sorted ascending")
    if decoder is DecoderKind.JD:
        rates = jd_profile_rates(gamma_b, gamma_m_threshold, grid)
    else:
        rates = sd_profile_rates(gamma_b, gamma_m_threshold, grid)
    return RateProfile(
        decoder=decoder,
        gamma_b=float(gamma_b),
        gamma_m_threshold=float(gamma_m_threshold),
        gamma_1_grid=grid,
        rates=rates,
        breakpoints=breakpoints(decoder, gamma_b, gamma_m_threshold),
    )


def default_grid(decoder, gamma_b: float, gamma_m_threshold: float, points: int = 1001, span: float = 3.0) -> np.ndarray:
    """Linear grid on [0, span * Gamma_M * (1 + gamma_b)] with the breakpoints merged in."""
    if points < 1:
        raise ValueError(f"grid needs at least one point, got {points}")
    top = span * gamma_m_threshold * (1.0 + gamma_b)
    grid = np.linspace(0.0, top, points) if top > 0 else np.zeros(1)
    extra = list(breakpoints(decoder, gamma_b, gamma_m_threshold).values())
    return np.unique(np.concatenate([grid, extra]))
