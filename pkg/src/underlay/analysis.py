"""Analytic mean downlink rate under joint and successive decoding.

Both expressions push the mean SNR through the zero-outage formula. Without
external interference they are upper bounds (Jensen on a concave rate).
With interference the mean SNR itself is only a lower-bound estimate, so
the result is labelled an approximation and nothing is claimed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .core import Rate, capacity
from .rates import jd_zero_outage_snr, sd_zero_outage_snr

Kind = Literal["upper_bound", "approximation"]


@dataclass(frozen=True)
class MeanRateResult:
    value: Rate
    kind: Kind


def _kind(has_interference: bool) -> Kind:
    return "approximation" if has_interference else "upper_bound"


def mean_rate_jd(e_gamma_b: float, gamma_m_threshold: float, n_m: int, has_interference: bool) -> MeanRateResult:
    value = capacity(jd_zero_outage_snr(e_gamma_b, gamma_m_threshold, n_m))
    return MeanRateResult(value, _kind(has_interference))


def mean_rate_sd(e_gamma_b: float, gamma_m_threshold: float, has_interference: bool, n_m: int = 1) -> MeanRateResult:
    if n_m != 1:
        raise ValueError(f"the SD mean-rate expression only covers n_m = 1, got {n_m}")
    value = capacity(sd_zero_outage_snr(e_gamma_b, gamma_m_threshold, 1))
    return MeanRateResult(value, _kind(has_interference))
