"""Scalar channel algebra shared by every other module.

All quantities are handled in linear units internally (mW, linear SNR);
dB and dBm only appear at configuration boundaries. Rates are spectral
efficiencies in bits/s/Hz over a 1 Hz bandwidth.
"""

from __future__ import annotations

import math

# Plain floats stand in for the scalar domain types; validation happens at
# the function boundary instead of in wrapper classes.
LinSnr = float
Rate = float
PowerDbm = float
SnrThreshold = float

# Slack (bits/s/Hz) on every decodability comparison, MAC inequalities
# included, so that points exactly on a boundary count as decodable despite
# rounding.
RATE_SLACK = 1e-12


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def _check_nonneg(name: str, value: float) -> float:
    value = _check_finite(name, value)
    if value < 0.0:
        raise ValueError(f"{name} must be >= 0, got {value!r}")
    return value


def capacity(gamma: LinSnr) -> Rate:
    """Shannon capacity log2(1 + gamma) in bits/s/Hz."""
    gamma = _check_nonneg("gamma", gamma)
    return math.log1p(gamma) / math.log(2.0)


def inv_capacity(rate: Rate) -> SnrThreshold:
    """Minimum SNR 2**rate - 1 needed to carry ``rate`` without interference."""
    rate = _check_nonneg("rate", rate)
    return math.expm1(rate * math.log(2.0))


def dbm_to_mw(p: PowerDbm) -> float:
    return 10.0 ** (_check_finite("power_dbm", p) / 10.0)


def mw_to_dbm(p_mw: float) -> PowerDbm:
    p_mw = _check_nonneg("power_mw", p_mw)
    if p_mw == 0.0:
        return -math.inf
    return 10.0 * math.log10(p_mw)


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (_check_finite("x_db", x_db) / 10.0)


def linear_to_db(x: float) -> float:
    x = _check_nonneg("x", x)
    if x == 0.0:
        return -math.inf
    return 10.0 * math.log10(x)
