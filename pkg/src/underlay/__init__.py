"""Zero-outage downlink rate selection for a cellular user sharing its band
with fixed-rate machine-type devices.

The MAC decodability engine lives in :mod:`underlay.mac`, the closed-form
rates in :mod:`underlay.rates`, spatial averages in :mod:`underlay.geometry`
and :mod:`underlay.analysis`, and the Monte Carlo engine in
:mod:`underlay.sim`.
"""

from ._backend import BACKEND
from .analysis import MeanRateResult, mean_rate_jd, mean_rate_sd
from .core import capacity, inv_capacity
from .mac import (
    MacScenario,
    decodable_mtd_set,
    downlink_decodable,
    max_downlink_rate,
    mtd_subset_feasible,
    sd_max_downlink_rate,
    worst_case_mtd_snrs,
)
from .rates import DecoderKind, jd_zero_outage_snr, rate_profile, sd_zero_outage_snr, zero_outage_snr
from .sim import ScenarioConfig, SweepResult, estimate_outage, run_sweep, run_trial

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DecoderKind",
    "MacScenario",
    "MeanRateResult",
    "ScenarioConfig",
    "SweepResult",
    "capacity",
    "decodable_mtd_set",
    "downlink_decodable",
    "estimate_outage",
    "inv_capacity",
    "jd_zero_outage_snr",
    "max_downlink_rate",
    "mean_rate_jd",
    "mean_rate_sd",
    "mtd_subset_feasible",
    "rate_profile",
    "run_sweep",
    "run_trial",
    "sd_max_downlink_rate",
    "sd_zero_outage_snr",
    "worst_case_mtd_snrs",
    "zero_outage_snr",
]
