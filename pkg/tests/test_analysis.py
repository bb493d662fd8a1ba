import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from underlay.analysis import mean_rate_jd, mean_rate_sd
from underlay.core import capacity
from underlay.rates import sd_zero_outage_snr


def test_jd_example():
    r = mean_rate_jd(10, 1, 2, False)
    assert r.value == pytest.approx(capacity(2.5), rel=1e-15)
    assert r.value == pytest.approx(1.8074, abs=1e-4)
    assert r.kind == "upper_bound"


def test_sd_example():
    r = mean_rate_sd(10, 1, False)
    assert r.value == pytest.approx(capacity(10 / 12), rel=1e-15)
    assert r.value == pytest.approx(0.8745, abs=1e-4)
    assert r.kind == "upper_bound"


def test_interference_makes_an_approximation():
    assert mean_rate_jd(10, 1, 1, True).kind == "approximation"
    assert mean_rate_sd(10, 1, True).kind == "approximation"


def test_no_mtd_traffic_limit():
    assert mean_rate_jd(10, 0, 3, False).value == capacity(10)
    assert mean_rate_sd(10, 0, False).value == capacity(10)


def test_rejections():
    with pytest.raises(ValueError):
        mean_rate_jd(10, 1, 0, False)
    with pytest.raises(ValueError):
        mean_rate_sd(10, 1, False, n_m=2)


@given(st.floats(1e-3, 1e6))
def test_converges_as_mtd_rate_vanishes(e_gamma):
    gm = 2.0**1e-9 - 1
    assert mean_rate_jd(e_gamma, gm, 1, False).value == pytest.approx(capacity(e_gamma), rel=1e-6)
    # SD converges too, but more slowly when E[gamma] is large
    assert mean_rate_sd(e_gamma, gm, False).value == pytest.approx(capacity(e_gamma), rel=1e-2)


@pytest.mark.parametrize("mean_snr", [0.5, 10.0, 1e3])
@pytest.mark.parametrize("gm", [1e-3, 0.1, 1.0, 3.0])
def test_sd_double_jensen(mean_snr, gm):
    # exponential SNR with the given mean: E[C(Gamma_SD(gamma))] by quadrature
    def integrand(g):
        return capacity(sd_zero_outage_snr(g, gm, 1)) * math.exp(-g / mean_snr) / mean_snr

    expected, _ = integrate.quad(integrand, 0.0, np.inf, limit=200)
    assert mean_rate_sd(mean_snr, gm, False).value >= expected
