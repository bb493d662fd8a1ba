import math

import numpy as np
import pytest
from conftest import log_uniform
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from underlay import mac, rates
from underlay.core import capacity
from underlay.rates import DecoderKind

C = capacity
snr = st.floats(1e-3, 1e3)
threshold = st.floats(1e-2, 10.0)


@pytest.mark.parametrize("args, want", [((10, 1, 1), 5.0), ((10, 1, 2), 2.5), ((10, 0, 7), 10.0)])
def test_jd_examples(args, want):
    assert rates.jd_zero_outage_snr(*args) == want


@pytest.mark.parametrize("args, want", [((10, 1, 1), 10 / 12), ((10, 1, 2), 0.0), ((10, 0, 1), 10.0)])
def test_sd_examples(args, want):
    assert rates.sd_zero_outage_snr(*args) == pytest.approx(want, rel=1e-15)


@pytest.mark.parametrize("fn", [rates.jd_zero_outage_snr, rates.sd_zero_outage_snr])
def test_zero_mtds_rejected(fn):
    with pytest.raises(ValueError):
        fn(10, 1, 0)


def test_dispatch_and_parse():
    assert rates.zero_outage_snr("JD", 10, 1, 2) == 2.5
    assert rates.zero_outage_snr(DecoderKind.SD, 10, 1, 2) == 0.0
    assert rates.jd_zero_outage_rate(10, 1, 1) == pytest.approx(math.log2(6))
    with pytest.raises(ValueError):
        DecoderKind.parse("mmse")


class TestProfile:
    def test_examples(self):
        jd = rates.rate_profile("jd", 10, 1, [0.0, 1.0])
        assert jd.rates == pytest.approx([C(10), C(5)], rel=1e-14)
        sd = rates.rate_profile("sd", 10, 1, [5.0])
        assert sd.rates[0] == pytest.approx(C(10 / 6), rel=1e-14)

    def test_breakpoints(self):
        assert rates.rate_profile("jd", 10, 1, [0.0]).breakpoints == {"tau_1": 1.0, "tau_2": 11.0}
        assert rates.rate_profile("sd", 10, 1, [0.0]).breakpoints == {"phi_1": 11.0}

    def test_sd_threshold_point_takes_upper_value(self):
        assert rates.sd_profile_rates(10, 1, [11.0])[0] == pytest.approx(C(10), rel=1e-15)

    @pytest.mark.parametrize("grid", [[], [2.0, 1.0], [-1.0, 0.0], [[1.0]], [0.0, math.nan]])
    def test_bad_grids(self, grid):
        with pytest.raises(ValueError):
            rates.rate_profile("jd", 10, 1, grid)

    def test_default_grid_contains_breakpoints(self):
        g = rates.default_grid("jd", 10, 1, points=11)
        assert {1.0, 11.0} <= set(g.tolist())
        assert np.all(np.diff(g) > 0)

    def test_sd_constant_beyond_threshold(self):
        g = rates.default_grid("sd", 10, 1)
        p = rates.rate_profile("sd", 10, 1, g)
        np.testing.assert_allclose(p.rates[g >= 11.0], C(10), rtol=1e-15)

    def test_matches_mac_oracle(self, rng):
        for _ in range(50):
            gb = float(log_uniform(rng, 1e-3, 1e3))
            gm = float(log_uniform(rng, 1e-2, 10))
            grid = rates.default_grid("jd", gb, gm, points=301)
            jd = rates.jd_profile_rates(gb, gm, grid)
            sd = rates.sd_profile_rates(gb, gm, grid)
            gbs = np.full(grid.size, gb)
            np.testing.assert_allclose(jd, mac.batch_max_downlink_rate(gbs, grid[:, None], gm), rtol=0, atol=1e-12)
            np.testing.assert_allclose(sd, mac.batch_sd_max_downlink_rate(gbs, grid[:, None], gm), rtol=0, atol=1e-12)


@settings(max_examples=300)
@given(gb=snr, gm=threshold)
def test_sd_dominated_by_jd(gb, gm):
    assert C(rates.sd_zero_outage_snr(gb, gm, 1)) < C(rates.jd_zero_outage_snr(gb, gm, 1))


@given(gb=snr)
def test_equal_without_mtd_traffic(gb):
    assert rates.sd_zero_outage_snr(gb, 0.0, 1) == rates.jd_zero_outage_snr(gb, 0.0, 1)


@settings(max_examples=100, deadline=None)
@given(gb=snr, gm=threshold)
def test_profile_floor(gb, gm):
    grid = rates.default_grid("jd", gb, gm, points=2001)
    for decoder in ("jd", "sd"):
        floor = C(rates.zero_outage_snr(decoder, gb, gm, 1))
        p = rates.rate_profile(decoder, gb, gm, grid)
        assert np.all(p.rates >= floor - 1e-12)
    # JD reaches its floor exactly at the merged-in breakpoint
    jd = rates.rate_profile("jd", gb, gm, grid).rates
    assert jd.min() == pytest.approx(C(rates.jd_zero_outage_snr(gb, gm, 1)), rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(gb=snr, gm=threshold)
def test_sd_infimum_approaches_floor(gb, gm):
    phi = gm * (1 + gb)
    grid = phi * (1 - np.geomspace(1e-1, 1e-12, 200))
    p = rates.sd_profile_rates(gb, gm, grid)
    assert p.min() == pytest.approx(C(rates.sd_zero_outage_snr(gb, gm, 1)), rel=1e-9)


@given(gb=snr, gm=threshold, n=st.integers(1, 19))
def test_jd_monotone(gb, gm, n):
    base = rates.jd_zero_outage_snr(gb, gm, n)
    assert rates.jd_zero_outage_snr(gb, gm, n + 1) < base
    assert rates.jd_zero_outage_snr(gb, gm * 1.01, n) < base
    assert rates.jd_zero_outage_snr(gb * 1.01, gm, n) > base
