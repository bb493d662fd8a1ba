import os
import subprocess
import sys

import numpy as np
import pytest
from conftest import log_uniform

from underlay import _backend, _kernels_py
from underlay.core import RATE_SLACK

BACKENDS = _backend.available()
needs_cython = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled kernels not built")


def batch(rng, n, m):
    return log_uniform(rng, 1e-3, 1e3, n), log_uniform(rng, 1e-3, 1e3, (n, m)), log_uniform(rng, 1e-2, 10, n)


@needs_cython
@pytest.mark.parametrize("m", range(1, 8))
def test_backends_agree(rng, m):
    gb, g, gm = batch(rng, 400, m)
    c, p = BACKENDS["cython"], BACKENDS["python"]
    np.testing.assert_allclose(c.jd_max_rate(gb, g, gm, RATE_SLACK), p.jd_max_rate(gb, g, gm, RATE_SLACK), rtol=1e-14, atol=1e-15)
    np.testing.assert_allclose(c.sd_max_rate(gb, g, gm, RATE_SLACK), p.sd_max_rate(gb, g, gm, RATE_SLACK), rtol=1e-14, atol=1e-15)
    np.testing.assert_array_equal(c.decodable_masks(g, gm, RATE_SLACK), p.decodable_masks(g, gm, RATE_SLACK))


@needs_cython
def test_backends_agree_on_ties(rng):
    # repeated SNRs exercise the tie-breaking rules
    g = np.repeat(log_uniform(rng, 1e-2, 1e2, (300, 2)), 2, axis=1)
    gm = log_uniform(rng, 1e-2, 3, 300)
    c, p = BACKENDS["cython"], BACKENDS["python"]
    np.testing.assert_array_equal(c.decodable_masks(g, gm, RATE_SLACK), p.decodable_masks(g, gm, RATE_SLACK))


def test_selected_backend_reported():
    assert _backend.BACKEND in BACKENDS
    assert _backend.kernels.BACKEND == _backend.BACKEND


def test_env_var_forces_fallback():
    env = dict(os.environ, UNDERLAY_PURE_PYTHON="1")
    code = "from underlay import _backend, mac; print(_backend.BACKEND, mac.max_downlink_rate(mac.MacScenario(10, (1,), 1)))"
    res = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
    name, value = res.stdout.split()
    assert name == "python"
    assert float(value) == pytest.approx(np.log2(6), rel=1e-15)


def test_fallback_empty_batches():
    empty = np.zeros((0, 3))
    assert _kernels_py.jd_max_rate(np.zeros(0), empty, np.zeros(0), RATE_SLACK).shape == (0,)
    assert _kernels_py.decodable_masks(empty, np.zeros(0), RATE_SLACK).shape == (0,)
