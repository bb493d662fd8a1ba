"""Per-node, per-trial random streams on numpy's counter-based Philox.

Every node of a deployment has its own Philox key, derived from
``(master_seed, role, index)`` where role is B, an associated MTD or an
interferer. Trial ``t`` owns raw outputs ``[2t, 2t + 2)`` of each key: one
uniform for the node's distance, one for its fading. Consequences:

* any contiguous run of trials is generated in one call, and the numbers a
  trial sees do not depend on how trials are split between workers;
* node ``j`` sees the same draws whatever the number of other nodes, so
  sweeps over the MTD count or the interferer density compare nested
  deployments trial by trial (common random numbers).
"""

from __future__ import annotations

import enum

import numpy as np

DRAWS_PER_NODE = 2  # distance, fading
_PHILOX_LANES = 4  # raw 64-bit outputs per Philox counter step
_TO_UNIT = 2.0**-53


class Role(enum.IntEnum):
    BASE = 0
    MTD = 1
    INTERFERER = 2


def node_key(master_seed: int, role: int, index: int = 0) -> np.ndarray:
    if master_seed < 0 or index < 0:
        raise ValueError("master_seed and index must be nonnegative integers")
    seq = np.random.SeedSequence([int(master_seed), int(role), int(index)])
    return seq.generate_state(2, dtype=np.uint64)


def _raw(key: np.ndarray, start: int, count: int) -> np.ndarray:
    bg = np.random.Philox(key=key)
    skip = start % _PHILOX_LANES
    bg.advance(start // _PHILOX_LANES)
    return bg.random_raw(skip + count)[skip:]


def _to_unit(raw: np.ndarray) -> np.ndarray:
    return (raw >> np.uint64(11)).astype(np.float64) * _TO_UNIT


def node_uniforms(master_seed: int, role: int, index: int, first_trial: int, n_trials: int) -> np.ndarray:
    """Uniforms on [0, 1) of one node, shape ``(n_trials, 2)``."""
    key = node_key(master_seed, role, index)
    raw = _raw(key, first_trial * DRAWS_PER_NODE, n_trials * DRAWS_PER_NODE)
    return _to_unit(raw).reshape(n_trials, DRAWS_PER_NODE)


def block_uniforms(master_seed: int, n_m: int, n_i: int, first_trial: int, n_trials: int) -> np.ndarray:
    """Uniforms for trials ``first_trial .. first_trial + n_trials - 1``.

    Shape ``(n_trials, 2 * (1 + n_m + n_i))``. Node ``j`` occupies columns
    ``2j`` (distance) and ``2j + 1`` (fading); node 0 is B, then the
    associated MTDs, then the interferers.
    """
    nodes = [(Role.BASE, 0)]
    nodes += [(Role.MTD, j) for j in range(n_m)]
    nodes += [(Role.INTERFERER, j) for j in range(n_i)]
    out = np.empty((n_trials, DRAWS_PER_NODE * len(nodes)))
    for col, (role, j) in enumerate(nodes):
        out[:, DRAWS_PER_NODE * col : DRAWS_PER_NODE * (col + 1)] = node_uniforms(
            master_seed, role, j, first_trial, n_trials
        )
    return out


class TrialStream:
    """The uniforms owned by one trial, handed out in node order.

    Quacks like ``numpy.random.Generator.random`` so sampling helpers can
    consume it, and refuses to hand out more draws than the trial owns.
    """

    def __init__(self, master_seed: int, trial_index: int, n_m: int, n_i: int = 0):
        self.master_seed = int(master_seed)
        self.trial_index = int(trial_index)
        self._values = block_uniforms(self.master_seed, n_m, n_i, self.trial_index, 1)[0]
        self._pos = 0

    @property
    def n_draws(self) -> int:
        return self._values.size

    @property
    def remaining(self) -> int:
        return self.n_draws - self._pos

    def random(self, size=None):
        n = 1 if size is None else int(np.prod(size))
        if n > self.remaining:
            raise RuntimeError(f"trial stream exhausted: asked for {n}, {self.remaining} left")
        out = self._values[self._pos : self._pos + n]
        self._pos += n
        if size is None:
            return float(out[0])
        return out.reshape(size)
