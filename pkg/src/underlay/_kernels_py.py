"""Pure numpy fallback for the compiled MAC kernels.

Same algorithm and floating-point operation order as ``_kernels.pyx``, but
vectorised across scenarios instead of looping over them: the outer loop
runs over subset masks and each step touches a whole batch column.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"
_INV_LN2 = 1.4426950408889634


def _powers(gm, slack_bits: float, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-scenario ``(1 + gm)**k`` and its slack-relaxed copy, shape (n, m + 1)."""
    gm = np.asarray(gm, dtype=np.float64)
    pw = np.empty((gm.size, m + 1))
    pw[:, 0] = 1.0
    for k in range(1, m + 1):
        pw[:, k] = pw[:, k - 1] * (1.0 + gm)
    return pw, pw * 2.0 ** (-slack_bits)


def _excess_powers(gm, m: int) -> np.ndarray:
    """Per-scenario ``(1 + gm)**k - 1`` built without forming the power first."""
    gm = np.asarray(gm, dtype=np.float64)
    pm1 = np.zeros((gm.size, m + 1))
    for k in range(1, m + 1):
        pm1[:, k] = pm1[:, k - 1] * (1.0 + gm) + gm
    return pm1


def _bits(mask: int, m: int) -> tuple[list[int], list[int]]:
    inside = [j for j in range(m) if (mask >> j) & 1]
    outside = [j for j in range(m) if not (mask >> j) & 1]
    return inside, outside


def jd_max_rate(gamma_b, gammas, gm, slack_bits):
    gamma_b = np.ascontiguousarray(gamma_b, dtype=np.float64)
    g = np.sort(np.ascontiguousarray(gammas, dtype=np.float64), axis=1)
    n, m = g.shape
    pw, thr = _powers(gm, slack_bits, m)
    pm1 = _excess_powers(gm, m)
    best = np.zeros(n)
    for mask in range(1 << m):
        inside, outside = _bits(mask, m)
        noise = np.ones(n)
        for j in outside:
            noise = noise + g[:, j]
        gbs = gamma_b / noise
        worst = gbs.copy()
        prefix = np.zeros(n)
        ok = np.ones(n, dtype=bool)
        for k, j in enumerate(inside, start=1):
            prefix = prefix + g[:, j] / noise
            ok &= ~(1.0 + prefix < thr[:, k])
            worst = np.minimum(worst, (gbs + (prefix - pm1[:, k])) / pw[:, k])
        best = np.where(ok & (worst > best), worst, best)
    return np.log1p(best) * _INV_LN2


def decodable_masks(gammas, gm, slack_bits):
    gammas = np.ascontiguousarray(gammas, dtype=np.float64)
    order = np.argsort(gammas, axis=1, kind="stable")
    g = np.take_along_axis(gammas, order, axis=1)
    n, m = g.shape
    _, thr = _powers(gm, slack_bits, m)
    rows = np.arange(n)
    best_mask = np.zeros(n, dtype=np.int64)
    best_k = np.zeros(n, dtype=np.int64)
    best_total = np.zeros(n)
    for mask in range(1, 1 << m):
        inside, outside = _bits(mask, m)
        noise = np.ones(n)
        for j in outside:
            noise = noise + g[:, j]
        prefix = np.zeros(n)
        total = np.zeros(n)
        orig = np.zeros(n, dtype=np.int64)
        ok = np.ones(n, dtype=bool)
        for k, j in enumerate(inside, start=1):
            prefix = prefix + g[:, j] / noise
            total = total + g[:, j]
            orig |= np.left_shift(np.int64(1), order[rows, j])
            ok &= ~(1.0 + prefix < thr[:, k])
        k = len(inside)
        diff = orig ^ best_mask
        low = diff & -diff
        lex = (orig & low) != 0
        better = (k > best_k) | (
            (k == best_k) & ((total > best_total) | ((total == best_total) & lex))
        )
        better &= ok
        best_mask = np.where(better, orig, best_mask)
        best_k = np.where(better, k, best_k)
        best_total = np.where(better, total, best_total)
    return best_mask


def sd_max_rate(gamma_b, gammas, gm, slack_bits):
    gamma_b = np.ascontiguousarray(gamma_b, dtype=np.float64)
    g = np.sort(np.ascontiguousarray(gammas, dtype=np.float64), axis=1)
    n, m = g.shape
    _, thr = _powers(gm, slack_bits, m)
    cs = np.zeros((n, m + 1))
    for j in range(m):
        cs[:, j + 1] = cs[:, j] + g[:, j]
    left = np.full(n, m, dtype=np.int64)
    active = np.ones(n, dtype=bool)
    for j in range(m - 1, -1, -1):
        eff = g[:, j] / (1.0 + gamma_b + cs[:, j])
        active &= ~(1.0 + eff < thr[:, 1])
        left = np.where(active, j, left)
    rem = cs[np.arange(n), left]
    return np.log2(1.0 + gamma_b / (1.0 + rem))
