"""Slow reference implementations straight from the MAC definitions.

No sorting tricks: every candidate decoded set and every subset of it is
enumerated, so these are independent of the kernels under test.
"""

from __future__ import annotations

import itertools
import math

SLACK = 1e-12


def subsets(items):
    items = list(items)
    for k in range(len(items) + 1):
        yield from itertools.combinations(items, k)


def jointly_feasible(scaled, gm) -> bool:
    """All nonempty subsets satisfy 1 + sum >= (1 + gm)**|S| (with slack)."""
    for s in subsets(range(len(scaled))):
        if s and 1.0 + math.fsum(scaled[i] for i in s) < (1.0 + gm) ** len(s) * 2.0**-SLACK:
            return False
    return True


def _fold(gamma_b, gammas, decoded):
    noise = 1.0 + math.fsum(g for j, g in enumerate(gammas) if j not in decoded)
    return gamma_b / noise, [gammas[j] / noise for j in decoded]


def max_downlink_rate(gamma_b, gammas, gm) -> float:
    r_m = math.log2(1.0 + gm)
    best = 0.0
    for d in subsets(range(len(gammas))):
        gbs, scaled = _fold(gamma_b, gammas, d)
        if not jointly_feasible(scaled, gm):
            continue
        value = min(
            math.log2(1.0 + gbs + math.fsum(scaled[i] for i in s)) - len(s) * r_m for s in subsets(range(len(d)))
        )
        best = max(best, value)
    return best


def decodable_set(gammas, gm) -> tuple[int, ...]:
    best = ()
    best_key = None
    for d in subsets(range(len(gammas))):
        _, scaled = _fold(0.0, gammas, d)
        if not jointly_feasible(scaled, gm):
            continue
        # larger set, then larger total SNR, then lexicographically smaller
        key = (len(d), math.fsum(gammas[j] for j in d), tuple(-j for j in d))
        if best_key is None or key > best_key:
            best, best_key = d, key
    return best


def sd_max_downlink_rate(gamma_b, gammas, gm) -> float:
    remaining = sorted(gammas)
    while remaining:
        strongest = remaining[-1]
        others = math.fsum(remaining[:-1])
        if 1.0 + strongest / (1.0 + gamma_b + others) < (1.0 + gm) * 2.0**-SLACK:
            break
        remaining.pop()
    return math.log2(1.0 + gamma_b / (1.0 + math.fsum(remaining)))
