"""Time the compiled MAC kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--rows 20000] [--n-m 1 3 5 8] [--repeat 5]

Prints one line per kernel and MTD count with the best-of-``repeat`` time
of each backend and the speed-up. Both backends get identical inputs and
their outputs are checked for agreement before timing.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from underlay._backend import available
from underlay.core import RATE_SLACK


def make_inputs(rng, rows: int, n_m: int):
    gb = 10 ** rng.uniform(-3, 3, rows)
    gammas = np.ascontiguousarray(10 ** rng.uniform(-3, 3, (rows, n_m)))
    gm = 10 ** rng.uniform(-2, 1, rows)
    return gb, gammas, gm


def calls(module, gb, gammas, gm):
    return {
        "jd_max_rate": lambda: module.jd_max_rate(gb, gammas, gm, RATE_SLACK),
        "sd_max_rate": lambda: module.sd_max_rate(gb, gammas, gm, RATE_SLACK),
        "decodable_masks": lambda: module.decodable_masks(gammas, gm, RATE_SLACK),
    }


def best_time(fn, repeat: int) -> float:
    best = np.inf
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rows", type=int, default=20_000)
    parser.add_argument("--n-m", type=int, nargs="+", default=[1, 3, 5, 8])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    backends = available()
    if "cython" not in backends:
        print("compiled kernels not built; timing the numpy fallback only")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<16} {'n_m':>3} " + " ".join(f"{name:>10}" for name in backends) + "  speed-up")
    for n_m in args.n_m:
        gb, gammas, gm = make_inputs(rng, args.rows, n_m)
        per_backend = {name: calls(mod, gb, gammas, gm) for name, mod in backends.items()}
        for kernel in per_backend["python"]:
            outputs = [np.asarray(per_backend[name][kernel]()) for name in backends]
            for other in outputs[1:]:
                np.testing.assert_allclose(other, outputs[0], rtol=1e-12, atol=1e-15)
            times = {name: best_time(per_backend[name][kernel], args.repeat) for name in backends}
            ratio = times["python"] / times["cython"] if "cython" in times else float("nan")
            cells = " ".join(f"{1e3 * t:>8.2f}ms" for t in times.values())
            print(f"{kernel:<16} {n_m:>3} {cells}  {ratio:7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
