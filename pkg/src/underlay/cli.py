"""``underlay`` command line: point rates, profiles, sweeps and oracle checks.

Exit codes: 0 success, 1 runtime or config failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import math
import os
import sys
from importlib import metadata

import numpy as np

from . import rates
from ._backend import BACKEND
from .config import ConfigError, LoadedConfig, default_config, load_config
from .core import capacity, db_to_linear, inv_capacity, linear_to_db
from .csvio import TIMESTAMP_KEY, format_csv
from .sim import SWEEP_VARIABLES, run_sweep
from .verify import SUITES, run_suite

SIM_COLUMNS = [
    "sweep_value",
    "mean_rate_sim",
    "std_err",
    "mean_rate_analytic",
    "analytic_kind",
    "outage_rate",
    "trials",
    "seed",
]
PROFILE_COLUMNS = ["gamma_1_linear", "rate_bps_hz"]
SEED_ENV = "UNDERLAY_SEED"

log = logging.getLogger("underlay")


def tool_version() -> str:
    try:
        return metadata.version("underlay")
    except metadata.PackageNotFoundError:
        return "unknown"


# argparse type callables: a ValueError/ArgumentTypeError here becomes a
# usage error that names the flag.


def _finite(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite, got {text!r}")
    return value


def _nonneg(text: str) -> float:
    value = _finite(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text!r}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text!r}")
    return value


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"must be an unsigned 64-bit integer, got {text!r}")
    return value


def _grid(text: str) -> list[float]:
    parts = [p for p in (s.strip() for s in text.split(",")) if p]
    if not parts:
        raise argparse.ArgumentTypeError("grid is empty")
    values = [_nonneg(p) for p in parts]
    if any(b < a for a, b in zip(values, values[1:])):
        raise argparse.ArgumentTypeError("grid values must be ascending")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="underlay",
        description="Zero-outage downlink rates for a cellular user with fixed-rate underlay MTDs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {tool_version()}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def decoder_flag(p):
        p.add_argument("--decoder", choices=[d.value for d in rates.DecoderKind], default="jd")

    p = sub.add_parser("rate", help="zero-outage SNR and rate for one scenario")
    p.add_argument("--gamma-b-db", type=_finite, required=True, help="SNR of the B-U link in dB")
    p.add_argument("--r-m", type=_nonneg, default=0.01, help="MTD rate in bits/s/Hz (default 0.01)")
    p.add_argument("--n-m", type=_positive_int, default=1, help="number of associated MTDs (default 1)")
    decoder_flag(p)

    p = sub.add_parser("profile", help="max decodable rate against the single MTD's SNR, as CSV")
    p.add_argument("--gamma-b-db", type=_finite, required=True)
    p.add_argument("--r-m", type=_nonneg, default=0.01)
    p.add_argument("--n-m", type=_positive_int, default=1, help="must be 1")
    decoder_flag(p)
    p.add_argument("--grid", type=_grid, help="explicit comma-separated gamma_1 values (linear)")
    p.add_argument("--points", type=_positive_int, default=1001, help="default grid size")
    p.add_argument("--span", type=_nonneg, default=3.0, help="default grid reaches span*Gamma_M*(1+gamma_B)")
    p.add_argument("--out", help="output CSV (default stdout)")

    p = sub.add_parser("simulate", help="Monte Carlo sweep, as CSV")
    p.add_argument("--config", help="INI scenario file (default: built-in reference scenario)")
    p.add_argument("--sweep", choices=SWEEP_VARIABLES, help="variable to sweep (default from config)")
    p.add_argument("--out", help="output CSV (default stdout)")
    p.add_argument("--seed", type=_seed, help=f"master seed (falls back to config, then ${SEED_ENV}, then 0)")
    p.add_argument("--trials", type=_positive_int, help="trials per sweep point")
    p.add_argument("--workers", type=_positive_int, help="worker processes (default: available cores)")
    p.add_argument("--r-m", type=_nonneg, help="override the scenario MTD rate")
    p.add_argument("--n-m", type=_positive_int, help="override the scenario MTD count")
    p.add_argument("--decoder", choices=[d.value for d in rates.DecoderKind], help="override the scenario decoder")

    p = sub.add_parser("verify", help="run oracle-equivalence suites")
    p.add_argument("--suite", choices=SUITES, action="append", help="suite to run (repeatable; default all)")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", newline="") as fh:
        fh.write(text)


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def cmd_rate(args) -> int:
    gamma_b = db_to_linear(args.gamma_b_db)
    gm = inv_capacity(args.r_m)
    snr = rates.zero_outage_snr(args.decoder, gamma_b, gm, args.n_m)
    snr_db = linear_to_db(snr) if snr > 0 else -math.inf
    print(f"decoder: {args.decoder}")
    print(f"Gamma = {_fmt(snr)} ({_fmt(snr_db)} dB)")
    print(f"R = {_fmt(capacity(snr))} bits/s/Hz")
    if args.decoder == "sd" and args.n_m > 1:
        print("note: with SIC and more than one MTD no positive rate is decodable for every MTD realization")
    return 0


def _manifest(command: str, config: str | None, out: str | None, extra: list[tuple[str, object]]):
    stamp = _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0).isoformat()
    return [
        ("tool", f"underlay {tool_version()}"),
        ("subcommand", command),
        ("config", config or "-"),
        ("output", out or "-"),
        *extra,
        (TIMESTAMP_KEY, stamp),
    ]


def cmd_profile(args) -> int:
    if args.n_m != 1:
        raise _Usage("argument --n-m: profiles are defined for a single MTD only")
    gamma_b = db_to_linear(args.gamma_b_db)
    gm = inv_capacity(args.r_m)
    if args.grid is not None:
        grid = np.asarray(args.grid, dtype=np.float64)
        extra = list(rates.breakpoints(args.decoder, gamma_b, gm).values())
        grid = np.unique(np.concatenate([grid, [x for x in extra if grid[0] <= x <= grid[-1]]]))
    else:
        grid = rates.default_grid(args.decoder, gamma_b, gm, points=args.points, span=args.span)
    profile = rates.rate_profile(args.decoder, gamma_b, gm, grid)
    extra = [
        ("decoder", args.decoder),
        ("gamma_b_db", repr(args.gamma_b_db)),
        ("r_m", repr(args.r_m)),
        ("gamma_m_threshold", repr(gm)),
    ]
    extra += [(f"breakpoint {k}", repr(v)) for k, v in profile.breakpoints.items()]
    rows = [(float(g), float(r)) for g, r in zip(profile.gamma_1_grid, profile.rates)]
    _emit(format_csv(_manifest("profile", None, args.out, extra), PROFILE_COLUMNS, rows), args.out)
    return 0


def resolve_seed(cli_seed: int | None, loaded: LoadedConfig) -> int:
    """``--seed`` beats the config file, which beats ``$UNDERLAY_SEED``."""
    if cli_seed is not None:
        return cli_seed
    if "master_seed" in loaded.explicit:
        return loaded.scenario.master_seed
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return _seed(env)
        except (ValueError, argparse.ArgumentTypeError):
            raise ConfigError(f"{SEED_ENV}: expected an unsigned 64-bit integer, got {env!r}") from None
    return loaded.scenario.master_seed


def cmd_simulate(args) -> int:
    loaded = load_config(args.config) if args.config else default_config()
    sweep = loaded.sweep_for(args.sweep) if args.sweep else loaded.sweep
    changes = {"master_seed": resolve_seed(args.seed, loaded)}
    if args.trials is not None:
        changes["trials"] = args.trials
    if args.r_m is not None:
        changes["r_m"] = args.r_m
    if args.n_m is not None:
        changes["n_m"] = args.n_m
    if args.decoder is not None:
        changes["decoder"] = args.decoder
    try:
        cfg = loaded.scenario.replace(**changes)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    log.info("simulate %s over %s (%d points, %d trials each)", cfg.decoder.value, sweep.variable, len(sweep.values), cfg.trials)
    result = run_sweep(cfg, sweep.variable, sweep.values, workers=args.workers)
    extra = [
        ("master_seed", cfg.master_seed),
        ("sweep", f"{sweep.variable} = {', '.join(repr(v) for v in sweep.values)}"),
        ("scenario", json.dumps(cfg.as_dict(), sort_keys=True)),
        ("kernels", BACKEND),
    ]
    rows = [
        (p.x, p.mean_rate_sim, p.std_err, p.mean_rate_analytic, p.analytic_kind, p.outage_rate, p.trials, p.seed)
        for p in result.points
    ]
    _emit(format_csv(_manifest("simulate", args.config, args.out, extra), SIM_COLUMNS, rows), args.out)
    return 0


def cmd_verify(args) -> int:
    ok = True
    for name in args.suite or SUITES:
        report = run_suite(name)
        print(f"[{name}] {'PASS' if report.passed else 'FAIL'}")
        for check in report.checks:
            print(f"  {'PASS' if check.passed else 'FAIL'}  {check.name}: {check.detail}")
            if not check.passed and check.counterexample is not None:
                print(f"        counterexample: {json.dumps(check.counterexample)}")
        ok = ok and report.passed
    return 0 if ok else 1


class _Usage(Exception):
    pass


COMMANDS = {"rate": cmd_rate, "profile": cmd_profile, "simulate": cmd_simulate, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except _Usage as exc:
        parser.error(str(exc))
    except (ConfigError, ValueError, OSError) as exc:
        print(f"underlay {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
