"""INI scenario files for the ``simulate`` subcommand.

A file has a ``[scenario]`` section whose keys are the
:class:`~underlay.sim.ScenarioConfig` fields, and an optional ``[sweep]``
section::

    [scenario]
    n_m = 1
    decoder = jd
    trials = 100000

    [sweep]
    variable = r_m
    r_m = 0.001, 0.01, 0.1, 1, 2

Keys left out keep their defaults. ``[sweep]`` may list values for several
variables; ``variable`` (or ``--sweep``) picks which one runs.
"""

from __future__ import annotations

import configparser
import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .sim import SWEEP_VARIABLES, ScenarioConfig


class ConfigError(ValueError):
    """A scenario file that cannot be turned into a valid configuration."""


DEFAULT_SWEEPS: dict[str, tuple[float, ...]] = {
    "r_m": tuple(float(x) for x in np.geomspace(1e-3, 2.0, 9)),
    "n_m": tuple(float(n) for n in range(1, 11)),
    "lambda_i": (0.0, 1e-5, 3e-5, 1e-4, 3e-4, 1e-3),
}

_INT_FIELDS = {"n_m", "n_i", "trials", "master_seed"}
_OPTIONAL_FIELDS = {"n_i", "lambda_i", "b_distance_m"}


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class LoadedConfig:
    scenario: ScenarioConfig
    sweep: SweepSpec
    sweeps: dict[str, tuple[float, ...]]
    # scenario keys the file set explicitly
    explicit: frozenset[str] = frozenset()

    def sweep_for(self, variable: str) -> SweepSpec:
        if variable not in SWEEP_VARIABLES:
            raise ConfigError(f"sweep variable must be one of {list(SWEEP_VARIABLES)}, got {variable!r}")
        return SweepSpec(variable, self.sweeps[variable])


def _convert(key: str, raw: str):
    text = raw.strip()
    if key in _OPTIONAL_FIELDS and text.lower() in ("", "none"):
        return None
    if key == "decoder":
        return text.lower()
    try:
        if key in _INT_FIELDS:
            value = int(text, 0)
        else:
            value = float(text)
    except ValueError:
        kind = "an integer" if key in _INT_FIELDS else "a number"
        raise ConfigError(f"scenario.{key}: expected {kind}, got {raw!r}") from None
    if isinstance(value, float) and not math.isfinite(value):
        raise ConfigError(f"scenario.{key}: must be finite, got {raw!r}")
    return value


def _parse_values(key: str, raw: str) -> tuple[float, ...]:
    parts = [p.strip() for p in raw.replace("\n", ",").split(",") if p.strip()]
    if not parts:
        raise ConfigError(f"sweep.{key}: needs at least one value")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"sweep.{key}: values must be numbers, got {raw!r}") from None


def parse_config(text: str, source: str = "<string>") -> LoadedConfig:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    unknown_sections = set(parser.sections()) - {"scenario", "sweep"}
    if unknown_sections:
        raise ConfigError(f"{source}: unknown section(s) {sorted(unknown_sections)}")

    fields = {f.name for f in dataclasses.fields(ScenarioConfig)}
    kwargs = {}
    if parser.has_section("scenario"):
        for key, raw in parser.items("scenario"):
            if key not in fields:
                raise ConfigError(f"scenario.{key}: unknown key; expected one of {sorted(fields)}")
            kwargs[key] = _convert(key, raw)
    try:
        cfg = ScenarioConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"scenario: {exc}") from None

    sweeps = dict(DEFAULT_SWEEPS)
    variable = "r_m"
    if parser.has_section("sweep"):
        for key, raw in parser.items("sweep"):
            if key == "variable":
                variable = raw.strip()
            elif key in SWEEP_VARIABLES:
                sweeps[key] = _parse_values(key, raw)
            else:
                raise ConfigError(f"sweep.{key}: unknown key; expected 'variable' or one of {list(SWEEP_VARIABLES)}")
    if variable not in SWEEP_VARIABLES:
        raise ConfigError(f"sweep.variable: must be one of {list(SWEEP_VARIABLES)}, got {variable!r}")
    return LoadedConfig(cfg, SweepSpec(variable, sweeps[variable]), sweeps, frozenset(kwargs))


def default_config() -> LoadedConfig:
    """Reference scenario with the built-in sweep grids."""
    return LoadedConfig(ScenarioConfig(), SweepSpec("r_m", DEFAULT_SWEEPS["r_m"]), dict(DEFAULT_SWEEPS))


def load_config(path) -> LoadedConfig:
    """Read a scenario file; raises :class:`ConfigError` with a field-level message."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    return parse_config(text, str(path))
