"""Experiment configuration files.

One ``key = value`` per line, ``#`` starts a comment, keys are case
sensitive.  ``bandwidth`` and ``seed`` are required; every other key has a
default.  Unknown or repeated keys are errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from .ensemble import Shape, SpectrumConfig, default_tau_grid
from .exceptions import ConfigError
from .model import Convention, ModelParams

_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


@dataclass(frozen=True)
class ExperimentConfig:
    bandwidth: float
    seed: int
    theta0_deg: float = 90.0
    q: float = 0.0
    spectrum: str = "rect"
    n_pairs: int = 100_000
    tau_points: int = 400
    tau_max_over_bandwidth: float = 10.0
    convention: str = "eq8"
    i0: float = 1.0
    keep_traces: bool = False

    @property
    def theta0(self) -> float:
        return math.radians(self.theta0_deg)

    def spectrum_config(self) -> SpectrumConfig:
        return SpectrumConfig(Shape(self.spectrum), self.bandwidth, self.n_pairs, self.seed)

    def model_params(self) -> ModelParams:
        return ModelParams(self.theta0, self.q, self.i0, Convention(self.convention))

    def tau_grid(self):
        return default_tau_grid(self.bandwidth, self.tau_points, self.tau_max_over_bandwidth)


def _float(text):
    x = float(text)
    if not math.isfinite(x):
        raise ValueError("not a finite number")
    return x


def _int(text):
    return int(text, 10)


def _choice(*options):
    def parse(text):
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}")
        return text
    return parse


def _bool(text):
    low = text.lower()
    if low in _TRUE:
        return True
    if low in _FALSE:
        return False
    raise ValueError("expected true or false")


# key -> (parser, range check, description of the allowed range)
_SCHEMA = {
    "theta0_deg": (_float, lambda v: True, "any finite angle in degrees"),
    "q": (_float, lambda v: 0.0 <= v <= 1.0, "0 <= q <= 1"),
    "spectrum": (_choice("rect", "gaussian"), lambda v: True, "rect or gaussian"),
    "bandwidth": (_float, lambda v: v > 0.0, "bandwidth > 0"),
    "n_pairs": (_int, lambda v: v >= 1, "n_pairs >= 1"),
    "seed": (_int, lambda v: 0 <= v < 2 ** 64, "0 <= seed < 2**64"),
    "tau_points": (_int, lambda v: v >= 2, "tau_points >= 2"),
    "tau_max_over_bandwidth": (_float, lambda v: v > 0.0, "tau_max_over_bandwidth > 0"),
    "convention": (_choice("eq8", "product45"), lambda v: True, "eq8 or product45"),
    "i0": (_float, lambda v: v > 0.0, "i0 > 0"),
    "keep_traces": (_bool, lambda v: True, "true or false"),
}
_REQUIRED = ("bandwidth", "seed")

assert set(_SCHEMA) == {f.name for f in fields(ExperimentConfig)}


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a configuration document."""
    values = {}
    seen_at = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        if key not in _SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in seen_at:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} (first set on line {seen_at[key]})")
        parse, ok, bounds = _SCHEMA[key]
        try:
            parsed = parse(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: cannot parse {key!r} value {value!r}: {exc}") from None
        if not ok(parsed):
            raise ConfigError(f"line {lineno}: {key!r} = {value} out of range, need {bounds}")
        seen_at[key] = lineno
        values[key] = parsed
    missing = [k for k in _REQUIRED if k not in values]
    if missing:
        raise ConfigError(f"missing required key {missing[0]!r}")
    return ExperimentConfig(**values)


def load_config(path) -> ExperimentConfig:
    """Read a configuration file.  ``OSError`` propagates untouched."""
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
