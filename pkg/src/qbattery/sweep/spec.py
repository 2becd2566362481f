"""Sweep specifications: parameter grids, config files and validation."""

from __future__ import annotations

import configparser
import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..channels import NoiseKind

MAX_GRID_POINTS = 10 ** 8


class SpecError(ValueError):
    """Invalid sweep specification; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class Experiment(enum.Enum):
    SINGLE_QUBIT_NOISE = "single"
    TWO_QUBIT_NOISELESS = "two"
    TWO_QUBIT_NOISE = "two-noise"
    REGION_MAP = "regions"
    ASYMPTOTIC_MAP = "map"
    DIAGONAL_DISTRIBUTION = "diag"
    VERIFY = "verify"


class OutputFormat(enum.Enum):
    CSV = "csv"
    JSONL = "jsonl"


@dataclass(frozen=True)
class Grid:
    """Inclusive linear grid ``start..stop`` with ``count`` points."""

    start: float
    stop: float
    count: int

    def values(self) -> list[float]:
        if self.count == 1:
            return [float(self.start)]
        return [float(x) for x in np.linspace(self.start, self.stop, self.count)]


def parse_values(text, path: str, integer: bool = False) -> list:
    """Parse ``x``, ``a,b,c`` or ``start:stop:count`` into a list of values."""
    text = str(text).strip()
    if not text:
        raise SpecError(path, "empty value")
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise SpecError(path, f"grid must be start:stop:count, got {text!r}")
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1:
                raise SpecError(path, f"grid count must be >= 1, got {count}")
            if start > stop:
                raise SpecError(path, f"grid start {start} exceeds stop {stop}")
            values = Grid(start, stop, count).values()
            if integer:
                ints = [int(round(v)) for v in values]
                if any(abs(i - v) > 1e-9 for i, v in zip(ints, values)):
                    raise SpecError(path, f"grid {text!r} does not land on integers")
                return ints
            return values
        out = []
        for item in text.split(","):
            item = item.strip()
            if integer:
                value = float(item)
                if value != int(value):
                    raise ValueError(item)
                out.append(int(value))
            else:
                out.append(float(item))
        return out
    except SpecError:
        raise
    except ValueError:
        raise SpecError(path, f"cannot parse {text!r} as {'integers' if integer else 'numbers'}") from None


# Parameters each experiment sweeps, in row-major nesting order (last varies fastest).
PARAM_ORDER = {
    Experiment.SINGLE_QUBIT_NOISE: ("p", "omega_t", "n"),
    Experiment.TWO_QUBIT_NOISELESS: ("j", "jz", "gamma", "d", "omega", "t"),
    Experiment.TWO_QUBIT_NOISE: ("j", "jz", "gamma", "d", "omega", "p", "t", "n"),
    Experiment.REGION_MAP: ("j", "jz", "gamma", "d"),
    Experiment.ASYMPTOTIC_MAP: ("j", "jz", "gamma", "d"),
    Experiment.DIAGONAL_DISTRIBUTION: ("j", "jz", "gamma", "d", "omega", "t", "p", "n"),
    Experiment.VERIFY: (),
}

INTEGER_PARAMS = {"n"}

DEFAULTS = {
    Experiment.SINGLE_QUBIT_NOISE: {"p": "0.1", "omega_t": f"0:{2 * math.pi!r}:400", "n": "0,1,10,50"},
    Experiment.TWO_QUBIT_NOISELESS: {
        "j": "0.1", "jz": "0.5", "gamma": "0.2", "d": "0.3,1.2,2.5", "omega": "1",
        "t": f"0:{math.pi!r}:201",
    },
    Experiment.TWO_QUBIT_NOISE: {
        "j": "0.1", "jz": "0.5", "gamma": "0.2", "d": "0.3,1.2,2.5", "omega": "1", "p": "0.1",
        "t": f"0:{math.pi!r}:201", "n": "1,10,50",
    },
    Experiment.REGION_MAP: {"j": "0.1", "jz": "0.5", "gamma": "0.2"},
    Experiment.ASYMPTOTIC_MAP: {"j": "0.1", "jz": "0:2:200", "gamma": "0.2", "d": "0:3:200"},
    Experiment.DIAGONAL_DISTRIBUTION: {
        "j": "0.1", "jz": "0.5", "gamma": "0.2", "d": "2.5", "omega": "1", "t": "0.5", "p": "0.1",
        "n": "0:50:51",
    },
    Experiment.VERIFY: {},
}

# Which channels each noisy experiment accepts.
ALLOWED_NOISE = {
    Experiment.SINGLE_QUBIT_NOISE: (NoiseKind.PHASE_FLIP, NoiseKind.BIT_FLIP, NoiseKind.AMPLITUDE_DAMPING),
    Experiment.TWO_QUBIT_NOISE: (NoiseKind.PHASE_FLIP, NoiseKind.BIT_FLIP, NoiseKind.AMPLITUDE_DAMPING),
    Experiment.ASYMPTOTIC_MAP: (NoiseKind.BIT_FLIP, NoiseKind.AMPLITUDE_DAMPING),
    Experiment.DIAGONAL_DISTRIBUTION: (NoiseKind.BIT_FLIP, NoiseKind.AMPLITUDE_DAMPING),
}


@dataclass
class SweepSpec:
    experiment: Experiment
    params: dict[str, list] = field(default_factory=dict)
    noise: NoiseKind | None = None
    output: str | None = None
    format: OutputFormat = OutputFormat.CSV
    workers: int | None = None
    brute: bool = False
    brute_n: int = 500
    brute_t: float = 0.5
    brute_p: float = 0.1
    brute_tol: float = 1e-6
    draws: int = 500
    seed: int = 0

    @property
    def order(self) -> tuple[str, ...]:
        return PARAM_ORDER[self.experiment]

    def grid_size(self) -> int:
        return math.prod(len(self.params[k]) for k in self.order if k in self.params)

    def points(self):
        keys = [k for k in self.order if k in self.params]
        for combo in itertools.product(*(self.params[k] for k in keys)):
            yield dict(zip(keys, combo))


def build_spec(experiment: Experiment, raw_params: dict[str, str], **options) -> SweepSpec:
    """Parse and validate raw string values into a :class:`SweepSpec`."""
    merged = dict(DEFAULTS[experiment])
    merged.update({k: v for k, v in raw_params.items() if v is not None})
    params = {}
    for key in PARAM_ORDER[experiment]:
        if key in merged:
            params[key] = parse_values(merged[key], f"params.{key}", integer=key in INTEGER_PARAMS)
    unknown = set(merged) - set(PARAM_ORDER[experiment])
    if unknown:
        name = sorted(unknown)[0]
        raise SpecError(f"params.{name}", f"not a parameter of the {experiment.value} experiment")
    if isinstance(options.get("noise"), str):
        options["noise"] = parse_noise(options["noise"])
    if isinstance(options.get("format"), str):
        options["format"] = parse_format(options["format"])
    spec = SweepSpec(experiment=experiment, params=params, **options)
    validate(spec)
    return spec


def _check_range(spec: SweepSpec, key: str, lo: float | None = None, hi: float | None = None,
                 strict_lo: bool = False) -> None:
    for v in spec.params.get(key, ()):
        if not math.isfinite(v):
            raise SpecError(f"params.{key}", f"value {v} is not finite")
        if lo is not None and (v < lo or (strict_lo and v == lo)):
            raise SpecError(f"params.{key}", f"value {v} below allowed minimum {lo}")
        if hi is not None and v > hi:
            raise SpecError(f"params.{key}", f"value {v} above allowed maximum {hi}")


def validate(spec: SweepSpec) -> None:
    exp = spec.experiment
    for key in ("j", "gamma", "d", "omega_t"):
        _check_range(spec, key)
    _check_range(spec, "jz", lo=0.0)
    _check_range(spec, "omega", lo=0.0, strict_lo=True)
    _check_range(spec, "t", lo=0.0)
    _check_range(spec, "p", lo=0.0, hi=1.0)
    _check_range(spec, "omega_t", lo=0.0)
    for n in spec.params.get("n", ()):
        if n < 0:
            raise SpecError("params.n", f"value {n} is negative")
    if exp in ALLOWED_NOISE and spec.noise is None:
        raise SpecError("noise.kind", f"the {exp.value} experiment needs a noise kind")
    if spec.noise is not None and exp in ALLOWED_NOISE and spec.noise not in ALLOWED_NOISE[exp]:
        allowed = ", ".join(k.value for k in ALLOWED_NOISE[exp])
        raise SpecError("noise.kind", f"{spec.noise.value} not supported here (use {allowed})")
    if spec.workers is not None and spec.workers < 1:
        raise SpecError("sweep.workers", "must be >= 1")
    if spec.draws < 1:
        raise SpecError("verify.draws", "must be >= 1")
    if spec.brute_n < 0:
        raise SpecError("brute.n", "must be >= 0")
    if not 0.0 <= spec.brute_p <= 1.0:
        raise SpecError("brute.p", "must lie in [0, 1]")
    if spec.grid_size() > MAX_GRID_POINTS:
        raise SpecError("params", f"grid has {spec.grid_size()} points (limit {MAX_GRID_POINTS})")


def read_config(path: str) -> dict[str, dict[str, str]]:
    """Read an INI-style config: ``[sweep]``, ``[params]``, ``[noise]``, ``[output]``, ``[brute]``, ``[verify]``."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str.lower
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise SpecError("config", f"cannot read {path}: {exc.strerror}") from None
    except configparser.Error as exc:
        raise SpecError("config", f"malformed config {path}: {exc}") from None
    known = {"sweep", "params", "noise", "output", "brute", "verify"}
    for section in parser.sections():
        if section not in known:
            raise SpecError(section, "unknown config section")
    return {section: dict(parser[section]) for section in parser.sections()}


def parse_int(text, path: str) -> int:
    try:
        return int(str(text).strip())
    except ValueError:
        raise SpecError(path, f"expected an integer, got {text!r}") from None


def parse_float(text, path: str) -> float:
    try:
        return float(str(text).strip())
    except ValueError:
        raise SpecError(path, f"expected a number, got {text!r}") from None


def parse_bool(text, path: str) -> bool:
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise SpecError(path, f"expected a boolean, got {text!r}")


def parse_noise(text, path: str = "noise.kind") -> NoiseKind:
    try:
        return NoiseKind.parse(text)
    except ValueError as exc:
        raise SpecError(path, str(exc)) from None


def parse_format(text, path: str = "output.format") -> OutputFormat:
    try:
        return OutputFormat(str(text).strip().lower())
    except ValueError:
        raise SpecError(path, f"unknown format {text!r}; expected csv or jsonl") from None


def experiment_names() -> Sequence[str]:
    return [e.value for e in Experiment]
