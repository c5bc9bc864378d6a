"""Experiment configuration and the flat ``key = value`` config file format.

Lines are ``key = value``; ``#`` starts a comment; list values are comma
separated. Keys are the :class:`ExperimentConfig` field names. ``step`` and
``horizon`` are alternative ways to fix the grid spacing: a later source
(command-line override over file) replaces the other one.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass
from typing import Optional

from ..errors import ConfigError, DomainError
from ..estimator import DEFAULT_BETA, GATE_WIDTHS
from ..fbm import GeneratorMethod, HurstIndex

DEFAULT_HURST_GRID = tuple(round(0.55 + 0.05 * k, 2) for k in range(9))
DEFAULT_N_GRID = (100, 250, 1000, 2500, 10_000)
DEFAULT_STEP = 0.05
DESK_SCALE_MAX_N = 10_000


class Experiment(enum.Enum):
    TABLE1 = "TABLE1"
    TABLE2 = "TABLE2"
    TABLE3 = "TABLE3"
    QV_CONCENTRATION = "QV_CONCENTRATION"
    QV_LIMIT = "QV_LIMIT"
    EIGENVALUE_BOUND = "EIGENVALUE_BOUND"

    @classmethod
    def parse(cls, name) -> "Experiment":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().upper())
        except ValueError:
            raise ConfigError(f"unknown experiment {name!r}; expected one of {[e.value for e in cls]}") from None

    @property
    def is_table(self) -> bool:
        return self in (Experiment.TABLE1, Experiment.TABLE2, Experiment.TABLE3)


@dataclass(frozen=True)
class ExperimentConfig:
    """One Monte Carlo sweep over ``hurst_grid x n_grid x replications``.

    For the table experiments ``n`` is the coarse grid size; the observed
    path lives on ``2n`` subintervals. In step mode the horizon is
    ``T = n * step``; in horizon mode ``T`` is fixed. ``EIGENVALUE_BOUND`` is
    deterministic and always runs a single replication.
    """

    experiment: Experiment = Experiment.TABLE1
    hurst_grid: tuple = DEFAULT_HURST_GRID
    n_grid: tuple = DEFAULT_N_GRID
    step: Optional[float] = None
    horizon: Optional[float] = None
    replications: int = 50
    seed: int = 0
    order: int = 1
    beta: float = DEFAULT_BETA
    gating: bool = True
    gate_width: str = "definition"
    method: GeneratorMethod = GeneratorMethod.CIRCULANT_EMBEDDING
    output_path: Optional[str] = None
    workers: int = 1
    large: bool = False

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "experiment", Experiment.parse(self.experiment))
        try:
            set_(self, "method", GeneratorMethod.parse(self.method))
            set_(self, "hurst_grid", tuple(HurstIndex(h).value for h in self.hurst_grid))
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
        set_(self, "n_grid", tuple(int(n) for n in self.n_grid))
        if self.step is not None and self.horizon is not None:
            raise ConfigError("set exactly one of step / horizon")
        if self.step is None and self.horizon is None:
            set_(self, "step", DEFAULT_STEP)
        spacing = self.step if self.step is not None else self.horizon
        if not (math.isfinite(spacing) and spacing > 0):
            raise ConfigError(f"step/horizon must be finite and > 0, got {spacing!r}")
        if not self.hurst_grid or not self.n_grid:
            raise ConfigError("hurst_grid and n_grid must be non-empty")
        min_n = 2 if self.experiment.is_table else self.order
        if self.experiment is Experiment.QV_CONCENTRATION:
            min_n = max(min_n, 2)
        if any(n < min_n for n in self.n_grid):
            raise ConfigError(f"n_grid values must be >= {min_n} for {self.experiment.value}")
        if not self.large and any(n > DESK_SCALE_MAX_N for n in self.n_grid):
            raise ConfigError(f"n > {DESK_SCALE_MAX_N} needs large = true")
        if self.experiment is Experiment.EIGENVALUE_BOUND:
            set_(self, "replications", 1)
        if int(self.replications) != self.replications or self.replications < 1:
            raise ConfigError("replications must be an integer >= 1")
        if self.order not in (1, 2):
            raise ConfigError("order must be 1 or 2")
        if not self.beta > 0:
            raise ConfigError("beta must be > 0")
        if self.gate_width not in GATE_WIDTHS:
            raise ConfigError(f"gate_width must be one of {GATE_WIDTHS}")
        if int(self.workers) != self.workers or self.workers < 1:
            raise ConfigError("workers must be an integer >= 1")

    def horizon_for(self, n: int) -> float:
        return self.horizon if self.horizon is not None else n * self.step


_FIELDS = {f.name: f for f in dataclasses.fields(ExperimentConfig)}


def _parse_bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _parse_int(text):
    t = str(text).strip()
    try:
        return int(t)
    except ValueError:
        pass
    try:
        value = float(t)
    except ValueError:
        raise ConfigError(f"not an integer: {text!r}") from None
    if not value.is_integer():
        raise ConfigError(f"not an integer: {text!r}")
    return int(value)


def _parse_float(text):
    try:
        return float(str(text).strip())
    except ValueError:
        raise ConfigError(f"not a number: {text!r}") from None


def _parse_list(conv):
    def parse(text):
        if isinstance(text, (list, tuple)):
            return tuple(conv(x) for x in text)
        parts = [p for p in str(text).replace(";", ",").split(",") if p.strip()]
        return tuple(conv(p) for p in parts)

    return parse


_PARSERS = {
    "experiment": lambda s: str(s).strip(),
    "hurst_grid": _parse_list(_parse_float),
    "n_grid": _parse_list(_parse_int),
    "step": _parse_float,
    "horizon": _parse_float,
    "replications": _parse_int,
    "seed": _parse_int,
    "order": _parse_int,
    "beta": _parse_float,
    "gating": _parse_bool,
    "gate_width": lambda s: str(s).strip(),
    "method": lambda s: str(s).strip(),
    "output_path": lambda s: str(s).strip(),
    "workers": _parse_int,
    "large": _parse_bool,
}


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines into a dict of typed values."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in _FIELDS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = _PARSERS[key](value)
    return out


def merge_settings(base: dict, overrides: dict) -> dict:
    """Apply ``overrides`` over ``base``; a step/horizon override clears the other."""
    merged = dict(base)
    for key in ("step", "horizon"):
        if overrides.get(key) is not None:
            merged.pop("horizon" if key == "step" else "step", None)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    return merged


def build_config(settings: dict) -> ExperimentConfig:
    unknown = set(settings) - set(_FIELDS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    typed = {k: (_PARSERS[k](v) if isinstance(v, str) else v) for k, v in settings.items()}
    try:
        return ExperimentConfig(**typed)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def load_config(path=None, overrides: Optional[dict] = None) -> ExperimentConfig:
    base = {}
    if path is not None:
        with open(path) as fh:
            base = parse_config_text(fh.read())
    return build_config(merge_settings(base, overrides or {}))
