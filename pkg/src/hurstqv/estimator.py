"""Dyadic-ratio Hurst estimators with the shrinking acceptance gate.

From one observed trajectory on a ``2n`` grid, the ratio

    R = sum (D_{k,2n} X)^2 / sum (D_{k,n} X)^2

has expectation scale ``2^(1-2H)`` for fBm, which is inverted into
``H_hat = 1/2 - ln(R) / (2 ln 2)``. The estimate is kept only when ``R`` lies
in ``[(1 - w)/2, 1 + w]`` with a half-width ``w`` shrinking in ``n``, and is
set to 0 otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePathError, DomainError
from .fbm import SamplePath
from .quadvar import check_order, raw_quadratic_sum
from .sde import subsample

DEFAULT_BETA = 0.05
GATE_WIDTHS = ("definition", "proof")


def gate_half_width(n: int, beta: float, width: str = "definition") -> float:
    """``2 n^(-1/4) (ln n)^(1/4 + beta)``, or ``n^(-1/4) (ln n)^(1/4 + 2 beta)`` for ``width="proof"``."""
    if n < 2:
        raise DomainError(f"gate needs n >= 2, got {n}")
    if not beta > 0:
        raise DomainError(f"gate exponent beta must be > 0, got {beta!r}")
    ln = math.log(n)
    if width == "definition":
        return 2.0 * n**-0.25 * ln ** (0.25 + beta)
    if width == "proof":
        return n**-0.25 * ln ** (0.25 + 2.0 * beta)
    raise DomainError(f"unknown gate width {width!r}; expected one of {GATE_WIDTHS}")


def gate_bounds(n: int, beta: float = DEFAULT_BETA, width: str = "definition") -> tuple[float, float]:
    """Acceptance interval ``((1 - w)/2, 1 + w)`` for the ratio at coarse size ``n``.

    The lower end turns negative for small ``n``; the gate is then one-sided.
    """
    w = gate_half_width(n, beta, width)
    return 0.5 * (1.0 - w), 1.0 + w


@dataclass(frozen=True)
class EstimatorConfig:
    order: int = 1
    beta: float = DEFAULT_BETA
    gating: bool = True
    gate_width: str = "definition"

    def __post_init__(self):
        check_order(self.order)
        if not self.beta > 0:
            raise DomainError(f"beta must be > 0, got {self.beta!r}")
        if self.gate_width not in GATE_WIDTHS:
            raise DomainError(f"unknown gate width {self.gate_width!r}")


@dataclass(frozen=True)
class EstimateResult:
    ratio: float
    estimate: float
    gated_out: bool
    n: int
    order: int
    gate_lower: float
    gate_upper: float

    CSV_HEADER = ("order", "n", "ratio", "estimate", "gated_out", "gate_lower", "gate_upper")

    def csv_row(self) -> list[str]:
        f = lambda x: format(x, ".17g")  # noqa: E731
        return [
            str(self.order),
            str(self.n),
            f(self.ratio),
            f(self.estimate),
            str(int(self.gated_out)),
            f(self.gate_lower),
            f(self.gate_upper),
        ]


def _rounding_floor(path: SamplePath, order: int) -> float:
    """Largest quadratic sum explainable by rounding of an exactly affine path."""
    scale = float(np.max(np.abs(path.values)))
    terms = path.n - (order - 1)
    return terms * (8.0 * np.finfo(float).eps * scale) ** 2


def ratio_statistic(fine: SamplePath, order) -> float:
    """Quadratic sum on the fine ``2n`` grid over the sum on its ``n`` subgrid.

    A coarse sum at rounding-noise level (constant or affine data) raises
    :class:`DegeneratePathError`.
    """
    order = check_order(order)
    if fine.n % 2 or fine.n < 2 * order:
        raise DomainError(f"fine grid needs an even n >= {2 * order}, got n={fine.n}")
    coarse = subsample(fine, 2)
    num = raw_quadratic_sum(fine, order)
    den = raw_quadratic_sum(coarse, order)
    if den <= _rounding_floor(coarse, order):
        raise DegeneratePathError(
            f"order-{order} quadratic sum on the coarse grid is zero; "
            "the observed path is constant or affine"
        )
    return num / den


def hurst_from_ratio(ratio: float, gate: tuple[float, float], gating: bool = True) -> tuple[float, bool]:
    """Invert the ratio; returns ``(estimate, gated_out)``."""
    if not ratio > 0:
        raise DomainError(f"ratio must be > 0, got {ratio!r}")
    lower, upper = gate
    if gating and not lower <= ratio <= upper:
        return 0.0, True
    return 0.5 - math.log(ratio) / (2.0 * math.log(2.0)), False


def estimate_hurst(fine: SamplePath, config: EstimatorConfig = EstimatorConfig()) -> EstimateResult:
    ratio = ratio_statistic(fine, config.order)
    n = fine.n // 2
    lower, upper = gate_bounds(n, config.beta, config.gate_width)
    est, gated = hurst_from_ratio(ratio, (lower, upper), config.gating)
    return EstimateResult(ratio, est, gated, n, config.order, lower, upper)
