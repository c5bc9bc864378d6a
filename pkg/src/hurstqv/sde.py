"""Pathwise Euler integration of ``dX = f(X) dt + g(X) dB^H`` along a sampled driver."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, IntegrationError
from .fbm import SamplePath

_FD_EPS = 1e-6
_FD_TOL = 1e-4
_CHECK_POINTS = np.linspace(-2.0, 2.0, 9)


@dataclass(frozen=True)
class SdeModel:
    """Drift ``f``, diffusion ``g`` and initial value ``xi`` of a scalar SDE.

    ``lipschitz_note`` records the regularity the model is assumed to have
    (``f`` Lipschitz, ``g`` in C^{1+alpha}, ``g`` bounded away from zero);
    nothing checks it at run time. When ``diffusion_derivative`` is given it
    is compared with a central difference of ``diffusion`` on a few points.
    """

    drift: Callable[[float], float]
    diffusion: Callable[[float], float]
    initial_value: float = 0.0
    diffusion_derivative: Optional[Callable[[float], float]] = None
    lipschitz_note: str = ""

    def __post_init__(self):
        if not math.isfinite(self.initial_value):
            raise DomainError("initial value must be finite")
        for x in _CHECK_POINTS:
            if not (math.isfinite(self.drift(x)) and math.isfinite(self.diffusion(x))):
                raise DomainError(f"drift/diffusion not finite at x={x}")
        if self.diffusion_derivative is not None:
            g = self.diffusion
            for x in _CHECK_POINTS:
                fd = (g(x + _FD_EPS) - g(x - _FD_EPS)) / (2 * _FD_EPS)
                if abs(self.diffusion_derivative(x) - fd) > _FD_TOL:
                    raise DomainError(f"diffusion_derivative disagrees with diffusion at x={x}")


def _neg(x):
    return -x


def _one(x):
    return 1.0


def _zero(x):
    return 0.0


def fou_model(initial_value: float = 0.0) -> SdeModel:
    """Fractional Ornstein-Uhlenbeck model ``dX = -X dt + dB^H``."""
    return SdeModel(
        drift=_neg,
        diffusion=_one,
        initial_value=initial_value,
        diffusion_derivative=_zero,
        lipschitz_note="f(x) = -x Lipschitz with L = 1; g = 1 smooth, bounded below by 1",
    )


FOU = fou_model()


def euler_solve(model: SdeModel, driver: SamplePath) -> SamplePath:
    """Left-point Euler scheme on the driver's grid.

    ``X[k+1] = X[k] + f(X[k]) h + g(X[k]) (B[k+1] - B[k])``.
    """
    f, g = model.drift, model.diffusion
    h = driver.grid.step
    dB = np.diff(driver.values).tolist()
    out = [0.0] * (driver.n + 1)
    x = float(model.initial_value)
    out[0] = x
    for k, db in enumerate(dB, start=1):
        x = x + f(x) * h + g(x) * db
        if not math.isfinite(x):
            raise IntegrationError(f"Euler step produced non-finite value at index {k}", k)
        out[k] = x
    return SamplePath(driver.grid, np.array(out))


def fou_solve(driver: SamplePath) -> SamplePath:
    return euler_solve(FOU, driver)


def subsample(path: SamplePath, factor: int) -> SamplePath:
    """Keep every ``factor``-th grid point; the horizon is unchanged."""
    if isinstance(factor, bool) or int(factor) != factor or factor < 1:
        raise DomainError(f"subsample factor must be a positive integer, got {factor!r}")
    factor = int(factor)
    if path.n % factor:
        raise DomainError(f"factor {factor} does not divide n={path.n}")
    grid = type(path.grid)(path.n // factor, path.grid.horizon)
    return SamplePath(grid, path.values[::factor].copy())
