"""First- and second-order increments and their quadratic-variation statistics.

All quadratic sums go through :func:`compensated_cumsum`, whose per-prefix
error is bounded by about ``eps * |S| + n^2 eps^2 * sum|terms|``.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .fbm import SamplePath, UniformGrid, hurst_value, second_order_increment_covariance

ORDERS = (1, 2)


def check_order(order) -> int:
    if isinstance(order, bool) or order not in ORDERS:
        raise DomainError(f"variation order must be 1 or 2, got {order!r}")
    return int(order)


def qv_constant(order, hurst) -> float:
    """``1`` for order 1 and ``4 - 2^(2H)`` for order 2."""
    order = check_order(order)
    if order == 1:
        return 1.0
    return 4.0 - 2.0 ** (2.0 * hurst_value(hurst))


def compensated_cumsum(terms, axis=-1) -> np.ndarray:
    """Prefix sums with the rounding error of every addition added back.

    ``np.cumsum`` accumulates sequentially, so the error of each step
    ``S[k] = fl(S[k-1] + x[k])`` is recovered exactly with TwoSum and the
    (tiny) errors are accumulated separately.
    """
    x = np.moveaxis(np.asarray(terms, dtype=float), axis, -1)
    s = np.cumsum(x, axis=-1)
    prev = np.zeros_like(s)
    prev[..., 1:] = s[..., :-1]
    bp = s - prev
    err = (prev - (s - bp)) + (x - bp)
    return np.moveaxis(s + np.cumsum(err, axis=-1), -1, axis)


def _values(path):
    return path.values if isinstance(path, SamplePath) else np.asarray(path, dtype=float)


def increments(path, order) -> np.ndarray:
    """Order-1 (``X[k]-X[k-1]``) or order-2 (``X[k+1]-2X[k]+X[k-1]``) increments.

    Accepts a :class:`SamplePath` or a raw value array; differencing runs
    along the last axis so a ``(paths, n+1)`` batch works too.
    """
    order = check_order(order)
    v = _values(path)
    n = v.shape[-1] - 1
    if n < order:
        raise DomainError(f"order-{order} increments need n >= {order}, got n={n}")
    if order == 1:
        return v[..., 1:] - v[..., :-1]
    return v[..., 2:] - 2.0 * v[..., 1:-1] + v[..., :-2]


def raw_quadratic_sum(path, order) -> float:
    d = increments(path, order)
    out = compensated_cumsum(d * d)[..., -1]
    return float(out) if np.ndim(out) == 0 else out


def _norm(n, hurst):
    return float(n) ** (2.0 * hurst_value(hurst) - 1.0)


def normalized_qv(path: SamplePath, order, hurst) -> float:
    """``n^(2H-1) * sum of squared order-i increments``."""
    return _norm(path.n, hurst) * raw_quadratic_sum(path, order)


def _term_count(grid: UniformGrid, order, t) -> int:
    r = grid.index_at(t)
    return max(r - (order - 1), 0)


def running_qv(path: SamplePath, order, hurst, t: float) -> float:
    """Normalized partial quadratic sum over the increments completed by time ``t``."""
    order = check_order(order)
    count = _term_count(path.grid, order, t)
    if count == 0:
        return 0.0
    d = increments(path, order)[:count]
    return _norm(path.n, hurst) * float(compensated_cumsum(d * d)[-1])


def expected_qv(t: float, grid: UniformGrid, hurst, order) -> float:
    """Expectation of :func:`running_qv` for fBm with Hurst index ``hurst``.

    Equals ``count * c * T^(2H) / n`` where ``count`` is the number of summed
    increments, i.e. ``c * rho(t)`` when ``T = 1``.
    """
    order = check_order(order)
    H = hurst_value(hurst)
    count = _term_count(grid, order, t)
    return count * qv_constant(order, H) * grid.horizon ** (2.0 * H) / grid.n


def qv_limit(order, hurst, horizon=1.0, g2_integral=None) -> float:
    """Almost-sure limit of the normalized quadratic variation of an SDE solution.

    ``c * T^(2H-1) * int_0^T g(X_t)^2 dt``; with ``g2_integral`` omitted the
    diffusion is taken as ``g = 1`` so the limit is ``c * T^(2H)``.
    """
    H = hurst_value(hurst)
    if g2_integral is None:
        g2_integral = horizon
    return qv_constant(order, H) * horizon ** (2.0 * H - 1.0) * g2_integral


def sup_deviation(path, order, hurst, grid: UniformGrid | None = None):
    """``sup_t |running QV - its expectation|`` for an fBm path.

    Pass a ``(paths, n+1)`` array together with ``grid`` to evaluate a batch.
    """
    order = check_order(order)
    H = hurst_value(hurst)
    if isinstance(path, SamplePath):
        grid = path.grid
    elif grid is None:
        raise DomainError("sup_deviation on a raw array needs the grid")
    d = increments(path, order)
    per_term = second_order_increment_covariance(1, 1, grid.n, grid.horizon, H, order)
    dev = compensated_cumsum(d * d - per_term)
    out = _norm(grid.n, H) * np.max(np.abs(dev), axis=-1)
    return float(out) if np.ndim(out) == 0 else out
