"""Fractional Brownian motion: covariance structure and exact path synthesis.

Two exact generators are available:

* ``CHOLESKY`` factorizes the dense covariance matrix of the increments. It is
  the reference method and is capped at ``CHOLESKY_CAP`` increments.
* ``CIRCULANT_EMBEDDING`` (Davies-Harte) embeds the stationary increment
  autocovariance in a circulant matrix of size ``2m >= 2(n - 1)`` and draws
  through the FFT in O(n log n).

Random streams
--------------
Every draw goes through :func:`make_rng`: a PCG64 generator seeded by
``SeedSequence(seed, spawn_key=stream)``. The harness derives the stream of a
replication as ``(hurst_index, n_index, replication)``, so a replication's
numbers never depend on how many others run or in what order.

Standard normals are produced by inverse transform: 52-bit uniform integers
``k`` are mapped to ``(k + 1/2) / 2**52`` (strictly inside (0, 1), exact in
binary64) and passed through ``scipy.special.ndtri``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvalsh, toeplitz
from scipy.special import ndtri

from .errors import CapacityError, DomainError, EmbeddingError, FactorizationError

CHOLESKY_CAP = 4096
EIGEN_TOLERANCE = 1e-10
MAX_EMBEDDING_DOUBLINGS = 6

_U52 = 1 << 52


@dataclass(frozen=True)
class HurstIndex:
    """Hurst parameter validated to lie in (0, 1)."""

    value: float

    def __post_init__(self):
        v = float(self.value)
        if not 0.0 < v < 1.0:
            raise DomainError(f"Hurst index must lie in (0, 1), got {self.value!r}")
        object.__setattr__(self, "value", v)

    @property
    def in_sde_range(self) -> bool:
        """True when H > 1/2, the range where the pathwise SDE theory applies."""
        return self.value > 0.5

    def __float__(self):
        return self.value


def hurst_value(hurst) -> float:
    """Coerce a float or :class:`HurstIndex` to a validated float."""
    if isinstance(hurst, HurstIndex):
        return hurst.value
    return HurstIndex(hurst).value


@dataclass(frozen=True)
class UniformGrid:
    """Uniform partition ``t_k = k T / n`` of ``[0, T]`` with ``n`` subintervals."""

    n: int
    horizon: float = 1.0

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise DomainError(f"grid needs a positive integer n, got {self.n!r}")
        horizon = float(self.horizon)
        if not (math.isfinite(horizon) and horizon > 0.0):
            raise DomainError(f"grid horizon must be finite and > 0, got {self.horizon!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "horizon", horizon)

    @classmethod
    def from_step(cls, n: int, step: float) -> "UniformGrid":
        return cls(n, n * float(step))

    @property
    def step(self) -> float:
        return self.horizon / self.n

    def point(self, k: int) -> float:
        if not 0 <= k <= self.n:
            raise DomainError(f"grid index {k} outside 0..{self.n}")
        return self.horizon if k == self.n else k * self.horizon / self.n

    def points(self) -> np.ndarray:
        t = np.arange(self.n + 1) * self.horizon / self.n
        t[-1] = self.horizon
        return t

    def index_at(self, t: float) -> int:
        """``r(t) = max{k : t_k <= t}``, consistent with :meth:`point`."""
        self._check_time(t)
        k = min(int(math.floor(t * self.n / self.horizon)), self.n)
        if k < self.n and self.point(k + 1) <= t:
            k += 1
        while k > 0 and self.point(k) > t:
            k -= 1
        return k

    def rho(self, t: float) -> float:
        """``rho(t) = max{t_k : t_k <= t}``."""
        return self.point(self.index_at(t))

    def _check_time(self, t):
        if not 0.0 <= t <= self.horizon:
            raise DomainError(f"time {t!r} outside [0, {self.horizon}]")


@dataclass(frozen=True, eq=False)
class SamplePath:
    """Values ``X(t_0), ..., X(t_n)`` of a scalar process on a uniform grid."""

    grid: UniformGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.grid.n + 1,):
            raise DomainError(
                f"path needs {self.grid.n + 1} values for n={self.grid.n}, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise DomainError("path values must be finite")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def times(self) -> np.ndarray:
        return self.grid.points()

    def scaled(self, c: float) -> "SamplePath":
        return SamplePath(self.grid, c * self.values)

    def __eq__(self, other):
        if not isinstance(other, SamplePath):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.values, other.values)

    __hash__ = None


class GeneratorMethod(enum.Enum):
    CHOLESKY = "cholesky"
    CIRCULANT_EMBEDDING = "circulant"

    @classmethod
    def parse(cls, name) -> "GeneratorMethod":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower()
        for m in cls:
            if key in (m.value, m.name.lower()):
                return m
        raise DomainError(f"unknown generator method {name!r}")


# --- random streams --------------------------------------------------------


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Seeded PCG64 generator for ``(seed, *stream)``; negative seeds allowed."""
    seed = int(seed)
    entropy = seed if seed >= 0 else [-seed, 1]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy, spawn_key=stream)))


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return make_rng(seed)


def standard_normals(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard normal draws by inverse transform of open-interval uniforms."""
    k = rng.integers(0, _U52, size=shape, dtype=np.uint64)
    return ndtri((k.astype(float) + 0.5) / _U52)


# --- covariances -----------------------------------------------------------


def fbm_covariance(s, t, hurst):
    """``E[B(s) B(t)] = (s^2H + t^2H - |t - s|^2H) / 2``; broadcasts over arrays."""
    H2 = 2.0 * hurst_value(hurst)
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(s < 0) or np.any(t < 0):
        raise DomainError("fBm covariance needs non-negative times")
    out = 0.5 * (s**H2 + t**H2 - np.abs(t - s) ** H2)
    return float(out) if out.ndim == 0 else out


def increment_autocovariance(lag, hurst, step):
    """Autocovariance of fBm increments over steps of length ``step`` at integer ``lag``."""
    H2 = 2.0 * hurst_value(hurst)
    if not step > 0:
        raise DomainError(f"step must be > 0, got {step!r}")
    k = np.abs(np.asarray(lag, dtype=float))
    out = 0.5 * step**H2 * (np.abs(k + 1) ** H2 - 2.0 * k**H2 + np.abs(k - 1) ** H2)
    return float(out) if out.ndim == 0 else out


def _order_autocovariance(lags, hurst, step, order):
    """Autocovariance of order-1 or order-2 increments as a function of lag.

    Order-2 increments are differences of consecutive order-1 increments, so
    their covariance at lag m is ``2 g(m) - g(m+1) - g(m-1)`` with ``g`` the
    order-1 autocovariance.
    """
    lags = np.abs(np.asarray(lags))
    if order == 1:
        return increment_autocovariance(lags, hurst, step)
    if order == 2:
        g = lambda m: increment_autocovariance(m, hurst, step)  # noqa: E731
        return 2.0 * g(lags) - g(lags + 1) - g(lags - 1)
    raise DomainError(f"variation order must be 1 or 2, got {order!r}")


def second_order_increment_covariance(j, k, n, horizon, hurst, order):
    """``E[D_j B * D_k B]`` for order-``order`` increments on the n-grid of ``[0, T]``.

    Indices run over ``1..n-(order-1)``.
    """
    if order not in (1, 2):
        raise DomainError(f"variation order must be 1 or 2, got {order!r}")
    last = n - (order - 1)
    for idx in (j, k):
        if not 1 <= idx <= last:
            raise DomainError(f"increment index {idx} outside 1..{last}")
    return float(_order_autocovariance(j - k, hurst, horizon / n, order))


def increment_covariance_matrix(n, horizon, hurst, order=1) -> np.ndarray:
    """Dense Toeplitz covariance of the ``n - (order-1)`` order-``order`` increments."""
    size = n - (order - 1)
    if size < 1:
        raise DomainError(f"n={n} too small for order {order}")
    return toeplitz(_order_autocovariance(np.arange(size), hurst, horizon / n, order))


def max_increment_eigenvalue(n, horizon, hurst, order=1, cap=CHOLESKY_CAP) -> float:
    """Largest eigenvalue of ``n^(2H-1) * (E[D_j B * D_k B])_{j,k}``."""
    if n > cap:
        raise CapacityError(f"dense eigensolve capped at n={cap}, got n={n}")
    H = hurst_value(hurst)
    mat = n ** (2.0 * H - 1.0) * increment_covariance_matrix(n, horizon, H, order)
    size = mat.shape[0]
    return float(eigvalsh(mat, subset_by_index=[size - 1, size - 1])[0])


# --- synthesis -------------------------------------------------------------


def circulant_eigenvalues(autocov, n, tolerance=EIGEN_TOLERANCE, max_doublings=MAX_EMBEDDING_DOUBLINGS):
    """Eigenvalues of the smallest valid circulant embedding of ``autocov``.

    ``autocov(lags)`` returns the autocovariance at integer lags. The first
    embedding has size ``2n``; it is doubled while some eigenvalue is below
    ``-tolerance * max_eigenvalue``. Eigenvalues in that tolerance band are
    clamped to zero.
    """
    half = max(n, 1)
    for _ in range(max_doublings + 1):
        gam = np.asarray(autocov(np.arange(half + 1)), dtype=float)
        row = np.concatenate([gam, gam[-2:0:-1]])
        eig = np.fft.fft(row).real
        top = eig.max()
        if eig.min() >= -tolerance * top:
            return np.clip(eig, 0.0, None)
        half *= 2
    raise EmbeddingError(
        f"circulant embedding has negative eigenvalues (min {eig.min():.3e}) "
        f"after {max_doublings} doublings of the embedding size; "
        "increase max_doublings or use the Cholesky method"
    )


def _increments_circulant(n, H, step, size, rng, tolerance, max_doublings):
    eig = circulant_eigenvalues(
        lambda lags: increment_autocovariance(lags, H, step), n, tolerance, max_doublings
    )
    m = eig.size
    z = standard_normals(rng, (size, 2, m))
    w = np.sqrt(eig / m) * (z[:, 0, :] + 1j * z[:, 1, :])
    return np.fft.fft(w, axis=-1).real[:, :n]


def _increments_cholesky(n, H, step, size, rng, cap):
    if n > cap:
        raise CapacityError(f"Cholesky generation capped at n={cap}, got n={n}")
    cov = toeplitz(increment_autocovariance(np.arange(n), H, step))
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(f"increment covariance not positive definite for n={n}, H={H}") from exc
    z = standard_normals(rng, (size, n))
    return z @ chol.T


def generate_fbm_paths(
    grid: UniformGrid,
    hurst,
    size: int,
    seed=0,
    method=GeneratorMethod.CIRCULANT_EMBEDDING,
    *,
    cholesky_cap=CHOLESKY_CAP,
    tolerance=EIGEN_TOLERANCE,
    max_doublings=MAX_EMBEDDING_DOUBLINGS,
) -> np.ndarray:
    """Draw ``size`` independent fBm paths as a ``(size, n+1)`` array.

    Row 0 equals the path :func:`generate_fbm` returns for the same seed.
    """
    H = hurst_value(hurst)
    method = GeneratorMethod.parse(method)
    rng = _as_rng(seed)
    if method is GeneratorMethod.CHOLESKY:
        inc = _increments_cholesky(grid.n, H, grid.step, size, rng, cholesky_cap)
    else:
        inc = _increments_circulant(grid.n, H, grid.step, size, rng, tolerance, max_doublings)
    paths = np.zeros((size, grid.n + 1))
    np.cumsum(inc, axis=1, out=paths[:, 1:])
    return paths


def generate_fbm(grid: UniformGrid, hurst, seed=0, method=GeneratorMethod.CIRCULANT_EMBEDDING, **kwargs) -> SamplePath:
    """One exact fBm sample path on ``grid`` with ``B(0) = 0``.

    ``seed`` is an integer or a ready ``numpy.random.Generator``.
    """
    return SamplePath(grid, generate_fbm_paths(grid, hurst, 1, seed, method, **kwargs)[0])
