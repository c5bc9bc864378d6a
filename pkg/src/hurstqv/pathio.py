"""CSV serialization of sample paths: header ``t,value``, 17 significant digits."""

from __future__ import annotations

import csv
import io
import math
import os

import numpy as np

from .errors import DomainError
from .fbm import SamplePath, UniformGrid

HEADER = ("t", "value")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def format_path_csv(path: SamplePath) -> str:
    buf = io.StringIO()
    buf.write(",".join(HEADER) + "\n")
    for t, v in zip(path.times, path.values):
        buf.write(f"{_fmt(t)},{_fmt(v)}\n")
    return buf.getvalue()


def write_path_csv(path: SamplePath, dest) -> None:
    """Write ``path`` to a filename or an open text stream."""
    text = format_path_csv(path)
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", newline="") as fh:
            fh.write(text)
    else:
        dest.write(text)


def parse_path_csv(text: str) -> SamplePath:
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r]
    if not rows or tuple(c.strip() for c in rows[0]) != HEADER:
        raise DomainError("path CSV must start with header 't,value'")
    try:
        data = np.array([[float(a), float(b)] for a, b in rows[1:]], dtype=float)
    except ValueError as exc:
        raise DomainError(f"malformed path CSV row: {exc}") from exc
    if data.shape[0] < 2:
        raise DomainError("path CSV needs at least two grid points")
    t = data[:, 0]
    n = data.shape[0] - 1
    if t[0] != 0.0:
        raise DomainError("path CSV must start at t = 0")
    grid = UniformGrid(n, t[-1])
    if not np.allclose(t, grid.points(), rtol=0.0, atol=1e-9 * grid.horizon):
        raise DomainError("path CSV times are not a uniform grid on [0, T]")
    if not all(math.isfinite(v) for v in data[:, 1]):
        raise DomainError("path CSV holds non-finite values")
    return SamplePath(grid, data[:, 1])


def read_path_csv(src) -> SamplePath:
    """Read a path from a filename or an open text stream."""
    if isinstance(src, (str, os.PathLike)):
        with open(src, newline="") as fh:
            return parse_path_csv(fh.read())
    return parse_path_csv(src.read())
