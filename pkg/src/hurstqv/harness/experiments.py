"""Monte Carlo sweeps behind the rate tables and the quadratic-variation checks.

A replication is the unit of work. Its random stream is
``make_rng(seed, hurst_index, n_index, replication)`` and it returns one
:class:`Row`, so reports do not depend on the worker count. Library errors
inside a replication become failure rows; the sweep continues.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, HurstQVError
from ..estimator import EstimatorConfig, estimate_hurst
from ..fbm import UniformGrid, generate_fbm, make_rng, max_increment_eigenvalue
from ..quadvar import normalized_qv, qv_limit, sup_deviation
from ..sde import fou_solve
from .config import Experiment, ExperimentConfig

REPORT_HEADER = ("experiment", "H", "n", "replication", "order", "raw", "scaled", "gated_out", "status")
SUMMARY_HEADER = ("experiment", "H", "n", "order", "median", "mean", "stderr", "gate_fraction")


def scale_factor(experiment, n: int) -> float:
    """Rate normalization applied to the raw statistic of ``experiment`` at size ``n``."""
    experiment = Experiment.parse(experiment)
    ln = math.log(n)
    if experiment is Experiment.TABLE1:
        return 1.0
    if experiment is Experiment.TABLE2:
        return n**0.25 * ln**-0.3
    if experiment in (Experiment.TABLE3, Experiment.QV_CONCENTRATION):
        return n**0.5 * ln**-0.5
    if experiment is Experiment.QV_LIMIT:
        return n**0.25 * ln**-0.25
    return float(n)


@dataclass(frozen=True)
class Row:
    experiment: str
    H: float
    n: int
    replication: int
    order: int
    raw: float
    scaled: float
    gated_out: bool
    status: str

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass(frozen=True)
class SummaryRow:
    experiment: str
    H: float
    n: int
    order: int
    median: float
    mean: float
    stderr: float
    gate_fraction: float


def _fmt(x) -> str:
    if isinstance(x, float):
        return "" if math.isnan(x) else format(x, ".17g")
    return str(x)


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    rows: list
    summary: list

    def report_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(REPORT_HEADER)
        for r in self.rows:
            w.writerow([r.experiment, _fmt(r.H), r.n, r.replication, r.order,
                        _fmt(r.raw), _fmt(r.scaled), int(r.gated_out), r.status])
        return buf.getvalue()

    def summary_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for s in self.summary:
            w.writerow([s.experiment, _fmt(s.H), s.n, s.order, _fmt(s.median),
                        _fmt(s.mean), _fmt(s.stderr), _fmt(s.gate_fraction)])
        return buf.getvalue()

    def values(self, H: float, n: int, column: str = "raw") -> np.ndarray:
        """Successful ``column`` values for one (H, n) cell."""
        return np.array([getattr(r, column) for r in self.rows if r.H == H and r.n == n and r.ok])

    def cell(self, H: float, n: int) -> SummaryRow:
        for s in self.summary:
            if s.H == H and s.n == n:
                return s
        raise KeyError((H, n))


# --- single replications ---------------------------------------------------


def _table_replication(cfg: ExperimentConfig, H, n, rng):
    fine = UniformGrid(2 * n, cfg.horizon_for(n))
    x = fou_solve(generate_fbm(fine, H, rng, cfg.method))
    res = estimate_hurst(x, EstimatorConfig(cfg.order, cfg.beta, cfg.gating, cfg.gate_width))
    return abs(res.estimate - H), res.gated_out


def _concentration_replication(cfg, H, n, rng):
    path = generate_fbm(UniformGrid(n, cfg.horizon_for(n)), H, rng, cfg.method)
    return sup_deviation(path, cfg.order, H), False


def _limit_replication(cfg, H, n, rng):
    T = cfg.horizon_for(n)
    x = fou_solve(generate_fbm(UniformGrid(n, T), H, rng, cfg.method))
    return abs(normalized_qv(x, cfg.order, H) - qv_limit(cfg.order, H, T)), False


def _eigen_replication(cfg, H, n, rng):
    return max_increment_eigenvalue(n, cfg.horizon_for(n), H, cfg.order), False


_KERNELS = {
    Experiment.TABLE1: _table_replication,
    Experiment.TABLE2: _table_replication,
    Experiment.TABLE3: _table_replication,
    Experiment.QV_CONCENTRATION: _concentration_replication,
    Experiment.QV_LIMIT: _limit_replication,
    Experiment.EIGENVALUE_BOUND: _eigen_replication,
}


def run_replication(cfg: ExperimentConfig, h_idx: int, n_idx: int, rep: int) -> Row:
    H, n = cfg.hurst_grid[h_idx], cfg.n_grid[n_idx]
    exp = cfg.experiment
    rng = make_rng(cfg.seed, h_idx, n_idx, rep)
    try:
        raw, gated = _KERNELS[exp](cfg, H, n, rng)
    except HurstQVError as exc:
        return Row(exp.value, H, n, rep, cfg.order, math.nan, math.nan, False, f"failed:{type(exc).__name__}")
    if not math.isfinite(raw):
        return Row(exp.value, H, n, rep, cfg.order, math.nan, math.nan, False, "failed:NonFinite")
    return Row(exp.value, H, n, rep, cfg.order, raw, raw * scale_factor(exp, n), gated, "ok")


def _run_task(args):
    return run_replication(*args)


def summarize(cfg: ExperimentConfig, rows) -> list:
    """Median, mean and standard error of the ``scaled`` column per (H, n)."""
    out = []
    for H in cfg.hurst_grid:
        for n in cfg.n_grid:
            cell = [r for r in rows if r.H == H and r.n == n and r.ok]
            vals = np.array([r.scaled for r in cell])
            if vals.size == 0:
                out.append(SummaryRow(cfg.experiment.value, H, n, cfg.order, math.nan, math.nan, math.nan, math.nan))
                continue
            se = float(vals.std(ddof=1) / math.sqrt(vals.size)) if vals.size > 1 else 0.0
            gated = sum(r.gated_out for r in cell) / len(cell)
            out.append(SummaryRow(cfg.experiment.value, H, n, cfg.order,
                                  float(np.median(vals)), float(vals.mean()), se, gated))
    return out


def run_experiment(cfg: ExperimentConfig, workers=None) -> ExperimentReport:
    """Run every (H, n, replication) of ``cfg``; rows come back in grid order."""
    workers = cfg.workers if workers is None else workers
    tasks = [
        (cfg, i, j, rep)
        for i in range(len(cfg.hurst_grid))
        for j in range(len(cfg.n_grid))
        for rep in range(cfg.replications)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (8 * workers))))
    else:
        rows = [_run_task(t) for t in tasks]
    return ExperimentReport(cfg, rows, summarize(cfg, rows))


def _require(cfg, allowed):
    if cfg.experiment not in allowed:
        raise ConfigError(f"experiment {cfg.experiment.value} not handled here; expected {[a.value for a in allowed]}")


def run_table_experiment(cfg: ExperimentConfig, workers=None) -> ExperimentReport:
    """fBm on the 2n grid -> fOU Euler path -> gated estimate; records |H_hat - H|."""
    _require(cfg, (Experiment.TABLE1, Experiment.TABLE2, Experiment.TABLE3))
    return run_experiment(cfg, workers)


def run_qv_concentration(cfg: ExperimentConfig, workers=None) -> ExperimentReport:
    """Sup-deviation of the running quadratic variation of pure fBm."""
    _require(cfg, (Experiment.QV_CONCENTRATION,))
    return run_experiment(cfg, workers)


def run_qv_limit(cfg: ExperimentConfig, workers=None) -> ExperimentReport:
    """Distance of the fOU normalized quadratic variation from its a.s. limit."""
    _require(cfg, (Experiment.QV_LIMIT,))
    return run_experiment(cfg, workers)


def run_eigenvalue_bound(cfg: ExperimentConfig, workers=None) -> ExperimentReport:
    """``n * lambda_max`` of the normalized increment covariance (deterministic)."""
    _require(cfg, (Experiment.EIGENVALUE_BOUND,))
    return run_experiment(cfg, workers)
