"""Command-line interface.

Exit codes: 0 success, 2 usage/config error, 3 runtime or model error,
4 I/O error. Commands that draw random numbers print ``seed=<n>`` to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys

from ..errors import ConfigError, HurstQVError
from ..estimator import GATE_WIDTHS, EstimatorConfig, EstimateResult, estimate_hurst
from ..fbm import UniformGrid, generate_fbm
from ..pathio import format_path_csv, read_path_csv
from ..sde import fou_solve
from .config import load_config
from .experiments import run_experiment

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_IO = 0, 2, 3, 4
METHODS = ("cholesky", "circulant")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _emit(text: str, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _grid_args(p, required=True):
    p.add_argument("--hurst", type=float, required=required)
    p.add_argument("--n", type=int, required=required, help="number of grid subintervals")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--horizon", type=float, help="fixed horizon T (default 1)")
    g.add_argument("--step", type=float, help="grid spacing h, giving T = n h")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--method", choices=METHODS, default="circulant")


def _fresh_fbm(args):
    if args.step is not None:
        grid = UniformGrid.from_step(args.n, args.step)
    else:
        grid = UniformGrid(args.n, 1.0 if args.horizon is None else args.horizon)
    print(f"seed={args.seed}", file=sys.stderr)
    return generate_fbm(grid, args.hurst, args.seed, args.method)


def cmd_gen(args):
    _emit(format_path_csv(_fresh_fbm(args)), args.out)


def cmd_solve(args):
    if args.model == "custom":
        raise ConfigError("custom models are defined in code (hurstqv.sde.SdeModel); the CLI solves 'fou' only")
    if args.driver is not None:
        if args.hurst is not None or args.n is not None:
            raise ConfigError("--driver excludes --hurst/--n")
        driver = read_path_csv(sys.stdin if args.driver == "-" else args.driver)
    else:
        if args.hurst is None or args.n is None:
            raise ConfigError("solve needs --driver or both --hurst and --n")
        driver = _fresh_fbm(args)
    _emit(format_path_csv(fou_solve(driver)), args.out)


def cmd_estimate(args):
    path = read_path_csv(sys.stdin if args.path == "-" else args.path)
    cfg = EstimatorConfig(args.order, args.beta, not args.no_gate, args.gate_width)
    res = estimate_hurst(path, cfg)
    _emit(",".join(EstimateResult.CSV_HEADER) + "\n" + ",".join(res.csv_row()) + "\n", args.out)


_OVERRIDES = (
    "experiment", "hurst_grid", "n_grid", "step", "horizon", "replications", "seed",
    "order", "beta", "gating", "gate_width", "method", "output_path", "workers", "large",
)


def cmd_experiment(args):
    overrides = {k: getattr(args, k) for k in _OVERRIDES}
    cfg = load_config(args.config, overrides)
    print(f"seed={cfg.seed}", file=sys.stderr)
    report = run_experiment(cfg)
    _emit(report.report_csv(), cfg.output_path)
    summary_out = args.summary_out
    if summary_out is None and cfg.output_path not in (None, "-"):
        root, _ = os.path.splitext(cfg.output_path)
        summary_out = root + ".summary.csv"
    if summary_out is not None:
        _emit(report.summary_csv(), summary_out)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hurstqv", description="fBm synthesis, fOU solving and Hurst estimation")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="write an fBm path as CSV")
    _grid_args(p)
    p.add_argument("--out", help="output CSV (default stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="Euler-solve the fOU model along a driver path")
    _grid_args(p, required=False)
    p.add_argument("--driver", help="driver path CSV ('-' for stdin); omit to simulate fBm")
    p.add_argument("--model", choices=("fou", "custom"), default="fou")
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("estimate", help="gated Hurst estimate from a path CSV on the 2n grid")
    p.add_argument("path", help="path CSV ('-' for stdin)")
    p.add_argument("--order", type=int, choices=(1, 2), default=1)
    p.add_argument("--beta", type=float, default=0.05)
    p.add_argument("--no-gate", action="store_true")
    p.add_argument("--gate-width", choices=GATE_WIDTHS, default="definition")
    p.add_argument("--out")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("experiment", help="run a Monte Carlo experiment from a config file")
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--out", dest="output_path")
    p.add_argument("--summary-out")
    p.add_argument("--experiment")
    p.add_argument("--hurst-grid", dest="hurst_grid")
    p.add_argument("--n-grid", dest="n_grid")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--step", type=float)
    g.add_argument("--horizon", type=float)
    p.add_argument("--replications", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--beta", type=float)
    gate = p.add_mutually_exclusive_group()
    gate.add_argument("--gating", dest="gating", action="store_const", const=True)
    gate.add_argument("--no-gate", dest="gating", action="store_const", const=False)
    p.add_argument("--gate-width", dest="gate_width", choices=GATE_WIDTHS)
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--workers", type=int)
    p.add_argument("--large", action="store_const", const=True)
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HurstQVError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
