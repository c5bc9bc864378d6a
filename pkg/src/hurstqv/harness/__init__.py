"""Monte Carlo experiments and the command-line entry point."""

from .config import Experiment, ExperimentConfig, load_config, parse_config_text
from .experiments import (
    ExperimentReport,
    Row,
    SummaryRow,
    run_eigenvalue_bound,
    run_experiment,
    run_qv_concentration,
    run_qv_limit,
    run_table_experiment,
    scale_factor,
)

__all__ = [
    "Experiment",
    "ExperimentConfig",
    "ExperimentReport",
    "Row",
    "SummaryRow",
    "load_config",
    "parse_config_text",
    "run_eigenvalue_bound",
    "run_experiment",
    "run_qv_concentration",
    "run_qv_limit",
    "run_table_experiment",
    "scale_factor",
]
