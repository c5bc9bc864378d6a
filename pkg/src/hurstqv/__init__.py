"""Fractional Brownian motion, pathwise SDEs and quadratic-variation Hurst estimators."""

from .errors import (
    CapacityError,
    ConfigError,
    DegeneratePathError,
    DomainError,
    EmbeddingError,
    FactorizationError,
    HurstQVError,
    IntegrationError,
)
from .estimator import (
    EstimateResult,
    EstimatorConfig,
    estimate_hurst,
    gate_bounds,
    gate_half_width,
    hurst_from_ratio,
    ratio_statistic,
)
from .fbm import (
    GeneratorMethod,
    HurstIndex,
    SamplePath,
    UniformGrid,
    fbm_covariance,
    generate_fbm,
    generate_fbm_paths,
    increment_autocovariance,
    increment_covariance_matrix,
    make_rng,
    max_increment_eigenvalue,
    second_order_increment_covariance,
)
from .pathio import read_path_csv, write_path_csv
from .quadvar import (
    expected_qv,
    increments,
    normalized_qv,
    qv_constant,
    qv_limit,
    raw_quadratic_sum,
    running_qv,
    sup_deviation,
)
from .sde import FOU, SdeModel, euler_solve, fou_model, fou_solve, subsample

__version__ = "0.1.0"
