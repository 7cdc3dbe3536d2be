"""Characteristic kernels on Hilbert, L^p and measure spaces."""

from ._kernmetric import (
    ClassError,
    DiscreteMeasure,
    DomainError,
    Error,
    Estimator,
    InjectivityError,
    Kernel,
    MapSpec,
    MetricSpec,
    NondegeneracyError,
    NumericError,
    ParseError,
    PhiProfile,
    PointSpace,
    QuadratureGrid,
    ShapeError,
    TestResult,
    complete_monotonicity_check,
    divergence,
    energy_distance,
    expected_score,
    gaussian_frequencies,
    gram,
    kernel_from_json,
    kernel_score,
    kme_inner,
    kme_sq_norm,
    make_distance_kernel,
    make_fourier_measure,
    make_kme_measure,
    make_lp_operator,
    make_metric_phi,
    make_mixture,
    make_quantile_monge,
    make_radial_hilbert,
    make_tee_radial,
    min_eigenvalue,
    mmd,
    mmd_u_statistic,
    permutation_test,
    quantile_sq_distance,
    selfcheck,
)

__version__ = "0.1.0"
