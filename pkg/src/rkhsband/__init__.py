"""Global confidence bands for functions in a reproducing kernel Hilbert space,
observed exactly at random design points."""

from .bounds import (
    NormBound,
    agnostic_min_sample_size,
    agnostic_norm_bound,
    best_truncation,
    h1_norm_bound_with_der,
    hoeffding_threshold,
    pw_norm_bound,
    regular_norm_bound,
    ustat_hoeffding_threshold,
    w_bound_components,
)
from .design import Design
from .errors import (
    DegenerateDesign,
    DomainError,
    IllConditioned,
    InfeasibleBound,
    QuadratureError,
    RKHSBandError,
)
from .experiments import (
    ExperimentConfig,
    TestFunction,
    make_h1_test_function,
    make_pw_test_function,
    run_coverage_experiment,
    run_table_experiment,
)
from .interpolate import Interpolant, eval_interpolant, fit_interpolant, power_function
from .kernels import (
    GramMatrix,
    JitterPolicy,
    KernelSpec,
    TridiagonalInverse,
    gram,
    h1_gram_inverse_tridiagonal,
    h1_kernel,
    pw_kernel,
)
from .norm_est import (
    NormEstimate,
    h1_fd_norm_sq,
    h1_mc_norm_sq_with_der,
    h1_projection_norm_sq_explicit,
    l2_mc_norm_sq,
    projection_norm_sq_gram,
)
from .poincare import (
    BiasModel,
    RegularityModel,
    SpectralEstimate,
    riemann_zeta,
    spectral_ustat,
    sup_norm_bounds_from_regularity,
)
from .regions import RegionBand, band_at, contains_function, empirical_coverage
from .svgplot import render_region_plot

__version__ = "0.1.0"
