"""Dirichlet-type and bidisc Bergman norms, de Branges-Rovnyak kernels, and
composition-operator bound checks on the unit disc."""

from .errors import (
    ConfigError,
    ConvergenceError,
    DiscopError,
    ParamError,
    SingularKernelError,
    SymbolError,
)
from .kernels import (
    KernelEvaluator,
    SupEstimate,
    SupSearchSettings,
    Verdict,
    closed_form_sup,
    diagonal_boundary_value,
    estimate_sup,
    eval_kernel,
    pointwise_kernel_identity_check,
)
from .norms import (
    NormResult,
    WeightParams,
    bergman_norm_sq_bidisc,
    dirichlet_norm_sq_coeff,
    dirichlet_norm_sq_quad,
    double_integral_functional,
    equivalence_ratio,
    validate_main_theorem_params,
    validate_params,
)
from .operators import (
    BoundCheckReport,
    BoundCheckRow,
    ContactSet,
    DiagonalBidiscSymbol,
    LiftEvaluator,
    LiftParams,
    RankReport,
    RankVerdict,
    apply_composition,
    bound_check,
    lift,
    lift_norm_check,
    rank_sufficiency_check,
)
from .quadrature import (
    BidiscRule,
    DiscRule,
    QuadratureSettings,
    build_bidisc_rule,
    build_disc_rule,
    integrate_bidisc,
    integrate_disc,
    refine_until,
)
from .series import TruncatedPowerSeries, coefficients_of, differentiate, eval_series
from .symbols import (
    BoundaryPoint,
    FiniteBlaschke,
    Identity,
    MobiusAuto,
    Monomial,
    Polynomial,
    Rotation,
    SelfMapCheck,
    Symbol,
    eval_symbol,
    eval_symbol_deriv,
    symbol_from_spec,
    symbol_to_spec,
    verify_self_map,
)

__version__ = "0.1.0"
