"""Sharp Markov constants and extremal polynomials for weighted L2 and
weighted Sobolev norms over classical and generalized weights."""

from ._kernels import NUMBA_ENABLED
from .bounds import (
    BoundCheck,
    ExponentReport,
    FIT_SLACK,
    gamma_ratio_sequence,
    gen_hermite_exponent,
    gen_laguerre_exponent,
    growth_fit,
    lupas_constant,
    lupas_growth_exponent,
    verify_theorem,
)
from .errors import (
    EigenError,
    HypothesisError,
    MarkovSharpError,
    QuadratureError,
    WeightError,
)
from .linalg import SymTridiag, gen_sym_eigen_max, svd_largest, sym_eigen, tridiag_eigen
from .markov import (
    DerivativeMatrix,
    SharpResult,
    SobolevSpec,
    derivative_matrix,
    extremal_polynomial,
    mirsky_bound,
    result_to_json,
    sharp_constant_l2,
    sharp_constant_sobolev,
    sobolev_forms,
)
from .orthopoly import (
    RecurrenceTable,
    WeightSpec,
    eval_derivatives,
    eval_orthonormal,
    make_weight,
    recurrence_classical,
    recurrence_stieltjes,
    weight_to_json,
)
from .quadrature import QuadRule, composite_rule, gauss_rule, integrate, rule_to_csv

__version__ = "0.1.0"

__all__ = [
    "BoundCheck",
    "DerivativeMatrix",
    "EigenError",
    "ExponentReport",
    "FIT_SLACK",
    "HypothesisError",
    "MarkovSharpError",
    "NUMBA_ENABLED",
    "QuadRule",
    "QuadratureError",
    "RecurrenceTable",
    "SharpResult",
    "SobolevSpec",
    "SymTridiag",
    "WeightError",
    "WeightSpec",
    "composite_rule",
    "derivative_matrix",
    "eval_derivatives",
    "eval_orthonormal",
    "extremal_polynomial",
    "gamma_ratio_sequence",
    "gauss_rule",
    "gen_hermite_exponent",
    "gen_laguerre_exponent",
    "gen_sym_eigen_max",
    "growth_fit",
    "integrate",
    "lupas_constant",
    "lupas_growth_exponent",
    "make_weight",
    "mirsky_bound",
    "recurrence_classical",
    "recurrence_stieltjes",
    "result_to_json",
    "rule_to_csv",
    "sharp_constant_l2",
    "sharp_constant_sobolev",
    "sobolev_forms",
    "svd_largest",
    "sym_eigen",
    "tridiag_eigen",
    "verify_theorem",
    "weight_to_json",
]
