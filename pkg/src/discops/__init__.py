"""Analytic functions on the unit disc as truncated Taylor series.

Series arithmetic, the Duhamel product, norms on Hardy, Bergman, Bloch and
Besov spaces, composition and related operators, and a verification suite.
"""
__version__ = "0.1.0"

from .series import (
    DEFAULT_DEGREE,
    MAX_DEGREE,
    TruncatedSeries,
    cauchy_mul,
    compose,
    constant,
    deflate_at,
    derivative,
    evaluate,
    identity,
    monomial,
    random_series,
)
from .duhamel import duhamel, duhamel_oracle, duhamel_residual, classify_duhamel_multiplicative
from .spaces import NormResult, SpaceSpec, norm, monomial_norm_closed_form
from .operators import (
    BoundaryEval,
    Composition,
    MatrixOperator,
    Multiplication,
    PointEval,
    almost_mult_residual,
    apply,
    is_self_map,
    matrix_of,
    symbol_of,
)
