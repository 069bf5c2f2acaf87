"""Linear operators on truncated series and multiplicativity instruments.

Operator variants: :class:`Composition`, :class:`Multiplication`,
:class:`BoundaryEval`, :class:`PointEval`, :class:`MatrixOperator`. Each has
an ``apply`` method; the module-level :func:`apply` is the same thing.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .series import (
    DEFAULT_DEGREE,
    TruncatedSeries,
    cauchy_mul,
    compose,
    constant,
    evaluate,
    identity,
    monomial,
    random_series,
)
from .spaces import NormResult, SpaceSpec, circle_max, circle_mean, norm


# -- self-map classification -------------------------------------------------

class MapKind(enum.Enum):
    SELF_MAP = "self-map"
    UNIMODULAR_CONSTANT = "unimodular-constant"
    NEITHER = "neither"


@dataclass(frozen=True)
class SelfMapCheck:
    kind: MapKind
    boundary_max: float
    constant: complex | None = None
    boundary_contact: bool = False

    def __bool__(self):
        return self.kind is MapKind.SELF_MAP


def is_self_map(phi: TruncatedSeries, tol: float = 1e-9) -> SelfMapCheck:
    """Classify a polynomial symbol by its maximum modulus on the unit circle.

    Nonconstant with boundary max ``<= 1 + tol``: a self-map, flagged with
    ``boundary_contact`` when the max is within ``tol`` of 1 (rotations and
    the like). Constant ``c``: unimodular when ``||c| - 1| <= tol``, a
    (constant) self-map when ``|c| < 1 - tol``. Anything else is neither.
    """
    a = np.asarray(phi.coeffs)
    is_const = bool(np.all(np.abs(a[1:]) <= tol))
    if is_const:
        c = complex(a[0])
        if abs(abs(c) - 1.0) <= tol:
            return SelfMapCheck(MapKind.UNIMODULAR_CONSTANT, abs(c), c, True)
        if abs(c) < 1.0 - tol:
            return SelfMapCheck(MapKind.SELF_MAP, abs(c), c, False)
        return SelfMapCheck(MapKind.NEITHER, abs(c), c, False)
    mx, _ = circle_max(phi, 1.0)
    if mx <= 1.0 + tol:
        return SelfMapCheck(MapKind.SELF_MAP, mx, None, mx >= 1.0 - tol)
    return SelfMapCheck(MapKind.NEITHER, mx, None, False)


def random_self_map(seed, max_degree: int = 3, radius: float = 0.9,
                    degree: int = DEFAULT_DEGREE) -> TruncatedSeries:
    """Seeded random polynomial scaled so its boundary maximum equals ``radius``.

    The polynomial degree is drawn uniformly from ``1..max_degree``.
    """
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, max_degree + 1))
    a = (rng.standard_normal(d + 1) + 1j * rng.standard_normal(d + 1)) / math.sqrt(2)
    if abs(a[d]) < 1e-3:
        a[d] = 1e-3
    p = TruncatedSeries(a, degree=degree)
    mx, _ = circle_max(p, 1.0)
    return p * (radius / mx)


# -- operator variants -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Composition:
    """``f -> f o phi`` for a polynomial self-map ``phi``."""

    phi: TruncatedSeries

    def __post_init__(self):
        chk = is_self_map(self.phi)
        if chk.kind is not MapKind.SELF_MAP:
            raise ValueError(
                f"composition symbol is not a self-map of the disc ({chk.kind.value}, "
                f"boundary max {chk.boundary_max:.6g})"
            )

    def apply(self, f: TruncatedSeries) -> TruncatedSeries:
        return compose(f, self.phi)


@dataclass(frozen=True, eq=False)
class Multiplication:
    """``f -> h f`` truncated to ``min(deg h, deg f)``."""

    h: TruncatedSeries

    def apply(self, f: TruncatedSeries) -> TruncatedSeries:
        return cauchy_mul(self.h, f)


@dataclass(frozen=True, eq=False)
class BoundaryEval:
    """``f -> f(c) 1`` with ``|c| = 1``; acts on the stored polynomial."""

    c: complex

    def __post_init__(self):
        if abs(abs(self.c) - 1.0) >= 1e-12:
            raise ValueError("boundary evaluation point must be unimodular")

    def apply(self, f: TruncatedSeries) -> TruncatedSeries:
        return constant(complex(evaluate(f, self.c)), f.degree)


@dataclass(frozen=True, eq=False)
class PointEval:
    """``f -> f(a) 1`` with ``|a| < 1``."""

    a: complex

    def __post_init__(self):
        if not abs(self.a) < 1:
            raise ValueError("point evaluation needs |a| < 1")

    def apply(self, f: TruncatedSeries) -> TruncatedSeries:
        return constant(complex(evaluate(f, self.a)), f.degree)


@dataclass(frozen=True, eq=False)
class MatrixOperator:
    """Explicit ``(N+1) x (N+1)`` matrix acting on coefficient vectors."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("matrix operator needs a square matrix")
        if not np.all(np.isfinite(m)):
            raise ValueError("matrix entries must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def degree(self) -> int:
        return self.matrix.shape[0] - 1

    def apply(self, f: TruncatedSeries) -> TruncatedSeries:
        if f.degree != self.degree:
            raise ValueError(f"matrix acts on degree {self.degree}, got degree {f.degree}")
        return TruncatedSeries(self.matrix @ f.coeffs, degree=self.degree)


Operator = Union[Composition, Multiplication, BoundaryEval, PointEval, MatrixOperator]


def apply(T: Operator, f: TruncatedSeries) -> TruncatedSeries:
    return T.apply(f)


def _degree_for(T: Operator, degree: int | None) -> int:
    # matrices fix the degree; symbol-carrying operators default to their symbol's
    if isinstance(T, MatrixOperator):
        return T.degree
    if degree is not None:
        return degree
    if isinstance(T, Composition):
        return T.phi.degree
    if isinstance(T, Multiplication):
        return T.h.degree
    return DEFAULT_DEGREE


def symbol_of(T: Operator, degree: int | None = None) -> TruncatedSeries:
    """``T z``."""
    return T.apply(identity(_degree_for(T, degree)))


def matrix_of(T: Operator, n: int | None = None) -> MatrixOperator:
    """Monomial-basis matrix: column ``k`` holds the coefficients of ``T z**k``."""
    n = _degree_for(T, n)
    cols = [TruncatedSeries(T.apply(monomial(k, n)).coeffs, degree=n).coeffs for k in range(n + 1)]
    return MatrixOperator(np.column_stack(cols))


# -- multiplicativity --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MultiplicativityReport:
    """Defect of ``T(fg) = T(f) T(g)`` over seeded random pairs."""

    max_residual: float
    mean_residual: float
    trials: int
    space: SpaceSpec
    seed: int
    witness: tuple[TruncatedSeries, TruncatedSeries] | None
    witness_trial: int = -1
    residuals: tuple[float, ...] = field(default=(), repr=False)


def _trial_pair(seed: int, trial: int, budget: int, degree: int, rho: float):
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(trial,))
    sf, sg = ss.spawn(2)
    return (random_series(sf, budget, rho, 1.0, degree=degree),
            random_series(sg, budget, rho, 1.0, degree=degree))


def almost_mult_residual(T: Operator, space: SpaceSpec | str = "hardy:p=2", trials: int = 100,
                         seed: int = 0, degree_budget: int | None = None,
                         degree: int | None = None, workers: int | None = None,
                         rho: float = 0.8) -> MultiplicativityReport:
    """Max and mean of ``||T(fg) - T(f)T(g)||`` over random polynomial pairs.

    Pair ``t`` is drawn from ``SeedSequence(seed, spawn_key=(t,))`` so serial
    and threaded runs see identical pairs. ``degree_budget`` defaults to half
    the working degree so that ``fg`` is never truncated.
    """
    if isinstance(space, str):
        space = SpaceSpec.parse(space)
    n = _degree_for(T, degree)
    budget = n // 2 if degree_budget is None else degree_budget
    if 2 * budget > n:
        raise ValueError("degree_budget must not exceed half the working degree")

    def one(t):
        f, g = _trial_pair(seed, t, budget, n, rho)
        d = T.apply(cauchy_mul(f, g)) - cauchy_mul(T.apply(f), T.apply(g))
        return norm(d, space).value

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            res = list(ex.map(one, range(trials)))
    else:
        res = [one(t) for t in range(trials)]
    res_arr = np.asarray(res, dtype=float)
    if trials == 0:
        return MultiplicativityReport(0.0, 0.0, 0, space, seed, None)
    k = int(np.argmax(res_arr))
    return MultiplicativityReport(
        float(res_arr[k]), float(res_arr.mean()), trials, space, seed,
        _trial_pair(seed, k, budget, n, rho), k, tuple(float(x) for x in res_arr),
    )


def unit_preservation_check(T: Operator, tol: float = 1e-9, trials: int = 20, seed: int = 0,
                            degree: int | None = None) -> bool | None:
    """Whether ``T 1 = 1``, for an operator that passes the multiplicativity test.

    Returns ``None`` (skipped) when ``T`` is zero or fails
    :func:`almost_mult_residual` in the sup norm at ``tol``.
    """
    n = _degree_for(T, degree)
    one = constant(1.0, n)
    t1 = T.apply(one)
    rep = almost_mult_residual(T, SpaceSpec.sup(), trials, seed, degree=n)
    if rep.max_residual >= tol:
        return None
    if not np.any(matrix_of(T, n).matrix):
        return None
    return bool(circle_max(t1 - one, 1.0)[0] < tol)


def adjoint_eval_check(T: Operator, x: complex, probe_count: int = 10, seed: int = 0,
                       degree: int | None = None) -> float:
    """``max_f |(T f)(x) - f(phi(x))|`` with ``phi = T z``.

    Probes are ``1``, ``z`` and seeded random polynomials whose degree keeps
    ``f o phi`` inside the working degree. Zero certifies ``T`` acts as the
    composition operator with symbol ``phi`` at ``x``.
    """
    if not abs(x) < 1:
        raise ValueError("x must lie in the open disc")
    n = _degree_for(T, degree)
    phi = symbol_of(T, n)
    px = complex(evaluate(phi, x))
    if abs(px) > 1 + 1e-12:
        raise ValueError("symbol value leaves the closed disc at x")
    pdeg = max(1, min(16, n // max(1, phi.effective_degree)))
    probes = [constant(1.0, n), identity(n)]
    ss = np.random.SeedSequence(seed)
    for child in ss.spawn(max(0, probe_count - 2)):
        probes.append(random_series(child, pdeg, 0.8, 1.0, degree=n))
    dev = 0.0
    for f in probes[:probe_count]:
        dev = max(dev, abs(complex(evaluate(T.apply(f), x)) - complex(evaluate(f, px))))
    return dev


def operator_norm_lower_bound(T: Operator, space: SpaceSpec | str, trials: int = 50,
                              seed: int = 0, degree: int | None = None) -> float:
    """``max ||T f|| / ||f||`` over monomials and seeded random polynomials."""
    if isinstance(space, str):
        space = SpaceSpec.parse(space)
    n = _degree_for(T, degree)
    best = 0.0
    probes = [monomial(k, n) for k in range(min(n, 8) + 1)]
    for child in np.random.SeedSequence(seed).spawn(trials):
        probes.append(random_series(child, n // 2, 0.8, 1.0, degree=n))
    for f in probes:
        nf = norm(f, space).value
        if nf > 0:
            best = max(best, norm(T.apply(f), space).value / nf)
    return best


# -- divergence demonstrations -----------------------------------------------

@dataclass(frozen=True)
class HardyRow:
    n: int
    h2_norm: float
    value_at_c: float
    tail_sq: float


@dataclass(frozen=True)
class BlochRow:
    n: int
    bloch_norm: float
    value_at_c: float
    error_estimate: float


def log_partial_sum(c: complex, n: int, degree: int | None = None) -> TruncatedSeries:
    """``sum_{k=1}^n (conj(c) z)**k / k``."""
    degree = max(n, 1) if degree is None else degree
    k = np.arange(1, n + 1)
    coeffs = np.zeros(degree + 1, dtype=np.complex128)
    coeffs[1 : n + 1] = np.conj(c) ** k / k
    return TruncatedSeries(coeffs, degree=degree)


def odd_partial_sum(c: complex, n: int) -> TruncatedSeries:
    """``sum_{k=0}^{n-1} (conj(c) z)**(2k+1) / (2k+1)``."""
    deg = 2 * n - 1
    coeffs = np.zeros(deg + 1, dtype=np.complex128)
    j = np.arange(1, deg + 1, 2)
    coeffs[j] = np.conj(c) ** j / j
    return TruncatedSeries(coeffs, degree=deg)


def _check_unimodular(c):
    if abs(abs(c) - 1) > 1e-12:
        raise ValueError("c must be unimodular")


def divergence_demo_hardy(c: complex, n_max: int, ns=None) -> list[HardyRow]:
    """Partial sums of ``log(1/(1 - conj(c) z))``: bounded H2 norm, unbounded value at ``c``.

    ``tail_sq`` is ``pi**2/6 - ||f_n||**2``, the squared H2 distance to the
    full logarithm by orthogonality of monomials.
    """
    _check_unimodular(c)
    rows = []
    zeta2 = math.pi**2 / 6
    for n in (range(1, n_max + 1) if ns is None else ns):
        fn = log_partial_sum(c, n)
        sq = circle_mean(fn, 2.0)
        rows.append(HardyRow(n, math.sqrt(sq), abs(complex(evaluate(fn, c))), zeta2 - sq))
    return rows


def divergence_demo_bloch(c: complex, n_max: int, ns=None) -> list[BlochRow]:
    """Odd partial sums ``p_n``: Bloch norm at most 1, value at ``c`` unbounded."""
    _check_unimodular(c)
    rows = []
    for n in (range(1, n_max + 1) if ns is None else ns):
        pn = odd_partial_sum(c, n)
        r = norm(pn, SpaceSpec.bloch())
        rows.append(BlochRow(n, r.value, abs(complex(evaluate(pn, c))), r.error_estimate))
    return rows
