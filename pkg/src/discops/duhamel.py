"""Duhamel product of truncated series and Duhamel-multiplicativity tests.

``(f * g)(z) = d/dz int_0^z f(z - t) g(t) dt`` acts on coefficients as
``c_k = sum_{i+j=k} a_i b_j / binom(k, i)``. The Borel transform
``a_k -> k! a_k`` turns it into the Cauchy product.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .quadrature import gauss_legendre
from .series import (
    DEFAULT_DEGREE,
    MAX_DEGREE,
    TruncatedSeries,
    derivative,
    evaluate,
    monomial,
)
from .spaces import SpaceSpec, norm


class QuadratureError(RuntimeError):
    """Raised when the line-integral oracle fails to converge."""

    def __init__(self, message: str, nodes: int):
        super().__init__(message)
        self.nodes = nodes


@lru_cache(maxsize=8)
def _weights(n: int) -> np.ndarray:
    # W[k, i] = 1 / binom(k, i) for i <= k, else 0; rows of Pascal's triangle kept as exact ints
    w = np.zeros((n + 1, n + 1))
    row = [1]
    for k in range(n + 1):
        half = k // 2 + 1
        inv = [1.0 / float(b) for b in row[:half]]
        w[k, :half] = inv
        w[k, k - half + 1 : k + 1] = inv[::-1]
        row = [1] + [row[i] + row[i + 1] for i in range(k)] + [1]
    w.setflags(write=False)
    return w


def duhamel(f: TruncatedSeries, g: TruncatedSeries, degree: int | None = None) -> TruncatedSeries:
    """Duhamel product, truncated at ``min(deg f, deg g)`` unless ``degree`` is given."""
    if degree is None:
        degree = min(f.degree, g.degree)
    if degree > min(f.degree + g.degree, MAX_DEGREE):
        raise ValueError("requested degree exceeds the exact range of the product")
    n = degree
    a = np.zeros(n + 1, dtype=np.complex128)
    b = np.zeros(n + 1, dtype=np.complex128)
    ma, mb = min(n, f.degree), min(n, g.degree)
    a[: ma + 1] = f.coeffs[: ma + 1]
    b[: mb + 1] = g.coeffs[: mb + 1]
    k = np.arange(n + 1)
    diff = k[:, None] - k[None, :]
    toe = np.where(diff >= 0, b[np.clip(diff, 0, n)], 0)
    c = (_weights(n) * toe) @ a
    return TruncatedSeries(c, degree=n)


def _factorials(n: int) -> np.ndarray:
    if n > 170:
        raise OverflowError("Borel weights overflow double precision past degree 170")
    return np.array([math.factorial(k) for k in range(n + 1)], dtype=float)


def borel(f: TruncatedSeries) -> TruncatedSeries:
    """``a_k -> k! a_k``."""
    return TruncatedSeries(f.coeffs * _factorials(f.degree), degree=f.degree)


def inverse_borel(f: TruncatedSeries) -> TruncatedSeries:
    """``a_k -> a_k / k!``."""
    return TruncatedSeries(f.coeffs / _factorials(f.degree), degree=f.degree)


def duhamel_oracle(f: TruncatedSeries, g: TruncatedSeries, z: complex, nodes: int | None = None,
                   rtol: float = 1e-13) -> complex:
    """``int_0^z f'(z - t) g(t) dt + f(0) g(z)`` by Gauss-Legendre on the segment.

    With ``t = s z`` the integral becomes ``z int_0^1 f'(z(1-s)) g(sz) ds``.
    The rule is accepted when doubling the node count changes the value by at
    most ``rtol`` relative; otherwise :class:`QuadratureError` is raised.
    """
    z = complex(z)
    if not abs(z) < 1:
        raise ValueError("oracle point must lie in the open disc")
    fp = derivative(f)
    if nodes is None:
        nodes = (f.effective_degree + g.effective_degree) // 2 + 2

    def integral(n):
        s, w = gauss_legendre(n, 0.0, 1.0)
        vals = evaluate(fp, z * (1.0 - s)) * evaluate(g, z * s)
        return z * complex(np.dot(w, vals))

    base = complex(f.coeffs[0]) * complex(evaluate(g, z))
    n = nodes
    prev = integral(n)
    for _ in range(6):
        cur = integral(2 * n)
        if abs(cur - prev) <= rtol * max(1.0, abs(cur)):
            return cur + base
        prev, n = cur, 2 * n
    raise QuadratureError(f"Duhamel oracle did not converge with {n} nodes", n)


# -- multiplicativity under the Duhamel product ------------------------------

@dataclass(frozen=True)
class DuhamelResidual:
    """Largest defect of ``T(f * g) = Tf * Tg`` over monomial pairs."""

    max_residual: float
    witness: tuple[int, int]
    verdict: bool
    tol: float
    space: SpaceSpec
    basis_degree: int

    @property
    def witness_pair(self) -> tuple[TruncatedSeries, TruncatedSeries]:
        i, j = self.witness
        return monomial(i, DEFAULT_DEGREE), monomial(j, DEFAULT_DEGREE)


def duhamel_residual_operator(T, space: SpaceSpec | str = "hardy:p=2", basis_degree: int = 3,
                              tol: float = 1e-9, degree: int | None = None,
                              pairs=None) -> DuhamelResidual:
    """Residual of Duhamel multiplicativity for any operator with an ``apply`` method.

    ``T(z^i * z^j)`` is formed as ``T(z^(i+j)) / binom(i+j, i)`` by linearity.
    ``pairs`` restricts the scan to the given ``(i, j)`` list.
    """
    if isinstance(space, str):
        space = SpaceSpec.parse(space)
    n = getattr(T, "degree", None) or (DEFAULT_DEGREE if degree is None else degree)
    if pairs is None:
        pairs = [(i, j) for i in range(basis_degree + 1) for j in range(i, basis_degree + 1)]
    top = max(i + j for i, j in pairs)
    if top > n:
        raise ValueError("basis degree too large for the working degree")
    images = {}

    def image(k):
        if k not in images:
            images[k] = T.apply(monomial(k, n))
        return images[k]

    best, witness = -1.0, pairs[0]
    for i, j in pairs:
        lhs = image(i + j) / math.comb(i + j, i)
        r = norm(lhs - duhamel(image(i), image(j)), space).value
        if r > best:
            best, witness = r, (i, j)
    return DuhamelResidual(float(best), witness, bool(best < tol), tol, space, basis_degree)


def duhamel_residual(phi: TruncatedSeries, space: SpaceSpec | str = "hardy:p=2",
                     basis_degree: int = 3, tol: float = 1e-9, pairs=None) -> DuhamelResidual:
    """Duhamel residual of the composition operator with symbol ``phi``."""
    from .operators import Composition

    return duhamel_residual_operator(Composition(phi), space, basis_degree, tol,
                                     degree=phi.degree, pairs=pairs)


@dataclass(frozen=True)
class DuhamelClassification:
    verdict: bool
    explanation: str
    witness_index: int | None = None

    def __bool__(self):
        return self.verdict


def classify_duhamel_multiplicative(phi: TruncatedSeries, tol: float = 1e-9,
                                    cross_check: bool = False) -> DuhamelClassification:
    """Whether ``C_phi`` is Duhamel multiplicative, read off the coefficients.

    True iff ``phi = a z``: every coefficient other than ``a_1`` is at most
    ``tol`` times the largest coefficient modulus. With ``cross_check`` the
    verdict is compared with :func:`duhamel_residual` and a disagreement
    raises ``RuntimeError``.
    """
    a = np.abs(phi.coeffs)
    scale = float(a.max()) if a.size else 0.0
    bad = [k for k in range(a.size) if k != 1 and a[k] > tol * scale]
    if bad:
        k = bad[0]
        out = DuhamelClassification(
            False, f"coefficient a_{k} = {complex(phi.coeffs[k]):.6g} is nonzero; phi is not a z", k
        )
    else:
        a1 = complex(phi.coeffs[1]) if phi.degree >= 1 else 0j
        out = DuhamelClassification(True, f"phi = a z with a = {a1:.6g}")
    if cross_check:
        res = duhamel_residual(phi, tol=tol * max(scale, 1e-300) ** 2 if scale else tol)
        if res.verdict != out.verdict:
            raise RuntimeError(
                f"classifier ({out.verdict}) and residual ({res.max_residual:.3g}) disagree"
            )
    return out
