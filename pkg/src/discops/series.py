"""Truncated Taylor series on the unit disc.

A :class:`TruncatedSeries` stores the Taylor coefficients ``a_0 .. a_N`` of an
analytic function, ``N`` being the truncation degree. Every operation works
modulo ``z**(N+1)``; binary operations return the smaller of the two input
degrees so that no coefficient is ever reported beyond what both inputs know.

Series built from short coefficient lists are zero padded to the default
working degree (64), so ``TruncatedSeries([0, 1])`` is the identity map ``z``
known exactly through ``z**64``.
"""
from __future__ import annotations

import cmath
import json
import math
from typing import Iterable, Sequence

import numpy as np

DEFAULT_DEGREE = 64
MAX_DEGREE = 1024


class TruncatedSeries:
    """Immutable truncated power series with complex128 coefficients.

    Parameters
    ----------
    coeffs : sequence of complex
        ``coeffs[k]`` is the coefficient of ``z**k``.
    degree : int, optional
        Truncation degree. Defaults to ``max(len(coeffs) - 1, DEFAULT_DEGREE)``.
        Shorter coefficient lists are zero padded, longer ones truncated.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[complex], degree: int | None = None):
        c = np.asarray(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                       dtype=np.complex128).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=np.complex128)
        if degree is None:
            degree = max(c.size - 1, DEFAULT_DEGREE)
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        if not np.all(np.isfinite(c)):
            raise ValueError("series coefficients must be finite")
        out = np.zeros(degree + 1, dtype=np.complex128)
        n = min(c.size, degree + 1)
        out[:n] = c[:n]
        out.setflags(write=False)
        self._c = out

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "TruncatedSeries":
        # trusted fast path; arr is owned by the new instance
        obj = cls.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=np.complex128)
        if not np.all(np.isfinite(arr)):
            raise ValueError("series coefficients must be finite")
        arr.setflags(write=False)
        obj._c = arr
        return obj

    @property
    def coeffs(self) -> np.ndarray:
        """Read-only coefficient array of length ``degree + 1``."""
        return self._c

    @property
    def degree(self) -> int:
        return self._c.size - 1

    @property
    def effective_degree(self) -> int:
        """Index of the highest nonzero coefficient (0 for the zero series)."""
        nz = np.flatnonzero(self._c)
        return int(nz[-1]) if nz.size else 0

    @property
    def is_polynomial(self) -> bool:
        """True when the top stored coefficient is zero.

        Such a series fits strictly inside its truncation, so it is taken to be
        the polynomial it displays rather than the head of an infinite series.
        """
        return self._c[-1] == 0 or self.degree == 0

    def __len__(self) -> int:
        return self._c.size

    def __getitem__(self, k):
        return self._c[k]

    def __iter__(self):
        return iter(self._c)

    def __repr__(self) -> str:
        d = self.effective_degree
        head = ", ".join(_fmt(c) for c in self._c[: d + 1])
        return f"TruncatedSeries([{head}], degree={self.degree})"

    def with_degree(self, degree: int) -> "TruncatedSeries":
        """Re-truncate (or zero-pad) to a new degree."""
        return TruncatedSeries(self._c, degree=degree)

    # arithmetic sugar; scalars act as exact constants
    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            return add(self, other)
        if np.isscalar(other):
            c = self._c.copy()
            c[0] += other
            return TruncatedSeries._wrap(c)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._wrap(-self._c)

    def __sub__(self, other):
        if isinstance(other, TruncatedSeries) or np.isscalar(other):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return cauchy_mul(self, other)
        if np.isscalar(other):
            return TruncatedSeries._wrap(self._c * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if np.isscalar(other):
            return TruncatedSeries._wrap(self._c / other)
        return NotImplemented

    def __call__(self, z):
        return evaluate(self, z)

    def allclose(self, other: "TruncatedSeries", atol: float = 1e-12) -> bool:
        n = min(self.degree, other.degree) + 1
        return bool(np.max(np.abs(self._c[:n] - other._c[:n]), initial=0.0) <= atol)


def _fmt(c: complex) -> str:
    if c.imag == 0:
        return repr(float(c.real))
    return repr(complex(c))


def _as_series(f) -> TruncatedSeries:
    if isinstance(f, TruncatedSeries):
        return f
    return TruncatedSeries(f)


# -- constructors ------------------------------------------------------------

def monomial(k: int, degree: int = DEFAULT_DEGREE, coeff: complex = 1.0) -> TruncatedSeries:
    """``coeff * z**k`` at the given truncation degree."""
    c = np.zeros(degree + 1, dtype=np.complex128)
    if k <= degree:
        c[k] = coeff
    return TruncatedSeries._wrap(c)


def constant(value: complex, degree: int = DEFAULT_DEGREE) -> TruncatedSeries:
    return monomial(0, degree, value)


def identity(degree: int = DEFAULT_DEGREE) -> TruncatedSeries:
    return monomial(1, degree)


# -- ring operations ---------------------------------------------------------

def add(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    n = min(f.degree, g.degree) + 1
    return TruncatedSeries._wrap(f.coeffs[:n] + g.coeffs[:n])


def cauchy_mul(f: TruncatedSeries, g: TruncatedSeries, degree: int | None = None) -> TruncatedSeries:
    """Cauchy product ``c_k = sum_{i+j=k} a_i b_j``.

    The result degree is ``min(deg f, deg g)`` unless ``degree`` is given; any
    value up to ``deg f + deg g`` is exact.
    """
    if degree is None:
        degree = min(f.degree, g.degree)
    if degree > f.degree + g.degree:
        raise ValueError("requested degree exceeds deg f + deg g")
    n = degree + 1
    full = np.convolve(f.coeffs[:n], g.coeffs[:n])
    out = np.zeros(n, dtype=np.complex128)
    m = min(n, full.size)
    out[:m] = full[:m]
    return TruncatedSeries._wrap(out)


def derivative(f: TruncatedSeries) -> TruncatedSeries:
    """Term-by-term derivative; the degree drops by one (not below zero)."""
    if f.degree == 0:
        return TruncatedSeries._wrap(np.zeros(1, dtype=np.complex128))
    k = np.arange(1, f.degree + 1)
    return TruncatedSeries._wrap(f.coeffs[1:] * k)


def antiderivative(f: TruncatedSeries) -> TruncatedSeries:
    """Antiderivative vanishing at 0; the degree rises by one."""
    out = np.zeros(f.degree + 2, dtype=np.complex128)
    out[1:] = f.coeffs / np.arange(1, f.degree + 2)
    return TruncatedSeries._wrap(out)


def evaluate(f: TruncatedSeries, z):
    """Horner evaluation of the stored polynomial at ``z`` (scalar or array)."""
    z = np.asarray(z, dtype=np.complex128)
    acc = np.zeros_like(z)
    for c in f.coeffs[f.effective_degree::-1]:
        acc = acc * z + c
    return acc[()] if acc.ndim == 0 else acc


# -- composition -------------------------------------------------------------

def _next_pow2(n: int) -> int:
    return 1 << max(0, int(n - 1).bit_length())


def boundary_sup(f: TruncatedSeries, samples: int | None = None) -> float:
    """Sampled maximum of ``|f|`` on the unit circle."""
    d = f.effective_degree
    m = samples or _next_pow2(max(1024, 8 * (d + 1)))
    return float(np.max(np.abs(sample_circle(f, 1.0, m))))


def _horner_compose(f: TruncatedSeries, phi: TruncatedSeries, n: int) -> np.ndarray:
    p = phi.coeffs[: n + 1]
    acc = np.zeros(n + 1, dtype=np.complex128)
    for c in f.coeffs[f.effective_degree::-1]:
        acc = np.convolve(acc, p)[: n + 1]
        acc[0] += c
    return acc


def compose(f: TruncatedSeries, phi: TruncatedSeries, *, return_error: bool = False):
    """Taylor coefficients of ``f o phi`` through ``min(deg f, deg phi)``.

    With ``phi(0) == 0`` the composition is the exact triangular Horner scheme
    in the truncated ring. Otherwise ``f o phi`` is sampled on the unit circle
    with enough points that the polynomial ``f o phi`` does not alias, and the
    coefficients are recovered by FFT. That path requires either a polynomial
    ``f`` or ``sup |phi| = rho < 1`` on the circle; in the latter case the
    unknown tail of ``f`` contributes at most about ``|a_N| rho**(N+1)/(1-rho)``,
    which is what the returned error estimate reports.

    Returns the series, or ``(series, error_estimate)`` if ``return_error``.
    """
    n = min(f.degree, phi.degree)
    if phi.coeffs[0] == 0:
        out = TruncatedSeries._wrap(_horner_compose(f, phi, n))
        return (out, 0.0) if return_error else out

    rho = boundary_sup(phi)
    tail = 0.0
    if not f.is_polynomial:
        if rho >= 1.0:
            raise ValueError(
                "compose: phi(0) != 0 and sup|phi| >= 1 on the circle; "
                f"f is not a polynomial of its stored degree (sampled sup {rho:.6g})"
            )
        a = np.abs(f.coeffs)
        tail = float(max(a[-1], a[-2] if a.size > 1 else 0.0) * rho ** (f.degree + 1) / (1.0 - rho))
    df = f.effective_degree
    dp = phi.effective_degree
    m = _next_pow2(max(2 * (n + 1), df * dp + 1))
    w = np.exp(2j * np.pi * np.arange(m) / m)
    values = evaluate(f, evaluate(phi, w))
    coeffs = np.fft.fft(values) / m
    # the stored polynomial composite has degree df * dp; above it only rounding remains
    coeffs[df * dp + 1 :] = 0
    out = TruncatedSeries._wrap(coeffs[: n + 1].copy())
    if return_error:
        rounding = float(np.finfo(float).eps * np.max(np.abs(values)) * math.log2(m))
        return out, tail + rounding
    return out


def deflate_at(f: TruncatedSeries, w: complex) -> TruncatedSeries:
    """Synthetic division: ``g`` with ``(z - w) g = f - f(w)``, ``deg g = deg f - 1``."""
    if abs(w) >= 1:
        raise ValueError("deflation point must lie in the open disc")
    a = f.coeffs
    if f.degree == 0:
        return TruncatedSeries._wrap(np.zeros(1, dtype=np.complex128))
    g = np.empty(f.degree, dtype=np.complex128)
    acc = 0j
    for k in range(f.degree, 0, -1):
        acc = acc * w + a[k]
        g[k - 1] = acc
    return TruncatedSeries._wrap(g)


# -- exp / log / pow ---------------------------------------------------------

def exp_series(f: TruncatedSeries) -> TruncatedSeries:
    """``exp(f)`` from ``g' = f' g``."""
    a = f.coeffs
    n = f.degree
    g = np.zeros(n + 1, dtype=np.complex128)
    g[0] = cmath.exp(a[0])
    ja = np.arange(n + 1) * a
    for k in range(1, n + 1):
        g[k] = np.dot(ja[1 : k + 1], g[k - 1 :: -1][:k]) / k
    return TruncatedSeries._wrap(g)


def log_series(f: TruncatedSeries) -> TruncatedSeries:
    """Principal ``log(f)``; requires ``f(0) != 0``."""
    a = f.coeffs
    if a[0] == 0:
        raise ValueError("log_series requires f(0) != 0")
    n = f.degree
    g = np.zeros(n + 1, dtype=np.complex128)
    g[0] = cmath.log(a[0])
    jg = np.zeros(n + 1, dtype=np.complex128)
    for k in range(1, n + 1):
        # k g_k a_0 = k a_k - sum_{j=1}^{k-1} j g_j a_{k-j}
        s = np.dot(jg[1:k], a[k - 1 : 0 : -1]) if k > 1 else 0.0
        jg[k] = (k * a[k] - s) / a[0]
        g[k] = jg[k] / k
    return TruncatedSeries._wrap(g)


def pow_series(f: TruncatedSeries, gamma: float) -> TruncatedSeries:
    """Principal ``f**gamma``; requires ``f(0) != 0`` and finite ``gamma``.

    Uses ``f g' = gamma f' g``, i.e.
    ``k a_0 g_k = sum_{j=1}^k ((gamma+1) j - k) a_j g_{k-j}``.
    """
    if not np.isfinite(gamma):
        raise ValueError("exponent must be finite")
    a = f.coeffs
    if a[0] == 0:
        raise ValueError("pow_series requires f(0) != 0")
    n = f.degree
    g = np.zeros(n + 1, dtype=np.complex128)
    g[0] = cmath.exp(gamma * cmath.log(a[0]))
    for k in range(1, n + 1):
        j = np.arange(1, k + 1)
        g[k] = np.dot(((gamma + 1) * j - k) * a[1 : k + 1], g[k - 1 :: -1][:k]) / (k * a[0])
    return TruncatedSeries._wrap(g)


# -- circle sampling ---------------------------------------------------------

def sample_circle(f: TruncatedSeries, r: float, m: int) -> np.ndarray:
    """Values of ``f`` at ``r exp(2 pi i j / m)``, ``j = 0..m-1``."""
    if not 0 < r <= 1:
        raise ValueError("radius must lie in (0, 1]")
    d = f.effective_degree
    if m < d + 1:
        raise ValueError("need at least effective_degree + 1 samples")
    c = np.zeros(m, dtype=np.complex128)
    c[: d + 1] = f.coeffs[: d + 1] * r ** np.arange(d + 1)
    return np.fft.ifft(c) * m


def coeffs_from_samples(values: Sequence[complex], r: float = 1.0,
                        degree: int | None = None) -> TruncatedSeries:
    """Inverse of :func:`sample_circle`: ``a_k = DFT_k / (m r**k)``."""
    if not 0 < r <= 1:
        raise ValueError("radius must lie in (0, 1]")
    v = np.asarray(values, dtype=np.complex128)
    m = v.size
    if degree is None:
        degree = m - 1
    c = np.fft.fft(v)[: degree + 1] / m
    c = c / r ** np.arange(c.size)
    return TruncatedSeries(c, degree=degree)


# -- random test functions ---------------------------------------------------

def random_series(seed, n: int = DEFAULT_DEGREE, rho: float = 0.5, sigma: float = 1.0,
                  degree: int | None = None) -> TruncatedSeries:
    """``a_k = sigma rho**k zeta_k`` with standard complex Gaussians ``zeta_k``.

    ``seed`` is anything :func:`numpy.random.default_rng` accepts. Coefficients
    beyond ``n`` are zero when ``degree > n``.
    """
    if not 0 < rho < 1:
        raise ValueError("decay rho must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    zeta = (rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)) / math.sqrt(2.0)
    c = sigma * rho ** np.arange(n + 1) * zeta
    return TruncatedSeries(c, degree=n if degree is None else degree)


# -- JSON --------------------------------------------------------------------

def to_json(f: TruncatedSeries, trim: bool = False) -> str:
    """``[[re, im], ...]`` indexed by power of ``z``."""
    c = f.coeffs[: f.effective_degree + 1] if trim else f.coeffs
    return json.dumps([[float(x.real), float(x.imag)] for x in c])


def from_json(text: str, degree: int | None = None) -> TruncatedSeries:
    """Parse the pair-list format; bare numbers are read as reals."""
    data = json.loads(text) if isinstance(text, str) else text
    if not isinstance(data, list):
        raise ValueError("series JSON must be a list")
    out = []
    for item in data:
        if isinstance(item, (int, float)) and not isinstance(item, bool):
            out.append(complex(item, 0.0))
        elif isinstance(item, list) and len(item) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in item
        ):
            out.append(complex(item[0], item[1]))
        else:
            raise ValueError(f"bad series entry: {item!r}")
    return TruncatedSeries(out, degree=degree)
