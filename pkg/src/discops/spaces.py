"""Norms on spaces of analytic functions in the unit disc.

Spaces and the quantities computed (``dA`` is normalized area measure):

==============  ==========================================================
hardy:p         ``(mean over |z|=1 of |f|**p)**(1/p)``; polynomials attain
                the supremum over radii on the unit circle
bergman:p,a     ``(int |f|**p (a+1)(1-|z|**2)**a dA)**(1/p)``
bloch           ``|f(0)| + sup (1-|z|**2)|f'(z)|``
little-bloch    same norm as bloch
besov:p         ``|f(0)| + (int (1-|z|**2)**(p-2) |f'|**p dA)**(1/p)``, p > 1;
                ``|f(0)| + |f'(0)| + int |f''| dA`` at p = 1
sup             ``max over |z|=1 of |f|``
==============  ==========================================================

Area integrals are reduced to ``int_0^1 2r (1-r**2)**beta M_p(r)**p dr`` with
``M_p(r)**p`` the angular mean at radius ``r`` (FFT samples, or Parseval at
p = 2) and the radial integral done by :mod:`discops.quadrature`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft
from scipy.optimize import minimize_scalar

from .quadrature import radial_rule
from .series import TruncatedSeries, derivative, evaluate, _next_pow2
from .special import beta as beta_fn

KINDS = ("hardy", "bergman", "bloch", "little-bloch", "besov", "sup")


@dataclass(frozen=True)
class SpaceSpec:
    """A function space and its parameters.

    ``p`` applies to hardy, bergman and besov; ``alpha`` to bergman only.
    """

    kind: str
    p: float | None = None
    alpha: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown space kind {self.kind!r}")
        if self.kind in ("hardy", "bergman", "besov"):
            if self.p is None or not (self.p >= 1):
                raise ValueError(f"{self.kind} needs p >= 1")
        if self.kind == "bergman":
            if self.alpha is None or not (self.alpha > -1) or not math.isfinite(self.alpha):
                raise ValueError("bergman needs alpha > -1")
        if self.kind == "hardy" and math.isinf(self.p):
            object.__setattr__(self, "kind", "sup")
            object.__setattr__(self, "p", None)

    @classmethod
    def hardy(cls, p=2.0):
        return cls("hardy", float(p))

    @classmethod
    def bergman(cls, p=2.0, alpha=0.0):
        return cls("bergman", float(p), float(alpha))

    @classmethod
    def besov(cls, p=2.0):
        return cls("besov", float(p))

    @classmethod
    def bloch(cls):
        return cls("bloch")

    @classmethod
    def little_bloch(cls):
        return cls("little-bloch")

    @classmethod
    def sup(cls):
        return cls("sup")

    @classmethod
    def parse(cls, text: str) -> "SpaceSpec":
        """Parse ``"hardy:p=2"``, ``"bergman:p=2,a=0"``, ``"bloch"``, ..."""
        text = text.strip().lower()
        kind, _, rest = text.partition(":")
        kind = kind.strip()
        params = {}
        if rest:
            for item in rest.split(","):
                key, eq, val = item.partition("=")
                if not eq:
                    raise ValueError(f"bad space parameter {item!r}")
                try:
                    params[key.strip()] = float(val)
                except ValueError:
                    raise ValueError(f"bad space parameter {item!r}") from None
        alpha = params.pop("a", params.pop("alpha", None))
        p = params.pop("p", None)
        if params:
            raise ValueError(f"unknown space parameters {sorted(params)}")
        if kind in ("bloch", "little-bloch", "sup"):
            if p is not None or alpha is not None:
                raise ValueError(f"{kind} takes no parameters")
            return cls(kind)
        if kind == "bergman":
            return cls(kind, p, alpha)
        if alpha is not None:
            raise ValueError(f"{kind} takes no alpha")
        return cls(kind, p)

    def __str__(self) -> str:
        if self.kind in ("bloch", "little-bloch", "sup"):
            return self.kind
        if self.kind == "bergman":
            return f"bergman:p={_num(self.p)},a={_num(self.alpha)}"
        return f"{self.kind}:p={_num(self.p)}"


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


@dataclass(frozen=True)
class NormResult:
    """Norm value, how it was obtained, and an estimate of its error.

    ``closed_form`` is exact up to rounding; ``quadrature`` reports the change
    between two node counts; ``grid_sup`` the change between the last two
    refinements of a sampled supremum.
    """

    value: float
    method: str
    error_estimate: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "error_estimate", float(self.error_estimate))

    def __float__(self):
        return self.value


# -- angular sampling --------------------------------------------------------

def _angular_count(d: int, p: float = 2.0) -> int:
    return _next_pow2(max(256, 4 * math.ceil(p) * (d + 1)))


def _samples(coeffs: np.ndarray, radii: np.ndarray, m: int) -> np.ndarray:
    """f(r_i exp(2 pi i j/m)) as an array of shape (len(radii), m)."""
    d = coeffs.size - 1
    mat = np.zeros((radii.size, m), dtype=np.complex128)
    powers = np.power.outer(radii, np.arange(d + 1))
    mat[:, : d + 1] = coeffs * powers
    return scipy.fft.ifft(mat, axis=1, overwrite_x=True) * m


def _abs_max_rows(v: np.ndarray) -> np.ndarray:
    return np.sqrt(np.max(v.real**2 + v.imag**2, axis=1))


def _trim(f: TruncatedSeries) -> np.ndarray:
    return np.asarray(f.coeffs[: f.effective_degree + 1])


def circle_mean(f: TruncatedSeries, p: float, r: float = 1.0, m: int | None = None) -> float:
    """``(1/2pi) int |f(r e^{it})|**p dt``; exact (Parseval) at ``p = 2``."""
    c = _trim(f)
    if p == 2:
        return float(np.sum(np.abs(c) ** 2 * r ** (2 * np.arange(c.size))))
    m = m or _angular_count(c.size - 1, p)
    v = _samples(c, np.array([float(r)]), m)[0]
    return float(np.mean(np.abs(v) ** p))


def _angular_means(c: np.ndarray, radii: np.ndarray, p: float, m: int) -> np.ndarray:
    if p == 2:
        return (np.abs(c) ** 2) @ np.power.outer(radii, 2 * np.arange(c.size)).T
    return np.mean(np.abs(_samples(c, radii, m)) ** p, axis=1)


def _node_count(d: int, p: float, beta: float) -> int:
    poly = math.ceil(p) * d + 2
    if -1 < beta < 0:
        poly *= math.ceil(1.0 / (beta + 1.0))
    return max(24, poly // 2 + 8)


def area_integral(f: TruncatedSeries, p: float, beta: float) -> tuple[float, float]:
    """``int_D (1-|z|**2)**beta |f|**p dA`` and an error estimate."""
    c = _trim(f)
    if not np.any(c):
        return 0.0, 0.0
    d = c.size - 1
    m = _angular_count(d, p)
    n = _node_count(d, p, beta)
    vals = []
    for nn in (n, n + n // 2):
        rule = radial_rule(nn, beta, m)
        r = rule.nodes
        h = 2.0 * r * (1.0 + r) ** beta * _angular_means(c, r, p, m)
        vals.append(rule.integrate(h))
    return vals[1], abs(vals[1] - vals[0])


# -- suprema -----------------------------------------------------------------

def _value(c: np.ndarray, z: complex) -> complex:
    # scalar evaluation; a single vectorised power beats a Python Horner loop
    return complex(np.dot(c, z ** np.arange(c.size)))


def _circle_argmax(c: np.ndarray, r: float, m: int) -> tuple[float, float, float]:
    """``(max |f|, refinement gain, angle)`` on ``|z| = r``."""
    v = _abs_max_rows_arg(_samples(c, np.array([float(r)]), m)[0])
    j, coarse = v
    h = 2 * math.pi / m
    t0 = 2 * math.pi * j / m
    res = minimize_scalar(
        lambda t: -abs(_value(c, r * complex(math.cos(t), math.sin(t)))),
        bounds=(t0 - h, t0 + h), method="bounded", options={"xatol": 1e-13},
    )
    if -float(res.fun) > coarse:
        return -float(res.fun), -float(res.fun) - coarse, float(res.x)
    return coarse, 0.0, t0


def _abs_max_rows_arg(v: np.ndarray) -> tuple[int, float]:
    a = v.real**2 + v.imag**2
    j = int(np.argmax(a))
    return j, float(math.sqrt(a[j]))


def circle_max(f: TruncatedSeries, r: float = 1.0, m: int | None = None) -> tuple[float, float]:
    """Max of ``|f|`` on ``|z| = r``: dense samples refined by bounded Brent.

    Returns ``(value, refinement_gain)``.
    """
    c = _trim(f)
    d = c.size - 1
    if d == 0:
        return float(abs(c[0])), 0.0
    v, gain, _ = _circle_argmax(c, r, m or _angular_count(d))
    return v, gain


def _newton_polish(c: np.ndarray, z: complex, r0: float, start: float, steps: int = 8) -> float:
    """Newton ascent of ``u = log(1-|z|**2) + log|F(z)|`` from ``z``, ``F`` with coefficients ``c``.

    ``log|F|`` is harmonic, so with ``w = F'/F`` its gradient is
    ``(Re w, -Im w)`` and its Hessian ``[[Re w', -Im w'], [-Im w', -Re w']]``.
    Steps are kept only while the weighted value increases.
    """
    k = np.arange(c.size)
    c1 = c[1:] * k[1:]
    c2 = c1[1:] * k[1:-1]
    best = start
    for _ in range(steps):
        pw = z ** k
        F = np.dot(c, pw)
        if F == 0:
            break
        F1 = np.dot(c1, pw[:-1]) if c1.size else 0j
        F2 = np.dot(c2, pw[:-2]) if c2.size else 0j
        w = F1 / F
        w1 = (F2 * F - F1 * F1) / (F * F)
        x, y = z.real, z.imag
        q = 1.0 - (x * x + y * y)
        gx, gy = w.real - 2 * x / q, -w.imag - 2 * y / q
        hxx = w1.real - 2 / q - 4 * x * x / (q * q)
        hyy = -w1.real - 2 / q - 4 * y * y / (q * q)
        hxy = -w1.imag - 4 * x * y / (q * q)
        det = hxx * hyy - hxy * hxy
        if not (hxx < 0 and det > 0):
            break
        dx = -(hyy * gx - hxy * gy) / det
        dy = -(hxx * gy - hxy * gx) / det
        zn = z + complex(dx, dy)
        if not r0 <= abs(zn) < 1:
            break
        val = (1.0 - abs(zn) ** 2) * abs(_value(c, zn))
        if val <= best:
            break
        best, z = val, zn
    return best


def _weighted_derivative_sup(f: TruncatedSeries, r0: float = 0.0, grid: int = 256) -> tuple[float, float]:
    """``sup_{r0 <= |z| < 1} (1-|z|**2)|f'(z)|`` with a refinement estimate.

    A 256-radius grid with 2x oversampled circles brackets the peak and
    bounded Brent refines the radius of the sampled profile. The circle
    maximum at that radius is then located on a 4x oversampled grid, refined
    in angle, and the point is polished by Newton ascent in the plane.
    The error estimate is the gain of these refinements over the Brent value.
    """
    fp = derivative(f)
    c = _trim(fp)
    d = c.size - 1
    if not np.any(c):
        return 0.0, 0.0
    if d == 0:
        return float((1 - r0 * r0) * abs(c[0])), 0.0
    mc = _next_pow2(max(256, 2 * (d + 1)))
    radii = r0 + (1.0 - r0) * np.arange(grid) / grid
    prof = (1.0 - radii**2) * _abs_max_rows(_samples(c, radii, mc))
    i = int(np.argmax(prof))
    coarse = float(prof[i])
    lo = radii[max(i - 1, 0)]
    hi = radii[i + 1] if i + 1 < grid else 1.0

    def neg_profile(r):
        return -(1.0 - r * r) * float(_abs_max_rows(_samples(c, np.array([r]), mc))[0])

    res = minimize_scalar(neg_profile, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
    r_best = float(res.x) if -res.fun > coarse else float(radii[i])
    mid = max(coarse, -float(res.fun))
    peak, _, t_best = _circle_argmax(c, r_best, _angular_count(d))
    fine = max(mid, (1.0 - r_best**2) * peak)
    z = r_best * complex(math.cos(t_best), math.sin(t_best))
    fine = max(fine, _newton_polish(c, z, r0, fine))
    return float(fine), float(fine - mid)


# -- norms -------------------------------------------------------------------

def norm(f: TruncatedSeries, space: SpaceSpec) -> NormResult:
    """Norm of ``f`` (as the polynomial it stores) in ``space``."""
    if isinstance(space, str):
        space = SpaceSpec.parse(space)
    kind = space.kind
    if kind == "hardy":
        p = space.p
        if p == 2:
            return NormResult(math.sqrt(circle_mean(f, 2.0)), "quadrature", 0.0)
        d = f.effective_degree
        m = _angular_count(d, p)
        fine = circle_mean(f, p, 1.0, 2 * m) ** (1 / p)
        coarse = circle_mean(f, p, 1.0, m) ** (1 / p)
        return NormResult(fine, "quadrature", abs(fine - coarse))
    if kind == "sup":
        v, gain = circle_max(f, 1.0)
        return NormResult(v, "grid_sup", gain)
    if kind == "bergman":
        p, a = space.p, space.alpha
        val, err = area_integral(f, p, a)
        val *= a + 1.0
        err *= a + 1.0
        return _pth_root(val, err, p)
    if kind == "besov":
        p = space.p
        if p == 1:
            f2 = derivative(derivative(f))
            val, err = area_integral(f2, 1.0, 0.0)
            head = abs(f.coeffs[0]) + (abs(f.coeffs[1]) if f.degree >= 1 else 0.0)
            return NormResult(head + val, "quadrature", err)
        val, err = area_integral(derivative(f), p, p - 2.0)
        r = _pth_root(val, err, p)
        return NormResult(abs(f.coeffs[0]) + r.value, r.method, r.error_estimate)
    # bloch and little-bloch share the norm
    s, gain = _weighted_derivative_sup(f)
    return NormResult(abs(f.coeffs[0]) + s, "grid_sup", gain)


def _pth_root(val: float, err: float, p: float) -> NormResult:
    if val <= 0:
        return NormResult(0.0, "quadrature", err ** (1 / p) if err > 0 else 0.0)
    root = val ** (1 / p)
    # first-order propagation of the error through x -> x**(1/p)
    return NormResult(root, "quadrature", root * err / (p * val))


def besov_integral(f: TruncatedSeries, p: float) -> float:
    """``int (1-|z|**2)**(p-2) |f'|**p dA`` for ``p > 1``."""
    if not p > 1:
        raise ValueError("besov integral needs p > 1")
    return area_integral(derivative(f), p, p - 2.0)[0]


def monomial_norm_closed_form(space: SpaceSpec, n: int) -> float:
    """Exact ``||z**n||`` from beta-function identities.

    bergman: ``((a+1) B(np/2 + 1, a + 1))**(1/p)``;
    besov (p > 1): ``n B((n-1)p/2 + 1, p - 1)**(1/p)``, i.e. ``||z**n/n||``
    is the beta term alone; besov p = 1: ``2(n-1)`` for n >= 2, 1 for n = 1;
    hardy: 1.
    """
    if isinstance(space, str):
        space = SpaceSpec.parse(space)
    if n < 1:
        raise ValueError("monomial closed forms need n >= 1")
    if space.kind == "hardy":
        return 1.0
    if space.kind == "bergman":
        p, a = space.p, space.alpha
        return ((a + 1.0) * beta_fn(n * p / 2.0 + 1.0, a + 1.0)) ** (1.0 / p)
    if space.kind == "besov":
        p = space.p
        if p == 1:
            return 1.0 if n == 1 else 2.0 * (n - 1)
        return n * beta_fn((n - 1) * p / 2.0 + 1.0, p - 1.0) ** (1.0 / p)
    raise ValueError(f"no monomial closed form for {space.kind}")


# -- Bloch-type quantities ---------------------------------------------------

def little_bloch_defect(f: TruncatedSeries, r0: float) -> float:
    """``sup_{|z| >= r0} (1-|z|**2)|f'(z)|``; tends to 0 as ``r0 -> 1``."""
    if not 0 < r0 < 1:
        raise ValueError("r0 must lie in (0, 1)")
    return _weighted_derivative_sup(f, r0)[0]


def bloch_growth_check(f: TruncatedSeries, z: complex, bloch_norm: NormResult | None = None) -> bool:
    """``|f(z) - f(0)| <= (1/2) log((1+|z|)/(1-|z|)) ||f||_B``.

    The computed norm's error estimate plus a rounding allowance is used as slack.
    """
    if not abs(z) < 1:
        raise ValueError("point must lie in the open disc")
    bn = bloch_norm or norm(f, SpaceSpec.bloch())
    lhs = abs(evaluate(f, z) - f.coeffs[0])
    w = 0.5 * math.log((1 + abs(z)) / (1 - abs(z)))
    slack = w * bn.error_estimate + 1e-12 * (1.0 + bn.value)
    return bool(lhs <= w * bn.value + slack)


def weighted_value_sup(f: TruncatedSeries, grid: int = 256) -> float:
    """Sampled ``sup (1-|z|**2)|f(z)|`` over the disc."""
    c = _trim(f)
    radii = np.arange(grid) / grid
    m = _angular_count(c.size - 1)
    return float(np.max((1 - radii**2) * np.max(np.abs(_samples(c, radii, m)), axis=1)))


def weighted_value_bound(f: TruncatedSeries, bloch_norm: NormResult | None = None, grid: int = 4096) -> float:
    """Upper bound for :func:`weighted_value_sup` from the Bloch growth estimate.

    ``sup_r (1-r**2) [ (1/2) log((1+r)/(1-r)) ||f||_B + |f(0)| ]``.
    """
    bn = bloch_norm or norm(f, SpaceSpec.bloch())
    r = np.arange(grid) / grid
    w = (1 - r**2) * 0.5 * np.log((1 + r) / (1 - r))
    b = bn.value + bn.error_estimate
    return float(np.max(w * b + (1 - r**2) * abs(f.coeffs[0])))


# -- Besov-type quantities ---------------------------------------------------

def besov_mass(f: TruncatedSeries, p: float) -> float:
    """``int_D (1-|z|**2)**(p-2) |f|**p dA`` for ``p > 1``."""
    if not p > 1:
        raise ValueError("besov_mass needs p > 1")
    return area_integral(f, p, p - 2.0)[0]


def besov_growth_ratio(f: TruncatedSeries, p: float, z: complex, besov_norm: float | None = None) -> float:
    """``|f(z)| / (||f||_{B_p} (log(2/(1-|z|**2)))**(1-1/p))``."""
    if not p > 1:
        raise ValueError("needs p > 1")
    if not abs(z) < 1:
        raise ValueError("point must lie in the open disc")
    bn = besov_norm if besov_norm is not None else norm(f, SpaceSpec.besov(p)).value
    if bn == 0:
        return 0.0
    g = math.log(2.0 / (1.0 - abs(z) ** 2)) ** (1.0 - 1.0 / p)
    return float(abs(evaluate(f, z)) / (bn * g))


def besov_growth_check(f: TruncatedSeries, p: float, z: complex, constant: float,
                       besov_norm: float | None = None) -> bool:
    """``|f(z)| <= constant ||f||_{B_p} (log(2/(1-|z|**2)))**(1-1/p)``."""
    return besov_growth_ratio(f, p, z, besov_norm) <= constant * (1 + 1e-12)


def besov_multiplier_sides(f: TruncatedSeries, g: TruncatedSeries, p: float) -> tuple[float, float]:
    """Both sides of ``I((fg)') <= 2**p (I(f g') + I(f' g))``.

    ``I(h) = int (1-|z|**2)**(p-2) |h|**p dA``. Products are formed at degree
    ``deg f + deg g`` so nothing is truncated.
    """
    from .series import cauchy_mul

    if not p > 1:
        raise ValueError("needs p > 1")
    deg = f.effective_degree + g.effective_degree + 1
    f = f.with_degree(deg)
    g = g.with_degree(deg)
    fg = cauchy_mul(f, g)
    lhs = area_integral(derivative(fg), p, p - 2.0)[0]
    t1 = area_integral(cauchy_mul(f, derivative(g).with_degree(deg)), p, p - 2.0)[0]
    t2 = area_integral(cauchy_mul(derivative(f).with_degree(deg), g), p, p - 2.0)[0]
    return lhs, 2.0**p * (t1 + t2)


def besov_multiplier_check(f: TruncatedSeries, g: TruncatedSeries, p: float) -> bool:
    """True when the Besov integral of ``fg`` is finite and below the split bound."""
    lhs, rhs = besov_multiplier_sides(f, g, p)
    return bool(math.isfinite(lhs) and math.isfinite(rhs) and lhs <= rhs * (1 + 1e-12) + 1e-300)
