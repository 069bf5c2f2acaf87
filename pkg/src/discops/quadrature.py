"""Radial quadrature on (0, 1) with an endpoint weight ``(1 - r)**beta``.

The interval is split at 1/2. The inner panel is plain Gauss-Legendre in
``r``. On the outer panel, with ``s = 1 - r``:

* integer ``beta >= 0``: Gauss-Legendre, the weight is a polynomial;
* ``-1 < beta < 0``: substitute ``t = s**(beta + 1)`` which absorbs the
  singular weight, then Gauss-Legendre in ``t``;
* non-integer ``beta > 0``: Gauss-Jacobi nodes.

Splitting keeps the behaviour at ``r = 0`` (powers like ``r**2.5`` from
non-even exponents) and at ``r = 1`` (the weight) on separate panels.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_jacobi


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights with ``sum(w h(r)) ~ int_0^1 h(r) (1-r)**beta dr``.

    ``gap`` holds ``1 - r`` computed without cancellation, and ``angular`` is
    the number of equispaced angles paired with the rule in area integrals.
    """

    nodes: np.ndarray
    weights: np.ndarray
    gap: np.ndarray
    beta: float = 0.0
    angular: int = 256
    panel_nodes: int = field(default=0, compare=False)

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))


@lru_cache(maxsize=64)
def _leggauss(n: int):
    x, w = leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _gl(n: int, a: float, b: float):
    x, w = _leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w


@lru_cache(maxsize=256)
def _radial(n: int, beta: float):
    # inner panel [0, 1/2]
    r_in, w_in = _gl(n, 0.0, 0.5)
    s_in = 1.0 - r_in
    w_in = w_in * s_in**beta
    # outer panel, s = 1 - r in (0, 1/2]
    if beta == int(beta) and beta >= 0:
        s_out, w_out = _gl(n, 0.0, 0.5)
        w_out = w_out * s_out**beta
    elif beta < 0:
        e = beta + 1.0
        t, w_t = _gl(n, 0.0, 0.5**e)
        s_out = t ** (1.0 / e)
        w_out = w_t / e
    else:
        x, w = roots_jacobi(n, beta, 0.0)
        s_out = (1.0 - x) / 4.0
        w_out = w * 4.0 ** (-beta - 1.0)
    # s can underflow relative to 1 near beta = -1; keep nodes strictly interior, gap exact
    r_out = np.minimum(1.0 - s_out, np.nextafter(1.0, 0.0))
    order = np.argsort(np.concatenate([r_in, r_out]))
    nodes = np.concatenate([r_in, r_out])[order]
    weights = np.concatenate([w_in, w_out])[order]
    gap = np.concatenate([s_in, s_out])[order]
    for a in (nodes, weights, gap):
        a.setflags(write=False)
    return nodes, weights, gap


def radial_rule(n: int, beta: float = 0.0, angular: int = 256) -> QuadratureRule:
    """Composite rule with ``n`` nodes per panel for weight ``(1 - r)**beta``."""
    if not beta > -1:
        raise ValueError("weight exponent must exceed -1")
    if n < 1:
        raise ValueError("need at least one node per panel")
    nodes, weights, gap = _radial(int(n), float(beta))
    return QuadratureRule(nodes, weights, gap, float(beta), int(angular), int(n))


def gauss_legendre(n: int, a: float = 0.0, b: float = 1.0):
    """Gauss-Legendre nodes and weights on ``[a, b]``."""
    return _gl(n, a, b)
