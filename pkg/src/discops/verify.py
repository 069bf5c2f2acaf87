"""Verification suite: named, tolerance-bearing checks with a stable report.

Each check returns one or more :class:`Part` comparisons; a check passes
when all of its parts do. Check ids ``A01`` .. ``A14`` are stable. Random
inputs come from ``SeedSequence(seed, spawn_key=(check, trial))`` so a
report is determined by ``seed`` and ``degree`` apart from wall times.
"""
from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath
import numpy as np
from scipy.optimize import minimize_scalar

from . import __version__
from .duhamel import (
    borel,
    classify_duhamel_multiplicative,
    duhamel,
    duhamel_oracle,
    duhamel_residual,
    inverse_borel,
)
from .operators import (
    BoundaryEval,
    Composition,
    MapKind,
    Multiplication,
    PointEval,
    adjoint_eval_check,
    almost_mult_residual,
    divergence_demo_bloch,
    divergence_demo_hardy,
    is_self_map,
    matrix_of,
    random_self_map,
    symbol_of,
)
from .series import (
    TruncatedSeries,
    cauchy_mul,
    deflate_at,
    evaluate,
    identity,
    monomial,
    random_series,
)
from .spaces import (
    SpaceSpec,
    besov_growth_ratio,
    besov_mass,
    bloch_growth_check,
    monomial_norm_closed_form,
    norm,
)
from .special import beta, beta_asymptotic_ratio

EULER_GAMMA = 0.5772156649015329


@dataclass
class Part:
    """One comparison. ``relation`` is ``abs`` (``|m - e| <= tol``),
    ``le`` (``m <= e + tol``), ``ge`` (``m >= e - tol``) or ``eq``."""

    name: str
    measured: float | str
    expected: float | str
    tolerance: float
    relation: str = "abs"
    passed: bool = field(init=False)

    def __post_init__(self):
        m, e, t = self.measured, self.expected, self.tolerance
        if isinstance(m, (np.floating, np.integer)):
            self.measured = m = m.item()
        if self.relation == "eq":
            ok = m == e
        elif isinstance(m, float) and not math.isfinite(m):
            ok = False
        elif self.relation == "abs":
            ok = abs(m - e) <= t
        elif self.relation == "le":
            ok = m <= e + t
        elif self.relation == "ge":
            ok = m >= e - t
        else:
            raise ValueError(f"unknown relation {self.relation!r}")
        self.passed = bool(ok)


@dataclass
class CheckResult:
    id: str
    title: str
    anchor: str
    status: str
    parts: list[Part]
    notes: list[str]
    wall_time: float

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @property
    def measured(self):
        return self.parts[0].measured if self.parts else None

    @property
    def expected(self):
        return self.parts[0].expected if self.parts else None

    @property
    def tolerance(self):
        return self.parts[0].tolerance if self.parts else None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "anchor": self.anchor,
            "status": self.status,
            "pass": self.passed,
            "measured": self.measured,
            "expected": self.expected,
            "tolerance": self.tolerance,
            "parts": [asdict(p) for p in self.parts],
            "notes": list(self.notes),
            "wall_time": round(self.wall_time, 4),
        }


@dataclass
class Context:
    seed: int
    degree: int
    workers: int | None = None

    def seq(self, check: int, *key: int) -> np.random.SeedSequence:
        return np.random.SeedSequence(entropy=self.seed, spawn_key=(check, *key))

    def map(self, fn, items) -> list:
        # threads only pay off with spare cores; results are order-stable either way
        n = self.workers if self.workers is not None else min(4, os.cpu_count() or 1)
        if n <= 1:
            return [fn(x) for x in items]
        with ThreadPoolExecutor(max_workers=n) as ex:
            return list(ex.map(fn, items))


@dataclass
class Check:
    id: str
    title: str
    anchor: str
    run: Callable[[Context], tuple[list[Part], list[str]]]
    min_degree: int = 1


CHECKS: list[Check] = []


def _check(id_, title, anchor, min_degree=1):
    def deco(fn):
        CHECKS.append(Check(id_, title, anchor, fn, min_degree))
        return fn

    return deco


# -- A01 .. A14 --------------------------------------------------------------

@_check("A01", "Duhamel monomial rule",
        "z^m (*) z^n = m! n! / (m+n)! z^(m+n); segment-integral definition of (*)", 2)
def _a01(ctx):
    n_deg = ctx.degree
    top = min(20, n_deg // 2)
    notes = [] if top == 20 else [f"range clamped to m, n <= {top} by degree {n_deg}"]
    pts = 0.9 * np.exp(1j * (2 * np.pi * np.arange(8) / 8 + 0.3))
    worst_rel = worst_orc = 0.0
    for m in range(top + 1):
        for n in range(top + 1):
            f, g = monomial(m, n_deg), monomial(n, n_deg)
            h = duhamel(f, g)
            exact = Fraction(math.factorial(m) * math.factorial(n), math.factorial(m + n))
            c = h.coeffs[m + n]
            worst_rel = max(worst_rel, abs(c - float(exact)) / float(exact))
            vals = evaluate(h, pts)
            for z, v in zip(pts, vals):
                worst_orc = max(worst_orc, abs(v - duhamel_oracle(f, g, z)))
    return [
        Part("max relative coefficient error", worst_rel, 0.0, 1e-12),
        Part("max deviation from line-integral oracle (8 points)", worst_orc, 0.0, 1e-8),
    ], notes


@_check("A02", "Duhamel counterexample for phi = z^2",
        "C_phi(z (*) z) = z^4/2 while C_phi z (*) C_phi z = z^4/6", 4)
def _a02(ctx):
    n = ctx.degree
    C = Composition(monomial(2, n))
    z = identity(n)
    d = C.apply(duhamel(z, z)) - duhamel(C.apply(z), C.apply(z))
    rest = np.delete(np.abs(d.coeffs), 4)
    return [
        Part("z^4 coefficient of the defect", float(d.coeffs[4].real), 1 / 3, 1e-14),
        Part("imaginary part of z^4 coefficient", float(abs(d.coeffs[4].imag)), 0.0, 1e-14),
        Part("largest other coefficient", float(rest.max()), 0.0, 1e-14, "le"),
    ], []


@_check("A03", "phi(0) = 0 is necessary",
        "(phi^2/2)(0) = (phi (*) phi)(0) forces phi(0) = 0", 2)
def _a03(ctx):
    worst, t, kept = math.inf, 0, 0
    while kept < 50:
        phi = random_self_map(ctx.seq(3, t), max_degree=3, radius=0.95, degree=ctx.degree)
        t += 1
        b = abs(phi.coeffs[0])
        if b < 0.05:
            continue
        kept += 1
        r = duhamel_residual(phi, pairs=[(1, 1)]).max_residual
        worst = min(worst, r / (b * b / 4))
    return [Part("min residual(z, z) / (|phi(0)|^2/4) over 50 maps", worst, 1.0, 0.0, "ge")], [
        f"{t} maps drawn to obtain 50 with |phi(0)| >= 0.05"
    ]


@_check("A04", "Duhamel-multiplicative composition operators are exactly phi = a z",
        "C_phi Duhamel multiplicative iff phi(z) = a z, |a| <= 1", 6)
def _a04(ctx):
    rng = np.random.default_rng(ctx.seq(4, 0))
    mod = np.sqrt(rng.random(100))
    mod[::10] = 1.0
    arg = 2 * np.pi * rng.random(100)
    z = identity(ctx.degree)
    lin_worst, disagree = 0.0, 0
    for a in mod * np.exp(1j * arg):
        phi = z * complex(a)
        lin_worst = max(lin_worst, duhamel_residual(phi).max_residual)
        disagree += not classify_duhamel_multiplicative(phi).verdict
    gen_best, t, kept = math.inf, 1, 0
    while kept < 200:
        phi = random_self_map(ctx.seq(4, t), max_degree=4, radius=0.95, degree=ctx.degree)
        t += 1
        other = np.delete(np.abs(phi.coeffs), 1)
        if other.max() < 0.05:
            continue
        kept += 1
        gen_best = min(gen_best, duhamel_residual(phi).max_residual)
        disagree += classify_duhamel_multiplicative(phi).verdict
    return [
        Part("max residual over 100 maps a z", lin_worst, 0.0, 1e-12, "le"),
        Part("min residual over 200 other self-maps", gen_best, 1e-4, 0.0, "ge"),
        Part("classifier disagreements", disagree, 0, 0.0, "eq"),
    ], []


def _rel_table(spaces, ns, expected):
    worst = 0.0
    for sp in spaces:
        for n in ns:
            got = norm(monomial(n, n), sp).value if sp.kind == "bergman" else \
                norm(monomial(n, n) / n, sp).value
            exp = expected(sp, n)
            worst = max(worst, abs(got - exp) / exp)
    return worst


@_check("A05", "Bergman monomial norms",
        "||z^n||^p = (a+1) B(np/2 + 1, a + 1) in A^p_a, tending to 0")
def _a05(ctx):
    spaces = [SpaceSpec.bergman(p, a) for p in (1, 2, 4) for a in (-0.5, 0, 1, 2)]
    worst = _rel_table(spaces, range(1, 33), monomial_norm_closed_form)
    bad_steps, top, top_root, where = 0, 0.0, 0.0, None
    for sp in spaces:
        vals = [monomial_norm_closed_form(sp, n) for n in range(1, 101)]
        bad_steps += sum(b >= a for a, b in zip(vals, vals[1:]))
        # the beta expression is the p-th power of the norm
        top = max(top, vals[-1] ** sp.p)
        if vals[-1] > top_root:
            top_root, where = vals[-1], sp
    return [
        Part("max relative error, quadrature vs closed form", worst, 0.0, 1e-10),
        Part("non-decreasing steps for n <= 100", bad_steps, 0, 0.0, "eq"),
        Part("largest (a+1) B(100p/2 + 1, a + 1) = ||z^100||^p", top, 0.3, 0.0, "le"),
    ], [f"largest unpowered ||z^100|| is {top_root:.4f} at {where}"]


@_check("A06", "Besov monomial norms",
        "||z^n/n||_{B_p}^p = B((n-1)p/2 + 1, p - 1)")
def _a06(ctx):
    spaces = [SpaceSpec.besov(p) for p in (1.5, 2, 3)]
    worst = _rel_table(
        spaces, range(1, 33),
        lambda sp, n: beta((n - 1) * sp.p / 2 + 1, sp.p - 1) ** (1 / sp.p),
    )
    return [Part("max relative error, quadrature vs beta function", worst, 0.0, 1e-9)], []


@_check("A07", "Hardy partial sums of log(1/(1 - conj(c) z))",
        "||f - f_n||^2 = sum_{k>n} 1/k^2 while |f_n(c)| = H_n")
def _a07(ctx):
    c = complex(np.exp(0.7j))
    rows = divergence_demo_hardy(c, 1000)
    mpmath.mp.dps = 30
    dev = max(abs(r.tail_sq - float(mpmath.zeta(2, r.n + 1))) for r in rows)
    tails = [r.tail_sq for r in rows]
    bad = sum(b >= a for a, b in zip(tails, tails[1:]))
    h = rows[-1].value_at_c
    return [
        Part("max |tail - Hurwitz zeta(2, n+1)|, n <= 1000", dev, 0.0, 1e-12),
        Part("non-decreasing tail steps", bad, 0, 0.0, "eq"),
        Part("|H_1000 - ln 1000 - gamma|", abs(h - math.log(1000) - EULER_GAMMA), 0.0, 0.05, "le"),
    ], [f"H_1000 = {h:.12f}"]


@_check("A08", "Bloch norms of odd partial sums",
        "||p_n||_B <= 1 while p_n(c) = sum_{k<n} 1/(2k+1)")
def _a08(ctx):
    cs = np.exp(2j * np.pi * np.arange(8) / 8 + 0.1j)
    tables = ctx.map(lambda c: divergence_demo_bloch(complex(c), 200), cs)
    top = max(r.bloch_norm for t in tables for r in t)
    gap = min(r.value_at_c - 0.5 * math.log(r.n) for t in tables for r in t)
    return [
        Part("max ||p_n||_B over n <= 200, 8 points c", top, 1.0, 1e-9, "le"),
        Part("min p_n(c) - (1/2) ln n", gap, 0.0, 0.0, "ge"),
    ], []


def bloch_duhamel_majorant() -> float:
    """``max_r 2(1+r)/(2-r) (1-r) log(1/(1-r))`` on ``(0, 1)``."""
    def h(r):
        return 2 * (1 + r) / (2 - r) * (1 - r) * math.log(1 / (1 - r))

    grid = np.linspace(1e-6, 1 - 1e-9, 4001)
    vals = [h(r) for r in grid]
    k = int(np.argmax(vals))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, grid.size - 1)]
    res = minimize_scalar(lambda r: -h(r), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    return max(vals[k], -float(res.fun))


@_check("A09", "Bloch space is a Banach algebra under (*)",
        "||f (*) g||_B <= (C + 3) ||f||_B ||g||_B, C = max of the radial majorant", 2)
def _a09(ctx):
    n = ctx.degree
    budget = n // 2

    def ratio(t):
        sf, sg = ctx.seq(9, t).spawn(2)
        f = random_series(sf, budget, 0.8, 1.0, degree=n)
        g = random_series(sg, budget, 0.8, 1.0, degree=n)
        B = SpaceSpec.bloch()
        return norm(duhamel(f, g), B).value / (norm(f, B).value * norm(g, B).value)

    ratios = ctx.map(ratio, range(500))
    c = bloch_duhamel_majorant()
    top = max(ratios)
    return [
        Part("max ||f (*) g||_B / (||f||_B ||g||_B), 500 pairs", top, 4.0, 0.0, "le"),
        Part("majorant maximum C", c, 1.0, 0.0, "le"),
        Part("max ratio vs derived bound C + 3", top, c + 3, 0.0, "le"),
    ], [f"empirical maximum ratio {top:.6f}; derived bound {c + 3:.6f}"]


@_check("A10", "Beta function asymptotics", "B(x, y) ~ Gamma(y) x^(-y)")
def _a10(ctx):
    r = [beta_asymptotic_ratio(x, 1.5) for x in (10, 100, 1000)]
    gaps = [abs(v - 1) for v in r]
    bad = sum(b >= a for a, b in zip(gaps, gaps[1:]))
    return [
        Part("B(100, 1.5) 100^1.5 / Gamma(1.5)", r[1], 1.0, 0.02),
        Part("non-decreasing |ratio - 1| over x = 10, 100, 1000", bad, 0, 0.0, "eq"),
    ], [f"ratios {', '.join(f'{v:.8f}' for v in r)}"]


@_check("A11", "Evaluation identity for composition operators",
        "(C_phi f)(x) = f(phi(x)), i.e. C_phi* K_x = K_phi(x)", 2)
def _a11(ctx):
    xs = (np.array([0.2, 0.5, 0.8, 0.95])[:, None]
          * np.exp(2j * np.pi * (np.arange(8) + 0.5) / 8)[None, :]).ravel()
    direct = via_matrix = 0.0
    for t in range(20):
        phi = random_self_map(ctx.seq(11, t), max_degree=3, radius=0.95, degree=ctx.degree)
        C = Composition(phi)
        M = matrix_of(C)
        for k, x in enumerate(xs):
            direct = max(direct, adjoint_eval_check(C, x, 10, seed=k, degree=ctx.degree))
            via_matrix = max(via_matrix, adjoint_eval_check(M, x, 10, seed=k))
    return [
        Part("max |(C_phi f)(x) - f(phi(x))|, 20 maps x 32 points x 10 probes", direct, 0.0, 1e-11, "le"),
        Part("same through the matrix form", via_matrix, 0.0, 1e-11, "le"),
    ], []


@_check("A12", "Multiplicative functional that is not a composition operator",
        "T f = f(c) with |c| = 1 is multiplicative, T z = c is a unimodular constant")
def _a12(ctx):
    c = complex(np.exp(0.9j))
    T = BoundaryEval(c)
    rep = almost_mult_residual(T, SpaceSpec.sup(), trials=100, seed=ctx.seed, degree=ctx.degree)
    kind = is_self_map(symbol_of(T, ctx.degree)).kind
    note = (f"boundary evaluation at c = {c:.6f}: multiplicative residual "
            f"{rep.max_residual:.3e} over 100 trials, and its symbol is classified "
            f"{kind.value}, so it is multiplicative but not a composition operator")
    return [
        Part("max multiplicative residual (sup norm)", rep.max_residual, 0.0, 1e-11, "le"),
        Part("symbol classification", kind.value, MapKind.UNIMODULAR_CONSTANT.value, 0.0, "eq"),
    ], [note]


@_check("A13", "Growth estimates for Bloch and Besov functions",
        "|f(a) - f(0)| <= (1/2) log((1+|a|)/(1-|a|)) ||f||_B; Besov mass finite", 2)
def _a13(ctx):
    n = ctx.degree
    radii = np.array([0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99])

    def one(t):
        ss = ctx.seq(13, t)
        f = random_series(ss, n // 2, 0.8, 1.0, degree=n)
        theta = 2 * np.pi * np.random.default_rng(ss.spawn(1)[0]).random()
        bn = norm(f, SpaceSpec.bloch())
        pts = radii * np.exp(1j * theta)
        viol = sum(not bloch_growth_check(f, a, bn) for a in pts)
        mass = besov_mass(f, 2.0)
        besov_n = norm(f, SpaceSpec.besov(2.0)).value
        c_emp = max(besov_growth_ratio(f, 2.0, a, besov_n) for a in pts)
        return viol, math.isfinite(mass), c_emp

    out = ctx.map(one, range(500))
    viol = sum(o[0] for o in out)
    infinite = sum(not o[1] for o in out)
    c_emp = max(o[2] for o in out)
    return [
        Part("Bloch growth violations, 500 functions x 11 radii", viol, 0, 0.0, "eq"),
        Part("non-finite Besov masses (p = 2)", infinite, 0, 0.0, "eq"),
        Part("empirical Besov growth constant is finite", math.isfinite(c_emp), True, 0.0, "eq"),
    ], [f"empirical Besov growth constant (p = 2) {c_emp:.6f}"]


@_check("A14", "Property suites",
        "ring axioms, deflation, Borel homomorphism, matrix round-trip, parallel determinism", 2)
def _a14(ctx):
    n = ctx.degree
    ring = defl = borel_dev = mat = 0.0
    for t in range(20):
        s1, s2, s3 = ctx.seq(14, t).spawn(3)
        f, g, h = (random_series(s, n, 0.7, 1.0) for s in (s1, s2, s3))
        ring = max(ring,
                   np.max(np.abs((cauchy_mul(cauchy_mul(f, g), h) - cauchy_mul(f, cauchy_mul(g, h))).coeffs)),
                   np.max(np.abs((cauchy_mul(f, g) - cauchy_mul(g, f)).coeffs)),
                   np.max(np.abs((cauchy_mul(f, g + h) - cauchy_mul(f, g) - cauchy_mul(f, h)).coeffs)))
        w = 0.6 * np.exp(2j * np.pi * t / 20)
        fp = f.with_degree(n)
        q = deflate_at(fp, w)
        back = cauchy_mul(q.with_degree(n), TruncatedSeries([-w, 1.0], degree=n)) + complex(evaluate(fp, w))
        defl = max(defl, float(np.max(np.abs((back - fp).coeffs))))
        m = min(n, 40)
        fb, gb = f.with_degree(m), g.with_degree(m)
        lhs = duhamel(fb, gb)
        rhs = inverse_borel(cauchy_mul(borel(fb), borel(gb)))
        borel_dev = max(borel_dev, float(np.max(np.abs((lhs - rhs).coeffs))))
        for T in (Composition(random_self_map(s1, 3, 0.9, degree=n)),
                  Multiplication(random_series(s2, 3, 0.5, 1.0, degree=n)),
                  PointEval(0.3 + 0.2j), BoundaryEval(1j)):
            k = random_series(s3, n // 4, 0.7, 1.0, degree=n)
            mat = max(mat, float(np.max(np.abs((matrix_of(T, n).apply(k) - T.apply(k)).coeffs))))
    T = Composition(random_self_map(ctx.seq(14, 999), 3, 0.9, degree=n))
    a = almost_mult_residual(T, "hardy:p=2", trials=16, seed=ctx.seed, degree=n)
    b = almost_mult_residual(T, "hardy:p=2", trials=16, seed=ctx.seed, degree=n, workers=4)
    return [
        Part("ring axioms (assoc, comm, distrib) max deviation", ring, 0.0, 1e-12, "le"),
        Part("deflation round-trip max deviation", defl, 0.0, 1e-12, "le"),
        Part("Borel homomorphism max deviation", borel_dev, 0.0, 1e-12, "le"),
        Part("matrix round-trip max deviation", mat, 0.0, 1e-12, "le"),
        Part("serial and threaded residuals identical", a.residuals == b.residuals, True, 0.0, "eq"),
    ], []


# -- driver ------------------------------------------------------------------

@dataclass
class VerificationReport:
    seed: int
    degree: int
    checks: list[CheckResult]
    wall_time: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "meta": {
                "version": __version__,
                "seed": self.seed,
                "working_degree": self.degree,
                "passed": self.passed,
                "n_checks": len(self.checks),
                "n_failed": sum(not c.passed for c in self.checks),
                "wall_time": round(self.wall_time, 3),
            },
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_markdown(self) -> str:
        lines = [
            f"# Verification report (seed {self.seed}, degree {self.degree})",
            "",
            "| id | check | status | measured | expected | tolerance | time (s) |",
            "|---|---|---|---|---|---|---|",
        ]
        for c in self.checks:
            lines.append(
                f"| {c.id} | {c.title} | {c.status.upper()} | {_fmt(c.measured)} | "
                f"{_fmt(c.expected)} | {_fmt(c.tolerance)} | {c.wall_time:.2f} |"
            )
        lines.append("")
        for c in self.checks:
            lines.append(f"## {c.id} {c.title}: {c.status.upper()}")
            lines.append(f"Anchor: {c.anchor}")
            lines.append("")
            for p in c.parts:
                mark = "ok" if p.passed else "FAIL"
                lines.append(f"- [{mark}] {p.name}: measured {_fmt(p.measured)}, "
                             f"{p.relation} {_fmt(p.expected)} (tol {_fmt(p.tolerance)})")
            lines.extend(f"- note: {n}" for n in c.notes)
            lines.append("")
        verdict = "ALL PASS" if self.passed else "FAILURES PRESENT"
        lines.append(f"**{verdict}** in {self.wall_time:.1f} s")
        return "\n".join(lines) + "\n"


def _fmt(x) -> str:
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return str(x)
    if isinstance(x, int):
        return str(x)
    return f"{x:.6g}"


def run_check(check: Check | str, seed: int = 0, degree: int = 64, workers: int | None = None) -> CheckResult:
    if isinstance(check, str):
        check = next(c for c in CHECKS if c.id == check)
    ctx = Context(seed, degree, workers)
    t0 = time.perf_counter()
    if degree < check.min_degree:
        return CheckResult(check.id, check.title, check.anchor, "skipped", [],
                           [f"needs working degree >= {check.min_degree}"], 0.0)
    try:
        parts, notes = check.run(ctx)
        status = "pass" if all(p.passed for p in parts) else "fail"
    except Exception as exc:  # collected, never short-circuits the suite
        parts, notes, status = [], [f"{type(exc).__name__}: {exc}"], "error"
    return CheckResult(check.id, check.title, check.anchor, status, parts, notes,
                       time.perf_counter() - t0)


def run_verification(seed: int = 0, degree: int = 64, ids=None, workers: int | None = None) -> VerificationReport:
    t0 = time.perf_counter()
    results = [run_check(c, seed, degree, workers) for c in CHECKS if ids is None or c.id in ids]
    return VerificationReport(seed, degree, results, time.perf_counter() - t0)
