"""Text formats for series and operators.

Series are accepted as JSON (``[[re, im], ...]`` or bare reals), as a path
to a JSON file, or in shorthand: ``z^7``, ``0.5z``, ``1 - 2*z^3 + (0,1)z^5``.
A coefficient is a real, a Python complex literal such as ``2j`` or
``(1+2j)``, or a pair ``(re,im)``.

Operators: ``comp:<series>``, ``mult:<series>``, ``bdry-eval:c=re,im``,
``point-eval:a=re,im``, ``matrix:<file>``.
"""
from __future__ import annotations

import json
import os
import re

import numpy as np

from .operators import BoundaryEval, Composition, Multiplication, MatrixOperator, PointEval
from .series import DEFAULT_DEGREE, MAX_DEGREE, TruncatedSeries, from_json


class ParseError(ValueError):
    pass


_TERM = re.compile(r"^(?P<coef>.*?)\*?(?P<z>z(?:\^(?P<pow>\d+))?)?$")


def parse_complex(text: str) -> complex:
    """``"re,im"``, ``"(re,im)"``, ``"1.5"``, ``"2j"`` or ``"(1+2j)"``."""
    t = text.strip()
    inner = t[1:-1] if t.startswith("(") and t.endswith(")") else t
    if "," in inner:
        parts = inner.split(",")
        if len(parts) != 2:
            raise ParseError(f"bad complex literal {text!r}")
        try:
            return complex(float(parts[0]), float(parts[1]))
        except ValueError as exc:
            raise ParseError(f"bad complex literal {text!r}") from exc
    try:
        return complex(t.replace("i", "j") if "j" not in t else t)
    except ValueError as exc:
        raise ParseError(f"bad complex literal {text!r}") from exc


def _split_terms(text: str) -> list[str]:
    terms, depth, start = [], 0, 0
    for k, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and k > start:
            if text[k - 1] in "eE" and k >= 2 and (text[k - 2].isdigit() or text[k - 2] == "."):
                continue
            terms.append(text[start:k])
            start = k
    terms.append(text[start:])
    return [t for t in terms if t]


def parse_shorthand(text: str, degree: int | None = None) -> TruncatedSeries:
    """Parse ``a*z^k + ...``; the degree defaults to the working degree or the top power."""
    body = text.replace(" ", "")
    if not body:
        raise ParseError("empty series")
    coeffs: dict[int, complex] = {}
    for term in _split_terms(body):
        sign = 1.0
        if term[0] in "+-":
            sign = -1.0 if term[0] == "-" else 1.0
            term = term[1:]
        m = _TERM.match(term)
        if m is None or not term:
            raise ParseError(f"cannot parse term {term!r}")
        coef_txt = m.group("coef")
        if m.group("z") is None:
            k = 0
            if not coef_txt:
                raise ParseError(f"cannot parse term {term!r}")
        else:
            k = int(m.group("pow")) if m.group("pow") else 1
        coef = parse_complex(coef_txt) if coef_txt else 1.0
        coeffs[k] = coeffs.get(k, 0.0) + sign * coef
    top = max(coeffs)
    if top > MAX_DEGREE:
        raise ParseError(f"power {top} exceeds the maximum degree {MAX_DEGREE}")
    n = max(top, DEFAULT_DEGREE) if degree is None else degree
    if top > n:
        raise ParseError(f"power {top} exceeds the working degree {n}")
    c = np.zeros(n + 1, dtype=np.complex128)
    for k, v in coeffs.items():
        c[k] = v
    return TruncatedSeries(c, degree=n)


def parse_series(text: str, degree: int | None = None) -> TruncatedSeries:
    """Series from inline JSON, a JSON file path, or shorthand."""
    t = text.strip()
    try:
        if t.startswith("["):
            return from_json(t, degree)
        if os.path.isfile(t):
            with open(t) as fh:
                return from_json(fh.read(), degree)
        return parse_shorthand(t, degree)
    except ParseError:
        raise
    except (ValueError, json.JSONDecodeError) as exc:
        raise ParseError(str(exc)) from exc


def _keyed_complex(body: str, key: str) -> complex:
    if not body.startswith(key + "="):
        raise ParseError(f"expected {key}=<re,im>, got {body!r}")
    return parse_complex(body[len(key) + 1 :])


def parse_operator(text: str, degree: int | None = None):
    """Build an operator from its string form."""
    kind, sep, body = text.partition(":")
    if not sep:
        raise ParseError(f"operator string needs a prefix: {text!r}")
    try:
        if kind == "comp":
            return Composition(parse_series(body, degree))
        if kind == "mult":
            return Multiplication(parse_series(body, degree))
        if kind == "bdry-eval":
            return BoundaryEval(_keyed_complex(body, "c"))
        if kind == "point-eval":
            return PointEval(_keyed_complex(body, "a"))
        if kind == "matrix":
            with open(body) as fh:
                rows = json.load(fh)
            m = np.array([[complex(*v) if isinstance(v, list) else complex(v) for v in row]
                          for row in rows])
            return MatrixOperator(m)
    except ParseError:
        raise
    except (ValueError, TypeError, OSError) as exc:
        raise ParseError(str(exc)) from exc
    raise ParseError(f"unknown operator kind {kind!r}")
