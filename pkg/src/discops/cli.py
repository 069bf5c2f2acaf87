"""Command line: ``discops {norm,duhamel,compose,check-multiplicative,verify}``.

Exit codes: 0 success, 1 a check failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys

from .duhamel import duhamel, duhamel_residual_operator
from .formats import ParseError, parse_operator, parse_series
from .operators import BoundaryEval, MapKind, almost_mult_residual, is_self_map, symbol_of
from .series import DEFAULT_DEGREE, MAX_DEGREE, compose, to_json
from .spaces import SpaceSpec, norm
from .verify import CHECKS, run_verification


def _globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=d(0), help="random seed (default 0)")
    parser.add_argument("--degree", type=int, default=d(None),
                        help=f"working degree (default {DEFAULT_DEGREE})")
    parser.add_argument("--tol", type=float, default=d(1e-9), help="pass tolerance (default 1e-9)")
    parser.add_argument("--out", default=d(None), help="write output to this file")
    parser.add_argument("--format", choices=("md", "json"), default=d("md"))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="discops", description=__doc__.splitlines()[0])
    _globals(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("norm", help="norm of a series in a function space")
    s.add_argument("--series", required=True, help="JSON, file path or shorthand like 0.5z+z^3")
    s.add_argument("--space", required=True, help='e.g. "hardy:p=2", "bergman:p=2,a=0", "bloch"')

    s = sub.add_parser("duhamel", help="Duhamel product f (*) g")
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)

    s = sub.add_parser("compose", help="composition f o phi")
    s.add_argument("--f", required=True)
    s.add_argument("--phi", required=True)

    s = sub.add_parser("check-multiplicative", help="multiplicativity residual of an operator")
    s.add_argument("--op", required=True,
                   help="comp:<series>, mult:<series>, bdry-eval:c=re,im, point-eval:a=re,im, matrix:<file>")
    s.add_argument("--space", default="hardy:p=2")
    s.add_argument("--duhamel", action="store_true", help="test the Duhamel product instead")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--basis-degree", type=int, default=3)

    s = sub.add_parser("verify", help="run the verification suite")
    s.add_argument("--checks", default=None, help="comma-separated check ids (default: all)")
    for sp in sub.choices.values():
        _globals(sp, suppress=True)
    return p


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text.rstrip("\n"))


def _series_text(f, fmt: str) -> str:
    body = to_json(f, trim=True)
    if fmt == "json":
        return json.dumps({"degree": f.degree, "coeffs": json.loads(body)})
    return body


def _cmd_norm(args) -> int:
    f = parse_series(args.series, args.degree)
    r = norm(f, SpaceSpec.parse(args.space))
    if args.format == "json":
        _emit(args, json.dumps({"space": args.space, "value": r.value, "method": r.method,
                                "error_estimate": r.error_estimate}))
    else:
        _emit(args, f"{r.value:.16g}\nmethod: {r.method}\nerror estimate: {r.error_estimate:.3g}")
    return 0


def _cmd_duhamel(args) -> int:
    f = parse_series(args.f, args.degree)
    g = parse_series(args.g, args.degree)
    _emit(args, _series_text(duhamel(f, g), args.format))
    return 0


def _cmd_compose(args) -> int:
    f = parse_series(args.f, args.degree)
    phi = parse_series(args.phi, args.degree)
    _emit(args, _series_text(compose(f, phi), args.format))
    return 0


def _cmd_check(args) -> int:
    T = parse_operator(args.op, args.degree)
    space = SpaceSpec.parse(args.space)
    warnings = []
    if isinstance(T, BoundaryEval) or is_self_map(symbol_of(T, args.degree)).kind \
            is MapKind.UNIMODULAR_CONSTANT:
        warnings.append("symbol unimodular: not a composition operator")
    if args.duhamel:
        r = duhamel_residual_operator(T, space, args.basis_degree, args.tol, degree=args.degree)
        ok, data = r.verdict, {
            "product": "duhamel", "space": str(space), "max_residual": r.max_residual,
            "witness": [f"z^{r.witness[0]}", f"z^{r.witness[1]}"], "basis_degree": r.basis_degree,
        }
    else:
        r = almost_mult_residual(T, space, args.trials, args.seed, degree=args.degree)
        ok = r.max_residual < args.tol
        data = {
            "product": "pointwise", "space": str(space), "max_residual": r.max_residual,
            "mean_residual": r.mean_residual, "trials": r.trials, "seed": r.seed,
            "witness_trial": r.witness_trial,
        }
    data.update({"tol": args.tol, "verdict": "PASS" if ok else "FAIL", "warnings": warnings})
    if args.format == "json":
        _emit(args, json.dumps(data))
    else:
        lines = [f"{data['verdict']}: max residual {data['max_residual']:.3e} "
                 f"({data['product']} product, {data['space']}, tol {args.tol:g})"]
        if "witness" in data:
            lines.append(f"witness pair: ({data['witness'][0]}, {data['witness'][1]})")
        else:
            lines.append(f"mean residual {data['mean_residual']:.3e} over {data['trials']} trials, "
                         f"seed {data['seed']}, worst trial {data['witness_trial']}")
        lines.extend(f"warning: {w}" for w in warnings)
        _emit(args, "\n".join(lines))
    return 0 if ok else 1


def _cmd_verify(args) -> int:
    ids = None
    if args.checks:
        ids = [c.strip().upper() for c in args.checks.split(",") if c.strip()]
        unknown = sorted(set(ids) - {c.id for c in CHECKS})
        if unknown:
            raise ParseError(f"unknown check ids: {', '.join(unknown)}")
    rep = run_verification(args.seed, args.degree or DEFAULT_DEGREE, ids)
    _emit(args, rep.to_json() if args.format == "json" else rep.to_markdown())
    return 0 if rep.passed else 1


_COMMANDS = {
    "norm": _cmd_norm,
    "duhamel": _cmd_duhamel,
    "compose": _cmd_compose,
    "check-multiplicative": _cmd_check,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.degree is not None and not 0 <= args.degree <= MAX_DEGREE:
        parser.error(f"--degree must lie in 0..{MAX_DEGREE}")
    if not 0 <= args.seed < 2**64:
        parser.error("--seed must be an unsigned 64-bit integer")
    try:
        return _COMMANDS[args.command](args)
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
