"""Command line front end.

Every command reads one domain spec (``--input``) and writes one artifact
(``--output``, default stdout).  JSON artifacts are ``{"config": ..., "result":
...}``; CSV artifacts start with a ``# config: {...}`` line.

Exit codes: 0 success, 1 usage or parse error, 2 invalid domain, 3 numeric
failure.  Errors go to stderr as a JSON object.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

import numpy as np

from . import bergman, diophantine, monomials
from .classify import classify
from .domain import DomainSpec, InvalidDomain, validate
from .field_arith import FieldMismatch, QuadNum, format_quadnum, parse_quadnum, vec
from .polyhedra import Cone, EmptyPolyhedron, NumericFailure, recession_cone

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULTS = {"height": 20, "samples": 10**6, "seed": 42, "delta": 0.1}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        raise UsageError(message)


def _field_list(text: str) -> tuple[QuadNum, ...]:
    return tuple(parse_quadnum(s.strip()) for s in text.split(","))


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(s) for s in text.split(","))


def _float_list(text: str) -> list[float]:
    return [float(s) for s in text.split(",")]


def _complex_list(text: str) -> list[complex]:
    return [complex(s.strip().replace(" ", "")) for s in text.split(",")]


# ---------------------------------------------------------------------------
# output helpers


def _config(args: argparse.Namespace) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func"}


def _json_artifact(args, result: dict) -> str:
    return json.dumps({"config": _config(args), "result": result}, indent=2) + "\n"


def _csv_artifact(args, header: Sequence[str], rows, extra: dict | None = None) -> str:
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(_config(args), sort_keys=True) + "\n")
    for key, value in (extra or {}).items():
        buf.write(f"# {key}: " + json.dumps(value, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _model(spec: DomainSpec, args) -> bergman.KernelModel:
    return bergman.KernelModel.build(spec, args.height)


# ---------------------------------------------------------------------------
# commands


def cmd_validate(spec: DomainSpec, args) -> int:
    report = validate(spec)
    _emit(args, _json_artifact(args, report.to_dict()))
    return EXIT_OK if report.valid else EXIT_INVALID


def cmd_classify(spec: DomainSpec, args) -> int:
    _emit(args, _json_artifact(args, classify(spec).to_dict()))
    return EXIT_OK


def cmd_monomials(spec: DomainSpec, args) -> int:
    _require(spec)
    C = recession_cone(spec.logD)
    integ = monomials.LogIntegrator(spec.logD)
    rows = []
    for alpha in monomials.enumerate_admissible(spec, args.height, C):
        if args.method == "montecarlo":
            res = monomials.norm_sq_montecarlo(spec, alpha, args.samples, args.seed)
        else:
            res = monomials.norm_sq_quadrature(spec, alpha, integ, C)
        rows.append([*res.alpha, res.norm_sq, res.method, res.error_estimate])
    header = [f"alpha_{j + 1}" for j in range(spec.n)] + ["norm_sq", "method", "error_estimate"]
    _emit(args, _csv_artifact(args, header, rows))
    return EXIT_OK


def cmd_kernel(spec: DomainSpec, args) -> int:
    if not args.point:
        raise UsageError("kernel needs at least one --point")
    model = _model(spec, args)
    rows = []
    for text in args.point:
        z = _complex_list(text)
        if len(z) != spec.n:
            raise UsageError(f"point {text!r} does not have {spec.n} coordinates")
        r = bergman.moduli(z)
        bergman._check_inside(spec, r)
        rows.append([*map(float, r), bergman.kernel(model, z)])
    header = [f"abs_z{j + 1}" for j in range(spec.n)] + ["K"]
    _emit(args, _csv_artifact(args, header, rows))
    return EXIT_OK


def _curve_header(n: int) -> list[str]:
    return ["t"] + [f"abs_z{j + 1}" for j in range(n)] + ["K", "beta_speed", "cumulative_length"]


def cmd_length(spec: DomainSpec, args) -> int:
    model = _model(spec, args)
    base = _field_list(args.base)
    v = _field_list(args.v)
    if args.ray is not None:
        curve = bergman.ray_path_length(model, base, v, args.ray, panels=args.panels)
        extra = {"length": curve.length}
    else:
        schedule = sorted(_float_list(args.eps), reverse=True)
        lengths = {}
        curve = None
        for eps in schedule:
            curve = bergman.monomial_curve_length(model, base, v, (eps, args.lambda1), args.panels_per_decade)
            lengths[repr(eps)] = curve.length
        extra = {"lengths": lengths}
    _emit(args, _csv_artifact(args, _curve_header(spec.n), curve.rows(), extra))
    return EXIT_OK


def cmd_kc(spec: DomainSpec, args) -> int:
    model = _model(spec, args)
    base = _field_list(args.base)
    v = _field_list(args.v)
    ts = np.arange(args.t_start, args.t_stop + 1)
    path = bergman.ray_points(base, v, ts)
    beta = _int_list(args.beta) if args.beta else None
    res = bergman.kc_ratio(model, _int_list(args.alpha), path, beta)
    header = ["nu", "ratio"] + (["bound"] if res.bounds is not None else [])
    rows = [
        [int(t), float(r)] + ([float(res.bounds[i])] if res.bounds is not None else [])
        for i, (t, r) in enumerate(zip(ts, res.ratios))
    ]
    _emit(args, _csv_artifact(args, header, rows))
    return EXIT_OK


def projected_cone(spec: DomainSpec) -> Cone:
    """Image of the recession cone under the map zeroing the axis coordinates."""
    C = recession_cone(spec.logD)
    gens = [tuple(QuadNum() if j in spec.axes else x for j, x in enumerate(g)) for g in C.generators]
    return Cone.from_generators(gens, spec.n)


def cmd_beta(spec: DomainSpec, args) -> int:
    _require(spec)
    v = _field_list(args.v)
    cert = diophantine.find_beta(projected_cone(spec), v, args.delta, mode=args.mode, max_height=args.max_height)
    result = cert.to_dict()
    result["pairing_exact"] = format_quadnum(sum((b * x for b, x in zip(cert.beta, vec(v))), QuadNum()))
    _emit(args, _json_artifact(args, result))
    return EXIT_OK


def _require(spec: DomainSpec) -> None:
    report = validate(spec)
    if not report.valid:
        raise InvalidDomain(json.dumps(report.failures))


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", required=True, help="domain spec (JSON)")
    common.add_argument("--output", default=None, help="artifact path (default stdout)")
    common.add_argument("--height", type=int, default=DEFAULTS["height"], help="truncation height")
    common.add_argument("--samples", type=int, default=DEFAULTS["samples"], help="Monte Carlo samples")
    common.add_argument("--seed", type=int, default=DEFAULTS["seed"], help="Monte Carlo seed")
    common.add_argument("--delta", type=float, default=DEFAULTS["delta"], help="tolerance for beta search")

    parser = _Parser(prog="reinhardt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("validate", parents=[common], help="check a domain spec").set_defaults(func=cmd_validate)
    sub.add_parser("classify", parents=[common], help="completeness report").set_defaults(func=cmd_classify)

    p = sub.add_parser("monomials", parents=[common], help="norm table of admissible monomials")
    p.add_argument("--method", choices=["quadrature", "montecarlo"], default="quadrature")
    p.set_defaults(func=cmd_monomials)

    p = sub.add_parser("kernel", parents=[common], help="truncated kernel at points")
    p.add_argument("--point", action="append", help="comma separated coordinates, complex allowed")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("length", parents=[common], help="Bergman length of a monomial curve or ray")
    p.add_argument("--v", required=True, help="cone direction, e.g. -1,-1 or -sqrt(2),-1")
    p.add_argument("--base", required=True, help="base log-point a")
    p.add_argument("--eps", default="1e-2,1e-3,1e-4", help="schedule of lower parameter bounds")
    p.add_argument("--lambda1", type=float, default=0.5)
    p.add_argument("--panels-per-decade", type=int, default=8)
    p.add_argument("--ray", type=float, default=None, help="use the ray exp(a + t v), t in [0, RAY]")
    p.add_argument("--panels", type=int, default=64)
    p.set_defaults(func=cmd_length)

    p = sub.add_parser("kc", parents=[common], help="|z^alpha| / sqrt(K) along exp(a + nu v)")
    p.add_argument("--alpha", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--base", required=True)
    p.add_argument("--t-start", type=int, default=1)
    p.add_argument("--t-stop", type=int, default=10)
    p.add_argument("--beta", default=None, help="integer vector for the bound column")
    p.set_defaults(func=cmd_kc)

    p = sub.add_parser("beta", parents=[common], help="certified integer beta for a cone direction")
    p.add_argument("--v", required=True)
    p.add_argument("--mode", choices=["general", "interior"], default="general")
    p.add_argument("--max-height", type=int, default=1000)
    p.set_defaults(func=cmd_beta)
    return parser


def _fail(code: int, exc: BaseException) -> int:
    err = {"error": {"type": type(exc).__name__, "message": str(exc), "exit_code": code}}
    sys.stderr.write(json.dumps(err) + "\n")
    return code


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        spec = DomainSpec.load(args.input)
    except (UsageError, OSError, json.JSONDecodeError, KeyError, FieldMismatch, ValueError) as exc:
        return _fail(EXIT_USAGE, exc)
    try:
        return args.func(spec, args)
    except (InvalidDomain, EmptyPolyhedron) as exc:
        return _fail(EXIT_INVALID, exc)
    except (NumericFailure, diophantine.SearchExhausted, monomials.DivergentIntegral,
            monomials.AdmissibilityInconsistency, bergman.PathExitsDomain, OverflowError, ArithmeticError) as exc:
        return _fail(EXIT_NUMERIC, exc)
    except (UsageError, ValueError) as exc:
        return _fail(EXIT_USAGE, exc)


if __name__ == "__main__":
    raise SystemExit(main())
