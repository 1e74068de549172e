"""Command-line front end.

Exit codes: 0 pass, 1 oracle/condition failure, 2 input error,
3 numerical rank ambiguity, 4 precondition refused (rerun with ``--force``).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import identities as ids
from .campaign import CampaignConfig, reference_triple_report, run_campaign
from .drazin import drazin_inverse
from .errors import (
    DimensionMismatch,
    Exhausted,
    FieldMismatch,
    Infeasible,
    NotGroupInvertible,
    NumericalRankAmbiguous,
    PreconditionFailed,
)
from .fields import DEFAULT_EPS, field_from_json
from .quadgen import STRATEGIES, GenSpec, generate
from .serialize import matrix_from_json, matrix_to_json, quadruple_from_json, quadruple_to_json

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC, EXIT_PRECONDITION = 0, 1, 2, 3, 4

CLINE_VARIANTS = ("full", "two-condition", "triple", "triple-c6")
JACOBSON_VARIANTS = ("full", "triple", "group")


class InputError(Exception):
    pass


def _eps() -> float:
    raw = os.environ.get("DRAZINLAB_EPS")
    if raw is None:
        return DEFAULT_EPS
    try:
        eps = float(raw)
    except ValueError:
        raise InputError(f"DRAZINLAB_EPS is not a number: {raw!r}") from None
    if not eps > 0:
        raise InputError("DRAZINLAB_EPS must be positive")
    return eps


def _load_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _load_quadruple(path: str):
    return quadruple_from_json(_load_json(path), eps_rel=_eps())


# ------------------------------------------------------------------ commands


def cmd_drazin(args) -> int:
    A = matrix_from_json(_load_json(args.input), eps_rel=_eps())
    dec = drazin_inverse(A)
    doc = {"index": dec.index, "inverse": matrix_to_json(dec.inverse),
           "idempotent": matrix_to_json(dec.idempotent)}
    if not A.field.exact:
        doc["residual"] = dec.residual
    _emit(doc)
    return EXIT_OK


def cmd_check(args) -> int:
    q = _load_quadruple(args.input)
    report = ids.check_condition(q, args.condition)
    _emit(report.to_json())
    return EXIT_OK if report.all_hold else EXIT_FAIL


def _need_d(q, variant):
    if q.is_triple:
        raise InputError(f"variant {variant!r} needs d in the quadruple file")


def cmd_cline(args) -> int:
    q = _load_quadruple(args.input)
    if args.variant in ("full", "two-condition"):
        _need_d(q, args.variant)
        fn = ids.cline_full if args.variant == "full" else ids.cline_two_condition
        result = fn(q, force=args.force)
    elif args.variant == "triple":
        result = ids.cline_triple(q.a, q.b, q.c, force=args.force)
    else:
        result = ids.cline_triple_c6(q.a, q.b, q.c, force=args.force)
    _emit(result.to_json())
    return EXIT_OK if result.oracle_ok else EXIT_FAIL


def cmd_jacobson(args) -> int:
    q = _load_quadruple(args.input)
    if args.variant == "triple":
        result = ids.jacobson_triple(q.a, q.b, q.c, force=args.force)
    else:
        _need_d(q, args.variant)
        fn = ids.jacobson_gdrazin if args.variant == "full" else ids.jacobson_group
        result = fn(q, force=args.force)
    _emit(result.to_json())
    return EXIT_OK if result.oracle_ok else EXIT_FAIL


def _parse_dims(text: str) -> tuple:
    for sep in ("..", "-", ":"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            try:
                lo, hi = int(lo), int(hi)
            except ValueError:
                break
            if lo < 1 or hi < lo:
                break
            return tuple(range(lo, hi + 1))
    else:
        if text.isdigit() and int(text) >= 1:
            return (int(text),)
    raise InputError(f"bad --dim-range {text!r}; expected e.g. 2..4")


def _field_args(args):
    doc = {"field": args.field}
    if args.field == "gfp":
        if args.p is None:
            raise InputError("--field gfp needs --p")
        doc["p"] = args.p
    return field_from_json(doc, _eps())


def cmd_campaign(args) -> int:
    dims = _parse_dims(args.dim_range)
    if args.trials < 0:
        raise InputError("--trials must be non-negative")
    base = GenSpec(strategy=args.strategy, field=_field_args(args), dim=dims[0], seed=args.seed0,
                   entry_bound=args.entry_bound, condition=args.condition, exclude=args.exclude,
                   budget=args.budget)
    config = CampaignConfig(base=base, dims=dims, trials=args.trials, seed0=args.seed0)
    report = run_campaign(config)
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    summary = {k: report[k] for k in ("trials", "failures", "infeasible", "max_residual",
                                      "coverage_flags", "interrupted")}
    if args.out:
        summary["report"] = str(args.out)
        _emit(summary)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report["failures"] == 0 and not report["interrupted"] else EXIT_FAIL


def cmd_reference_triple(args) -> int:
    report = reference_triple_report()
    _emit(report)
    return EXIT_OK if report["ok"] else EXIT_FAIL


def cmd_generate(args) -> int:
    text = args.spec
    doc = json.loads(text) if text.lstrip().startswith("{") else _load_json(text)
    spec = GenSpec.from_json(doc, eps_rel=_eps())
    q = generate(spec)
    _emit(quadruple_to_json(q))
    return EXIT_OK


# --------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="drazinlab",
                                     description="Drazin inverses and entwined Cline/Jacobson formulas.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("drazin", help="Drazin inverse of a matrix file")
    p.add_argument("input", help="matrix JSON file ('-' for stdin)")
    p.set_defaults(func=cmd_drazin)

    p = sub.add_parser("check", help="evaluate an entwining condition on a quadruple file")
    p.add_argument("input")
    p.add_argument("--condition", required=True, choices=ids.CONDITION_IDS)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("cline", help="Cline-type formula for (bd)^D or (ba)^D")
    p.add_argument("input")
    p.add_argument("--variant", default="full", choices=CLINE_VARIANTS)
    p.add_argument("--force", action="store_true", help="evaluate even if the hypothesis fails")
    p.set_defaults(func=cmd_cline)

    p = sub.add_parser("jacobson", help="Jacobson-type formula for (1-ac)^D")
    p.add_argument("input")
    p.add_argument("--variant", default="full", choices=JACOBSON_VARIANTS)
    p.add_argument("--force", action="store_true", help="evaluate even if the hypothesis fails")
    p.set_defaults(func=cmd_jacobson)

    p = sub.add_parser("campaign", help="bulk verification over generated instances")
    p.add_argument("--strategy", default="mosic", choices=[s for s in STRATEGIES if s != "reference-triple"])
    p.add_argument("--field", default="gfp", choices=("rational", "gfp", "complex"))
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--dim-range", default="2..4")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed0", type=int, default=0)
    p.add_argument("--entry-bound", type=int, default=3)
    p.add_argument("--condition", choices=ids.CONDITION_IDS, default=None, help="rejection target")
    p.add_argument("--exclude", choices=ids.CONDITION_IDS, default=None,
                   help="rejection: condition that must fail")
    p.add_argument("--budget", type=int, default=10**6, help="rejection sample budget")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.set_defaults(func=cmd_campaign)

    p = sub.add_parser("reference-triple", help="recompute the fixed 2x2 reference triple and its claimed values")
    p.set_defaults(func=cmd_reference_triple)

    p = sub.add_parser("generate", help="print the quadruple produced by a GenSpec")
    p.add_argument("spec", help="GenSpec JSON, inline or as a file path")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PreconditionFailed as exc:
        doc = {"error": "precondition_failed", "condition": exc.condition_id}
        if exc.report is not None:
            doc["report"] = exc.report.to_json()
        _emit(doc)
        return EXIT_PRECONDITION
    except NumericalRankAmbiguous as exc:
        _emit({"error": "numerical_rank_ambiguous", "message": str(exc)})
        return EXIT_NUMERIC
    except NotGroupInvertible as exc:
        _emit({"error": "not_group_invertible", "message": str(exc)})
        return EXIT_FAIL
    except (Infeasible, Exhausted) as exc:
        _emit({"error": type(exc).__name__.lower(), "message": str(exc)})
        return EXIT_FAIL
    except (InputError, ValueError, DimensionMismatch, FieldMismatch, json.JSONDecodeError) as exc:
        print(f"drazinlab: input error: {exc}", file=sys.stderr)
        _emit({"error": "input_error", "message": str(exc)})
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
