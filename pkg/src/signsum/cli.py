"""Command-line interface.

Exit status: 0 success or verified, 1 refuted, 2 undecided, 3 usage error,
4 capacity or precision error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import verifier
from .distribution import (
    WeightVector,
    enumerate_distribution,
    load_weights,
    prob_abs_shifted_le,
    prob_tail_ge,
)
from .errors import CapacityError, DomainError, ContractError, PrecisionExhausted, UsageError
from .gaussian import DEFAULT_TARGET_WIDTH, bd_bound, f_of_c
from .numerics import interval_to_json, parse_rational, rational_to_json
from .report import Verdict, VerificationReport
from .search import FAMILIES, SearchConfig, minimize_prob, sweep_family, sweep_table
from .surds import parse_real

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_UNDECIDED = 2
EXIT_USAGE = 3
EXIT_CAPACITY = 4

VERDICT_EXIT = {
    Verdict.VERIFIED: EXIT_OK,
    Verdict.REFUTED: EXIT_REFUTED,
    Verdict.UNDECIDED: EXIT_UNDECIDED,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _rational(text):
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _real(text):
    try:
        return parse_real(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected RAT or sqrt(RAT): {text!r}") from exc


def _positive_real(text):
    value = _rational(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _iv_text(value) -> str:
    j = interval_to_json(value)
    return f"[{j['lo']}, {j['hi']}]"


def _value_text(js: dict) -> str:
    e = js.get("exact", js)
    if "num" in e:
        return e["num"] if e["den"] == "1" else f"{e['num']}/{e['den']}"
    return f"[{js['lo']}, {js['hi']}]"


def render_report(report: VerificationReport, indent: int = 0, max_items: int = 6) -> list[str]:
    pad = "  " * indent
    lines = [pad + report.summary()]
    shown = report.evidence if len(report.evidence) <= max_items else report.failing()[:max_items]
    for ev in shown:
        j = ev.to_json()
        lines.append(f"{pad}  {_value_text(j['lhs'])} {j['relation']} {_value_text(j['rhs'])}:"
                     f" {j['verdict']}  {json.dumps(j['input'], sort_keys=False)}")
    for note in report.notes:
        lines.append(f"{pad}  note: {note}")
    for comp in report.components:
        lines.extend(render_report(comp, indent + 1, max_items))
    return lines


def _emit(args, payload: dict, text: str):
    if args.json:
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        sys.stdout.write(text + "\n")


def _emit_report(args, report: VerificationReport) -> int:
    _emit(args, report.to_json(), "\n".join(render_report(report)))
    return VERDICT_EXIT[report.verdict]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_dist(args) -> int:
    d = enumerate_distribution(load_weights(args.weights))
    rows = d.to_json()
    lines = [f"mode {d.mode}, {len(d)} atoms, total {d.total}"]
    for row in rows["atoms"]:
        value = row.get("expr") or _value_text(row["value"])
        lines.append(f"{value}\t{row['multiplicity']}")
    _emit(args, rows, "\n".join(lines))
    return EXIT_OK


def cmd_prob(args) -> int:
    v = load_weights(args.weights)
    result = prob_abs_shifted_le(v, args.offset, args.threshold)
    _emit(args, {"event": "|x + S| <= t", "x": _real_json(args.offset),
                 "t": rational_to_json(args.threshold), "probability": result.to_json()},
          str(result))
    return EXIT_OK


def _real_json(value):
    if isinstance(value, Fraction):
        return rational_to_json(value)
    return {"expr": str(value)}


def cmd_tail(args) -> int:
    v = load_weights(args.weights)
    result = prob_tail_ge(v, args.x)
    _emit(args, {"event": "S >= x", "x": _real_json(args.x), "probability": result.to_json()},
          str(result))
    return EXIT_OK


def cmd_fvalue(args) -> int:
    f = f_of_c(args.c, args.width)
    _emit(args, {"c": rational_to_json(args.c), "F": interval_to_json(f)},
          f"F({args.c}) in {_iv_text(f)}")
    return EXIT_OK


def cmd_bound(args) -> int:
    b = bd_bound(args.x, args.width)
    _emit(args, {"x": _real_json(args.x), "bound": interval_to_json(b)},
          f"Q({args.x})/(4Q(sqrt 2)) in {_iv_text(b)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    width = args.precision
    target = args.target
    if target == "main-constant":
        report = verifier.verify_main_constant(width)
    elif target == "f-properties":
        report = verifier.verify_f_properties(verifier.F_PROPERTY_GRID, width)
    elif target == "lemma1":
        if args.weights:
            if args.c is None or args.x is None:
                raise UsageError("verify lemma1 --weights needs --c and --x")
            report = verifier.verify_lemma1_on_instance(load_weights(args.weights), args.c,
                                                        args.x, width)
        else:
            report = verifier.lemma1_stress(args.count, args.seed + 2, target=width)
    elif target == "lemma2":
        report = verifier.verify_lemma2_all_k(args.kmax, width)
    elif target == "xi":
        if args.value is None:
            report = verifier.verify_xi_grid(None, width)
        else:
            report = verifier.verify_xi_inequality(args.value, width)
    elif target == "convexity":
        report = verifier.verify_convexity_q_invsqrt(target=width)
    elif target == "bd":
        if args.weights:
            if args.x is None:
                raise UsageError("verify bd --weights needs --x")
            report = verifier.verify_bd_on_instance(load_weights(args.weights), args.x, width)
        else:
            report = verifier.bd_stress(args.count, args.seed + 1, target=width)
    elif target == "main":
        if not args.weights:
            raise UsageError("verify main needs --weights")
        report = verifier.verify_main_conclusion(load_weights(args.weights), width)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown verify target {target}")
    return _emit_report(args, report)


def cmd_search(args) -> int:
    config = SearchConfig(n=args.n, restarts=args.restarts, seed=args.seed,
                          denominator_bound=args.denominator_bound)
    result = minimize_prob(config)
    _emit(args, result.to_json(), result.to_table())
    return EXIT_OK


def cmd_sweep(args) -> int:
    rows = sweep_family(args.family, args.n)
    _emit(args, {"family": args.family, "n": args.n, "rows": [r.to_json() for r in rows]},
          sweep_table(rows))
    return EXIT_OK


def report_all(precision=DEFAULT_TARGET_WIDTH, seed: int = verifier.DEFAULT_SEED,
               stress_count: int = 500) -> VerificationReport:
    """The full verification battery as one report."""
    return verifier.full_battery(precision, seed, stress_count=stress_count)


def cmd_report(args) -> int:
    return _emit_report(args, report_all(args.precision, args.seed, args.count))


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

VERIFY_TARGETS = ("main-constant", "f-properties", "lemma1", "lemma2", "xi", "convexity",
                  "bd", "main")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--threads", type=int, default=None, help="worker threads")

    parser = _Parser(prog="signsum", description="Certified checks for Rademacher sums "
                     "and the Gaussian-tail lower bound on P[|S| <= 1].")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("dist", parents=[common], help="enumerate the distribution of S")
    p.add_argument("--weights", required=True)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("prob", parents=[common], help="P[|x + S| <= t]")
    p.add_argument("--weights", required=True)
    p.add_argument("--offset", type=_real, default=Fraction(0))
    p.add_argument("--threshold", type=_rational, default=Fraction(1))
    p.set_defaults(func=cmd_prob)

    p = sub.add_parser("tail", parents=[common], help="P[S >= x]")
    p.add_argument("--weights", required=True)
    p.add_argument("--x", type=_real, required=True)
    p.set_defaults(func=cmd_tail)

    p = sub.add_parser("fvalue", parents=[common], help="enclosure of F(c)")
    p.add_argument("--c", type=_positive_real, required=True)
    p.add_argument("--width", type=_positive_real, default=DEFAULT_TARGET_WIDTH)
    p.set_defaults(func=cmd_fvalue)

    p = sub.add_parser("bound", parents=[common], help="enclosure of Q(x)/(4Q(sqrt 2))")
    p.add_argument("--x", type=_real, required=True)
    p.add_argument("--width", type=_positive_real, default=DEFAULT_TARGET_WIDTH)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", parents=[common], help="run one verification")
    p.add_argument("target", choices=VERIFY_TARGETS)
    p.add_argument("--kmax", type=int, default=verifier.DEFAULT_KMAX)
    p.add_argument("--value", type=_rational, default=None, help="xi for the xi target")
    p.add_argument("--weights", default=None)
    p.add_argument("--c", type=_positive_real, default=None)
    p.add_argument("--x", type=_real, default=None)
    p.add_argument("--count", type=int, default=500, help="instances for stress targets")
    p.add_argument("--seed", type=int, default=verifier.DEFAULT_SEED)
    p.add_argument("--precision", type=_positive_real, default=DEFAULT_TARGET_WIDTH)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", parents=[common], help="search for small P[|S| <= 1]")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--denominator-bound", type=int, default=1000)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("sweep", parents=[common], help="P[|S| <= 1] over a family")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", parents=[common], help="run the full battery")
    p.add_argument("--precision", type=_positive_real, default=DEFAULT_TARGET_WIDTH)
    p.add_argument("--seed", type=int, default=verifier.DEFAULT_SEED)
    p.add_argument("--count", type=int, default=500, help="instances per stress suite")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.threads is not None:
            if args.threads < 1:
                raise UsageError("--threads must be at least 1")
            os.environ["SIGNSUM_THREADS"] = str(args.threads)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CapacityError, PrecisionExhausted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ContractError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
