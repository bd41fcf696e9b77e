"""Command line front end.

Subcommands: ``validate``, ``run``, ``sweep``, ``construct``, ``zoo``.
Exit codes follow one contract everywhere: 0 means the requested claim
holds, 1 means the machine or sweep failed it (invariant violations,
counterexamples, indeterminate strings), 2 means the request itself was
unusable (bad flags, unreadable files). Reports are plain tab-separated
text and are byte-identical across runs for identical inputs.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

from . import constructions, recognition
from .automata import ClassicalAutomaton, accept_value, accept_value_normalized, run
from .exactnum import RationalParseError, parse_rational, render_rational
from .fileformat import (
    FormatError,
    dumps_automaton,
    load_automaton,
    load_counter_spec,
    save_automaton,
)
from .quantum import DEFAULT_KAPPA, QuantumAutomaton, qfa_accept, qfa_final_density
from .recognition import BUILTIN_ORACLES, SweepReport, dfa_oracle, sweep

USAGE_ERROR = 2
CLAIM_FAILED = 1


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except RationalParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _render_value(value, kappa: float) -> str:
    if isinstance(value, Fraction):
        return render_rational(value)
    # Floats are rounded to the comparison tolerance so reports do not
    # pretend to more precision than the channel checks guarantee.
    digits = max(1, round(-math.log10(kappa))) if kappa > 0 else 15
    return f"{value:.{digits}f}"


def _print_violations(violations) -> int:
    for line in violations:
        print(line)
    if violations:
        print(f"invalid: {len(violations)} violation(s)")
        return CLAIM_FAILED
    print("ok")
    return 0


def cmd_validate(args) -> int:
    machine = load_automaton(args.path)
    if isinstance(machine, QuantumAutomaton):
        return _print_violations(machine.violations(args.kappa))
    return _print_violations(machine.violations())


def cmd_run(args) -> int:
    machine = load_automaton(args.path)
    w = args.input
    if isinstance(machine, QuantumAutomaton):
        if args.normalized:
            print("error: --normalized applies to affine machines only", file=sys.stderr)
            return USAGE_ERROR
        rho = qfa_final_density(machine, w)
        value = qfa_accept(machine, w)
        print("final " + " ".join(_render_value(float(p), args.kappa) for p in rho.diagonal()))
        print("value " + _render_value(value, args.kappa))
        return 0
    if args.normalized:
        if machine.kind != "afa":
            print("error: --normalized applies to affine machines only", file=sys.stderr)
            return USAGE_ERROR
        value = accept_value_normalized(machine, w)
        print("value " + render_rational(value))
        return 0
    final = run(machine, w)
    print("final " + " ".join(render_rational(x) for x in final))
    print("value " + render_rational(accept_value(machine, w)))
    return 0


def _resolve_oracle(spec: str):
    if spec in BUILTIN_ORACLES:
        return BUILTIN_ORACLES[spec]()
    machine = load_automaton(spec)
    if not isinstance(machine, ClassicalAutomaton) or machine.kind != "dfa":
        raise FormatError(f"{spec}: oracle files must hold a dfa")
    return dfa_oracle(machine)


def render_report(report: SweepReport) -> str:
    """Tab-separated sweep report: one row per string, then aggregates."""
    lines = ["string\tvalue\tmember\tagrees"]
    for record in report.records:
        agrees = {"agree": "1", "disagree": "0", "indeterminate": "?"}[record.verdict]
        lines.append(
            f"{record.string}\t{_render_value(record.value, report.kappa)}"
            f"\t{int(record.member)}\t{agrees}"
        )
    lines.append("")
    lines.append(f"mode\t{report.mode}")
    lines.append(f"cutpoint\t{render_rational(report.cutpoint)}")
    lines.append(f"maxlen\t{report.maxlen}")
    lines.append(f"strings\t{len(report.records)}")
    lines.append(f"counterexamples\t{len(report.counterexamples)}")
    lines.append(f"indeterminate\t{len(report.indeterminate)}")

    def extreme(value):
        return "-" if value is None else _render_value(value, report.kappa)

    lines.append(f"min_member_value\t{extreme(report.min_member_value)}")
    lines.append(f"max_nonmember_value\t{extreme(report.max_nonmember_value)}")
    if report.mode == "isolation":
        # Width between the two populations; twice the isolation radius
        # when the cutpoint sits midway between them.
        lines.append(f"gap\t{extreme(report.gap)}")
    for w in report.counterexamples:
        lines.append(f"counterexample\t{w}")
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> int:
    machine = load_automaton(args.path)
    oracle = _resolve_oracle(args.oracle)
    report = sweep(machine, args.cutpoint, args.mode, oracle, args.maxlen, args.kappa)
    text = render_report(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.ok else CLAIM_FAILED


def cmd_construct(args) -> int:
    kind = args.construction
    inputs = args.inputs
    expected = 2 if kind == "tensor" else 1
    if len(inputs) != expected:
        print(f"error: {kind} takes {expected} input file(s)", file=sys.stderr)
        return USAGE_ERROR

    def classical(path) -> ClassicalAutomaton:
        machine = load_automaton(path)
        if not isinstance(machine, ClassicalAutomaton):
            raise FormatError(f"{path}: expected a classical machine")
        return machine

    def need(flag_name, value):
        if value is None:
            raise FormatError(f"{kind} needs {flag_name}")
        return value

    if kind == "shift-interior":
        result = constructions.shift_interior(
            classical(inputs[0]),
            need("--from-cutpoint", args.from_cutpoint),
            need("--to-cutpoint", args.to_cutpoint),
        )
    elif kind == "shift-zero":
        result = constructions.shift_extreme(classical(inputs[0]), "zero", need("--to-cutpoint", args.to_cutpoint))
    elif kind == "shift-one":
        result = constructions.shift_extreme(classical(inputs[0]), "one", need("--to-cutpoint", args.to_cutpoint))
    elif kind == "pfa-to-nafa":
        result = constructions.exclusive_pfa_to_nafa(classical(inputs[0]))
    elif kind == "afa-to-nqfa":
        result = constructions.afa_to_nqfa(classical(inputs[0]))
    elif kind == "tensor":
        result = constructions.tensor(classical(inputs[0]), classical(inputs[1]))
    elif kind == "counters":
        result = constructions.compile_blind_counters(load_counter_spec(inputs[0]))
    else:  # pragma: no cover - argparse restricts choices
        raise AssertionError(kind)
    _write_machine(result, args.out)
    return 0


def cmd_zoo(args) -> int:
    params = {}
    if args.name == "m2_eq":
        if args.x is None:
            print("error: m2_eq needs --x", file=sys.stderr)
            return USAGE_ERROR
        params["x"] = args.x
    elif args.x is not None:
        print(f"error: --x applies to m2_eq only, not {args.name}", file=sys.stderr)
        return USAGE_ERROR
    _write_machine(constructions.zoo(args.name, **params), args.out)
    return 0


def _write_machine(machine, out) -> None:
    if out:
        save_automaton(machine, out)
    else:
        sys.stdout.write(dumps_automaton(machine))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="afa",
        description="Evaluate, check and construct affine, probabilistic and quantum finite automata.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a machine file's matrix invariants")
    p.add_argument("path")
    p.add_argument("--kappa", type=float, default=DEFAULT_KAPPA)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("run", help="evaluate one input string")
    p.add_argument("path")
    p.add_argument("--input", default="", help="input string (default: empty)")
    p.add_argument("--normalized", action="store_true", help="use the renormalizing affine semantics")
    p.add_argument("--kappa", type=float, default=DEFAULT_KAPPA)
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("sweep", help="compare a machine against an oracle on all short strings")
    p.add_argument("path")
    p.add_argument("--cutpoint", type=_rational_arg, required=True)
    p.add_argument("--mode", choices=recognition.MODES, default="cutpoint")
    p.add_argument("--oracle", required=True, help="eq, lapins, abseq, or a dfa file path")
    p.add_argument("--maxlen", type=int, required=True)
    p.add_argument("--kappa", type=float, default=DEFAULT_KAPPA)
    p.add_argument("--out", help="write the report here instead of stdout")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("construct", help="derive a new machine file")
    p.add_argument(
        "construction",
        choices=[
            "shift-interior",
            "shift-zero",
            "shift-one",
            "pfa-to-nafa",
            "afa-to-nqfa",
            "tensor",
            "counters",
        ],
    )
    p.add_argument("inputs", nargs="+", help="input machine file(s)")
    p.add_argument("--from-cutpoint", dest="from_cutpoint", type=_rational_arg)
    p.add_argument("--to-cutpoint", dest="to_cutpoint", type=_rational_arg)
    p.add_argument("--out", help="write the machine here instead of stdout")
    p.set_defaults(fn=cmd_construct)

    p = sub.add_parser("zoo", help="emit a reference machine")
    p.add_argument("name", choices=list(constructions.ZOO_NAMES))
    p.add_argument("--x", type=_rational_arg, help="scale for m2_eq")
    p.add_argument("--out", help="write the machine here instead of stdout")
    p.set_defaults(fn=cmd_zoo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; keep both.
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
