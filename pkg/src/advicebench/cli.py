"""Command line front end.

Machines and words come from an optional JSON document, from the builtin
registry, from inline lasso literals like ``ab·(ba)^ω``, or (for machines)
from standard input with ``-``. Exit codes: 0 success or equal or pass,
1 divergence or failure, 2 usage or document errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import corpus
from .analysis import Equal, padding_check, prefix_equiv, subword_complexity
from .checks import SUITES, run_suite
from .documents import dumps, load_document, machine_from_doc, machine_to_doc
from .errors import AdviceBenchError, ParseError, UnresolvedReference
from .ltl import parse_formula
from .mealy import MealyMachine, run_mealy
from .pi_transforms import normalize_directions_on_pi, one_way_simulation_on_pi
from .sst import Sst, SimpleSst, compile_sst_to_2wftb, eliminate_lookbehind_lasso, run_sst, simplify_to_simple_sst
from .transducers import (
    DEFAULT_BUDGET,
    LookbehindTransducer,
    OneWayTransducer,
    TwoWayTransducer,
    remove_endmarker,
    run_1wft,
    run_2wft,
    run_2wft_b,
)
from .words import LassoWord, lasso, render_letter


class UsageError(Exception):
    pass


def parse_word_literal(text: str):
    """Inline lasso syntax: optional prefix, then a parenthesized period
    followed by ^ω (or ^w): for example (ab#)^ω or ab·(ba)^w."""
    body = text.strip()
    for omega in ("^ω", "^w"):
        if body.endswith(omega):
            body = body[: -len(omega)]
            break
    else:
        return None
    if not body.endswith(")"):
        return None
    open_idx = body.rfind("(")
    if open_idx < 0:
        return None
    period = body[open_idx + 1: -1]
    prefix = body[:open_idx]
    for sep in ("·", "."):
        if prefix.endswith(sep):
            prefix = prefix[: -len(sep)]
            break
    if not period:
        return None
    return lasso(prefix, period)


class Workspace:
    def __init__(self, document=None):
        self.document = document
        self.builtin_words = corpus.builtin_words()
        self.builtin_machines = corpus.builtin_machines()

    def word(self, spec: str):
        literal = parse_word_literal(spec)
        if literal is not None:
            return literal
        if self.document and spec in self.document.words:
            return self.document.words[spec]
        if spec in self.builtin_words:
            return self.builtin_words[spec]
        raise UnresolvedReference(spec)

    def machine(self, spec: str):
        if spec == "-":
            data = json.load(sys.stdin)
            return machine_from_doc(data)
        if self.document and spec in self.document.machines:
            return self.document.machines[spec]
        if spec in self.builtin_machines:
            return self.builtin_machines[spec]
        raise UnresolvedReference(spec)

    def formula(self, spec: str):
        if self.document and spec in self.document.formulas:
            return self.document.formulas[spec]
        return parse_formula(spec)


def _run_machine(machine, source, budget):
    if isinstance(machine, MealyMachine):
        return run_mealy(machine, source)
    if isinstance(machine, SimpleSst) or isinstance(machine, Sst):
        return run_sst(machine, source, budget)
    if isinstance(machine, OneWayTransducer):
        return run_1wft(machine, source, budget)
    if isinstance(machine, LookbehindTransducer):
        return run_2wft_b(machine, source, budget)
    if isinstance(machine, TwoWayTransducer):
        return run_2wft(machine, source, budget)
    raise UsageError(f"machine of kind {type(machine).__name__} cannot be run")


def cmd_words(ws: Workspace, args) -> int:
    names = set(ws.builtin_words)
    if ws.document:
        names |= set(ws.document.words)
    for name in sorted(names):
        print(name)
    return 0


def cmd_run(ws: Workspace, args) -> int:
    machine = ws.machine(args.machine)
    source = ws.word(args.word)
    stream = _run_machine(machine, source, args.budget)
    if hasattr(stream, "try_letters"):
        letters, halt = stream.try_letters(args.letters)
    else:
        letters, halt = [stream.letter(i) for i in range(args.letters)], None
    print("".join(render_letter(a) for a in letters))
    if halt is not None:
        print(f"stalled: {halt}", file=sys.stderr)
        return 1
    return 0


def cmd_compare(ws: Workspace, args) -> int:
    budget = args.budget

    def source(spec):
        try:
            return ws.word(spec)
        except UnresolvedReference:
            machine = ws.machine(spec)
            word_arg = args.word
            if word_arg is None:
                raise UsageError("comparing a machine needs --word for its input")
            return _run_machine(machine, ws.word(word_arg), budget)

    verdict = prefix_equiv(source(args.left), source(args.right), args.letters)
    print(verdict)
    return 0 if isinstance(verdict, Equal) else 1


def cmd_convert(ws: Workspace, args) -> int:
    machine = ws.machine(args.machine)
    kind = args.kind
    if kind == "sst2wftb":
        result = compile_sst_to_2wftb(machine)
    elif kind == "simplify":
        result = simplify_to_simple_sst(machine, _lasso_arg(ws, args))
    elif kind == "unlookbehind":
        result = eliminate_lookbehind_lasso(machine, _lasso_arg(ws, args), budget=args.budget)
    elif kind == "normalize-pi":
        result = normalize_directions_on_pi(machine)
    elif kind == "oneway-pi":
        result = one_way_simulation_on_pi(machine, c_max=args.cmax).transducer
    elif kind == "remove-endmarker":
        source = ws.word(args.input) if args.input else lasso("", "ab")
        result = remove_endmarker(machine, source, budget=args.budget)
    else:
        raise UsageError(f"unknown conversion {kind!r}")
    print(dumps(machine_to_doc(result)))
    return 0


def _lasso_arg(ws: Workspace, args) -> LassoWord:
    if not args.input:
        raise UsageError("this conversion needs --input <lasso word>")
    source = ws.word(args.input)
    if not isinstance(source, LassoWord):
        raise UsageError("this conversion needs an ultimately periodic input word")
    return source


def cmd_analyze(ws: Workspace, args) -> int:
    if args.what == "complexity":
        profile = subword_complexity(ws.word(args.subject), args.kmax, args.window)
        if args.json:
            print(json.dumps({
                "counts": profile.counts,
                "exact": profile.exact,
                "stable": profile.stable,
                "window": profile.window,
            }, sort_keys=True))
        else:
            print("k\tcount\texact\tstable")
            for k in sorted(profile.counts):
                print(f"{k}\t{profile.counts[k]}\t{profile.exact[k]}\t{profile.stable[k]}")
        return 0
    if args.what == "padding":
        formula = ws.formula(args.subject)
        advice = ws.word(args.word)
        if not isinstance(advice, LassoWord):
            raise UsageError("padding analysis needs an ultimately periodic advice word")
        table = padding_check(formula, advice, n_range=args.range)
        if args.json:
            print(json.dumps({"entries": table.entries, "cap": table.cap,
                              "stabilization": table.stabilization}))
        else:
            print("n\tpadding")
            for n, entry in enumerate(table.entries):
                print(f"{n}\t{'-' if entry is None else entry}")
        return 0
    raise UsageError(f"unknown analysis {args.what!r}")


def cmd_check(ws: Workspace, args) -> int:
    try:
        results = run_suite(args.suite)
    except KeyError:
        raise UsageError(
            f"unknown suite {args.suite!r}; available: all, " + ", ".join(sorted(SUITES))
        )
    for result in results:
        print(result.line())
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="advicebench",
        description="run, convert, compare and analyze automata over infinite words",
    )
    parser.add_argument("-f", "--file", help="JSON document with named words/machines/formulas")
    parser.add_argument("--budget", type=int,
                        default=int(os.environ.get("ADVICEBENCH_BUDGET", DEFAULT_BUDGET)),
                        help="step budget per requested output letter")
    parser.add_argument("--json", action="store_true", help="machine-readable reports")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("words", help="list known word names")

    p_run = sub.add_parser("run", help="print output letters of a machine on a word")
    p_run.add_argument("machine")
    p_run.add_argument("word")
    p_run.add_argument("-n", "--letters", type=int, default=40)

    p_cmp = sub.add_parser("compare", help="letterwise comparison of two words")
    p_cmp.add_argument("left")
    p_cmp.add_argument("right")
    p_cmp.add_argument("-n", "--letters", type=int, default=100)
    p_cmp.add_argument("--word", help="input word when comparing machine runs")

    p_conv = sub.add_parser("convert", help="emit a converted machine document")
    p_conv.add_argument("kind", choices=["sst2wftb", "simplify", "unlookbehind",
                                         "normalize-pi", "oneway-pi", "remove-endmarker"])
    p_conv.add_argument("machine")
    p_conv.add_argument("--input", help="input word for input-relative conversions")
    p_conv.add_argument("--cmax", type=int, default=4)

    p_an = sub.add_parser("analyze", help="word measurements")
    p_an.add_argument("what", choices=["complexity", "padding"])
    p_an.add_argument("subject", help="word name (complexity) or formula (padding)")
    p_an.add_argument("word", nargs="?", help="advice word for padding analysis")
    p_an.add_argument("--kmax", type=int, default=6)
    p_an.add_argument("--window", type=int, default=2048)
    p_an.add_argument("--range", type=int, default=30)

    p_chk = sub.add_parser("check", help="run a named check suite")
    p_chk.add_argument("suite")
    return parser


COMMANDS = {
    "words": cmd_words,
    "run": cmd_run,
    "compare": cmd_compare,
    "convert": cmd_convert,
    "analyze": cmd_analyze,
    "check": cmd_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    document = None
    try:
        if args.file:
            document = load_document(args.file)
        ws = Workspace(document)
        return COMMANDS[args.command](ws, args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, UnresolvedReference) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AdviceBenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
