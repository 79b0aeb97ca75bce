"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 translation error, 3 a validation
counterexample was found.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, TextIO

from . import __version__
from .automata import Ldba, eliminate_jumps
from .determinize import BudgetExceeded
from .hoa import HoaError, emit_dot, emit_hoa, parse_hoa
from .ltl import LtlSyntaxError, NNFError, to_text
from .ltl2ldba import translate
from .pipeline import (
    FAMILIES,
    PipelineConfig,
    bench_families,
    crossvalidate,
    formula_of,
    rand_ldba,
    translate_ldba,
    translate_pipeline,
)

EXIT_OK, EXIT_USAGE, EXIT_TRANSLATION, EXIT_COUNTEREXAMPLE = 0, 1, 2, 3

TRANSLATION_ERRORS = (LtlSyntaxError, NNFError, HoaError, BudgetExceeded, ValueError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 by default
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("-f", "--formula", help="LTL formula, e.g. 'F G a | F G b'")
    src.add_argument("--input-hoa", metavar="PATH", help="LDBA in HOA format ('-' for stdin)")


def _add_construction(p: argparse.ArgumentParser) -> None:
    p.add_argument("--no-reduce", action="store_true", help="skip the oracle-based reduction")
    p.add_argument("--no-compress", action="store_true", help="keep raw colors")
    p.add_argument("--no-minimize", action="store_true",
                   help="skip per-SCC color normalization and state merging")
    p.add_argument("--keep-smallest", action="store_true",
                   help="never remove the index-1 vertex during reduction")
    p.add_argument("--budget", type=int, default=10 ** 6, metavar="N",
                   help="maximum number of ranking states (default 1000000)")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rankdpa", description="LTL to LDBA to DPA translation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    t = sub.add_parser("translate", help="translate a formula or an LDBA to a DPA")
    _add_source(t)
    _add_construction(t)
    t.add_argument("--ldba", action="store_true", help="emit the intermediate LDBA instead")
    t.add_argument("--race", action="store_true", help="also translate the negation; keep the smaller")
    t.add_argument("--format", choices=("hoa", "dot", "json"), default="hoa")
    t.add_argument("-o", "--output", metavar="PATH", help="write here instead of stdout")

    c = sub.add_parser("check", help="cross-validate all constructions on lasso words")
    _add_source(c)
    _add_construction(c)
    c.add_argument("--max-prefix", type=int, default=3)
    c.add_argument("--max-period", type=int, default=3)
    c.add_argument("--samples", type=int, default=None,
                   help="check this many random lassos instead of all of them")

    r = sub.add_parser("rand-ldba", help="print a random valid LDBA")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--states", type=int, default=5)
    r.add_argument("--letters", type=int, default=2)
    r.add_argument("--density", type=float, default=0.3)
    r.add_argument("--acc-density", type=float, default=0.3)
    r.add_argument("--format", choices=("hoa", "dot"), default="hoa")

    b = sub.add_parser("bench", help="run the parametric formula families")
    b.add_argument("--family", choices=FAMILIES + ("all",), default="all")
    b.add_argument("--n-min", type=int, default=1)
    b.add_argument("--n-max", type=int, default=2)
    b.add_argument("--csv", metavar="PATH", help="CSV output path (default stdout)")
    b.add_argument("--budget", type=int, default=10 ** 6, metavar="N")
    b.add_argument("--validate", action="store_true", help="cross-validate each result")
    return parser


def _config(args) -> PipelineConfig:
    try:
        return PipelineConfig(
            reduce=not args.no_reduce, compress=not args.no_compress,
            minimize=not args.no_minimize, keep_smallest=args.keep_smallest,
            race=getattr(args, "race", False), budget=args.budget, seed=args.seed,
            output_format=getattr(args, "format", "hoa"),
            max_prefix=getattr(args, "max_prefix", 3), max_period=getattr(args, "max_period", 3),
            samples=getattr(args, "samples", None))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _read_hoa(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_ldba(path: str) -> Ldba:
    x = parse_hoa(_read_hoa(path))
    if not isinstance(x, Ldba):
        raise HoaError("expected a Buchi automaton (LDBA), got a parity automaton")
    return x


def _write(text: str, path: Optional[str], out: TextIO) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)


def cmd_translate(args, out: TextIO) -> int:
    cfg = _config(args)
    if args.ldba:
        if args.formula is None:
            raise UsageError("--ldba needs --formula")
        ldba = translate(formula_of(args.formula), budget=cfg.ldba_budget)
        if args.format == "dot":
            text = emit_dot(ldba)
        elif args.format == "json":
            e = eliminate_jumps(ldba)
            text = json.dumps({"states": e.num_states, "qd": len(e.qd),
                               "accepting": len(e.accepting), "hoa": emit_hoa(e)}, indent=2) + "\n"
        else:
            text = emit_hoa(ldba, name=args.formula)
        _write(text, args.output, out)
        return EXIT_OK
    if args.formula is not None:
        res = translate_pipeline(args.formula, cfg)
        name = args.formula
    else:
        res = translate_ldba(_load_ldba(args.input_hoa), cfg)
        name = None
    if args.format == "dot":
        text = emit_dot(res.dpa)
    elif args.format == "json":
        stats = dict(res.stats)
        stats["formula"] = to_text(res.formula) if res.formula is not None else None
        stats["hoa"] = emit_hoa(res.dpa, name=name)
        text = json.dumps(stats, indent=2) + "\n"
    else:
        text = emit_hoa(res.dpa, name=name)
    _write(text, args.output, out)
    return EXIT_OK


def cmd_check(args, out: TextIO) -> int:
    cfg = _config(args)
    source = args.formula if args.formula is not None else _load_ldba(args.input_hoa)
    report = crossvalidate(source, cfg)
    out.write(str(report) + "\n")
    return EXIT_OK if report.ok else EXIT_COUNTEREXAMPLE


def cmd_rand(args, out: TextIO) -> int:
    try:
        a = rand_ldba(args.seed, args.states, args.letters, args.density, args.acc_density)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out.write(emit_dot(a) if args.format == "dot" else emit_hoa(a))
    return EXIT_OK


def cmd_bench(args, out: TextIO) -> int:
    if args.n_min < 1 or args.n_max < args.n_min:
        raise UsageError("need 1 <= --n-min <= --n-max")
    fams = FAMILIES if args.family == "all" else (args.family,)
    cfg = PipelineConfig(budget=args.budget)
    ns = range(args.n_min, args.n_max + 1)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            recs = bench_families(fams, ns, cfg, fh, validate=args.validate)
    else:
        recs = bench_families(fams, ns, cfg, out, validate=args.validate)
    if args.validate and any(r.ok is False for r in recs):
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


def main(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    handler = {"translate": cmd_translate, "check": cmd_check, "rand-ldba": cmd_rand,
               "bench": cmd_bench}[args.command]
    try:
        return handler(args, out)
    except UsageError as exc:
        sys.stderr.write(f"rankdpa: error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"rankdpa: error: {exc}\n")
        return EXIT_USAGE
    except TRANSLATION_ERRORS as exc:
        sys.stderr.write(f"rankdpa: translation error: {exc}\n")
        return EXIT_TRANSLATION


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
