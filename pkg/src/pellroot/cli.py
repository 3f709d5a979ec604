"""Command line front end.

Exit codes: 0 success, 2 invalid input, 3 construction not applicable,
4 evaluation disagrees with the oracle, 5 reference corpus mismatch.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from fractions import Fraction
from typing import Optional, Sequence

from ._intstr import int_to_decimal as dec
from .builder import NotApplicable, NotApplicableError, SeriesSpec, Theorem, build, iter_outcomes
from .corpus import load_corpus, replay
from .evaluate import PrecisionOverflow, digits_per_term, evaluate, terms_needed
from .hyper import SeriesFamily
from .pell import InvalidInstance, PellInstance, PellSolution, amplify_power, fundamental_solution, integer_sqrt

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NOT_APPLICABLE = 3
EXIT_ORACLE_ALARM = 4
EXIT_CORPUS_MISMATCH = 5


class CliError(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3):
        if n % q == 0:
            return n == q
    f = 5
    limit = integer_sqrt(n)
    while f <= limit:
        if n % f == 0 or n % (f + 2) == 0:
            return False
        f += 6
    return True


def _instance(p: int, prime_only: bool = False) -> PellInstance:
    try:
        inst = PellInstance(p)
    except InvalidInstance as exc:
        raise CliError(str(exc), EXIT_INVALID) from exc
    if prime_only and not is_prime(p):
        raise CliError(f"p={p} is not prime (--prime-only)", EXIT_INVALID)
    return inst


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def _solution(p: int, power: int, prime_only: bool) -> PellSolution:
    return amplify_power(fundamental_solution(_instance(p, prime_only)), power)


def _frac(q: Fraction) -> str:
    return dec(q.numerator) if q.denominator == 1 else f"{dec(q.numerator)}/{dec(q.denominator)}"


def _latex_frac(q: Fraction) -> str:
    sign = "-" if q < 0 else ""
    return f"{sign}\\frac{{{dec(abs(q.numerator))}}}{{{dec(q.denominator)}}}"


def _pochhammer(params: Sequence[Fraction]) -> str:
    return "".join(f"({_frac(a)})_k" for a in params)


def render_latex(spec: SeriesSpec) -> str:
    family: SeriesFamily = spec.family
    top = _pochhammer(family.numerator_params)
    bottom = "k!" + _pochhammer(family.denominator_params)
    return (
        f"\\sqrt{{{spec.p}}}={_latex_frac(spec.prefactor)}\\sum_{{k=0}}^{{\\infty}}"
        f"\\frac{{{top}}}{{{bottom}}}\\bigg({_latex_frac(spec.argument)}\\bigg)^k"
    )


def render_text(spec: SeriesSpec) -> str:
    return (
        f"{spec.theorem.value}  c={_frac(spec.prefactor)}  z={_frac(spec.argument)}  "
        f"family={spec.family.name}  (p={spec.p}, n={dec(spec.n)}, m={dec(spec.m)})"
    )


def cmd_solve(args: argparse.Namespace) -> int:
    sol = _solution(args.p, args.power, args.prime_only)
    if args.json:
        print(json.dumps({"p": dec(sol.p), "s": dec(args.power), "x": dec(sol.x), "y": dec(sol.y)}))
    else:
        print(f"x={dec(sol.x)} y={dec(sol.y)}")
    return EXIT_OK


def cmd_series(args: argparse.Namespace) -> int:
    sol = _solution(args.p, args.power, args.prime_only)
    if args.theorem == "all":
        specs = []
        for outcome in iter_outcomes(args.p, [args.power]):
            if isinstance(outcome, NotApplicable):
                print(f"note: {outcome.theorem.value} not applicable for m={outcome.m}", file=sys.stderr)
            else:
                specs.append(outcome)
    else:
        try:
            specs = [build(args.theorem, sol)]
        except NotApplicableError as exc:
            raise CliError(f"not applicable: {exc}", EXIT_NOT_APPLICABLE) from exc
    if args.json:
        print(json.dumps([s.to_dict() for s in specs] if args.theorem == "all" else specs[0].to_dict()))
    else:
        for spec in specs:
            print(render_latex(spec) if args.latex else render_text(spec))
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    sol = _solution(args.p, args.power, args.prime_only)
    try:
        spec = build(args.theorem, sol)
    except NotApplicableError as exc:
        raise CliError(f"not applicable: {exc}", EXIT_NOT_APPLICABLE) from exc
    try:
        report = evaluate(spec, args.digits)
    except PrecisionOverflow as exc:
        raise CliError(str(exc), EXIT_INVALID) from exc
    if args.json:
        print(json.dumps(report.to_dict()))
    else:
        print(report.decimal)
        print(f"terms_used={report.terms_used} oracle_agrees={str(report.oracle_agrees).lower()}")
    if not report.oracle_agrees:
        print("oracle alarm: series result disagrees with integer square root", file=sys.stderr)
        return EXIT_ORACLE_ALARM
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace) -> int:
    entries = load_corpus(args.corpus)
    if args.only_p is not None:
        entries = [e for e in entries if e.p == args.only_p]
    results = replay(entries, digits=args.digits, jobs=args.jobs)
    for r in results:
        print(r.line())
    passed = sum(r.ok for r in results)
    print(f"{passed}/{len(results)} passed")
    failed = [r for r in results if not r.ok]
    if failed:
        for r in failed:
            print(f"mismatch: {r.entry.locator}: {'; '.join(r.problems)}", file=sys.stderr)
        return EXIT_CORPUS_MISMATCH
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    _instance(args.p, args.prime_only)
    base = fundamental_solution(args.p)
    rows = []
    for theorem in Theorem:
        for s in args.powers:
            sol = amplify_power(base, s)
            try:
                spec = build(theorem, sol)
            except NotApplicableError:
                rows.append((theorem.value, s, "n/a", "n/a"))
                continue
            rows.append((theorem.value, s, terms_needed(spec, args.digits), f"{digits_per_term(spec):.2f}"))
    header = ("theorem", "s", "terms", "digits_per_term")
    if args.csv:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    else:
        print(f"sqrt({args.p}) to {args.digits} digits")
        print(f"{header[0]:<8}{header[1]:>3}{header[2]:>8}{header[3]:>17}")
        for t, s, k, rate in rows:
            print(f"{t:<8}{s:>3}{k:>8}{rate:>17}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pellroot", description="Pell-accelerated series for sqrt(p).")
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser, power: bool = True) -> None:
        sp.add_argument("p", type=int, help="positive nonsquare integer")
        sp.add_argument("--prime-only", action="store_true", help="reject composite p")
        if power:
            sp.add_argument("--power", type=_positive, default=1, help="solution power s (default 1)")

    sp = sub.add_parser("solve", help="fundamental or amplified Pell solution")
    common(sp)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("series", help="build series constants")
    common(sp)
    sp.add_argument("--theorem", choices=[*"ABCDEF", "all"], default="all")
    fmt = sp.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--latex", action="store_true")
    sp.set_defaults(func=cmd_series)

    sp = sub.add_parser("eval", help="evaluate sqrt(p) to a number of digits")
    common(sp)
    sp.add_argument("--theorem", choices=list("ABCDEF"), default="A")
    sp.add_argument("--digits", type=_nonnegative, default=50)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("reproduce", help="replay the 72 reference expansions")
    sp.add_argument("--only-p", type=int, default=None)
    sp.add_argument("--corpus", default=None, help="alternate corpus JSON file")
    sp.add_argument("--digits", type=_positive, default=30)
    sp.add_argument("--jobs", type=_positive, default=1)
    sp.set_defaults(func=cmd_reproduce)

    sp = sub.add_parser("bench", help="terms needed per construction and power")
    common(sp, power=False)
    sp.add_argument("--digits", type=_positive, default=100)
    sp.add_argument("--powers", type=_positive, nargs="+", default=[1, 2, 3, 4])
    sp.add_argument("--csv", action="store_true")
    sp.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
