"""Command-line interface and the small expression language used for tau/mu inputs.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := integer | "sqrt" "(" expr ")" | "log" "(" expr ")" | "(" expr ")"
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Sequence

from . import contfrac
from .highprec import (
    DEFAULT_SCALE,
    DivisorNotCertifiedNonzero,
    FixedReal,
    NonPositiveInput,
    ln,
    sqrt,
)
from .linearforms import QuadraticAlgebraic, height_bound, height_quadratic
from .reduction import ReductionProblem, reduce
from .sequences import SEQUENCES
from .solver import (
    Context,
    ProofReport,
    ProveConfig,
    SearchSpace,
    StageFailure,
    brute_force,
    dec,
    get_theorem,
    prove,
    stage_matveev_a,
    stage_matveev_b,
    trivial_cases,
)

# -- expressions -----------------------------------------------------------------


@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class Sqrt:
    arg: "Expr"


@dataclass(frozen=True)
class Log:
    arg: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


Expr = Int | Sqrt | Log | Add | Sub | Mul | Div

_ADDITIVE = {"+": Add, "-": Sub, "−": Sub}
_MULTIPLICATIVE = {"*": Mul, "/": Div}
_FACTOR_START = ("integer", "sqrt", "log", "(")


class ExprSyntaxError(SyntaxError):
    """Raised with the UTF-8 byte offset of the offending position and what would have been accepted."""

    def __init__(self, position: int, expected: Sequence[str], found: str):
        self.position = position
        self.expected = tuple(expected)
        self.found = found
        super().__init__(f"at byte {position}: expected one of {', '.join(self.expected)}; found {found}")


class DomainError(ValueError):
    def __init__(self, subexpr: "Expr", reason: str):
        self.subexpr = subexpr
        super().__init__(f"{reason}: {to_string(subexpr)}")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def offset(self) -> int:
        return len(self.text[: self.i].encode("utf-8"))

    def skip(self) -> None:
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def fail(self, expected: Sequence[str]):
        self.skip()
        found = repr(self.text[self.i]) if self.i < len(self.text) else "end of input"
        raise ExprSyntaxError(self.offset(), expected, found)

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            self.fail([ch])
        self.i += 1

    def expr(self) -> Expr:
        node = self.term()
        while self.peek() in _ADDITIVE and self.peek():
            cls = _ADDITIVE[self.text[self.i]]
            self.i += 1
            node = cls(node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek() in _MULTIPLICATIVE and self.peek():
            cls = _MULTIPLICATIVE[self.text[self.i]]
            self.i += 1
            node = cls(node, self.factor())
        return node

    def factor(self) -> Expr:
        ch = self.peek()
        if ch.isdigit() and ch.isascii():
            start = self.i
            while self.i < len(self.text) and self.text[self.i].isascii() and self.text[self.i].isdigit():
                self.i += 1
            return Int(int(self.text[start : self.i]))
        if ch == "(":
            self.i += 1
            node = self.expr()
            self.expect(")")
            return node
        for name, cls in (("sqrt", Sqrt), ("log", Log)):
            if self.text.startswith(name, self.i):
                self.i += len(name)
                self.expect("(")
                node = cls(self.expr())
                self.expect(")")
                return node
        self.fail(_FACTOR_START)


def parse_expr(text: str) -> Expr:
    p = _Parser(text)
    node = p.expr()
    if p.peek():
        p.fail(["+", "-", "*", "/", "end of input"])
    return node


_SYMBOL = {Add: "+", Sub: "-", Mul: "*", Div: "/"}


def to_string(e: Expr) -> str:
    """Print with the fewest parentheses that still parse back to the same tree."""
    if isinstance(e, Int):
        return str(e.value)
    if isinstance(e, (Sqrt, Log)):
        return f"{type(e).__name__.lower()}({to_string(e.arg)})"
    left, right = to_string(e.left), to_string(e.right)
    if isinstance(e, (Mul, Div)):
        if isinstance(e.left, (Add, Sub)):
            left = f"({left})"
        if not isinstance(e.right, (Int, Sqrt, Log)):
            right = f"({right})"
    elif isinstance(e.right, (Add, Sub)):
        right = f"({right})"
    return f"{left}{_SYMBOL[type(e)]}{right}"


def eval_expr(e: Expr, scale: int = DEFAULT_SCALE) -> FixedReal:
    """Certified value of ``e`` at ``scale`` decimal places."""
    return _eval(e, scale + 10).rescale(scale)


def _eval(e: Expr, p: int) -> FixedReal:
    if isinstance(e, Int):
        return FixedReal.from_int(e.value, p)
    if isinstance(e, Sqrt):
        x = _eval(e.arg, p)
        if x.lo < 0:
            raise DomainError(e.arg, "sqrt argument not certified nonnegative")
        return sqrt(x)
    if isinstance(e, Log):
        x = _eval(e.arg, p)
        try:
            return ln(x, p)
        except NonPositiveInput:
            raise DomainError(e.arg, "log argument not certified positive") from None
    a, b = _eval(e.left, p), _eval(e.right, p)
    if isinstance(e, Add):
        return a + b
    if isinstance(e, Sub):
        return a - b
    if isinstance(e, Mul):
        return a * b
    try:
        return a / b
    except (DivisorNotCertifiedNonzero, ZeroDivisionError):
        raise DomainError(e.right, "divisor not certified nonzero") from None


# -- argument handling -------------------------------------------------------------

PRECISION_ENV = "REPDIFF_PRECISION"
_GLOBAL_DEFAULTS = {"precision": None, "paper_m_override": False, "report": None, "format": None}


class UsageError(Exception):
    pass


def _add_global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--precision", type=int, default=d(None), help=f"decimal digits (default {DEFAULT_SCALE}, "
                                                                   f"or ${PRECISION_ENV})")
    p.add_argument("--paper-m-override", action="store_true", default=d(False),
                   help="use the published intermediate bounds as M in the reductions")
    p.add_argument("--report", default=d(None), help="write the JSON result to this path")
    p.add_argument("--format", choices=("json", "text"), default=d(None), help="default text")
    p.add_argument("--config", default=d(None), help="JSON file whose keys are global flag names")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="repdiff", description="Balancing numbers as differences of repdigits.")
    _add_global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    seqs = sorted(SEQUENCES)
    p = add("solve", "run the full staged proof")
    p.add_argument("--sequence", choices=seqs, required=True)

    p = add("brute", "exhaustive search over a range of indices")
    p.add_argument("--sequence", choices=seqs, required=True)
    p.add_argument("--kmin", type=int, default=1)
    p.add_argument("--kmax", type=int, default=25)

    p = add("convergents", "continued-fraction convergents of an expression")
    p.add_argument("--tau", required=True)
    p.add_argument("--min-q", type=int, default=0)
    p.add_argument("--terms", type=int, default=None, help="how many convergents to print")

    p = add("reduce", "one Baker-Davenport reduction")
    p.add_argument("--tau", required=True)
    p.add_argument("--mu", action="append", required=True, help="repeatable")
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--first-q", type=int, default=None)

    p = add("matveev", "constants from the two applications of Matveev's theorem")
    p.add_argument("--sequence", choices=seqs, required=True)

    p = add("verify-lemmas", "bounded check of the repdigit and concatenation classifications")
    p.add_argument("--sequence", choices=seqs, default=None, help="default: both")
    p.add_argument("--kmax", type=int, default=1000)

    p = add("heights", "logarithmic heights of (a + b sqrt 2)/c or of a sequence's gamma terms")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--quadratic", nargs=3, type=int, metavar=("A", "B", "C"))
    g.add_argument("--sequence", choices=seqs)
    return parser


def _resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset global flags from --config, then the environment, then defaults."""
    cfg = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(raw, dict):
            raise UsageError("config must be a JSON object")
        for key, value in raw.items():
            name = key.lstrip("-").replace("-", "_")
            if name not in _GLOBAL_DEFAULTS:
                raise UsageError(f"unknown config key {key!r}")
            cfg[name] = value
    for name, default in _GLOBAL_DEFAULTS.items():
        if getattr(args, name) in (None, False) and name in cfg:
            setattr(args, name, cfg[name])
    if args.precision is None:
        env = os.environ.get(PRECISION_ENV)
        args.precision = int(env) if env else DEFAULT_SCALE
    if not isinstance(args.precision, int) or args.precision < 10:
        raise UsageError("precision must be an integer >= 10")
    if args.format is None:
        args.format = "text"
    if args.format not in ("json", "text"):
        raise UsageError(f"unknown format {args.format!r}")
    return args


def _expr_arg(text: str, scale: int) -> FixedReal:
    try:
        return eval_expr(parse_expr(text), scale)
    except (ExprSyntaxError, DomainError) as exc:
        raise UsageError(f"{text!r}: {exc}") from None


# -- subcommands ----------------------------------------------------------------------
# Each returns (exit code, JSON-ready payload, text lines).


def cmd_solve(args):
    try:
        report = prove(args.sequence, ProveConfig(precision=args.precision, paper_m_override=args.paper_m_override))
    except StageFailure as exc:
        return 1, {"sequence": args.sequence, "error": str(exc)}, [f"verification failed: {exc}"]
    lines = [f"{report.sequence} ({report.mode}, precision {report.precision})"]
    for st in report.stages:
        lines.append(f"  [{'ok' if st.certified else 'FAIL'}] {st.name}: {'; '.join(st.notes) or '-'}")
    lines.append("solutions:")
    lines += [f"  k={s.k}: {s.value} = {s.representation}" for s in report.solutions]
    return (0 if report.certified else 1), report.to_json(), lines


def cmd_brute(args):
    th = get_theorem(args.sequence)
    try:
        space = SearchSpace(args.kmin, args.kmax)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sols = brute_force(th.spec, space)
    payload = {"sequence": args.sequence, "k_range": [str(args.kmin), str(args.kmax)],
               "solutions": [s.to_json() for s in sols]}
    lines = ["k\tvalue\trepresentation"] + [f"{s.k}\t{s.value}\t{s.representation}" for s in sols]
    return 0, payload, lines


def cmd_convergents(args):
    expr = parse_expr(args.tau)
    cf = contfrac.expand_at(lambda p: eval_expr(expr, p), args.precision)
    convs = [c for c in contfrac.convergents(cf) if c.q >= args.min_q]
    if args.terms is not None:
        convs = convs[: args.terms]
    elif args.min_q:
        convs = convs[:1]
    payload = {
        "tau": to_string(expr),
        "certified_partial_quotients": [str(a) for a in cf.certified],
        "convergents": [{"index": str(c.index), "p": str(c.p), "q": str(c.q)} for c in convs],
    }
    lines = [f"[{cf.certified[0]}; {', '.join(map(str, cf.certified[1:12]))}, ...] "
             f"({cf.certified_count} certified terms)"]
    lines += [f"{c.index}\tp={c.p}\tq={c.q}" for c in convs]
    return 0, payload, lines


def cmd_reduce(args):
    p = args.precision
    tau_e = parse_expr(args.tau)
    fam = [(m, _expr_arg(m, p)) for m in args.mu]
    prob = ReductionProblem(_expr_arg(args.tau, p), fam, args.M, _expr_arg(args.A, p), _expr_arg(args.B, p))
    try:
        prob.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cf = contfrac.expand_at(lambda s: eval_expr(tau_e, s), p)
    try:
        res = reduce(prob, cf, args.first_q)
    except contfrac.InsufficientCertifiedTerms as exc:
        return 1, {"error": str(exc)}, [f"reduction failed: {exc}"]
    payload = {
        "q": str(res.q), "convergent_index": str(res.convergent_index),
        "epsilon_min": dec(res.epsilon_min, 12), "epsilon_min_member": str(res.epsilon_min_label),
        "threshold_max": dec(res.threshold_max, 6), "bound": str(res.w_bound),
        "skipped": [f"{i}:{lab}" for i, lab in res.skipped],
    }
    lines = [f"q = {res.q} (convergent {res.convergent_index})",
             f"epsilon_min = {dec(res.epsilon_min, 8)} ({res.epsilon_min_label})",
             f"threshold = {dec(res.threshold_max, 6)}", f"w <= {res.w_bound}"]
    return 0, payload, lines


def _stage_output(stages):
    payload = {"stages": [s.to_json() for s in stages]}
    lines = []
    for st in stages:
        lines.append(f"{st.name} [{'ok' if st.certified else 'FAIL'}]")
        for k, v in st.constants.items():
            if isinstance(v, str):
                lines.append(f"  {k} = {v}")
            elif isinstance(v, list) and all(isinstance(x, str) for x in v):
                lines.append(f"  {k} = [{', '.join(v)}]")
    ok = all(s.certified for s in stages)
    return (0 if ok else 1), payload, lines


def cmd_matveev(args):
    th = get_theorem(args.sequence)
    report = ProofReport(th.spec.name, "matveev", args.precision)
    ctx = Context(th, args.precision, args.paper_m_override, report)
    stage_matveev_a(ctx)
    stage_matveev_b(ctx)
    code, payload, lines = _stage_output(report.stages)
    payload["paper_reference"] = report.paper_reference
    return code, payload, lines


def cmd_verify_lemmas(args):
    names = [args.sequence] if args.sequence else sorted(SEQUENCES)
    stages = []
    try:
        for name in names:
            stages.append(trivial_cases(get_theorem(name), args.kmax))
    except StageFailure as exc:
        return 1, {"error": str(exc)}, [f"verification failed: {exc}"]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return _stage_output(stages)


def cmd_heights(args):
    p = args.precision
    if args.quadratic:
        a, b, c = args.quadratic
        if c == 0:
            raise UsageError("c must be nonzero")
        x = QuadraticAlgebraic(a, b, c)
        h = height_quadratic(x, p)
        payload = {"number": str(x), "minimal_polynomial": [str(v) for v in x.minimal_polynomial()],
                   "height": dec(h, p)}
        return 0, payload, [f"h({x}) = {dec(h, 30)}"]
    th = get_theorem(args.sequence)
    rows = []
    for d1 in range(1, 10):
        g = th.gamma_a(d1)
        rows.append({"d1": str(d1), "gamma": str(g), "height": dec(height_quadratic(g, p)),
                     "rule_bound": dec(height_bound(th.gamma_a_height_expr(d1), p))})
    lines = ["d1\theight\trule bound\tgamma"] + [
        f"{r['d1']}\t{r['height'][:12]}\t{r['rule_bound'][:12]}\t{r['gamma']}" for r in rows
    ]
    return 0, {"sequence": args.sequence, "gamma": rows}, lines


COMMANDS = {
    "solve": cmd_solve,
    "brute": cmd_brute,
    "convergents": cmd_convergents,
    "reduce": cmd_reduce,
    "matveev": cmd_matveev,
    "verify-lemmas": cmd_verify_lemmas,
    "heights": cmd_heights,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args = _resolve(args)
        code, payload, lines = COMMANDS[args.command](args)
    except (UsageError, ExprSyntaxError, DomainError) as exc:
        print(f"repdiff: error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(payload, indent=2)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if args.format == "json":
        print(text)
    else:
        print("\n".join(lines))
    return code


run = main

if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
