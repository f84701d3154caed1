"""A small expression language for decidable predicates.

Instance files use it for tree node predicates (over the decoded sequence)
and for the matrices of least-witness descriptions (over a point prefix and
two index variables).  The language has natural constants, variables,
sequence access f(e), + and *, comparisons, boolean connectives, and bounded
quantifiers only:

    all k < len : s(k) <= 1
    some i < n + 1 : a(i) == 0 and a(i + 1) == 0

Quantifier bodies extend as far right as possible; parenthesize when mixing.
Unbounded quantification is not expressible: the grammar requires the
"< bound" part, which keeps every predicate decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Union

KEYWORDS = {"all", "some", "and", "or", "not"}
_SYMBOLS = ("<=", ">=", "==", "!=", "<", ">", "+", "*", "(", ")", ":", ",")


class ParseError(Exception):
    def __init__(self, line: int, col: int, message: str):
        self.line, self.col, self.message = line, col, message
        super().__init__(f"{line}:{col}: {message}")


class EvalError(Exception):
    pass


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Access:
    name: str
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Not:
    body: "Expr"


@dataclass(frozen=True)
class Quant:
    kind: str  # "all" | "some"
    var: str
    bound: "Expr"
    body: "Expr"


Expr = Union[Num, Var, Access, BinOp, Not, Quant]

_ARITH_OPS = {"+", "*"}
_CMP_OPS = {"<", "<=", ">", ">=", "==", "!="}
_BOOL_OPS = {"and", "or"}


@dataclass(frozen=True)
class _Token:
    kind: str  # "num" | "ident" | "sym" | "eof"
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    toks: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Token("num", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Token("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append(_Token("sym", sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError(line, col, f"unexpected character {c!r}")
    toks.append(_Token("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, toks: list[_Token]):
        self.toks = toks
        self.pos = 0

    def peek(self) -> _Token:
        return self.toks[self.pos]

    def next(self) -> _Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> _Token:
        t = self.next()
        if t.text != text:
            raise ParseError(t.line, t.col, f"expected {text!r}, found {t.text!r}")
        return t

    def fail(self, msg: str):
        t = self.peek()
        raise ParseError(t.line, t.col, msg)

    def parse_expr(self) -> Expr:
        left = self.parse_and()
        while self.peek().text == "or":
            self.next()
            left = BinOp("or", left, self.parse_and())
        return left

    def parse_and(self) -> Expr:
        left = self.parse_unary()
        while self.peek().text == "and":
            self.next()
            left = BinOp("and", left, self.parse_unary())
        return left

    def parse_unary(self) -> Expr:
        t = self.peek()
        if t.text == "not":
            self.next()
            return Not(self.parse_unary())
        if t.text in ("all", "some"):
            self.next()
            var = self.next()
            if var.kind != "ident" or var.text in KEYWORDS:
                raise ParseError(var.line, var.col, "expected a quantifier variable")
            self.expect("<")
            bound = self.parse_arith()
            self.expect(":")
            body = self.parse_expr()
            return Quant(t.text, var.text, bound, body)
        return self.parse_comparison()

    def parse_comparison(self) -> Expr:
        left = self.parse_arith()
        t = self.peek()
        if t.text in _CMP_OPS:
            self.next()
            return BinOp(t.text, left, self.parse_arith())
        return left

    def parse_arith(self) -> Expr:
        left = self.parse_term()
        while self.peek().text == "+":
            self.next()
            left = BinOp("+", left, self.parse_term())
        return left

    def parse_term(self) -> Expr:
        left = self.parse_atom()
        while self.peek().text == "*":
            self.next()
            left = BinOp("*", left, self.parse_atom())
        return left

    def parse_atom(self) -> Expr:
        t = self.next()
        if t.kind == "num":
            return Num(int(t.text))
        if t.kind == "ident":
            if t.text in KEYWORDS:
                raise ParseError(t.line, t.col, f"misplaced keyword {t.text!r}")
            if self.peek().text == "(":
                self.next()
                arg = self.parse_arith()
                self.expect(")")
                return Access(t.text, arg)
            return Var(t.text)
        if t.text == "(":
            inner = self.parse_expr()
            self.expect(")")
            return inner
        raise ParseError(t.line, t.col, f"unexpected token {t.text!r}")


def sort_of(e: Expr) -> str:
    """Static sort of an expression: 'nat' or 'bool'.  Raises on mixes."""
    if isinstance(e, (Num, Var, Access)):
        if isinstance(e, Access):
            _need(e.arg, "nat")
        return "nat"
    if isinstance(e, Not):
        _need(e.body, "bool")
        return "bool"
    if isinstance(e, Quant):
        _need(e.bound, "nat")
        _need(e.body, "bool")
        return "bool"
    if isinstance(e, BinOp):
        if e.op in _ARITH_OPS:
            _need(e.left, "nat")
            _need(e.right, "nat")
            return "nat"
        if e.op in _CMP_OPS:
            _need(e.left, "nat")
            _need(e.right, "nat")
            return "bool"
        _need(e.left, "bool")
        _need(e.right, "bool")
        return "bool"
    raise EvalError(f"unknown node {e!r}")


def _need(e: Expr, want: str):
    got = sort_of(e)
    if got != want:
        raise ParseError(0, 0, f"expected a {want} expression, found a {got} one")


Env = Mapping[str, Union[int, Callable[[int], int]]]


def evaluate(e: Expr, env: Env):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        v = env.get(e.name)
        if not isinstance(v, int):
            raise EvalError(f"unbound variable {e.name!r}")
        return v
    if isinstance(e, Access):
        f = env.get(e.name)
        if not callable(f):
            raise EvalError(f"unbound sequence {e.name!r}")
        return f(evaluate(e.arg, env))
    if isinstance(e, Not):
        return not evaluate(e.body, env)
    if isinstance(e, Quant):
        bound = evaluate(e.bound, env)
        scope = dict(env)
        for k in range(bound):
            scope[e.var] = k
            v = evaluate(e.body, scope)
            if e.kind == "some" and v:
                return True
            if e.kind == "all" and not v:
                return False
        return e.kind == "all"
    if isinstance(e, BinOp):
        le, re_ = evaluate(e.left, env), None
        if e.op == "and":
            return bool(le) and bool(evaluate(e.right, env))
        if e.op == "or":
            return bool(le) or bool(evaluate(e.right, env))
        re_ = evaluate(e.right, env)
        if e.op == "+":
            return le + re_
        if e.op == "*":
            return le * re_
        if e.op == "<":
            return le < re_
        if e.op == "<=":
            return le <= re_
        if e.op == ">":
            return le > re_
        if e.op == ">=":
            return le >= re_
        if e.op == "==":
            return le == re_
        if e.op == "!=":
            return le != re_
    raise EvalError(f"unknown node {e!r}")


def parse(text: str) -> Expr:
    p = _Parser(_tokenize(text))
    e = p.parse_expr()
    t = p.peek()
    if t.kind != "eof":
        raise ParseError(t.line, t.col, f"trailing input {t.text!r}")
    return e


def parse_predicate(text: str) -> Expr:
    """Parse an expression that must be boolean-sorted."""
    e = parse(text)
    if sort_of(e) != "bool":
        raise ParseError(1, 1, "expected a boolean expression")
    return e


def parse_arith(text: str) -> Expr:
    """Parse an expression that must be natural-sorted."""
    e = parse(text)
    if sort_of(e) != "nat":
        raise ParseError(1, 1, "expected a natural-number expression")
    return e


def render(e: Expr) -> str:
    """Canonical text of an expression (parses back to an equal tree)."""
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Access):
        return f"{e.name}({render(e.arg)})"
    if isinstance(e, Not):
        return f"not ({render(e.body)})"
    if isinstance(e, Quant):
        return f"{e.kind} {e.var} < {render(e.bound)} : ({render(e.body)})"
    if isinstance(e, BinOp):
        return f"({render(e.left)} {e.op} {render(e.right)})"
    raise EvalError(f"unknown node {e!r}")
