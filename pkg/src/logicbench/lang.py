"""Concrete and abstract syntax of the toy imperative language.

Programs open with a ``vars`` declaration, then a non-empty statement list::

    vars n, f;
    while (n != 0) { f = f * n; n = n - 1; }

Predicates reuse boolean expressions, plus ``old(x)`` (value of ``x`` at the
pinned entry state, relational predicates only) and the atom ``bot``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

NEG_INF = "-inf"
POS_INF = "inf"
Bound = Union[int, str]


class LangError(Exception):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.msg, self.line, self.col = msg, line, col
        where = f"{line}:{col}: " if line else ""
        super().__init__(where + msg)


class ParseError(LangError):
    pass


class BreakOutsideLoop(LangError):
    pass


class UndeclaredVariable(LangError):
    pass


# arithmetic expressions

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Old:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "AExpr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - *
    left: "AExpr"
    right: "AExpr"


AExpr = Union[Num, Var, Old, Neg, BinOp]


# boolean expressions

@dataclass(frozen=True)
class BConst:
    value: bool


@dataclass(frozen=True)
class BotAtom:
    pass


@dataclass(frozen=True)
class Cmp:
    op: str  # one of == != < <= > >=
    left: AExpr
    right: AExpr


@dataclass(frozen=True)
class Not:
    arg: "BExpr"


@dataclass(frozen=True)
class And:
    left: "BExpr"
    right: "BExpr"


@dataclass(frozen=True)
class Or:
    left: "BExpr"
    right: "BExpr"


BExpr = Union[BConst, BotAtom, Cmp, Not, And, Or]


# statements

@dataclass(frozen=True)
class Assign:
    var: str
    expr: AExpr


@dataclass(frozen=True)
class Nondet:
    var: str
    lo: Bound
    hi: Bound


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Break:
    pass


@dataclass(frozen=True)
class Seq:
    first: "Stmt"
    second: "Stmt"


@dataclass(frozen=True)
class If:
    cond: BExpr
    then: "Stmt"
    orelse: "Stmt"


@dataclass(frozen=True)
class While:
    cond: BExpr
    body: "Stmt"


Stmt = Union[Assign, Nondet, Skip, Break, Seq, If, While]


@dataclass(frozen=True)
class Program:
    vars: tuple[str, ...]
    body: Stmt


def seq_of(stmts: list) -> Stmt:
    """Right-nested sequence; an empty list is ``skip``."""
    if not stmts:
        return Skip()
    out = stmts[-1]
    for s in reversed(stmts[:-1]):
        out = Seq(s, out)
    return out


def flatten_seq(s: Stmt) -> list:
    out = []
    while isinstance(s, Seq):
        out.extend(flatten_seq(s.first))
        s = s.second
    out.append(s)
    return out


def while_loops(s: Stmt) -> Iterator[While]:
    """All while statements of ``s`` in preorder."""
    if isinstance(s, While):
        yield s
        yield from while_loops(s.body)
    elif isinstance(s, Seq):
        yield from while_loops(s.first)
        yield from while_loops(s.second)
    elif isinstance(s, If):
        yield from while_loops(s.then)
        yield from while_loops(s.orelse)


# lexer

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+|//[^\n]*|\#[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>==|!=|<=|>=|&&|\|\||[-+*<>!=;,(){}\[\]])
""", re.VERBOSE)

KEYWORDS = {"vars", "skip", "break", "if", "else", "while", "true", "false",
            "inf", "old", "bot"}


@dataclass(frozen=True)
class Token:
    kind: str  # int, ident, kw, op, eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    toks, pos, line, line_start = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        s = m.group()
        if kind != "ws":
            if kind == "ident" and s in KEYWORDS:
                kind = "kw"
            toks.append(Token(kind, s, line, pos - line_start + 1))
        nl = s.count("\n")
        if nl:
            line += nl
            line_start = pos + s.rindex("\n") + 1
        pos = m.end()
    toks.append(Token("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str, declared=None, allow_old=False, allow_bot=False):
        self.toks = tokenize(text)
        self.i = 0
        self.declared = None if declared is None else set(declared)
        self.allow_old = allow_old
        self.allow_bot = allow_bot

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        t = tok or self.tok
        return ParseError(msg, t.line, t.col)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "kw")

    def eat(self, text: str) -> Token:
        if not self.at(text):
            got = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, got {got!r}")
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            got = self.tok.text or "end of input"
            raise self.error(f"expected identifier, got {got!r}")
        t = self.tok
        self.i += 1
        return t

    def use_var(self, t: Token) -> str:
        if self.declared is not None and t.text not in self.declared:
            raise UndeclaredVariable(f"undeclared variable {t.text!r}", t.line, t.col)
        return t.text

    def expect_eof(self):
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")

    # program

    def program(self) -> Program:
        self.eat("vars")
        names = [self.ident()]
        while self.at(","):
            self.eat(",")
            names.append(self.ident())
        self.eat(";")
        seen = set()
        for t in names:
            if t.text in seen:
                raise ParseError(f"duplicate variable {t.text!r}", t.line, t.col)
            seen.add(t.text)
        self.declared = seen
        stmts = [self.stmt(0)]
        while self.tok.kind != "eof":
            stmts.append(self.stmt(0))
        return Program(tuple(t.text for t in names), seq_of(stmts))

    def block(self, depth: int) -> Stmt:
        self.eat("{")
        stmts = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                raise self.error("unterminated block")
            stmts.append(self.stmt(depth))
        self.eat("}")
        return seq_of(stmts)

    def stmt(self, depth: int) -> Stmt:
        t = self.tok
        if self.at("skip"):
            self.eat("skip")
            self.eat(";")
            return Skip()
        if self.at("break"):
            self.eat("break")
            if depth == 0:
                raise BreakOutsideLoop("break outside any loop", t.line, t.col)
            self.eat(";")
            return Break()
        if self.at("if"):
            self.eat("if")
            self.eat("(")
            c = self.bexpr()
            self.eat(")")
            a = self.block(depth)
            self.eat("else")
            b = self.block(depth)
            return If(c, a, b)
        if self.at("while"):
            self.eat("while")
            self.eat("(")
            c = self.bexpr()
            self.eat(")")
            return While(c, self.block(depth + 1))
        if t.kind == "ident":
            name = self.use_var(self.ident())
            self.eat("=")
            if self.at("["):
                self.eat("[")
                lo = self.bound()
                self.eat(",")
                hi = self.bound()
                self.eat("]")
                self.eat(";")
                return Nondet(name, lo, hi)
            e = self.aexpr()
            self.eat(";")
            return Assign(name, e)
        raise self.error(f"expected a statement, got {t.text or 'end of input'!r}")

    def bound(self) -> Bound:
        if self.at("inf"):
            self.eat("inf")
            return POS_INF
        neg = False
        if self.at("-"):
            self.eat("-")
            if self.at("inf"):
                self.eat("inf")
                return NEG_INF
            neg = True
        if self.tok.kind != "int":
            raise self.error("expected an integer bound, -inf or inf")
        v = int(self.tok.text)
        self.i += 1
        return -v if neg else v

    # boolean expressions, || < && < ! < comparison

    def bexpr(self) -> BExpr:
        e = self.conj()
        while self.at("||"):
            self.eat("||")
            e = Or(e, self.conj())
        return e

    def conj(self) -> BExpr:
        e = self.neg()
        while self.at("&&"):
            self.eat("&&")
            e = And(e, self.neg())
        return e

    def neg(self) -> BExpr:
        if self.at("!"):
            self.eat("!")
            return Not(self.neg())
        return self.batom()

    def batom(self) -> BExpr:
        t = self.tok
        if self.at("true"):
            self.eat("true")
            return BConst(True)
        if self.at("false"):
            self.eat("false")
            return BConst(False)
        if self.at("bot"):
            if not self.allow_bot:
                raise self.error("'bot' is only allowed in predicates")
            self.eat("bot")
            return BotAtom()
        if self.at("("):
            # a parenthesis may open a boolean or an arithmetic expression
            save = self.i
            try:
                self.eat("(")
                e = self.bexpr()
                self.eat(")")
                if self.tok.text in _CMP_OPS:
                    raise ParseError("arithmetic", t.line, t.col)
                return e
            except ParseError:
                self.i = save
        left = self.aexpr()
        if self.tok.text not in _CMP_OPS:
            raise self.error("expected a comparison operator")
        op = self.tok.text
        self.i += 1
        return Cmp(op, left, self.aexpr())

    # arithmetic expressions, + - < *

    def aexpr(self) -> AExpr:
        e = self.term()
        while self.at("+") or self.at("-"):
            op = self.tok.text
            self.i += 1
            e = BinOp(op, e, self.term())
        return e

    def term(self) -> AExpr:
        e = self.factor()
        while self.at("*"):
            self.eat("*")
            e = BinOp("*", e, self.factor())
        return e

    def factor(self) -> AExpr:
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return Num(int(t.text))
        if self.at("-"):
            self.eat("-")
            if self.tok.kind == "int":
                v = int(self.tok.text)
                self.i += 1
                return Num(-v)
            return Neg(self.factor())
        if self.at("("):
            self.eat("(")
            e = self.aexpr()
            self.eat(")")
            return e
        if self.at("old"):
            if not self.allow_old:
                raise self.error("old(x) is only allowed in relational predicates")
            self.eat("old")
            self.eat("(")
            name = self.use_var(self.ident())
            self.eat(")")
            return Old(name)
        if t.kind == "ident":
            return Var(self.use_var(self.ident()))
        raise self.error(f"expected an expression, got {t.text or 'end of input'!r}")


_CMP_OPS = ("==", "!=", "<", "<=", ">", ">=")


def parse_program(text: str) -> Program:
    return _Parser(text).program()


def parse_predicate(text: str, variables, relational: bool = False) -> BExpr:
    p = _Parser(text, declared=variables, allow_old=relational, allow_bot=True)
    e = p.bexpr()
    p.expect_eof()
    return e


def parse_aexpr(text: str, variables, relational: bool = False) -> AExpr:
    p = _Parser(text, declared=variables, allow_old=relational)
    e = p.aexpr()
    p.expect_eof()
    return e


# pretty printing

_PREC = {"+": 1, "-": 1, "*": 2}


def show_aexpr(e: AExpr, ctx: int = 0) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Old):
        return f"old({e.name})"
    if isinstance(e, Neg):
        return f"-({show_aexpr(e.arg)})"
    p = _PREC[e.op]
    s = f"{show_aexpr(e.left, p)} {e.op} {show_aexpr(e.right, p + 1)}"
    return f"({s})" if p < ctx else s


def show_bexpr(e: BExpr, ctx: int = 0) -> str:
    if isinstance(e, BConst):
        return "true" if e.value else "false"
    if isinstance(e, BotAtom):
        return "bot"
    if isinstance(e, Cmp):
        return f"{show_aexpr(e.left)} {e.op} {show_aexpr(e.right)}"
    if isinstance(e, Not):
        return f"!{show_bexpr(e.arg, 3)}"
    if isinstance(e, And):
        s = f"{show_bexpr(e.left, 2)} && {show_bexpr(e.right, 3)}"
        return f"({s})" if ctx > 2 else s
    s = f"{show_bexpr(e.left, 1)} || {show_bexpr(e.right, 2)}"
    return f"({s})" if ctx > 1 else s


def _show_bound(b: Bound) -> str:
    return b if isinstance(b, str) else str(b)


def show_stmt(s: Stmt, indent: int = 0) -> str:
    pad = "    " * indent
    if isinstance(s, Seq):
        return "\n".join(show_stmt(x, indent) for x in flatten_seq(s))
    if isinstance(s, Assign):
        return f"{pad}{s.var} = {show_aexpr(s.expr)};"
    if isinstance(s, Nondet):
        return f"{pad}{s.var} = [{_show_bound(s.lo)}, {_show_bound(s.hi)}];"
    if isinstance(s, Skip):
        return f"{pad}skip;"
    if isinstance(s, Break):
        return f"{pad}break;"
    if isinstance(s, If):
        return (f"{pad}if ({show_bexpr(s.cond)}) {{\n{show_stmt(s.then, indent + 1)}\n"
                f"{pad}}} else {{\n{show_stmt(s.orelse, indent + 1)}\n{pad}}}")
    if isinstance(s, While):
        return f"{pad}while ({show_bexpr(s.cond)}) {{\n{show_stmt(s.body, indent + 1)}\n{pad}}}"
    raise TypeError(f"not a statement: {s!r}")


def show_program(p: Program) -> str:
    return f"vars {', '.join(p.vars)};\n{show_stmt(p.body)}\n"


def stmt_vars(s: Stmt) -> set:
    out = set()

    def a(e):
        if isinstance(e, Var):
            out.add(e.name)
        elif isinstance(e, Neg):
            a(e.arg)
        elif isinstance(e, BinOp):
            a(e.left)
            a(e.right)

    def b(e):
        if isinstance(e, Cmp):
            a(e.left)
            a(e.right)
        elif isinstance(e, Not):
            b(e.arg)
        elif isinstance(e, (And, Or)):
            b(e.left)
            b(e.right)

    def st(x):
        if isinstance(x, Assign):
            out.add(x.var)
            a(x.expr)
        elif isinstance(x, Nondet):
            out.add(x.var)
        elif isinstance(x, Seq):
            st(x.first)
            st(x.second)
        elif isinstance(x, If):
            b(x.cond)
            st(x.then)
            st(x.orelse)
        elif isinstance(x, While):
            b(x.cond)
            st(x.body)

    st(s)
    return out
