"""A small expression language for ad-hoc theta-function expressions.

Grammar::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := '-' factor | base ('^' exponent)?
    exponent:= '-'? (integer | ident | '(' expr ')')
    base    := number | ident | call | '(' expr ')'
    ident   := name ('_' (integer | name | '(' expr ')'))?
    call    := name '(' arguments ')'

Numbers are decimals; a trailing ``i`` makes them imaginary (``2.5i``), so
``3+2i`` is a complex literal.  Subscripted identifiers ``x_1`` or ``x_i``
index vector bindings from 1.

Functions::

    theta(e)                  theta(e; p) with p from the context
    tpoch(e; n)               theta shifted factorial (e; q, p)_n, q bound in env
    qpoch(e; k)               (e; q)_k, q bound in env
    sum(i = a..b, e)          also prod(...)
    sum(i in I, e)            over the members of a subset bound by sumsubsets
    sum(i notin I, e)         over its complement in [n]
    sumsubsets(I, n, r, e)    sum of e over the r-subsets I of [n]
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Union

from ..errors import DslError, DslSyntaxError, UnboundIdentifierError
from ..thetanum import ThetaContext, qpoch, theta, theta_poch

__all__ = ["parse", "pretty", "eval_dsl", "evaluate", "Subset"]


# ---------------------------------------------------------------------------
# Syntax tree
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    text: str


@dataclass(frozen=True)
class Var:
    name: str
    sub: "Node | None" = None


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class Bin:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exp: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


@dataclass(frozen=True)
class RangeLoop:
    kind: str  # sum | prod
    var: str
    lo: "Node"
    hi: "Node"
    body: "Node"


@dataclass(frozen=True)
class SetLoop:
    kind: str
    var: str
    member: bool
    subset: str
    body: "Node"


@dataclass(frozen=True)
class Subsets:
    var: str
    n: "Node"
    r: "Node"
    body: "Node"


Node = Union[Num, Var, Neg, Bin, Pow, Call, RangeLoop, SetLoop, Subsets]

_FUNCS = {"theta": 1, "tpoch": 2, "qpoch": 2}
_LOOPS = ("sum", "prod")


# ---------------------------------------------------------------------------
# Tokenizer and parser
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.(?!\.)\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?i?(?![A-Za-z0-9_]))
  | (?P<name>[A-Za-z][A-Za-z0-9]*)
  | (?P<op>\.\.|[-+*/^(),;=_])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(src: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise DslSyntaxError(f"unexpected character {src[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        if kind == "ws":
            for k, ch in enumerate(text):
                if ch == "\n":
                    line, line_start = line + 1, pos + k + 1
        else:
            toks.append(_Tok(kind, text, line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("end", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self, k: int = 0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> _Tok:
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        raise DslSyntaxError(f"{msg}, found {what}", tok.line, tok.col)

    def accept(self, text: str) -> bool:
        if self.peek().kind == "op" and self.peek().text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            self.fail(f"expected {text!r}")

    def name(self) -> str:
        tok = self.peek()
        if tok.kind != "name":
            self.fail("expected a name")
        self.i += 1
        return tok.text

    def parse(self) -> Node:
        node = self.expr()
        if self.peek().kind != "end":
            self.fail("unexpected input")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in ("+", "-"):
            op = self.next().text
            node = Bin(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek().kind == "op" and self.peek().text in ("*", "/"):
            op = self.next().text
            node = Bin(op, node, self.factor())
        return node

    def factor(self) -> Node:
        if self.accept("-"):
            return Neg(self.factor())
        base = self.base()
        if self.accept("^"):
            return Pow(base, self.exponent())
        return base

    def exponent(self) -> Node:
        if self.accept("-"):
            return Neg(self.exponent_atom())
        return self.exponent_atom()

    def exponent_atom(self) -> Node:
        tok = self.peek()
        if tok.kind == "num" and re.fullmatch(r"\d+", tok.text):
            self.i += 1
            return Num(tok.text)
        if tok.kind == "name":
            return self.ident()
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        self.fail("expected an integer exponent")

    def base(self) -> Node:
        tok = self.peek()
        if tok.kind == "num":
            self.i += 1
            return Num(tok.text)
        if tok.kind == "name":
            if self.peek(1).kind == "op" and self.peek(1).text == "(":
                return self.call()
            return self.ident()
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        self.fail("expected an expression")

    def ident(self) -> Var:
        name = self.name()
        if not self.accept("_"):
            return Var(name)
        tok = self.peek()
        if tok.kind == "num" and re.fullmatch(r"\d+", tok.text):
            self.i += 1
            return Var(name, Num(tok.text))
        if tok.kind == "name":
            return Var(name, Var(self.name()))
        if self.accept("("):
            sub = self.expr()
            self.expect(")")
            return Var(name, sub)
        self.fail("expected a subscript")

    def call(self) -> Node:
        tok = self.peek()
        fname = self.name()
        self.expect("(")
        if fname in _LOOPS:
            node = self.loop(fname)
        elif fname == "sumsubsets":
            var = self.name()
            self.expect(",")
            n = self.expr()
            self.expect(",")
            r = self.expr()
            self.expect(",")
            node = Subsets(var, n, r, self.expr())
        elif fname in _FUNCS:
            args = [self.expr()]
            while self.accept(";"):
                args.append(self.expr())
            if len(args) != _FUNCS[fname]:
                raise DslSyntaxError(
                    f"{fname} takes {_FUNCS[fname]} argument(s), got {len(args)}", tok.line, tok.col)
            node = Call(fname, tuple(args))
        else:
            raise DslSyntaxError(f"unknown function {fname!r}", tok.line, tok.col)
        self.expect(")")
        return node

    def loop(self, kind: str) -> Node:
        var = self.name()
        if self.accept("="):
            lo = self.expr()
            self.expect("..")
            hi = self.expr()
            self.expect(",")
            return RangeLoop(kind, var, lo, hi, self.expr())
        tok = self.peek()
        if tok.kind == "name" and tok.text in ("in", "notin"):
            self.i += 1
            subset = self.name()
            self.expect(",")
            return SetLoop(kind, var, tok.text == "in", subset, self.expr())
        self.fail("expected '=' or 'in' or 'notin'")


def parse(src: str) -> Node:
    """Parse ``src``; syntax errors carry ``line:col``."""
    return _Parser(src).parse()


# ---------------------------------------------------------------------------
# Pretty printer
# ---------------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(node: Node) -> int:
    if isinstance(node, Bin):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def pretty(node: Node) -> str:
    """Canonical text with the fewest parentheses that preserve the tree."""
    if isinstance(node, Num):
        return node.text
    if isinstance(node, Var):
        if node.sub is None:
            return node.name
        sub = node.sub
        inner = pretty(sub) if isinstance(sub, (Num, Var)) and getattr(sub, "sub", None) is None \
            else f"({pretty(sub)})"
        return f"{node.name}_{inner}"
    if isinstance(node, Neg):
        arg = pretty(node.arg)
        return f"-{arg}" if _prec(node.arg) >= 3 else f"-({arg})"
    if isinstance(node, Bin):
        p = _PREC[node.op]
        left = pretty(node.left)
        if _prec(node.left) < p:
            left = f"({left})"
        right = pretty(node.right)
        if _prec(node.right) <= p and not isinstance(node.right, Neg):
            right = f"({right})"
        sep = f" {node.op} " if p == 1 else node.op
        return f"{left}{sep}{right}"
    if isinstance(node, Pow):
        base = pretty(node.base)
        if _prec(node.base) < 5:
            base = f"({base})"
        return f"{base}^{_pretty_exp(node.exp)}"
    if isinstance(node, Call):
        return f"{node.name}({'; '.join(pretty(a) for a in node.args)})"
    if isinstance(node, RangeLoop):
        return f"{node.kind}({node.var} = {pretty(node.lo)}..{pretty(node.hi)}, {pretty(node.body)})"
    if isinstance(node, SetLoop):
        rel = "in" if node.member else "notin"
        return f"{node.kind}({node.var} {rel} {node.subset}, {pretty(node.body)})"
    if isinstance(node, Subsets):
        return f"sumsubsets({node.var}, {pretty(node.n)}, {pretty(node.r)}, {pretty(node.body)})"
    raise TypeError(f"not a DSL node: {node!r}")


def _pretty_exp(node: Node) -> str:
    if isinstance(node, Neg):
        return "-" + _pretty_exp_atom(node.arg)
    return _pretty_exp_atom(node)


def _pretty_exp_atom(node: Node) -> str:
    if isinstance(node, Num) and node.text.isdigit():
        return node.text
    if isinstance(node, Var):
        return pretty(node)
    return f"({pretty(node)})"


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subset:
    """An r-subset of [n], members 1-based and increasing."""

    members: tuple[int, ...]
    n: int

    def complement(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.n + 1) if i not in self.members)


def _number(text: str) -> complex:
    if text.endswith("i"):
        return complex(0, float(text[:-1]))
    return complex(float(text)) if any(c in text for c in ".eE") else complex(int(text))


def _as_int(value, what: str) -> int:
    z = complex(value)
    k = round(z.real)
    if abs(z.imag) > 1e-9 or abs(z.real - k) > 1e-9:
        raise DslError(f"{what} must be an integer, got {value}")
    return int(k)


class _Evaluator:
    def __init__(self, env: dict, ctx: ThetaContext):
        self.ctx = ctx
        self.scopes = [dict(env)]

    def lookup(self, name: str):
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        raise UnboundIdentifierError(f"unbound identifier {name!r}")

    def bound(self, name: str, value, body: Node):
        self.scopes.append({name: value})
        try:
            return self.ev(body)
        finally:
            self.scopes.pop()

    def ev(self, node: Node):
        if isinstance(node, Num):
            return _number(node.text)
        if isinstance(node, Var):
            val = self.lookup(node.name)
            if node.sub is None:
                if isinstance(val, (list, tuple, Subset)):
                    raise DslError(f"{node.name!r} is a vector; subscript it")
                return val
            k = _as_int(self.ev(node.sub), f"subscript of {node.name}")
            if not isinstance(val, (list, tuple)):
                raise DslError(f"{node.name!r} is not a vector")
            if not 1 <= k <= len(val):
                raise DslError(f"index {k} out of range for {node.name!r} of length {len(val)}")
            return complex(val[k - 1])
        if isinstance(node, Neg):
            return -self.ev(node.arg)
        if isinstance(node, Bin):
            a, b = self.ev(node.left), self.ev(node.right)
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return a * b
            return a / b
        if isinstance(node, Pow):
            return self.ev(node.base) ** _as_int(self.ev(node.exp), "exponent")
        if isinstance(node, Call):
            arg = self.ev(node.args[0])
            if node.name == "theta":
                return theta(arg, self.ctx)
            k = _as_int(self.ev(node.args[1]), f"length in {node.name}")
            q = self.lookup("q")
            if node.name == "tpoch":
                return theta_poch(arg, q, k, self.ctx)
            return qpoch(arg, q, k)
        if isinstance(node, RangeLoop):
            lo = _as_int(self.ev(node.lo), "lower bound")
            hi = _as_int(self.ev(node.hi), "upper bound")
            return self.fold(node.kind, ((node.var, complex(i)) for i in range(lo, hi + 1)), node.body)
        if isinstance(node, SetLoop):
            sub = self.lookup(node.subset)
            if not isinstance(sub, Subset):
                raise DslError(f"{node.subset!r} is not a subset")
            idx = sub.members if node.member else sub.complement()
            return self.fold(node.kind, ((node.var, complex(i)) for i in idx), node.body)
        if isinstance(node, Subsets):
            n = _as_int(self.ev(node.n), "subset universe")
            r = _as_int(self.ev(node.r), "subset size")
            items = ((node.var, Subset(tuple(i + 1 for i in c), n))
                     for c in combinations(range(n), r)) if 0 <= r <= n else ()
            return self.fold("sum", items, node.body)
        raise TypeError(f"not a DSL node: {node!r}")

    def fold(self, kind: str, bindings, body: Node):
        acc = 0j if kind == "sum" else 1 + 0j
        for name, value in bindings:
            val = self.bound(name, value, body)
            acc = acc + val if kind == "sum" else acc * val
        return acc


def eval_dsl(node: Node, env: dict, ctx: ThetaContext | None = None) -> complex:
    """Evaluate a parsed expression; ``env`` maps names to numbers or vectors."""
    if ctx is None:
        ctx = ThetaContext(env.get("p", 0j)) if "p" in env else ThetaContext()
    return complex(_Evaluator(env, ctx).ev(node))


def evaluate(src: str, env: dict, ctx: ThetaContext | None = None) -> complex:
    return eval_dsl(parse(src), env, ctx)


# the subset-sum identity's left side, as a worked transcription
THMRN_LEFT = (
    "sum(r = 0..n, tpoch(v; r)*tpoch(w; r)/(tpoch(q*v/t; r)*tpoch(q*w/t; r))"
    "*sumsubsets(I, n, r, "
    "prod(i in I, q*theta(v*x_i/(t*w))*theta(t*q^-r*x_i/(q*w))/(t*theta(v*x_i/(q*w))*theta(q^-r*x_i/w)))"
    "*prod(j notin I, theta(x_j/q)*theta(q^-r*x_j/(t*w))/(theta(x_j/t)*theta(q^-r*x_j/(q*w))))"
    "*prod(i in I, prod(j notin I, theta(t*x_i/(q*x_j))*theta(q*x_i/x_j)/(theta(x_i/x_j)*theta(t*x_i/x_j))))))"
)
