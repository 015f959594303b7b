"""Equation text -> ProblemSpec.

The source language mirrors the mathematical notation in plain text: ``T``
is the conformable derivative (``T2`` the twofold one), ``y`` the unknown,
``t^a`` the power t^alpha, and alpha itself is never written in the source
— it is bound later, when the forcing is lowered into the u-variable
algebra.  Grammar (EBNF):

    equation  := lhs "=" rhs ;
    lhs       := term { ("+"|"-") term } ;
    term      := [number] [deriv] "y" ;
    deriv     := "T" [integer] ;
    rhs       := "0" | expr ;
    expr      := prod { ("+"|"-") prod } ;
    prod      := factor { ["*"] factor } ;
    factor    := number | tpow | func | "(" expr ")" | "-" factor ;
    tpow      := "t^a" | "t^(" integer " a)" | "(t^a)^" integer ;
    func      := ("exp"|"sin"|"cos") "(" [["-"] number ["*"]] "t^a" ")" ;

Only the exponential-polynomial-trigonometric class is expressible; every
other forcing shape is rejected at parse time.  A minus sign is accepted
inside function arguments (``exp(-4 t^a)``) so decaying exponentials can
be written directly.  Implicit multiplication binds a number to a
following symbol or parenthesis, never to another number, and a bare ``-``
after a factor always means subtraction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .solver import ProblemSpec
from .ualgebra import COS, SIN, ZERO, SubstMap, UExpr, UTerm, add, expr, mul, scale

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z][A-Za-z0-9]*)
  | (?P<sym>[-+*()^=])
""", re.VERBOSE)

_FUNCTIONS = ("exp", "sin", "cos")


class EquationSyntaxError(ValueError):
    """Parse failure with the character offset and the expected tokens."""

    def __init__(self, message: str, offset: int, expected: str | None = None):
        detail = f"{message} at offset {offset}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)
        self.offset = offset
        self.expected = expected


# ---------------------------------------------------------------------------
# forcing AST


@dataclass(frozen=True)
class TNum:
    value: float


@dataclass(frozen=True)
class TPow:
    """t^(k*alpha), k a positive integer."""

    k: int


@dataclass(frozen=True)
class TFunc:
    """exp/sin/cos of c * t^alpha."""

    kind: str
    c: float


@dataclass(frozen=True)
class TNeg:
    child: object


@dataclass(frozen=True)
class TAdd:
    left: object
    right: object


@dataclass(frozen=True)
class TSub:
    left: object
    right: object


@dataclass(frozen=True)
class TMul:
    left: object
    right: object


@dataclass(frozen=True)
class EquationAst:
    """Monic left side as (order, coefficient) pairs plus the forcing AST.

    ``terms`` is sorted by descending order with duplicates merged and the
    leading coefficient scaled to 1; ``rhs`` is None for a homogeneous
    equation.
    """

    terms: tuple[tuple[int, float], ...]
    rhs: object | None

    @property
    def order(self) -> int:
        return self.terms[0][0]

    def coeff_vector(self) -> tuple[float, ...]:
        """p_0 .. p_{n-1} with absent orders filled by zero."""
        by_order = dict(self.terms)
        return tuple(by_order.get(i, 0.0) for i in range(self.order))


@dataclass(frozen=True)
class _Token:
    kind: str  # num | ident | sym | end
    text: str
    pos: int
    value: float = 0.0


def _lex(src: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise EquationSyntaxError(f"unexpected character {src[pos]!r}", pos)
        if m.lastgroup == "num":
            value = float(m.group())
            if value != value or value in (float("inf"), float("-inf")):
                raise EquationSyntaxError("non-finite numeric literal", pos)
            tokens.append(_Token("num", m.group(), pos, value))
        elif m.lastgroup == "ident":
            tokens.append(_Token("ident", m.group(), pos))
        elif m.lastgroup == "sym":
            tokens.append(_Token("sym", m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _lex(src)
        self.i = 0

    # -- token plumbing

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def take(self) -> _Token:
        tok = self.tokens[self.i]
        if tok.kind != "end":
            self.i += 1
        return tok

    def at_sym(self, *texts: str) -> bool:
        tok = self.peek()
        return tok.kind == "sym" and tok.text in texts

    def expect_sym(self, text: str) -> _Token:
        if not self.at_sym(text):
            self.fail(f"'{text}'")
        return self.take()

    def fail(self, expected: str):
        tok = self.peek()
        found = repr(tok.text) if tok.kind != "end" else "end of input"
        raise EquationSyntaxError(f"found {found}", tok.pos, expected)

    # -- grammar rules

    def equation(self) -> EquationAst:
        pairs = [self.lhs_term()]
        while self.at_sym("+", "-"):
            sign = -1.0 if self.take().text == "-" else 1.0
            order, coeff = self.lhs_term()
            pairs.append((order, sign * coeff))
        self.expect_sym("=")
        rhs = self.rhs()
        if self.peek().kind != "end":
            self.fail("end of input")
        return _normalize(pairs, rhs)

    def lhs_term(self) -> tuple[int, float]:
        coeff = 1.0
        tok = self.peek()
        if tok.kind == "num":
            coeff = self.take().value
        order = 0
        tok = self.peek()
        if tok.kind == "ident" and tok.text[0] == "T":
            digits = tok.text[1:]
            if digits and not digits.isdigit():
                self.fail("derivative 'T' or 'T<k>'")
            self.take()
            order = int(digits) if digits else 1
        tok = self.peek()
        if not (tok.kind == "ident" and tok.text == "y"):
            self.fail("a left-side term: [number] [T<k>] 'y'")
        self.take()
        return order, coeff

    def rhs(self):
        node = self.expr()
        if isinstance(node, TNum) and node.value == 0.0:
            return None
        return node

    def expr(self):
        node = self.prod()
        while self.at_sym("+", "-"):
            op = self.take().text
            right = self.prod()
            node = TAdd(node, right) if op == "+" else TSub(node, right)
        return node

    def prod(self):
        node = self.factor()
        while True:
            if self.at_sym("*"):
                self.take()
                node = TMul(node, self.factor())
                continue
            tok = self.peek()
            # implicit product: only before a symbol/function/parenthesis,
            # so "2 3" is rejected and "2 - 3" stays a subtraction
            if (tok.kind == "ident" and (tok.text == "t" or tok.text in _FUNCTIONS)) \
                    or self.at_sym("("):
                node = TMul(node, self.factor())
                continue
            return node

    def factor(self):
        tok = self.peek()
        if self.at_sym("-"):
            self.take()
            child = self.factor()
            if isinstance(child, TNum):
                return TNum(-child.value)
            return TNeg(child)
        if tok.kind == "num":
            return TNum(self.take().value)
        if tok.kind == "ident":
            if tok.text == "t":
                return self.tpow_plain()
            if tok.text in _FUNCTIONS:
                return self.func()
            raise EquationSyntaxError(
                f"{tok.text!r} is not part of the exponential-polynomial-"
                "trigonometric forcing class", tok.pos,
                "number, 't^a', exp/sin/cos, or '('")
        if self.at_sym("("):
            saved = self.i
            try:
                return self.tpow_paren()
            except EquationSyntaxError:
                self.i = saved
            self.take()
            node = self.expr()
            self.expect_sym(")")
            return node
        self.fail("a forcing factor")

    def tpow_plain(self):
        # "t^a" or "t^(k a)"
        self.take()  # t
        self.expect_sym("^")
        if self.at_sym("("):
            self.take()
            k = self.integer("a positive integer power")
            self.ident("a")
            self.expect_sym(")")
            return TPow(k)
        self.ident("a")
        return TPow(1)

    def tpow_paren(self):
        # "(t^a)^k"
        self.expect_sym("(")
        tok = self.peek()
        if not (tok.kind == "ident" and tok.text == "t"):
            self.fail("'t'")
        self.take()
        self.expect_sym("^")
        self.ident("a")
        self.expect_sym(")")
        self.expect_sym("^")
        k = self.integer("a positive integer power")
        return TPow(k)

    def func(self):
        kind = self.take().text
        self.expect_sym("(")
        c = 1.0
        negate = False
        if self.at_sym("-"):
            self.take()
            negate = True
        if self.peek().kind == "num":
            c = self.take().value
            if self.at_sym("*"):
                self.take()
        elif negate:
            c = 1.0  # "exp(-t^a)"
        if negate:
            c = -c
        tok = self.peek()
        if not (tok.kind == "ident" and tok.text == "t"):
            self.fail("'t^a'")
        self.take()
        self.expect_sym("^")
        self.ident("a")
        self.expect_sym(")")
        return TFunc(kind, c)

    def integer(self, expected: str) -> int:
        tok = self.peek()
        if tok.kind != "num" or tok.value != int(tok.value) or tok.value <= 0:
            self.fail(expected)
        self.take()
        return int(tok.value)

    def ident(self, name: str):
        tok = self.peek()
        if not (tok.kind == "ident" and tok.text == name):
            self.fail(f"'{name}'")
        self.take()


def _normalize(pairs: list[tuple[int, float]], rhs) -> EquationAst:
    merged: dict[int, float] = {}
    for order, coeff in pairs:
        merged[order] = merged.get(order, 0.0) + coeff
    n = max(merged)
    if n < 1:
        raise EquationSyntaxError(
            "equation needs at least one derivative of y", 0)
    lead = merged[n]
    if lead == 0.0:
        raise EquationSyntaxError(
            f"leading coefficient (order {n}) is zero", 0)
    if lead != 1.0:
        merged = {k: v / lead for k, v in merged.items()}
        merged[n] = 1.0
        if rhs is not None:
            rhs = TMul(TNum(1.0 / lead), rhs)
    terms = tuple(sorted(merged.items(), key=lambda kv: -kv[0]))
    return EquationAst(terms, rhs)


def parse_equation(src: str) -> EquationAst:
    """Parse source text into a monic EquationAst."""
    return _Parser(src).equation()


# ---------------------------------------------------------------------------
# lowering and evaluation


def lower_forcing(ast, subst: SubstMap) -> UExpr:
    """Rewrite a t-domain forcing AST in the u variable.

    t^(k*alpha) = (alpha*u)^k, e^(c*t^alpha) = e^(c*alpha*u), and likewise
    for sin/cos; rates and frequencies are formed exactly so resonance
    against characteristic roots survives the rewrite.
    """
    if ast is None:
        return ZERO
    alpha = Fraction(subst.alpha)

    def go(node) -> UExpr:
        if isinstance(node, TNum):
            return expr(UTerm(node.value))
        if isinstance(node, TPow):
            if node.k > 64:
                raise ValueError(
                    f"t-power exponent {node.k} exceeds the supported limit 64")
            return expr(UTerm(subst.alpha ** node.k, node.k))
        if isinstance(node, TFunc):
            rate = Fraction(node.c) * alpha
            if node.kind == "exp":
                return expr(UTerm(1.0, erate=rate))
            trig = SIN if node.kind == "sin" else COS
            return expr(UTerm(1.0, trig=trig, tfreq=rate))
        if isinstance(node, TNeg):
            return scale(go(node.child), -1.0)
        if isinstance(node, TAdd):
            return add(go(node.left), go(node.right))
        if isinstance(node, TSub):
            return add(go(node.left), scale(go(node.right), -1.0))
        if isinstance(node, TMul):
            return mul(go(node.left), go(node.right))
        raise TypeError(f"not a forcing AST node: {node!r}")

    return go(ast)


def eval_ast(ast, t: float, alpha: float) -> float:
    """Direct t-domain evaluation of a forcing AST (oracle for lowering)."""
    import math

    if ast is None:
        return 0.0
    if isinstance(ast, TNum):
        return ast.value
    if isinstance(ast, TPow):
        return t ** (ast.k * alpha)
    if isinstance(ast, TFunc):
        arg = ast.c * t ** alpha
        return {"exp": math.exp, "sin": math.sin, "cos": math.cos}[ast.kind](arg)
    if isinstance(ast, TNeg):
        return -eval_ast(ast.child, t, alpha)
    if isinstance(ast, TAdd):
        return eval_ast(ast.left, t, alpha) + eval_ast(ast.right, t, alpha)
    if isinstance(ast, TSub):
        return eval_ast(ast.left, t, alpha) - eval_ast(ast.right, t, alpha)
    if isinstance(ast, TMul):
        return eval_ast(ast.left, t, alpha) * eval_ast(ast.right, t, alpha)
    raise TypeError(f"not a forcing AST node: {ast!r}")


# ---------------------------------------------------------------------------
# rendering


def _num_text(x: float) -> str:
    return repr(float(x))


_PREC_SUM, _PREC_PROD, _PREC_UNARY, _PREC_ATOM = 1, 2, 3, 4


def _prec(node) -> int:
    if isinstance(node, (TAdd, TSub)):
        return _PREC_SUM
    if isinstance(node, TMul):
        return _PREC_PROD
    if isinstance(node, TNeg):
        return _PREC_UNARY
    return _PREC_ATOM


def render_texpr(node) -> str:
    """Canonical text for a forcing AST; reparses to the identical tree."""

    def go(n, floor: int) -> str:
        if isinstance(n, TNum):
            txt = _num_text(n.value)
        elif isinstance(n, TPow):
            txt = "t^a" if n.k == 1 else f"t^({n.k} a)"
        elif isinstance(n, TFunc):
            arg = "t^a" if n.c == 1.0 else f"{_num_text(n.c)} t^a"
            txt = f"{n.kind}({arg})"
        elif isinstance(n, TNeg):
            txt = "-" + go(n.child, _PREC_UNARY)
        elif isinstance(n, TAdd):
            txt = go(n.left, _PREC_SUM) + " + " + go(n.right, _PREC_SUM + 1)
        elif isinstance(n, TSub):
            txt = go(n.left, _PREC_SUM) + " - " + go(n.right, _PREC_SUM + 1)
        elif isinstance(n, TMul):
            txt = go(n.left, _PREC_PROD) + " * " + go(n.right, _PREC_PROD + 1)
        else:
            raise TypeError(f"not a forcing AST node: {n!r}")
        return f"({txt})" if _prec(n) < floor else txt

    return go(node, _PREC_SUM)


def render_equation(eq: EquationAst) -> str:
    """Canonical text for an equation; reparses to the identical AST."""
    chunks = []
    for i, (order, coeff) in enumerate(eq.terms):
        mag = abs(coeff)
        body = "" if mag == 1.0 else _num_text(mag) + " "
        body += ("y" if order == 0 else "T y" if order == 1 else f"T{order} y")
        if i == 0:
            chunks.append(("-" if coeff < 0 else "") + body)
        else:
            chunks.append((" - " if coeff < 0 else " + ") + body)
    rhs = "0" if eq.rhs is None else render_texpr(eq.rhs)
    return "".join(chunks) + " = " + rhs


def problem_from_source(src: str, alpha: float) -> ProblemSpec:
    """Parse and lower in one step once alpha is known."""
    ast = parse_equation(src)
    subst = SubstMap(alpha)
    return ProblemSpec(ast.coeff_vector(), alpha, lower_forcing(ast.rhs, subst))
