"""Parser and symbolic transform for polynomial evolution equations.

Input is a one-line DSL:

    equation := "u_t" "=" expr
    expr     := [("+"|"-")] term (("+"|"-") term)*
    term     := factor ("*" factor)*
    factor   := number | param | "u" | "D"<int>"(" expr ")"
              | "Dinv" "(" expr ")" | "(" expr ")"
    number   := integer ["/" integer]            # exact rationals
    param    := "beta" | "gamma" | identifier    # opaque rational constants

``D0(u)`` is ``u``; whitespace is ignored.  Parsing flattens the tree into a
sum of differential monomials (coefficient, parameter powers, multiset of
derivative orders applied to u, and a count of enclosing inverse derivatives),
applying the Leibniz rule to derivatives of products.  Monomials are graded by
the number of u factors, and the graded equation maps to its symbolic form:
a dispersion symbol ``omega(xi1)`` for the linear part and symmetric symbols
``a_k(xi1..xi_{k+1})`` for the nonlinear parts, with the derivative acting as
multiplication by the sum of the active xi's and the inverse derivative as
division by it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import (
    BETA,
    GAMMA,
    Context,
    RationalFunction,
    Variable,
    symmetrize,
)


class EquationError(ValueError):
    """Base class for equation-layer failures."""


class EquationSyntaxError(EquationError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"syntax error at line {line}, column {col}: {message}")
        self.line = line
        self.col = col


class UnsupportedEquationError(EquationError):
    """Structurally valid input outside the supported equation class."""


DEFAULT_MAX_DEGREE = 3

_RESERVED = {"u", "u_t", "Dinv"}
_DOP_RE = re.compile(r"^D(\d+)$")


# --------------------------------------------------------------------------
# differential monomials
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DiffMonomial:
    """coefficient * params * prod_i d^{q_i}u, wrapped in inverse derivatives.

    ``factors`` holds the derivative orders q_i (ascending); the degree is the
    number of factors.  ``inverse_d_count`` counts enclosing inverse-derivative
    applications after normalization.
    """

    coefficient: Fraction
    params: tuple[tuple[str, int], ...] = ()
    factors: tuple[int, ...] = ()
    inverse_d_count: int = 0

    @property
    def degree(self) -> int:
        return len(self.factors)

    def scaled(self, factor: Fraction) -> "DiffMonomial":
        return DiffMonomial(
            self.coefficient * factor, self.params, self.factors, self.inverse_d_count
        )

    def render(self) -> str:
        pieces = []
        coeff = abs(self.coefficient)
        if coeff != 1 or (not self.params and not self.factors):
            pieces.append(str(coeff))
        for name, e in self.params:
            pieces.extend([name] * e)
        for q in self.factors:
            pieces.append("u" if q == 0 else f"D{q}(u)")
        body = "*".join(pieces)
        for _ in range(self.inverse_d_count):
            body = f"Dinv({body})"
        return body

    def sort_key(self):
        return (self.degree, self.factors, self.inverse_d_count, self.params)


def _mono_mul(a: DiffMonomial, b: DiffMonomial) -> DiffMonomial:
    if a.inverse_d_count and (b.factors or b.inverse_d_count):
        raise UnsupportedEquationError(
            "a product of an inverse-derivative term with another u-dependent "
            "factor is outside the differential-polynomial class"
        )
    if b.inverse_d_count and a.factors:
        raise UnsupportedEquationError(
            "a product of an inverse-derivative term with another u-dependent "
            "factor is outside the differential-polynomial class"
        )
    params: dict[str, int] = {}
    for name, e in a.params + b.params:
        params[name] = params.get(name, 0) + e
    return DiffMonomial(
        a.coefficient * b.coefficient,
        tuple(sorted(params.items())),
        tuple(sorted(a.factors + b.factors)),
        a.inverse_d_count + b.inverse_d_count,
    )


def _mono_derivative(m: DiffMonomial) -> list[DiffMonomial]:
    if m.inverse_d_count:
        return [
            DiffMonomial(m.coefficient, m.params, m.factors, m.inverse_d_count - 1)
        ]
    if not m.factors:
        return []  # derivative of a constant
    out = []
    for i in range(len(m.factors)):
        bumped = list(m.factors)
        bumped[i] += 1
        out.append(DiffMonomial(m.coefficient, m.params, tuple(sorted(bumped)), 0))
    return out


def _mono_inverse(m: DiffMonomial) -> DiffMonomial:
    if not m.factors:
        raise UnsupportedEquationError(
            "inverse derivative of a u-free term is not a differential monomial"
        )
    return DiffMonomial(m.coefficient, m.params, m.factors, m.inverse_d_count + 1)


def _collect(monomials: Iterable[DiffMonomial]) -> list[DiffMonomial]:
    merged: dict[tuple, Fraction] = {}
    for m in monomials:
        key = (m.params, m.factors, m.inverse_d_count)
        merged[key] = merged.get(key, Fraction(0)) + m.coefficient
    out = [
        DiffMonomial(c, params, factors, inv)
        for (params, factors, inv), c in merged.items()
        if c != 0
    ]
    out.sort(key=DiffMonomial.sort_key)
    return out


# --------------------------------------------------------------------------
# tokenizer / recursive-descent parser
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    kind: str  # NUM, IDENT, OP, EOF
    value: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(_Token("NUM", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("IDENT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in "+-*/()=":
            tokens.append(_Token("OP", ch, line, col))
            col += 1
            i += 1
            continue
        raise EquationSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("EOF", "", line, col))
    return tokens


class _Parser:
    """Recursive descent over the token stream; yields monomial lists."""

    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        if tok.kind == "OP" and tok.value == "/":
            message = "division is only allowed between integer literals"
        raise EquationSyntaxError(message, tok.line, tok.col)

    def expect_op(self, op: str):
        tok = self.next()
        if tok.kind != "OP" or tok.value != op:
            self.fail(f"expected {op!r}", tok)

    def parse_equation(self) -> list[DiffMonomial]:
        tok = self.next()
        if tok.kind != "IDENT" or tok.value != "u_t":
            self.fail("equation must start with 'u_t ='", tok)
        self.expect_op("=")
        monomials = self.parse_expr()
        tok = self.peek()
        if tok.kind != "EOF":
            self.fail(f"unexpected {tok.value!r} after expression", tok)
        return monomials

    def parse_expr(self) -> list[DiffMonomial]:
        sign = Fraction(1)
        if self.peek().kind == "OP" and self.peek().value in "+-":
            if self.next().value == "-":
                sign = Fraction(-1)
        total = [m.scaled(sign) for m in self.parse_term()]
        while self.peek().kind == "OP" and self.peek().value in "+-":
            op = self.next().value
            part = self.parse_term()
            sign = Fraction(-1) if op == "-" else Fraction(1)
            total.extend(m.scaled(sign) for m in part)
        return total

    def parse_term(self) -> list[DiffMonomial]:
        monomials = self.parse_factor()
        while self.peek().kind == "OP" and self.peek().value == "*":
            self.next()
            rhs = self.parse_factor()
            monomials = [_mono_mul(a, b) for a in monomials for b in rhs]
        return monomials

    def parse_factor(self) -> list[DiffMonomial]:
        tok = self.next()
        if tok.kind == "NUM":
            value = Fraction(int(tok.value))
            if self.peek().kind == "OP" and self.peek().value == "/":
                self.next()
                den_tok = self.next()
                if den_tok.kind != "NUM":
                    self.fail("expected an integer after '/'", den_tok)
                if int(den_tok.value) == 0:
                    self.fail("zero denominator in a rational literal", den_tok)
                value /= int(den_tok.value)
            return [DiffMonomial(value)]
        if tok.kind == "OP" and tok.value == "(":
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        if tok.kind == "IDENT":
            name = tok.value
            if name == "u_t":
                self.fail("u_t may not appear on the right-hand side", tok)
            if name == "u":
                return [DiffMonomial(Fraction(1), (), (0,), 0)]
            dop = _DOP_RE.match(name)
            if dop or name == "Dinv":
                self.expect_op("(")
                inner = self.parse_expr()
                self.expect_op(")")
                if dop:
                    order = int(dop.group(1))
                    for _ in range(order):
                        inner = [d for m in inner for d in _mono_derivative(m)]
                    return _collect(inner) if order else inner
                return [_mono_inverse(m) for m in inner]
            return [DiffMonomial(Fraction(1), ((name, 1),), (), 0)]
        self.fail(f"unexpected {tok.value!r}", tok)


def parse(text: str, max_degree: int = DEFAULT_MAX_DEGREE) -> list[DiffMonomial]:
    """Parse DSL text into a collected, sorted list of differential monomials."""
    monomials = _collect(_Parser(_tokenize(text)).parse_equation())
    for m in monomials:
        if m.degree == 0:
            raise UnsupportedEquationError(
                f"term {m.render()!r} contains no u factor"
            )
        if m.degree > max_degree:
            raise UnsupportedEquationError(
                f"term of degree {m.degree} exceeds the configured maximum "
                f"{max_degree}"
            )
    return monomials


def render(monomials: Sequence[DiffMonomial]) -> str:
    """Inverse of :func:`parse` up to collection (round-trip stable)."""
    if not monomials:
        return "u_t = 0"
    parts = []
    for i, m in enumerate(monomials):
        sign = "-" if m.coefficient < 0 else "+"
        if i == 0:
            parts.append(("-" if sign == "-" else "") + m.render())
        else:
            parts.append(f" {sign} {m.render()}")
    return "u_t = " + "".join(parts)


def grade(monomials: Sequence[DiffMonomial]) -> dict[int, list[DiffMonomial]]:
    """Partition by degree; the linear part must be nonempty."""
    graded: dict[int, list[DiffMonomial]] = {}
    for m in monomials:
        graded.setdefault(m.degree, []).append(m)
    if 1 not in graded:
        raise UnsupportedEquationError(
            "the equation has no linear part, so no dispersion symbol exists"
        )
    return {k: graded[k] for k in sorted(graded)}


# --------------------------------------------------------------------------
# symbolic representation
# --------------------------------------------------------------------------


@dataclass
class EvolutionEquation:
    """Graded symbolic form: dispersion symbol plus symmetric nonlinear symbols.

    ``a[k-1]`` is the degree-(k+1) symbol a_k(xi1..xi_{k+1}); symbols beyond
    the equation's degree are identically zero.
    """

    text: str
    monomials: tuple[DiffMonomial, ...]
    context: Context
    omega: RationalFunction
    a: tuple[RationalFunction, ...]
    max_degree: int

    def a_k(self, k: int) -> RationalFunction:
        if 1 <= k <= len(self.a):
            return self.a[k - 1]
        return self.context.zero

    def with_n_xi(self, n_xi: int) -> "EvolutionEquation":
        if n_xi <= self.context.n_xi:
            return self
        return to_symbols(self.monomials, n_xi=n_xi, text=self.text)


def monomial_symbol(ctx: Context, m: DiffMonomial) -> RationalFunction:
    """Symbol of one monomial: symmetrized xi powers over the inverse-derivative
    denominator, times the scalar coefficient."""
    deg = m.degree
    poly = ctx.poly_const(m.coefficient)
    for name, e in m.params:
        poly = poly * ctx.gen(name) ** e
    xi_prod = ctx.ring.one
    for i, q in enumerate(m.factors, start=1):
        xi_prod = xi_prod * ctx.xi(i) ** q
    f = RationalFunction(ctx, poly * xi_prod)
    f = symmetrize(f, ctx.xi_variables(deg))
    if m.inverse_d_count:
        total = sum(ctx.xis(deg)[1:], ctx.xis(deg)[0])
        if not total:
            raise UnsupportedEquationError(
                "inverse derivative with an identically vanishing symbol denominator"
            )
        f = f / RationalFunction(ctx, total**m.inverse_d_count)
    return f


def to_symbols(
    monomials: Sequence[DiffMonomial],
    n_xi: int | None = None,
    text: str = "",
) -> EvolutionEquation:
    """Build the symbolic representation of a graded equation."""
    graded = grade(monomials)
    max_degree = max(graded)
    if n_xi is None:
        n_xi = max(2, max_degree)
    if n_xi < max_degree:
        raise UnsupportedEquationError(
            f"context with {n_xi} xi variables cannot hold degree {max_degree}"
        )
    extras = sorted(
        {
            name
            for m in monomials
            for name, _ in m.params
            if name not in (BETA, GAMMA)
        }
    )
    ctx = Context(n_xi, tuple(extras))
    symbols: dict[int, RationalFunction] = {}
    for degree, members in graded.items():
        s = ctx.zero
        for m in members:
            s = s + monomial_symbol(ctx, m)
        symbols[degree] = s
    omega = symbols[1]
    a = tuple(
        symbols.get(k + 1, ctx.zero) * (k + 1) for k in range(1, max_degree)
    )
    return EvolutionEquation(
        text=text or render(list(monomials)),
        monomials=tuple(monomials),
        context=ctx,
        omega=omega,
        a=a,
        max_degree=max_degree,
    )


def parse_equation(
    text: str,
    max_degree: int = DEFAULT_MAX_DEGREE,
    n_xi: int | None = None,
) -> EvolutionEquation:
    """Parse DSL text straight through to the symbolic representation."""
    return to_symbols(parse(text, max_degree=max_degree), n_xi=n_xi, text=text)


# Built-in aliases: the rotation-modified equation with symbolic parameters,
# and its gamma=0 limit.
ALIASES = {
    "ostrovsky": "u_t = Dinv(beta*D4(u) + gamma*u) - 2*u*D1(u)",
    "kdv": "u_t = beta*D3(u) - 2*u*D1(u)",
}


def resolve_alias(name_or_text: str) -> str:
    return ALIASES.get(name_or_text.strip().lower(), name_or_text)
