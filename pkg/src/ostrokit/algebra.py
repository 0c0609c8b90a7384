"""Exact-arithmetic kernel: multivariate rationals, rational functions and
flat Laurent expansions at eta -> infinity.

Everything here is exact: coefficients are arbitrary-precision rationals and
no floating point is used anywhere in this module.  Polynomials are sparse
ring elements (sympy's distributed polynomial rings over QQ) living in a
:class:`Context` that fixes the variable universe and the monomial order:
graded lexicographic with ``eta > xi1 > xi2 > ... > beta > gamma`` and any
extra named parameters after ``gamma``.  The canonical public carrier is
:class:`RationalFunction`; :class:`LaurentSeries` stores the coefficients of
an expansion in powers of ``eta**-n``.

The textual rendering produced by :func:`poly_str` / ``str(RationalFunction)``
is stable across runs and is used for golden-file tests:  monomials are sorted
in decreasing order, powers use ``^`` and variables print as ``xi1``, ``eta``,
``beta``, ``gamma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Mapping, Sequence, Union

from sympy.polys.domains import QQ
from sympy.polys.rings import ring as _sympy_ring


class AlgebraError(ValueError):
    """Base class for violations of this module's contracts."""


class MalformedInputError(AlgebraError):
    """Zero denominator or otherwise ill-formed value."""


class ContractViolationError(AlgebraError):
    """An operation was called outside its stated precondition."""


class EmptySeriesError(AlgebraError):
    """Requested truncation depth lies before the series starts."""


# --------------------------------------------------------------------------
# variables and contexts
# --------------------------------------------------------------------------

BETA = "beta"
GAMMA = "gamma"


@dataclass(frozen=True, order=True)
class Variable:
    """A symbol of the computation: ``xi<i>``, ``eta`` or a named parameter."""

    name: str

    @classmethod
    def xi(cls, index: int) -> "Variable":
        if index < 1:
            raise ContractViolationError("xi indices start at 1")
        return cls(f"xi{index}")

    @classmethod
    def eta(cls) -> "Variable":
        return cls("eta")

    @classmethod
    def parameter(cls, name: str) -> "Variable":
        return cls(name)

    @property
    def kind(self) -> str:
        if self.name == "eta":
            return "eta"
        if self.name.startswith("xi") and self.name[2:].isdigit():
            return "xi"
        return "parameter"

    @property
    def index(self) -> int:
        if self.kind != "xi":
            raise ContractViolationError(f"{self.name} has no xi index")
        return int(self.name[2:])

    def __str__(self) -> str:
        return self.name


_CONTEXT_CACHE: dict = {}


class Context:
    """Fixed variable universe plus the sparse polynomial ring over QQ.

    A context always contains ``eta``, ``xi1..xi<n_xi>`` and the parameters
    ``beta`` and ``gamma``; further parameter names may be appended.  All
    values produced within one context share its ring and may be combined
    freely; contexts with identical variable sets are interchangeable.
    """

    def __new__(cls, n_xi: int, extra_params: Sequence[str] = ()):
        key = (n_xi, tuple(sorted(set(extra_params))))
        cached = _CONTEXT_CACHE.get(key)
        if cached is not None:
            return cached
        self = super().__new__(cls)
        _CONTEXT_CACHE[key] = self
        self._init(n_xi, key[1])
        return self

    def _init(self, n_xi: int, extra_params: tuple) -> None:
        if n_xi < 1:
            raise ContractViolationError("a context needs at least xi1")
        for name in extra_params:
            if name in (BETA, GAMMA, "eta") or (name.startswith("xi") and name[2:].isdigit()):
                raise ContractViolationError(f"reserved variable name: {name}")
        self.n_xi = n_xi
        self.params = (BETA, GAMMA) + extra_params
        names = ["eta"] + [f"xi{i}" for i in range(1, n_xi + 1)] + list(self.params)
        self.var_names = tuple(names)
        ring_objs = _sympy_ring(", ".join(names), QQ, order="grlex")
        self.ring = ring_objs[0]
        self._gens = dict(zip(names, ring_objs[1:]))
        self.variables = tuple(Variable(n) for n in names)

    # -- variable access ----------------------------------------------------

    def gen(self, var: Union[Variable, str]):
        name = var.name if isinstance(var, Variable) else var
        try:
            return self._gens[name]
        except KeyError:
            raise ContractViolationError(f"unknown variable {name!r}") from None

    @property
    def eta(self):
        return self._gens["eta"]

    def xi(self, index: int):
        return self.gen(Variable.xi(index))

    def xis(self, count: int | None = None):
        count = self.n_xi if count is None else count
        if count > self.n_xi:
            raise ContractViolationError(f"context holds only xi1..xi{self.n_xi}")
        return [self._gens[f"xi{i}"] for i in range(1, count + 1)]

    def xi_variables(self, count: int | None = None) -> list[Variable]:
        count = self.n_xi if count is None else count
        return [Variable.xi(i) for i in range(1, count + 1)]

    # -- polynomial construction --------------------------------------------

    def poly_const(self, value) -> "PolyElement":
        q = _to_qq(value)
        return self.ring.ground_new(q)

    def poly_from_terms(self, terms: Mapping[tuple, Fraction]) -> "PolyElement":
        return self.ring({m: _to_qq(c) for m, c in terms.items() if c != 0})

    # -- rational-function conveniences --------------------------------------

    def rf(self, num, den=None) -> "RationalFunction":
        return RationalFunction(self, num, den)

    def rf_const(self, value) -> "RationalFunction":
        return RationalFunction(self, self.poly_const(value))

    @property
    def zero(self) -> "RationalFunction":
        return RationalFunction(self, self.ring.zero)

    @property
    def one(self) -> "RationalFunction":
        return RationalFunction(self, self.ring.one)

    def __repr__(self) -> str:
        return f"Context(n_xi={self.n_xi}, params={self.params})"


def _to_qq(value):
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, int):
        return QQ(value)
    return value  # assume a QQ element already


def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


# --------------------------------------------------------------------------
# polynomial helpers (elements are sympy PolyElement; context supplies ring)
# --------------------------------------------------------------------------


def poly_subs(ctx: Context, p, mapping: Mapping) -> "PolyElement":
    """Simultaneous substitution of polynomials for variables.

    ``mapping`` sends :class:`Variable` (or names) to ring elements, ints or
    Fractions.  Substitution is simultaneous, so permutations of variables
    behave correctly.
    """
    repl = {}
    for key, val in mapping.items():
        name = key.name if isinstance(key, Variable) else key
        if isinstance(val, (int, Fraction)):
            val = ctx.poly_const(val)
        repl[ctx.gen(name)] = val
    gens = ctx.ring.gens
    out = ctx.ring.zero
    for monom, coeff in p.terms():
        term = ctx.ring.ground_new(coeff)
        for g, e in zip(gens, monom):
            if e:
                term = term * repl.get(g, g) ** e
        out = out + term
    return out


def poly_degree_in(p, gen) -> int:
    if not p:
        return 0
    return p.degree(gen)


def poly_str(ctx: Context, p) -> str:
    """Stable debug rendering: grlex-descending monomials, ``^`` powers.

    Within a monomial, parameters print first (they act as coefficients),
    then the xi variables, then eta.
    """
    if not p:
        return "0"
    order = ctx.ring.order
    n_xi = ctx.n_xi
    display_rank = {0: n_xi + 1}  # eta last
    for i in range(1, n_xi + 1):
        display_rank[i] = i  # xi1..xin in the middle
    for j in range(n_xi + 1, len(ctx.var_names)):
        display_rank[j] = j - (n_xi + 1) - len(ctx.params)  # params first
    parts = []
    for monom, coeff in sorted(p.terms(), key=lambda t: order(t[0]), reverse=True):
        frac = _to_fraction(coeff)
        indexed = sorted(
            (i for i, e in enumerate(monom) if e), key=display_rank.__getitem__
        )
        atoms = [
            f"{ctx.var_names[i]}^{monom[i]}" if monom[i] > 1 else ctx.var_names[i]
            for i in indexed
        ]
        if not atoms:
            body = str(abs(frac))
        elif abs(frac) == 1:
            body = "*".join(atoms)
        else:
            body = "*".join([str(abs(frac))] + atoms)
        parts.append(("-" if frac < 0 else "+", body))
    sign, body = parts[0]
    text = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def _den_needs_parens(ctx: Context, den) -> bool:
    terms = den.terms()
    if len(terms) > 1:
        return True
    monom, coeff = terms[0]
    n_atoms = sum(1 for e in monom if e)
    if n_atoms == 0:
        return False  # bare constant
    return not (n_atoms == 1 and sum(monom) == 1 and _to_fraction(coeff) == 1)


# --------------------------------------------------------------------------
# rational functions
# --------------------------------------------------------------------------


class RationalFunction:
    """Exact ratio of multivariate polynomials in canonical form.

    Canonical form: gcd(num, den) is constant, both polynomials have integer
    coefficients with joint content 1, and the leading coefficient of the
    denominator (grlex) is positive.  Equality of canonical forms therefore
    coincides with equality by cross-multiplication.
    """

    __slots__ = ("context", "num", "den")

    def __init__(self, context: Context, num, den=None):
        if den is None:
            den = context.ring.one
        if not den:
            raise MalformedInputError("zero denominator")
        if not num:
            num, den = context.ring.zero, context.ring.one
        else:
            g = num.gcd(den)
            num = num.quo(g)
            den = den.quo(g)
            num, den = _canonical_scale(num, den)
        object.__setattr__(self, "context", context)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *_):
        raise AttributeError("RationalFunction is immutable")

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction)):
            return self.context.rf_const(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RationalFunction(
            self.context, self.num * o.den + o.num * self.den, self.den * o.den
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RationalFunction(
            self.context, self.num * o.den - o.num * self.den, self.den * o.den
        )

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RationalFunction(self.context, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero:
            raise MalformedInputError("division by zero rational function")
        return RationalFunction(self.context, self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __neg__(self):
        return RationalFunction(self.context, -self.num, self.den)

    def __pow__(self, n: int):
        if n < 0:
            return self.reciprocal() ** (-n)
        return RationalFunction(self.context, self.num**n, self.den**n)

    def reciprocal(self) -> "RationalFunction":
        if self.is_zero:
            raise MalformedInputError("reciprocal of zero")
        return RationalFunction(self.context, self.den, self.num)

    # -- structure -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.num

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.num.terms())), tuple(sorted(self.den.terms()))))

    def cross_equal(self, other: "RationalFunction") -> bool:
        """Equality by cross-multiplication (independent of canonical form)."""
        return self.num * other.den == other.num * self.den

    def subs(self, mapping: Mapping) -> "RationalFunction":
        num = poly_subs(self.context, self.num, mapping)
        den = poly_subs(self.context, self.den, mapping)
        if not den:
            raise MalformedInputError("substitution produced a zero denominator")
        return RationalFunction(self.context, num, den)

    def evaluate(self, point: Mapping[Union[Variable, str], Fraction]) -> Fraction:
        """Exact evaluation at rational values for every context variable."""
        vals = []
        for var in self.context.var_names:
            key = var if var in point else Variable(var)
            if key not in point:
                raise ContractViolationError(f"no value supplied for {var}")
            vals.append((self.context.gen(var), _to_qq(point[key])))
        den = self.den.evaluate(list(vals))
        if not den:
            raise MalformedInputError("evaluation point lies on a pole")
        num = self.num.evaluate(list(vals))
        return _to_fraction(QQ.convert(num) / QQ.convert(den))

    def evaluate_complex(self, point: Mapping[Union[Variable, str], complex]) -> complex:
        """Floating evaluation used only by numerical cross-checks."""

        def ev(p):
            total = 0j
            for monom, coeff in p.terms():
                term = complex(Fraction(int(coeff.numerator), int(coeff.denominator)))
                for name, e in zip(self.context.var_names, monom):
                    if e:
                        key = name if name in point else Variable(name)
                        term *= complex(point[key]) ** e
                total += term
            return total

        return ev(self.num) / ev(self.den)

    def variables(self) -> set[Variable]:
        present = set()
        for p in (self.num, self.den):
            for monom, _ in p.terms():
                for name, e in zip(self.context.var_names, monom):
                    if e:
                        present.add(Variable(name))
        return present

    def __str__(self) -> str:
        num_s = poly_str(self.context, self.num)
        if self.den == self.context.ring.one:
            return num_s
        if len(self.num.terms()) > 1:
            num_s = f"({num_s})"
        den_s = poly_str(self.context, self.den)
        if _den_needs_parens(self.context, self.den):
            den_s = f"({den_s})"
        return f"{num_s}/{den_s}"

    def __repr__(self) -> str:
        return f"RationalFunction({self!s})"


def _canonical_scale(num, den):
    """Scale so both polynomials are integer with joint content 1, den LC > 0."""
    denoms = [int(c.denominator) for c in num.coeffs()] + [
        int(c.denominator) for c in den.coeffs()
    ]
    lcm = 1
    for d in denoms:
        lcm = lcm * d // math.gcd(lcm, d)
    num = num.mul_ground(QQ(lcm))
    den = den.mul_ground(QQ(lcm))
    content = 0
    for c in list(num.coeffs()) + list(den.coeffs()):
        content = math.gcd(content, abs(int(c.numerator)))
    if content > 1:
        num = num.quo_ground(QQ(content))
        den = den.quo_ground(QQ(content))
    if den.LC < 0:
        num, den = -num, -den
    return num, den


def normalize(f: RationalFunction) -> RationalFunction:
    """Return the canonical form of ``f`` (idempotent by construction)."""
    return RationalFunction(f.context, f.num, f.den)


# --------------------------------------------------------------------------
# symmetrization
# --------------------------------------------------------------------------


def symmetrize(f: RationalFunction, over: Sequence[Union[Variable, str]]) -> RationalFunction:
    """Average of ``f`` over all permutations of the listed xi variables.

    eta may never be symmetrized over; the result is invariant under every
    permutation of ``over`` and the operation is a linear projection.
    """
    ctx = f.context
    variables = [v if isinstance(v, Variable) else Variable(v) for v in over]
    for v in variables:
        if v.kind == "eta":
            raise ContractViolationError("eta cannot be symmetrized over")
        if v.kind != "xi":
            raise ContractViolationError(f"can only symmetrize over xi variables, got {v}")
        ctx.gen(v)  # raises if absent
    if len(set(variables)) != len(variables):
        raise ContractViolationError("duplicate variables in symmetrization list")
    m = len(variables)
    if m <= 1:
        return f
    total = None
    for perm in permutations(variables):
        mapping = {src: ctx.gen(dst) for src, dst in zip(variables, perm)}
        g = f.subs(mapping)
        total = g if total is None else total + g
    return total * Fraction(1, math.factorial(m))


def is_symmetric(f: RationalFunction, over: Sequence[Union[Variable, str]]) -> bool:
    """True iff ``f`` is invariant under all permutations of ``over``.

    Checked on adjacent transpositions, which generate the full group.
    """
    ctx = f.context
    variables = [v if isinstance(v, Variable) else Variable(v) for v in over]
    for a, b in zip(variables, variables[1:]):
        swapped = f.subs({a: ctx.gen(b), b: ctx.gen(a)})
        if swapped != f:
            return False
    return True


def is_polynomial_in_xi(f: RationalFunction) -> bool:
    """True iff the (normalized) denominator is free of every xi variable.

    Denominators in the parameters alone do not spoil polynomiality.
    """
    ctx = f.context
    return all(poly_degree_in(f.den, g) == 0 for g in ctx.xis())


# --------------------------------------------------------------------------
# Laurent expansion at eta -> infinity
# --------------------------------------------------------------------------


class LaurentSeries:
    """Truncated expansion ``f = sum coeff(n) * eta**-n`` for n up to depth.

    Coefficients are eta-free rational functions; zero coefficients inside the
    range are not stored but are reported by :meth:`coefficient`.
    ``start_order`` may be negative (positive powers of eta).
    """

    __slots__ = ("context", "start_order", "coeffs", "depth")

    def __init__(self, context: Context, start_order: int, coeffs: dict, depth: int):
        self.context = context
        self.start_order = start_order
        self.coeffs = dict(coeffs)
        self.depth = depth

    def coefficient(self, n: int) -> RationalFunction:
        if n > self.depth:
            raise EmptySeriesError(f"order {n} beyond computed depth {self.depth}")
        return self.coeffs.get(n, self.context.zero)

    def orders(self) -> range:
        return range(self.start_order, self.depth + 1)

    def truncate(self, depth: int) -> "LaurentSeries":
        if depth > self.depth:
            raise EmptySeriesError("cannot truncate beyond computed depth")
        if depth < self.start_order:
            raise EmptySeriesError("truncation removes every computed order")
        kept = {n: c for n, c in self.coeffs.items() if n <= depth}
        return LaurentSeries(self.context, self.start_order, kept, depth)

    def as_rational(self) -> RationalFunction:
        """Resum the truncated series into a single rational function."""
        ctx = self.context
        total = ctx.zero
        for n, c in self.coeffs.items():
            if n >= 0:
                total = total + c * RationalFunction(ctx, ctx.ring.one, ctx.eta**n)
            else:
                total = total + c * RationalFunction(ctx, ctx.eta ** (-n))
        return total

    def matches(self, f: RationalFunction) -> bool:
        """Self-check: the residual f - resum starts beyond the depth."""
        residual = f - self.as_rational()
        if residual.is_zero:
            return True
        ctx = self.context
        lead = poly_degree_in(residual.den, ctx.eta) - poly_degree_in(residual.num, ctx.eta)
        return lead > self.depth

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentSeries)
            and self.start_order == other.start_order
            and self.depth == other.depth
            and all(self.coefficient(n) == other.coefficient(n) for n in self.orders())
        )

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = [f"[{c}]*eta^{-n}" for n, c in sorted(self.coeffs.items())]
        return " + ".join(parts)


def _eta_parts(ctx: Context, p) -> dict[int, "PolyElement"]:
    """Split a polynomial by powers of eta; values are eta-free."""
    idx = ctx.var_names.index("eta")
    parts: dict[int, "PolyElement"] = {}
    for monom, coeff in p.terms():
        k = monom[idx]
        reduced = list(monom)
        reduced[idx] = 0
        cur = parts.get(k, ctx.ring.zero)
        parts[k] = cur + ctx.ring({tuple(reduced): coeff})
    return parts


def laurent_expand(f: RationalFunction, depth: int) -> LaurentSeries:
    """Exact series division of ``f`` in powers of ``eta**-1`` up to depth."""
    ctx = f.context
    if f.is_zero:
        if depth < 0:
            raise EmptySeriesError("depth precedes the start of the series")
        return LaurentSeries(ctx, 0, {}, depth)
    num_parts = _eta_parts(ctx, f.num)
    den_parts = _eta_parts(ctx, f.den)
    num_deg = max(num_parts)
    den_deg = max(den_parts)
    start = den_deg - num_deg
    if depth < start:
        raise EmptySeriesError(
            f"depth {depth} precedes the start order {start} of the series"
        )
    lead = RationalFunction(ctx, den_parts[den_deg])
    coeffs: dict[int, RationalFunction] = {}
    quotients: list[RationalFunction] = []
    for k in range(depth - start + 1):
        acc = RationalFunction(ctx, num_parts.get(num_deg - k, ctx.ring.zero))
        for j in range(1, k + 1):
            d_j = den_parts.get(den_deg - j)
            if d_j is not None:
                acc = acc - RationalFunction(ctx, d_j) * quotients[k - j]
        q = acc / lead
        quotients.append(q)
        if not q.is_zero:
            coeffs[start + k] = q
    return LaurentSeries(ctx, start, coeffs, depth)
