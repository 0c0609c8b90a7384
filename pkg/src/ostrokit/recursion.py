"""Formal recursion operator coefficients and the locality test.

For an equation with dispersion symbol omega and symmetric nonlinear symbols
a_k there is a formal recursion operator ``eta + u*phi_1 + u^2*phi_2 + ...``
whose coefficients are determined order by order:

    phi_1(xi1, eta) = N(xi1, eta) * xi1 * a_1(xi1, eta)

and for m >= 2, with N(args) the reciprocal of omega(sum args) - sum omega(arg),

    phi_m = N(xi1..xim, eta) * { (xi1+..+xim) * a_m(xi1..xim, eta)
        + sum_{n=1}^{m-1} S[ n/(m-n+1) * phi_n(xi1.., xi_n+..+xim, eta)
                                        * a_{m-n}(xi_n..xim)
                           + phi_n(xi1..xi_n, eta+xi_{n+1}+..+xim)
                                        * a_{m-n}(xi_{n+1}..xim, eta)
                           - phi_n(xi1..xi_n, eta)
                                        * a_{m-n}(xi_{n+1}..xim, eta+xi1+..+xi_n) ] }

where S sums the bracket over all permutations of xi1..xim (eta fixed).  The
plain sum (rather than the 1/m! average) is the convention that reproduces the
known expansions for the integrable gamma=0 case; a constant factor per order
does not affect locality.

A coefficient is local when every term of its expansion in powers of
eta**-1 is a symmetric polynomial in the xi's (parameter-only denominators are
fine).  A non-local term is an obstruction and proves nonintegrability;
absence of obstructions up to the computed order is only a necessary
condition, never a proof of integrability.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Optional, Sequence

from .algebra import (
    Context,
    RationalFunction,
    LaurentSeries,
    Variable,
    is_polynomial_in_xi,
    is_symmetric,
    laurent_expand,
)
from .equation import EvolutionEquation


class DegenerateDispersionError(ValueError):
    """omega(sum) - sum(omega) vanished identically; N is undefined."""


DEFAULT_MAX_ORDER = 2
DEFAULT_DEPTH = 6

NECESSARY_CONDITION_DISCLAIMER = (
    "no-obstruction-up-to-depth is a necessary condition only: it does not "
    "prove integrability, while obstruction-found does prove nonintegrability"
)


def _omega_at(eq: EvolutionEquation, arg) -> RationalFunction:
    return eq.omega.subs({Variable.xi(1): arg})


def n_omega(eq: EvolutionEquation, args: Sequence) -> RationalFunction:
    """Reciprocal of omega(sum of args) - sum of omega(each arg)."""
    if not args:
        raise DegenerateDispersionError("N requires at least one argument")
    total = args[0]
    for a in args[1:]:
        total = total + a
    diff = _omega_at(eq, total)
    for a in args:
        diff = diff - _omega_at(eq, a)
    if diff.is_zero:
        raise DegenerateDispersionError(
            "omega(sum) - sum(omega) vanishes identically for these arguments"
        )
    return diff.reciprocal()


@dataclass
class PhiCoefficient:
    """Order-m coefficient of the formal recursion operator with its expansion."""

    m: int
    value: RationalFunction
    expansion: LaurentSeries

    def xi_variables(self) -> list[Variable]:
        return [Variable.xi(i) for i in range(1, self.m + 1)]


def _phi_at(phi: PhiCoefficient, xi_args: Sequence, eta_arg) -> RationalFunction:
    mapping = {Variable.xi(i + 1): arg for i, arg in enumerate(xi_args)}
    mapping[Variable.eta()] = eta_arg
    return phi.value.subs(mapping)


def _a_at(eq: EvolutionEquation, k: int, args: Sequence) -> RationalFunction:
    a = eq.a_k(k)
    if a.is_zero:
        return a
    mapping = {Variable.xi(i + 1): arg for i, arg in enumerate(args)}
    return a.subs(mapping)


def phi_1(eq: EvolutionEquation, depth: int = DEFAULT_DEPTH) -> PhiCoefficient:
    ctx = eq.context
    xi1, eta = ctx.xi(1), ctx.eta
    a1 = _a_at(eq, 1, [xi1, eta])
    if a1.is_zero:
        value = ctx.zero
    else:
        value = n_omega(eq, [xi1, eta]) * RationalFunction(ctx, xi1) * a1
    return PhiCoefficient(1, value, laurent_expand(value, depth))


def phi_m(
    eq: EvolutionEquation,
    m: int,
    prior: Sequence[PhiCoefficient],
    depth: int = DEFAULT_DEPTH,
) -> PhiCoefficient:
    """Order-m coefficient from the already-computed phi_1..phi_{m-1}."""
    if m < 2:
        raise ValueError("phi_m starts at m = 2; use phi_1 below that")
    if len(prior) < m - 1:
        raise ValueError(f"phi_{m} needs phi_1..phi_{m-1}")
    ctx = eq.context
    if ctx.n_xi < m:
        raise ValueError(f"context holds xi1..xi{ctx.n_xi}, need xi1..xi{m}")
    xis = ctx.xis(m)
    eta = ctx.eta

    total = ctx.zero
    a_m = _a_at(eq, m, xis + [eta])
    if not a_m.is_zero:
        total = total + RationalFunction(ctx, sum(xis[1:], xis[0])) * a_m

    for n in range(1, m):
        a_k = eq.a_k(m - n)
        phi_n = prior[n - 1]
        if a_k.is_zero or phi_n.value.is_zero:
            continue
        weight = Fraction(n, m - n + 1)
        for perm in permutations(range(m)):
            s = [xis[p] for p in perm]
            tail_sum = sum(s[n:], ctx.ring.zero)
            head_sum = sum(s[1:n], s[0])
            term_a = _phi_at(phi_n, s[: n - 1] + [sum(s[n:], s[n - 1])], eta) * _a_at(
                eq, m - n, s[n - 1 :]
            )
            term_b = _phi_at(phi_n, s[:n], eta + tail_sum) * _a_at(
                eq, m - n, s[n:] + [eta]
            )
            term_c = _phi_at(phi_n, s[:n], eta) * _a_at(
                eq, m - n, s[n:] + [eta + head_sum]
            )
            total = total + term_a * weight + term_b - term_c

    if total.is_zero:
        value = ctx.zero
    else:
        value = n_omega(eq, xis + [eta]) * total
    return PhiCoefficient(m, value, laurent_expand(value, depth))


# --------------------------------------------------------------------------
# locality
# --------------------------------------------------------------------------


@dataclass
class OrderEntry:
    """Locality verdict for a single expansion coefficient."""

    m: int
    n: int
    coefficient: RationalFunction
    is_polynomial: bool
    is_symmetric: bool

    @property
    def is_local(self) -> bool:
        return self.is_polynomial and self.is_symmetric

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "coefficient": str(self.coefficient),
            "is_local": self.is_local,
        }


def locality_test(phi: PhiCoefficient, depth: int) -> list[OrderEntry]:
    """Check every expansion coefficient up to ``depth`` for locality."""
    series = phi.expansion
    if series.depth < depth:
        raise ValueError("expansion was not computed to the requested depth")
    xis = phi.xi_variables()
    entries = []
    for n in series.orders():
        if n > depth:
            break
        c = series.coefficient(n)
        entries.append(
            OrderEntry(
                m=phi.m,
                n=n,
                coefficient=c,
                is_polynomial=is_polynomial_in_xi(c),
                is_symmetric=is_symmetric(c, xis),
            )
        )
    return entries


VERDICT_OBSTRUCTION = "obstruction-found"
VERDICT_NO_OBSTRUCTION = "no-obstruction-up-to-depth"


@dataclass
class LocalityReport:
    """Aggregated verdict over all computed orders."""

    equation_text: str
    max_order: int
    depth: int
    omega: RationalFunction
    a: tuple[RationalFunction, ...]
    phis: list[PhiCoefficient]
    entries: list[OrderEntry]
    first_obstruction: Optional[OrderEntry]
    verdict: str
    disclaimer: str = NECESSARY_CONDITION_DISCLAIMER

    def to_json(self) -> dict:
        phi_blocks = []
        for phi in self.phis:
            phi_blocks.append(
                {
                    "m": phi.m,
                    "value": str(phi.value),
                    "expansion": [
                        e.to_json() for e in self.entries if e.m == phi.m
                    ],
                }
            )
        first = None
        if self.first_obstruction is not None:
            first = {
                "m": self.first_obstruction.m,
                "n": self.first_obstruction.n,
                "coefficient": str(self.first_obstruction.coefficient),
            }
        return {
            "equation": self.equation_text,
            "max_order": self.max_order,
            "depth": self.depth,
            "omega": str(self.omega),
            "a": [str(ak) for ak in self.a],
            "phi": phi_blocks,
            "first_obstruction": first,
            "verdict": self.verdict,
            "necessary_condition_disclaimer": self.disclaimer,
        }


def verdict(
    eq: EvolutionEquation,
    max_order: int = DEFAULT_MAX_ORDER,
    depth: int = DEFAULT_DEPTH,
    exhaustive: bool = False,
) -> LocalityReport:
    """Run phi_1..phi_max_order with locality tests.

    Stops at the first obstruction unless ``exhaustive``; the obstruction
    coefficient is kept verbatim so it can be diffed against external results.
    """
    if max_order < 1 or depth < 1:
        raise ValueError("max_order and depth must both be at least 1")
    eq = eq.with_n_xi(max(eq.context.n_xi, max_order))
    phis: list[PhiCoefficient] = []
    entries: list[OrderEntry] = []
    first_obstruction: Optional[OrderEntry] = None
    for m in range(1, max_order + 1):
        phi = phi_1(eq, depth) if m == 1 else phi_m(eq, m, phis, depth)
        phis.append(phi)
        order_entries = locality_test(phi, depth)
        entries.extend(order_entries)
        if first_obstruction is None:
            for e in order_entries:
                if not e.is_local:
                    first_obstruction = e
                    break
        if first_obstruction is not None and not exhaustive:
            break
    return LocalityReport(
        equation_text=eq.text,
        max_order=max_order,
        depth=depth,
        omega=eq.omega,
        a=eq.a,
        phis=phis,
        entries=entries,
        first_obstruction=first_obstruction,
        verdict=VERDICT_OBSTRUCTION if first_obstruction else VERDICT_NO_OBSTRUCTION,
    )
