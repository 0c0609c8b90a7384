"""Exact-arithmetic kernel: normalization, symmetrization, Laurent expansion."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ostrokit.algebra import (
    Context,
    ContractViolationError,
    EmptySeriesError,
    MalformedInputError,
    RationalFunction,
    Variable,
    is_polynomial_in_xi,
    is_symmetric,
    laurent_expand,
    normalize,
    poly_str,
    symmetrize,
)


@pytest.fixture(scope="module")
def ctx():
    return Context(2)


# --------------------------------------------------------------------------
# hypothesis strategies: small exact polynomials in xi1, xi2, eta, beta, gamma
# --------------------------------------------------------------------------

_fractions = st.fractions(
    min_value=-4, max_value=4, max_denominator=3
)
_exponents = st.tuples(*(st.integers(min_value=0, max_value=2),) * 5)


def _polys(ctx):
    return st.dictionaries(_exponents, _fractions, min_size=0, max_size=4).map(
        ctx.poly_from_terms
    )


def _points():
    nz = st.fractions(min_value=1, max_value=7, max_denominator=3)
    return st.tuples(nz, nz, nz, nz, nz)


# --------------------------------------------------------------------------
# Variable / Context basics
# --------------------------------------------------------------------------


def test_variable_kinds():
    assert Variable.xi(3).kind == "xi"
    assert Variable.xi(3).index == 3
    assert Variable.eta().kind == "eta"
    assert Variable.parameter("beta").kind == "parameter"
    with pytest.raises(ContractViolationError):
        Variable.xi(0)
    with pytest.raises(ContractViolationError):
        Variable.eta().index


def test_context_is_cached_and_ordered():
    a = Context(2)
    b = Context(2)
    assert a is b
    assert a.var_names == ("eta", "xi1", "xi2", "beta", "gamma")
    with pytest.raises(ContractViolationError):
        Context(2, ("eta",))


# --------------------------------------------------------------------------
# normalize
# --------------------------------------------------------------------------


def test_normalize_cancels_common_factor(ctx):
    xi1, eta = ctx.xi(1), ctx.eta
    f = ctx.rf(xi1**2 - eta**2, xi1 + eta)
    assert f == ctx.rf(xi1 - eta)
    # eta outranks xi1 in the monomial order, so it prints first
    assert str(f) == "-eta + xi1"


def test_normalize_zero_numerator(ctx):
    f = ctx.rf(ctx.ring.zero, 3 * ctx.gen("beta") * ctx.xi(1))
    assert f.is_zero
    assert str(f) == "0"
    assert f.den == ctx.ring.one


def test_normalize_constant_and_variable_gcd(ctx):
    xi1, eta = ctx.xi(1), ctx.eta
    f = ctx.rf(2 * xi1 * eta, 4 * eta)
    assert str(f) == "xi1/2"


def test_normalize_zero_denominator_raises(ctx):
    with pytest.raises(MalformedInputError):
        ctx.rf(ctx.ring.one, ctx.ring.zero)


def test_normalize_is_idempotent(ctx):
    xi1, eta = ctx.xi(1), ctx.eta
    f = ctx.rf(6 * xi1**3 * eta - 6 * xi1, 9 * xi1)
    assert normalize(f) == f


def test_denominator_sign_is_canonical(ctx):
    xi1 = ctx.xi(1)
    f = ctx.rf(ctx.ring.one, -xi1)
    assert str(f) == "-1/xi1"
    assert f == ctx.rf(-ctx.ring.one, xi1)


@given(_polys(Context(2)), _polys(Context(2)))
@settings(max_examples=60, deadline=None)
def test_mul_then_div_restores(f_num, a):
    ctx = Context(2)
    if not a or not f_num:
        return
    f = ctx.rf(f_num, ctx.xi(1) + ctx.poly_const(1))
    assert (f * ctx.rf(a)) / ctx.rf(a) == f


@given(_polys(Context(2)), _polys(Context(2)), _polys(Context(2)))
@settings(max_examples=60, deadline=None)
def test_polynomial_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(_polys(Context(2)), _polys(Context(2)), _points())
@settings(max_examples=40, deadline=None)
def test_evaluation_consistent_with_normalization(num, den, point):
    ctx = Context(2)
    if not den:
        return
    names = ctx.var_names
    values = dict(zip(names, point))
    f = ctx.rf(num, den)
    den_at = Fraction(sum(
        c * _monomial_value(m, point) for m, c in _term_list(den)
    ))
    if den_at == 0:
        return
    num_at = Fraction(sum(
        c * _monomial_value(m, point) for m, c in _term_list(num)
    ))
    assert f.evaluate(values) == num_at / den_at


def _term_list(p):
    return [(m, Fraction(int(c.numerator), int(c.denominator))) for m, c in p.terms()]


def _monomial_value(monom, point):
    out = Fraction(1)
    for e, v in zip(monom, point):
        out *= Fraction(v) ** e
    return out


# --------------------------------------------------------------------------
# symmetrize
# --------------------------------------------------------------------------


def test_symmetrize_two_element_average(ctx):
    f = ctx.rf(ctx.xi(2))
    s = symmetrize(f, [Variable.xi(1), Variable.xi(2)])
    assert s == ctx.rf(ctx.xi(1) + ctx.xi(2)) * Fraction(1, 2)


def test_symmetrize_fixes_symmetric_input(ctx):
    f = ctx.rf(ctx.xi(1) * ctx.xi(2) + ctx.eta)
    assert symmetrize(f, ["xi1", "xi2"]) == f


def test_symmetrize_power_example(ctx):
    # enumerate S_2 by hand: (xi1^2 + xi2^2) / 2
    f = ctx.rf(ctx.xi(1) ** 2)
    expected = ctx.rf(ctx.xi(1) ** 2 + ctx.xi(2) ** 2) * Fraction(1, 2)
    assert symmetrize(f, ["xi1", "xi2"]) == expected


def test_symmetrize_is_projection(ctx):
    f = ctx.rf(ctx.xi(1) ** 2 * ctx.xi(2) + 3 * ctx.xi(1))
    once = symmetrize(f, ["xi1", "xi2"])
    assert symmetrize(once, ["xi1", "xi2"]) == once
    assert is_symmetric(once, ["xi1", "xi2"])


def test_symmetrize_rejects_eta(ctx):
    with pytest.raises(ContractViolationError):
        symmetrize(ctx.rf(ctx.eta), [Variable.eta(), Variable.xi(1)])


def test_symmetrize_three_variables():
    ctx = Context(3)
    f = ctx.rf(ctx.xi(3))
    s = symmetrize(f, ctx.xi_variables(3))
    expected = ctx.rf(ctx.xi(1) + ctx.xi(2) + ctx.xi(3)) * Fraction(1, 3)
    assert s == expected


# --------------------------------------------------------------------------
# laurent expansion
# --------------------------------------------------------------------------


def test_laurent_geometric_series(ctx):
    xi1, eta = ctx.xi(1), ctx.eta
    f = ctx.rf(ctx.ring.one, eta - xi1)
    series = laurent_expand(f, 3)
    assert series.start_order == 1
    assert series.coefficient(1) == ctx.one
    assert series.coefficient(2) == ctx.rf(xi1)
    assert series.coefficient(3) == ctx.rf(xi1**2)
    assert series.matches(f)


def test_laurent_constant(ctx):
    f = ctx.rf_const(Fraction(5, 3))
    series = laurent_expand(f, 2)
    assert series.start_order == 0
    assert series.coefficient(0) == f
    assert series.coefficient(1).is_zero
    assert series.matches(f)


def test_laurent_zero(ctx):
    series = laurent_expand(ctx.zero, 4)
    assert all(series.coefficient(n).is_zero for n in series.orders())


def test_laurent_negative_start_order(ctx):
    eta, xi1 = ctx.eta, ctx.xi(1)
    f = ctx.rf(eta**2 + xi1, eta)
    series = laurent_expand(f, 2)
    assert series.start_order == -1
    assert series.coefficient(-1) == ctx.one
    assert series.coefficient(1) == ctx.rf(xi1)
    assert series.matches(f)


def test_laurent_depth_before_start_raises(ctx):
    f = ctx.rf(ctx.ring.one, ctx.eta**2)
    with pytest.raises(EmptySeriesError):
        laurent_expand(f, 1)


def test_laurent_truncate_reproduces_prefix(ctx):
    f = ctx.rf(ctx.ring.one, ctx.eta - ctx.xi(1))
    series = laurent_expand(f, 5)
    short = series.truncate(3)
    assert short == laurent_expand(f, 3)
    with pytest.raises(EmptySeriesError):
        series.truncate(9)


@given(
    st.dictionaries(
        st.integers(min_value=0, max_value=4), _fractions, min_size=1, max_size=4
    ),
    st.dictionaries(
        st.integers(min_value=0, max_value=4), _fractions, min_size=1, max_size=4
    ),
)
@settings(max_examples=50, deadline=None)
def test_laurent_resummation_oracle(num_eta, den_eta):
    # random rational functions with eta-degree <= 4 and xi1-laden coefficients
    ctx = Context(2)
    xi1 = ctx.xi(1)
    eta = ctx.eta
    num = sum((ctx.poly_const(c) * (xi1 + 1) ** min(k, 2) * eta**k
               for k, c in num_eta.items()), ctx.ring.zero)
    den = sum((ctx.poly_const(c) * xi1 ** min(k, 1) * eta**k
               for k, c in den_eta.items()), ctx.ring.zero)
    if not den or not num:
        return
    f = ctx.rf(num, den)
    if f.is_zero:
        return
    series = laurent_expand(f, 6)
    assert series.matches(f)
    assert not series.matches(f + ctx.rf(ctx.ring.one, eta**7 * (xi1 + 2)) * 0
                              + ctx.rf_const(1))


# --------------------------------------------------------------------------
# polynomiality predicate and rendering
# --------------------------------------------------------------------------


def test_is_polynomial_in_xi_parameter_denominator(ctx):
    f = ctx.rf(-2 * ctx.ring.one, 3 * ctx.gen("beta"))
    assert is_polynomial_in_xi(f)


def test_is_polynomial_in_xi_rejects_xi_denominator(ctx):
    f = ctx.rf(
        -2 * ctx.gen("gamma"), 9 * ctx.gen("beta") ** 2 * ctx.xi(1) ** 2
    )
    assert not is_polynomial_in_xi(f)


def test_is_polynomial_in_xi_accepts_polynomial(ctx):
    assert is_polynomial_in_xi(ctx.rf(ctx.xi(1) + ctx.xi(2)))


def test_render_is_stable(ctx):
    beta, gamma = ctx.gen("beta"), ctx.gen("gamma")
    xi1, eta = ctx.xi(1), ctx.eta
    f = ctx.rf(beta * xi1**4 + gamma, xi1)
    assert str(f) == "(beta*xi1^4 + gamma)/xi1"
    g = ctx.rf(-2 * ctx.ring.one, 3 * beta * eta)
    assert str(g) == "-2/(3*beta*eta)"
    assert poly_str(ctx, -2 * xi1 - 2 * ctx.xi(2)) == "-2*xi1 - 2*xi2"
    assert poly_str(ctx, ctx.ring.zero) == "0"
    assert str(ctx.rf_const(Fraction(-1, 2))) == "-1/2"
