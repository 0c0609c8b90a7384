"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; every tolerance is pinned here and nowhere else.
"""

import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from ostrokit.algebra import Variable, is_polynomial_in_xi
from ostrokit.equation import ALIASES, parse_equation
from ostrokit.recursion import (
    VERDICT_NO_OBSTRUCTION,
    VERDICT_OBSTRUCTION,
    phi_1,
    phi_m,
    verdict,
)
from ostrokit.simulator import (
    SimConfig,
    best_shift,
    initial_state,
    integrate,
    shifted,
    variational_residual,
    make_state,
)
from ostrokit.waves import (
    PATTERNS,
    brute_force_pattern,
    characteristic_roots,
    classify,
)


@contextmanager
def criterion(number: int, name: str, limit_s: float):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"[acceptance] criterion {number} ({name}): FAIL")
        raise
    elapsed = time.perf_counter() - start
    status = "PASS" if elapsed < limit_s else "FAIL (over time budget)"
    print(f"[acceptance] criterion {number} ({name}): {status} "
          f"[{elapsed:.2f}s < {limit_s:.0f}s]")
    assert elapsed < limit_s


def test_criterion_1_symbolic_symbols():
    with criterion(1, "dispersion and quadratic symbols", 1.0):
        eq = parse_equation(ALIASES["ostrovsky"])
        assert str(eq.omega) == "(beta*xi1^4 + gamma)/xi1"
        assert str(eq.a[0]) == "-2*xi1 - 2*xi2"
        # normalized: denominators carry no common factor with numerators
        ctx = eq.context
        assert eq.omega == ctx.rf(
            ctx.gen("beta") * ctx.xi(1) ** 4 + ctx.gen("gamma"), ctx.xi(1)
        )
        assert eq.a[0] == ctx.rf(-2 * (ctx.xi(1) + ctx.xi(2)))


def test_criterion_2_phi1_reproduction():
    with criterion(2, "first recursion coefficient and its expansion", 5.0):
        kdv = parse_equation(ALIASES["kdv"])
        assert str(phi_1(kdv).value) == "-2/(3*beta*eta)"

        ostro = parse_equation(ALIASES["ostrovsky"])
        p1 = phi_1(ostro, depth=5)
        ctx = ostro.context
        beta, gamma, xi1 = ctx.gen("beta"), ctx.gen("gamma"), ctx.xi(1)
        series = p1.expansion
        assert series.coefficient(1) == ctx.rf(-2 * ctx.ring.one, 3 * beta)
        assert series.coefficient(2).is_zero
        assert series.coefficient(3) == ctx.rf(-2 * gamma, 9 * beta**2 * xi1**2)
        assert series.coefficient(4) == ctx.rf(2 * gamma, 9 * beta**2 * xi1)
        # eta^-5: magnitude pinned, sign fixed by the resummation oracle
        magnitude = ctx.rf(
            2 * gamma * (gamma + 6 * beta * xi1**4), 27 * beta**3 * xi1**4
        )
        assert series.coefficient(5) in (magnitude, -magnitude)
        assert series.matches(p1.value)
        flipped = series.coefficient(5) * (-1)
        series.coeffs[5], kept = flipped, series.coeffs[5]
        assert not series.matches(p1.value)
        series.coeffs[5] = kept
        assert series.coefficient(5) == -magnitude  # oracle-fixed: negative


def test_criterion_3_verdicts():
    with criterion(3, "integrability verdicts at depth 6", 30.0):
        ostro = verdict(parse_equation(ALIASES["ostrovsky"]), 2, 6)
        assert ostro.verdict == VERDICT_OBSTRUCTION
        assert (ostro.first_obstruction.m, ostro.first_obstruction.n) == (1, 3)

        kdv = verdict(parse_equation(ALIASES["kdv"]), 2, 6)
        assert kdv.verdict == VERDICT_NO_OBSTRUCTION
        phi2 = next(phi for phi in kdv.phis if phi.m == 2)
        ctx = phi2.value.context
        xi1, xi2, beta = ctx.xi(1), ctx.xi(2), ctx.gen("beta")
        nine_b2 = 9 * beta**2
        assert phi2.expansion.coefficient(3) == ctx.rf(-4 * ctx.ring.one, nine_b2)
        assert phi2.expansion.coefficient(4) == ctx.rf(4 * (xi1 + xi2), nine_b2)
        # printed pattern at the next two orders, with the corrected
        # symmetric quadratic confirmed by the exact computation
        assert phi2.expansion.coefficient(5) == ctx.rf(
            -4 * (xi1**2 + xi1 * xi2 + xi2**2), nine_b2
        )
        assert phi2.expansion.coefficient(6) == ctx.rf(
            4 * (xi1 + xi2) * (xi1**2 + xi2**2), nine_b2
        )


def test_criterion_4_specialization_consistency():
    with criterion(4, "gamma -> 0 specialization equals the KdV limit", 5.0):
        ostro = parse_equation(ALIASES["ostrovsky"])
        kdv = parse_equation(ALIASES["kdv"])
        specialized = phi_1(ostro).value.subs({Variable.parameter("gamma"): 0})
        assert specialized == phi_1(kdv).value


def test_criterion_5_classifier_oracle_equivalence():
    with criterion(5, "classifier vs brute-force root patterns", 10.0):
        ps = np.linspace(-2.0, 2.0, 101)
        qs = np.linspace(-2.0, 2.0, 101)
        for p in ps:
            for q in qs:
                p_f, q_f = float(p), float(q)
                label = classify(p_f, q_f, tol=1e-9).label
                assert brute_force_pattern(p_f, q_f) == PATTERNS[label], (
                    p_f, q_f, label,
                )
                spec = characteristic_roots(p_f, q_f)
                bound = 1e-10 * max(1.0, abs(p_f), q_f * q_f)
                assert spec.max_residual() <= bound


def test_criterion_6_soliton_propagation():
    with criterion(6, "solitary-wave propagation accuracy", 60.0):
        beta, k = 1.0, 1.0
        config = SimConfig(N=256, L=50.0, dt=1e-3, T=1.0, beta=beta,
                           gamma=0.0, profile="kdv-soliton", k=k,
                           drift_budget=1e-8)
        state = initial_state(config)
        result = integrate(state, config)
        assert not result.blew_up
        # mean projection shifts the advection speed by twice the removed mean
        mean = -12.0 * beta * k / config.L
        c_eff = -4.0 * beta * k * k - 2.0 * mean
        travel = c_eff * config.T
        assert best_shift(state, result.final) == pytest.approx(
            travel % config.L, abs=1e-4
        )
        shape_error = np.abs(
            result.final.values - shifted(state, travel).values
        ).max()
        assert shape_error <= 1e-4
        drift = result.drift()
        assert drift["P_rel"] <= 1e-8
        assert drift["H_rel"] <= 1e-8


def test_criterion_7_conservation_and_refinement():
    with criterion(7, "conservation drift and dt refinement", 120.0):
        drifts = {}
        for dt in (1.6e-2, 8e-3):
            config = SimConfig(N=256, L=50.0, dt=dt, T=5.0, beta=1.0,
                               gamma=0.5, profile="random-smooth", seed=1234)
            result = integrate(initial_state(config), config)
            assert not result.blew_up
            d = result.drift()
            assert d["I_abs"] <= 1e-12
            drifts[dt] = d
        base = drifts[1.6e-2]
        fine = drifts[8e-3]
        assert base["P_rel"] <= 1e-6 and base["H_rel"] <= 1e-6
        combined = max(base["P_rel"], base["H_rel"])
        combined_fine = max(fine["P_rel"], fine["H_rel"])
        assert combined / combined_fine >= 10.0


def test_criterion_8_variational_identity():
    with criterion(8, "Hamiltonian flux identity with one global sign", 10.0):
        signs = set()
        for seed in range(50):
            state = make_state("random-smooth", 128, 50.0, seed=seed,
                               cutoff=10)
            res, sign = variational_residual(state, 1.0, 0.5)
            assert res <= 1e-10
            signs.add(sign)
        assert signs == {-1}
        # the matching sign is the opposite of the conventional writing
        # u_t = +d_x(dH/du); reports must carry the flag
        print("[acceptance] note: flux identity holds with global sign -1 "
              "(opposite to the u_t = +d_x(dH/du) convention)")
