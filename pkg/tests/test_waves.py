"""Characteristic quartic, region classification, existence annotations."""

from fractions import Fraction

import numpy as np
import pytest

from ostrokit.waves import (
    PATTERNS,
    WaveError,
    WaveParams,
    brute_force_pattern,
    characteristic_roots,
    classify,
    classify_exact,
    existence_flags,
    existence_label_pq,
    kdv_soliton,
    scan,
    to_pq,
)


# --------------------------------------------------------------------------
# parameter mapping
# --------------------------------------------------------------------------


@pytest.mark.parametrize(
    "beta,gamma,c,p,q",
    [
        (1, 1, -2, 1, 2),
        (2, 0, 1, 0, Fraction(-1, 2)),
        (-1, 1, 1, -1, 1),
    ],
)
def test_to_pq(beta, gamma, c, p, q):
    assert to_pq(WaveParams(beta, gamma, c)) == (p, q)


def test_to_pq_rejects_zero_beta():
    with pytest.raises(WaveError):
        WaveParams(0, 1, 1)


def test_gamma_must_be_nonnegative():
    with pytest.raises(WaveError):
        WaveParams(1, -1, 0)


# --------------------------------------------------------------------------
# quartic roots
# --------------------------------------------------------------------------


def test_roots_factorable_case():
    spec = characteristic_roots(0.0, 1.0)
    lams = sorted(spec.lambdas, key=lambda z: z.real)
    assert lams[0] == pytest.approx(-1)
    assert lams[1] == pytest.approx(0)
    assert lams[2] == pytest.approx(0)
    assert lams[3] == pytest.approx(1)


def test_roots_fourth_roots_of_minus_one():
    spec = characteristic_roots(1.0, 0.0)
    expected = {
        complex(a, b) / np.sqrt(2) for a in (-1, 1) for b in (-1, 1)
    }
    for lam in spec.lambdas:
        assert min(abs(lam - e) for e in expected) < 1e-12
    assert spec.max_residual() < 1e-12


def test_roots_double_real_pair():
    spec = characteristic_roots(1.0, 2.0)
    assert sorted(round(l.real, 12) for l in spec.lambdas) == [-1, -1, 1, 1]
    assert all(abs(l.imag) < 1e-12 for l in spec.lambdas)


def test_root_residual_bound_random():
    rng = np.random.default_rng(7)
    for _ in range(10_000):
        p = float(rng.uniform(-10, 10))
        q = float(rng.uniform(-10, 10))
        spec = characteristic_roots(p, q)
        bound = 1e-10 * max(1.0, abs(p), q * q)
        assert spec.max_residual() <= bound


def test_spectrum_vieta():
    spec = characteristic_roots(2.5, -1.25)
    prod = np.prod(spec.lambdas)
    assert prod.real == pytest.approx(2.5, abs=1e-12)
    assert sum(spec.mu) == pytest.approx(-1.25, abs=1e-12)


# --------------------------------------------------------------------------
# classification
# --------------------------------------------------------------------------


@pytest.mark.parametrize(
    "p,q,label,structure",
    [
        (-1.0, 0.0, "Region3", "±λ, ±iω"),
        (1.0, 0.0, "Region1", "±λ ± iω"),
        (0.0, 1.0, "C0", "0, 0, ±λ"),
        (0.0, -1.0, "C1", "0, 0, ±iω"),
        (1.0, 3.0, "Region2", "±λ1, ±λ2"),
        (1.0, -3.0, "Region4", "±iω1, ±iω2"),
        (1.0, 2.0, "C3", "±λ, ±λ"),
        (1.0, -2.0, "C2", "±iω, ±iω"),
        (0.0, 0.0, "Origin", "0, 0, 0, 0"),
    ],
)
def test_classify_examples(p, q, label, structure):
    cls = classify(p, q)
    assert cls.label == label
    assert cls.eigen_structure == structure


def test_classify_grid_corners():
    assert classify(-1.0, -1.0).label == "Region3"
    assert classify(1.0, 1.0).label == "Region1"
    assert classify(-1.0, 1.0).label == "Region3"
    assert classify(1.0, -1.0).label == "Region1"


def test_classify_exact_rational():
    assert classify_exact(Fraction(1), Fraction(2)).label == "C3"
    assert classify_exact(Fraction(1, 4), Fraction(-1)).label == "C2"
    assert classify_exact(Fraction(0), Fraction(3)).label == "C0"
    assert classify_exact(Fraction(-1, 7), Fraction(0)).label == "Region3"


def test_classify_c3_parametric_points():
    for t in np.linspace(0.1, 3.0, 50):
        p, q = float(t * t), float(2 * t)
        assert classify(p, q, tol=1e-9).label == "C3"


def test_classify_matches_own_spectrum():
    rng = np.random.default_rng(12)
    for _ in range(2000):
        p = float(rng.uniform(-2, 2))
        q = float(rng.uniform(-2, 2))
        cls = classify(p, q)
        pattern = characteristic_roots(p, q).pattern()
        assert pattern == PATTERNS[cls.label], (p, q, cls.label)


def test_classify_matches_brute_force_oracle():
    rng = np.random.default_rng(99)
    for _ in range(2000):
        p = float(rng.uniform(-2, 2))
        q = float(rng.uniform(-2, 2))
        cls = classify(p, q)
        assert brute_force_pattern(p, q) == PATTERNS[cls.label], (p, q)


def test_annotations_present():
    assert "N-pulse" in classify(1.0, 0.0).annotation
    assert "no soliton" in classify(-1.0, 0.0).annotation
    assert "unique symmetric homoclinic" in classify(0.0, 1.0).annotation


# --------------------------------------------------------------------------
# existence flags
# --------------------------------------------------------------------------


def test_existence_positive_dispersion():
    flags = existence_flags(WaveParams(1, 1, 0))
    assert flags.existence_known and not flags.nonexistence_known


def test_existence_negative_dispersion():
    flags = existence_flags(WaveParams(-1, 1, 0))
    assert flags.nonexistence_known and not flags.existence_known


def test_existence_fast_wave_inconclusive():
    flags = existence_flags(WaveParams(1, 1, 3))
    assert not flags.existence_known and not flags.nonexistence_known


def test_existence_pq_translation_consistent():
    # the plane-coordinate column must agree with the physical-space flags
    rng = np.random.default_rng(5)
    for _ in range(500):
        beta = float(rng.uniform(0.1, 3))
        gamma = float(rng.uniform(0, 3))
        c = float(rng.uniform(-4, 4))
        params = WaveParams(beta, gamma, c)
        label = existence_label_pq(float(params.p), float(params.q))
        flags = existence_flags(params)
        assert (label == "exists") == flags.existence_known
        assert (label == "none") == flags.nonexistence_known


# --------------------------------------------------------------------------
# closed-form solitary wave
# --------------------------------------------------------------------------


def test_kdv_soliton_negative_beta():
    sol = kdv_soliton(-1.0, 0.5)
    assert sol.amplitude == pytest.approx(1.5)
    assert sol.speed == pytest.approx(1.0)
    assert sol.max_residual <= 1e-10 * sol.amplitude**2


def test_kdv_soliton_positive_beta():
    sol = kdv_soliton(1.0, 1.0)
    assert sol.amplitude == pytest.approx(-6.0)
    assert sol.speed == pytest.approx(-4.0)
    assert sol.max_residual <= 1e-10 * sol.amplitude**2


def test_kdv_soliton_scaling():
    base = kdv_soliton(2.0, 1.0)
    scaled = kdv_soliton(2.0, 3.0)
    assert scaled.amplitude == pytest.approx(base.amplitude * 9)
    assert scaled.speed == pytest.approx(base.speed * 9)


def test_kdv_soliton_residual_random():
    rng = np.random.default_rng(3)
    for _ in range(100):
        beta = float(rng.uniform(-3, 3)) or 1.0
        k = float(rng.uniform(0.1, 2))
        sol = kdv_soliton(beta, k)
        assert sol.max_residual <= 1e-10 * sol.amplitude**2


def test_kdv_soliton_rejects_degenerate():
    with pytest.raises(WaveError):
        kdv_soliton(0.0, 1.0)
    with pytest.raises(WaveError):
        kdv_soliton(1.0, 0.0)


# --------------------------------------------------------------------------
# scans
# --------------------------------------------------------------------------


def test_scan_row_count_and_order():
    rows = scan((-1.0, 1.0), (-1.0, 1.0), (3, 3))
    assert len(rows) == 9
    assert rows[0].p == -1.0 and rows[0].q == -1.0
    assert rows[-1].p == 1.0 and rows[-1].q == 1.0
    # row-major: q varies fastest
    assert [r.q for r in rows[:3]] == [-1.0, 0.0, 1.0]


def test_scan_negative_p_all_region3():
    rows = scan((-2.0, -0.5), (-1.0, 1.0), (4, 5))
    assert {r.label for r in rows} == {"Region3"}
    assert {r.existence_flag for r in rows} == {"none"}


def test_scan_rejects_degenerate_grid():
    with pytest.raises(WaveError):
        scan((-1.0, 1.0), (-1.0, 1.0), (1, 3))
