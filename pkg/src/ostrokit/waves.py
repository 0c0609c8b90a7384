"""Traveling-wave linearization: spectrum of the characteristic quartic and
classification of the (p, q) parameter plane.

Traveling waves u(x, t) = w(x - c*t) of the rotation-modified equation solve a
fourth-order ODE whose linearization about the origin has characteristic
equation

    lambda**4 - q*lambda**2 + p = 0,     p = gamma/beta,  q = -c/beta.

The quartic is even, so eigenvalues come in +- pairs determined by the roots
mu = lambda**2 of mu**2 - q*mu + p.  The plane splits into four open regions
separated by the curves p = 0 (C0 for q > 0, C1 for q < 0) and q**2 = 4*p
(C3 for q > 0, C2 for q < 0):

    region 1:  p > 0, q**2 < 4p   complex quadruple        saddle focus
    region 2:  p > 0, q > 0, q**2 > 4p  two real pairs     hyperbolic saddle
    region 3:  p < 0               real pair + imaginary   saddle-center
    region 4:  p > 0, q < 0, q**2 > 4p  two imaginary pairs   focus

Region geometry is derived from the quadratic in mu and matches the
eigenstructure each region is known to carry.  Existence annotations follow
the known results for solitary waves of the underlying equation: for
beta > 0 they exist with zero mass whenever c < 2*sqrt(gamma*beta); for
beta < 0 stationary localized pulses cannot exist at all.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class WaveError(ValueError):
    pass


DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class WaveParams:
    """Physical parameters; p and q are the derived plane coordinates."""

    beta: float
    gamma: float
    c: float

    def __post_init__(self):
        if self.beta == 0:
            raise WaveError("beta must be nonzero")
        if self.gamma < 0:
            raise WaveError("gamma must be nonnegative")

    @property
    def p(self):
        return _div(self.gamma, self.beta)

    @property
    def q(self):
        return _div(-self.c, self.beta)


def _div(a, b):
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return Fraction(a) / Fraction(b)
    return a / b


def to_pq(params: WaveParams) -> tuple:
    """Map (beta, gamma, c) to the plane coordinates (p, q)."""
    return params.p, params.q


@dataclass(frozen=True)
class Spectrum:
    """Roots of the characteristic quartic, grouped through mu = lambda**2."""

    p: float
    q: float
    mu: tuple[complex, complex]
    lambdas: tuple[complex, complex, complex, complex]

    def residuals(self) -> list[float]:
        return [abs(l**4 - self.q * l**2 + self.p) for l in self.lambdas]

    def max_residual(self) -> float:
        return max(self.residuals())

    def pattern(self, tol: float = 1e-7) -> tuple[int, int, int, int]:
        """Counts (zero, real, imaginary, complex) with multiplicity."""
        scale = max(1.0, max(abs(l) for l in self.lambdas))
        zero = real = imag = cplx = 0
        for l in self.lambdas:
            if abs(l) <= tol * scale:
                zero += 1
            elif abs(l.imag) <= tol * scale:
                real += 1
            elif abs(l.real) <= tol * scale:
                imag += 1
            else:
                cplx += 1
        return zero, real, imag, cplx


def characteristic_roots(p: float, q: float) -> Spectrum:
    """Solve lambda**4 - q*lambda**2 + p = 0 through the mu quadratic.

    The large root of the quadratic is computed without cancellation and the
    other via Vieta, so residuals stay at roundoff even near double roots.
    """
    p = float(p)
    q = float(q)
    disc = q * q - 4.0 * p
    if disc >= 0.0:
        s = math.sqrt(disc)
        if q >= 0.0:
            mu1 = 0.5 * (q + s)
        else:
            mu1 = 0.5 * (q - s)
        mu2 = (p / mu1) if mu1 != 0.0 else q - mu1
        mu = (complex(mu1), complex(mu2))
    else:
        root = 0.5 * complex(q, math.sqrt(-disc))
        mu = (root, root.conjugate())
    lams: list[complex] = []
    for m in mu:
        r = cmath.sqrt(m)
        lams.extend([r, -r])
    lams.sort(key=lambda z: (z.real, z.imag))
    return Spectrum(p, q, mu, tuple(lams))


# --------------------------------------------------------------------------
# classification
# --------------------------------------------------------------------------

STRUCTURES = {
    "Region1": "±λ ± iω",
    "Region2": "±λ1, ±λ2",
    "Region3": "±λ, ±iω",
    "Region4": "±iω1, ±iω2",
    "C0": "0, 0, ±λ",
    "C1": "0, 0, ±iω",
    "C2": "±iω, ±iω",
    "C3": "±λ, ±λ",
    "Origin": "0, 0, 0, 0",
}

# label -> expected (zero, real, imaginary, complex) eigenvalue counts
PATTERNS = {
    "Region1": (0, 0, 0, 4),
    "Region2": (0, 4, 0, 0),
    "Region3": (0, 2, 2, 0),
    "Region4": (0, 0, 4, 0),
    "C0": (2, 2, 0, 0),
    "C1": (2, 0, 2, 0),
    "C2": (0, 0, 4, 0),
    "C3": (0, 4, 0, 0),
    "Origin": (4, 0, 0, 0),
}

ANNOTATIONS = {
    "Region1": (
        "saddle focus: one symmetric homoclinic orbit implies infinitely many, "
        "so an infinite family of symmetric N-pulse (N-peaked) solitary waves "
        "is expected for every N > 1"
    ),
    "Region2": (
        "hyperbolic saddle: no a-priori multiplicity; a symmetric homoclinic "
        "orbit may exist depending on the nonlinear terms (inconclusive here)"
    ),
    "Region3": (
        "saddle-center (non-hyperbolic): no soliton solutions decaying to zero "
        "with all derivatives exist"
    ),
    "Region4": "focus: no homoclinic orbits are known in general",
    "C0": (
        "double zero with a real pair: a unique symmetric homoclinic solution "
        "of sech^2 type exists on the positive side of the unfolding parameter "
        "and persists in the full system"
    ),
    "C1": (
        "double zero with an imaginary pair: a sech^2 homoclinic orbit exists "
        "on the side adjoining region 3"
    ),
    "C2": (
        "double imaginary pairs: envelope (sech-modulated) homoclinic solutions "
        "with oscillating tails can occur in the subcritical form; persistence "
        "is system-specific"
    ),
    "C3": (
        "double real pairs: the fixed point stays hyperbolic with no "
        "small-amplitude bifurcation, but crossing the curve creates an "
        "infinite multiplicity of homoclinic orbits"
    ),
    "Origin": "degenerate origin of the (p, q) plane",
}


@dataclass(frozen=True)
class RegionClass:
    label: str
    eigen_structure: str
    annotation: str

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "eigen_structure": self.eigen_structure,
            "annotation": self.annotation,
        }


def _make(label: str) -> RegionClass:
    return RegionClass(label, STRUCTURES[label], ANNOTATIONS[label])


def classify(p, q, tol: float = DEFAULT_TOL) -> RegionClass:
    """Deterministic label for (p, q); boundaries decided within ``tol``.

    With Fraction/int inputs and tol = 0 the classification is exact.
    """
    exact = isinstance(p, (int, Fraction)) and isinstance(q, (int, Fraction))
    if not exact:
        p = float(p)
        q = float(q)
        if tol <= 0:
            raise WaveError("tol must be positive for floating-point inputs")
    if abs(p) <= tol:
        if q > tol:
            return _make("C0")
        if q < -tol:
            return _make("C1")
        return _make("Origin")
    if p < 0:
        return _make("Region3")
    disc = q * q - 4 * p
    if abs(disc) <= tol * q * q:
        return _make("C3") if q > 0 else _make("C2")
    if disc < 0:
        return _make("Region1")
    return _make("Region2") if q > 0 else _make("Region4")


def classify_exact(p: Fraction, q: Fraction) -> RegionClass:
    """Exact-arithmetic classification for rational inputs (no tolerance)."""
    return classify(Fraction(p), Fraction(q), tol=0)


# --------------------------------------------------------------------------
# existence annotations and the KdV-limit solitary wave
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ExistenceFlags:
    existence_known: bool
    nonexistence_known: bool
    reason: str

    def to_json(self) -> dict:
        return {
            "existence_known": self.existence_known,
            "nonexistence_known": self.nonexistence_known,
            "reason": self.reason,
        }


def existence_flags(params: WaveParams) -> ExistenceFlags:
    """Known existence/nonexistence ranges for solitary waves."""
    if params.beta < 0:
        return ExistenceFlags(
            False,
            True,
            "negative dispersion: stationary localized pulses cannot exist",
        )
    threshold = 2.0 * math.sqrt(params.gamma * params.beta)
    if params.c < threshold:
        return ExistenceFlags(
            True,
            False,
            "positive dispersion with speed below 2*sqrt(gamma*beta): "
            "zero-mass solitary waves exist",
        )
    return ExistenceFlags(
        False,
        False,
        "speed at or above the known existence range; no conclusion",
    )


def existence_label_pq(p: float, q: float) -> str:
    """Existence column for plane-coordinate scans.

    Assumes gamma >= 0, so sign(p) = sign(beta) (p = 0 is the gamma = 0
    limit with beta > 0); c < 2*sqrt(gamma*beta) translates to q > -2*sqrt(p).
    """
    if p < 0:
        return "none"
    if p == 0:
        return "exists" if q > 0 else "unknown"
    return "exists" if q > -2.0 * math.sqrt(p) else "unknown"


@dataclass(frozen=True)
class KdvSoliton:
    """Closed-form sech^2 solitary wave of the gamma = 0 equation."""

    beta: float
    k: float
    amplitude: float
    speed: float
    max_residual: float

    def profile(self, z):
        return self.amplitude / np.cosh(self.k * np.asarray(z)) ** 2


def kdv_soliton(beta: float, k: float, n_samples: int = 401) -> KdvSoliton:
    """Profile -6*beta*k^2*sech(k z)^2 with speed -4*beta*k^2, plus the
    residual of the twice-integrated traveling-wave ODE on a sample grid."""
    if beta == 0 or k == 0:
        raise WaveError("beta and k must be nonzero")
    amplitude = -6.0 * beta * k * k
    speed = -4.0 * beta * k * k
    z = np.linspace(-10.0 / abs(k), 10.0 / abs(k), n_samples)
    sech2 = 1.0 / np.cosh(k * z) ** 2
    phi = amplitude * sech2
    # (sech^2)'' = 4 k^2 sech^2 - 6 k^2 sech^4
    phi_zz = amplitude * (4 * k * k * sech2 - 6 * k * k * sech2**2)
    residual = np.abs(-speed * phi - beta * phi_zz + phi**2).max()
    return KdvSoliton(beta, k, amplitude, speed, float(residual))


# --------------------------------------------------------------------------
# plane scans
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    p: float
    q: float
    label: str
    eigen_structure: str
    existence_flag: str


def scan(
    p_range: tuple[float, float],
    q_range: tuple[float, float],
    grid: tuple[int, int],
    tol: float = DEFAULT_TOL,
) -> list[ScanRow]:
    """Row-major classification table over an inclusive (p, q) grid."""
    np_pts, nq_pts = grid
    if np_pts < 2 or nq_pts < 2:
        raise WaveError("scan grid needs at least 2 points per axis")
    ps = np.linspace(p_range[0], p_range[1], np_pts)
    qs = np.linspace(q_range[0], q_range[1], nq_pts)
    rows = []
    for p in ps:
        for q in qs:
            cls = classify(float(p), float(q), tol)
            rows.append(
                ScanRow(
                    float(p),
                    float(q),
                    cls.label,
                    cls.eigen_structure,
                    existence_label_pq(float(p), float(q)),
                )
            )
    return rows


def brute_force_pattern(p: float, q: float, tol: float = 1e-7) -> tuple[int, int, int, int]:
    """Independent oracle: companion-matrix roots of the raw quartic.

    The threshold is wider than the classifier tolerance because eigenvalue
    solvers split double roots at the sqrt(machine-epsilon) scale.
    """
    roots = np.roots([1.0, 0.0, -float(q), 0.0, float(p)])
    scale = max(1.0, float(np.abs(roots).max()))
    zero = real = imag = cplx = 0
    for r in roots:
        if abs(r) <= tol * scale:
            zero += 1
        elif abs(r.imag) <= tol * scale:
            real += 1
        elif abs(r.real) <= tol * scale:
            imag += 1
        else:
            cplx += 1
    return zero, real, imag, cplx
