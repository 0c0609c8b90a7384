"""ostrokit: symbolic integrability testing, traveling-wave classification
and pseudospectral simulation for Ostrovsky/KdV-type evolution equations."""

__version__ = "0.1.0"

from .algebra import (
    Context,
    LaurentSeries,
    RationalFunction,
    Variable,
    is_polynomial_in_xi,
    laurent_expand,
    normalize,
    symmetrize,
)
from .equation import EvolutionEquation, parse, parse_equation, grade, to_symbols
from .recursion import LocalityReport, PhiCoefficient, n_omega, phi_1, phi_m, verdict
from .simulator import GridState, SimConfig, integrate, invariants, make_state
from .waves import WaveParams, characteristic_roots, classify, kdv_soliton, scan

__all__ = [
    "__version__",
    "Context",
    "LaurentSeries",
    "RationalFunction",
    "Variable",
    "is_polynomial_in_xi",
    "laurent_expand",
    "normalize",
    "symmetrize",
    "EvolutionEquation",
    "parse",
    "parse_equation",
    "grade",
    "to_symbols",
    "LocalityReport",
    "PhiCoefficient",
    "n_omega",
    "phi_1",
    "phi_m",
    "verdict",
    "GridState",
    "SimConfig",
    "integrate",
    "invariants",
    "make_state",
    "WaveParams",
    "characteristic_roots",
    "classify",
    "kdv_soliton",
    "scan",
]
