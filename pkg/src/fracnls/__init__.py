"""Adomian series solutions of the fractional modified NLS equation.

Closed-form partial sums in the Caputo and conformable senses, built from
a small symbolic term algebra over powers of x, exponentials in t and
Mittag-Leffler atoms.
"""
from .adm_solver import (
    ComparisonReport,
    Experiment,
    ProblemSpec,
    SeriesSolution,
    compare,
    experiment_spec,
    paper_series,
    solve,
)
from .errors import (
    BasisOverflow,
    ConvergenceBudgetExceeded,
    DomainError,
    FracError,
    MissingFixture,
    PoleError,
    QuadratureError,
    UnsupportedAtom,
)
from .fractional_operators import Sense
from .special_functions import BACKEND, gamma, mittag_leffler, ml_E, reciprocal_gamma
from .term_algebra import TermSum, term

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BasisOverflow",
    "ComparisonReport",
    "ConvergenceBudgetExceeded",
    "DomainError",
    "Experiment",
    "FracError",
    "MissingFixture",
    "PoleError",
    "ProblemSpec",
    "QuadratureError",
    "Sense",
    "SeriesSolution",
    "TermSum",
    "UnsupportedAtom",
    "compare",
    "experiment_spec",
    "gamma",
    "mittag_leffler",
    "ml_E",
    "paper_series",
    "reciprocal_gamma",
    "solve",
    "term",
]
