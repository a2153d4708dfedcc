"""Gamma, reciprocal gamma and the Mittag-Leffler family.

The numerical kernels live in ``_kernels`` (Cython) with a pure-Python
fallback in ``_kernels_py``; whichever imports first is used. ``BACKEND``
names the active one.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from numbers import Real

import numpy as np

from .errors import DomainError

try:
    from . import _kernels as _k

    BACKEND = "cython"
except ImportError:  # extension not built
    from . import _kernels_py as _k

    BACKEND = "python"

ML_EPS = 1e-15
ML_MAX_TERMS = 2000
POLE_TOL = 1e-12

__all__ = [
    "BACKEND",
    "MLArgs",
    "gamma",
    "reciprocal_gamma",
    "mittag_leffler",
    "ml_E",
    "ml_E_array",
]


def _finite_real(name: str, value) -> float:
    if isinstance(value, complex) or not isinstance(value, (Real, np.floating, np.integer)):
        raise DomainError(f"{name} must be real, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def _finite_complex(name: str, value) -> complex:
    value = complex(value)
    if not cmath.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def _checked(value: complex, what: str) -> complex:
    if not cmath.isfinite(value):
        raise DomainError(f"{what} is not finite ({value!r})")
    return value


def gamma(x: float) -> float:
    """Euler gamma function (Lanczos g=7 with reflection below 0.5).

    Raises :class:`PoleError` within 1e-12 of a nonpositive integer.
    """
    value = _k.gamma(_finite_real("x", x))
    if not math.isfinite(value):
        raise DomainError(f"gamma({x!r}) overflows")
    return value


def reciprocal_gamma(x: float) -> float:
    """1/Gamma(x); entire, exactly 0 at the poles of Gamma."""
    return _k.rgamma(_finite_real("x", x))


@dataclass(frozen=True)
class MLArgs:
    """Arguments of the two-parameter Mittag-Leffler function E_{xi,zeta}(z)."""

    xi: float
    zeta: float
    z: complex

    def __post_init__(self):
        xi = _finite_real("xi", self.xi)
        if xi <= 0.0:
            raise DomainError("xi must be positive")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "zeta", _finite_real("zeta", self.zeta))
        object.__setattr__(self, "z", _finite_complex("z", self.z))


def mittag_leffler(xi: float, zeta: float, z: complex) -> complex:
    """Sum the Mittag-Leffler series  sum_m z**m / Gamma(xi*m + zeta).

    Truncation stops after two consecutive terms (beyond the last pole of
    1/Gamma) fall below ``1e-15 * (1 + |partial sum|)``; raises
    :class:`ConvergenceBudgetExceeded` after 2000 terms.
    """
    args = MLArgs(xi, zeta, z)
    value = _k.ml_sum(args.xi, args.zeta, args.z, ML_EPS, ML_MAX_TERMS)
    return _checked(value, f"E_{{{xi},{zeta}}}({z})")


def ml_E(t: float, h: float, c: complex) -> complex:
    """The two-index helper E(t, h, c) = t**h * E_{1,h+1}(c*t).

    At t = 0 this is 0 for h > 0 and 1 for h = 0; h < 0 is singular there.
    """
    t = _finite_real("t", t)
    h = _finite_real("h", h)
    c = _finite_complex("c", c)
    return _checked(_k.ml_E(t, h, c, ML_EPS, ML_MAX_TERMS), f"E({t}, {h}, {c})")


def ml_E_array(ts, h: float, c: complex) -> np.ndarray:
    """Vectorised :func:`ml_E` over an array of times."""
    h = _finite_real("h", h)
    c = _finite_complex("c", c)
    ts = np.asarray(ts, dtype=float)
    if not np.all(np.isfinite(ts)):
        raise DomainError("t values must be finite")
    out = _k.ml_E_array(ts, h, c, ML_EPS, ML_MAX_TERMS)
    if not np.all(np.isfinite(out)):
        raise DomainError(f"E(t, {h}, {c}) produced non-finite values")
    return out
