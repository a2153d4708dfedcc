"""Pure-Python kernels: Lanczos gamma and the Mittag-Leffler series.

This module mirrors ``_kernels.pyx`` function for function. It is the
fallback when the compiled extension is unavailable and the reference the
extension is tested against.
"""
import math

import numpy as np

from .errors import ConvergenceBudgetExceeded, DomainError, PoleError

POLE_TOL = 1e-12
ML_EPS = 1e-15
ML_MAX_TERMS = 2000

# Lanczos approximation, g = 7, n = 9.
_G = 7.0
_P = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = 2.5066282746310002
_LOG_SQRT_2PI = 0.91893853320467274
# Past this Gamma overflows a double.
_GAMMA_MAX = 171.0


def is_pole(x):
    return x <= POLE_TOL and abs(x - round(x)) <= POLE_TOL


def _sinpi(x):
    r = x - 2.0 * math.floor(0.5 * x)
    return math.sin(math.pi * r)


def _lanczos_series(x):
    # x already shifted by -1
    a = _P[0]
    for i in range(1, 9):
        a += _P[i] / (x + i)
    return a


def _gamma_pos(x):
    """Gamma for x >= 0.5."""
    x -= 1.0
    a = _lanczos_series(x)
    t = x + _G + 0.5
    # split the power so t**(x+0.5) does not overflow before Gamma does
    half = t ** (0.5 * (x + 0.5))
    return _SQRT_2PI * half * (half * math.exp(-t)) * a


def _lgamma_pos(x):
    x -= 1.0
    a = _lanczos_series(x)
    t = x + _G + 0.5
    return _LOG_SQRT_2PI + (x + 0.5) * math.log(t) - t + math.log(a)


def gamma(x):
    if is_pole(x):
        raise PoleError(f"gamma has a pole at {x!r}")
    if x < 0.5:
        return math.pi / (_sinpi(x) * gamma(1.0 - x))
    if x > _GAMMA_MAX:
        return math.inf
    return _gamma_pos(x)


def rgamma(x):
    if is_pole(x):
        return 0.0
    if x < 0.5:
        return _sinpi(x) * gamma(1.0 - x) / math.pi
    if x > _GAMMA_MAX:
        return math.exp(-_lgamma_pos(x))
    return 1.0 / _gamma_pos(x)


def ml_sum(xi, zeta, z, eps=ML_EPS, max_terms=ML_MAX_TERMS):
    """Truncated Taylor sum of E_{xi,zeta}(z).

    Stops once two consecutive terms past the last pole of 1/Gamma are both
    below ``eps * (1 + |partial sum|)``.
    """
    z = complex(z)
    total = 0j
    power = 1 + 0j
    small = 0
    for m in range(max_terms + 1):
        arg = xi * m + zeta
        term = power * rgamma(arg)
        total += term
        if arg > 0.0:
            if abs(term) < eps * (1.0 + abs(total)):
                small += 1
                if small >= 2:
                    return total
            else:
                small = 0
        power *= z
    raise ConvergenceBudgetExceeded(
        f"Mittag-Leffler series E_{{{xi},{zeta}}}({z}) did not converge in {max_terms} terms"
    )


def ml_E(t, h, c, eps=ML_EPS, max_terms=ML_MAX_TERMS):
    """t**h * E_{1,h+1}(c*t)."""
    if t == 0.0:
        if h > 0.0:
            return 0j
        if h == 0.0:
            return complex(rgamma(1.0))
        raise DomainError(f"E(t, h, c) is singular at t=0 for h={h}")
    if t < 0.0:
        raise DomainError(f"E(t, h, c) requires t >= 0, got {t}")
    return t**h * ml_sum(1.0, h + 1.0, c * t, eps, max_terms)


def ml_E_array(ts, h, c, eps=ML_EPS, max_terms=ML_MAX_TERMS):
    ts = np.asarray(ts, dtype=float)
    out = np.empty(ts.shape, dtype=complex)
    flat_in = ts.ravel()
    flat_out = out.reshape(-1)
    for j in range(flat_in.size):
        flat_out[j] = ml_E(float(flat_in[j]), h, c, eps, max_terms)
    return out
