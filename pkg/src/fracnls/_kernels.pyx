# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: Lanczos gamma and the Mittag-Leffler series.

Same contract as ``_kernels_py``; see that module for the reference code.
"""
from libc.math cimport exp, fabs, floor, log, pow, round, sin, M_PI, INFINITY
import numpy as np

from fracnls.errors import ConvergenceBudgetExceeded, DomainError, PoleError

POLE_TOL = 1e-12
ML_EPS = 1e-15
ML_MAX_TERMS = 2000

cdef double _G = 7.0
cdef double[9] _P
_P[:] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
]
cdef double _SQRT_2PI = 2.5066282746310002
cdef double _LOG_SQRT_2PI = 0.91893853320467274
cdef double _GAMMA_MAX = 171.0


cdef inline bint _is_pole(double x) nogil:
    return x <= 1e-12 and fabs(x - round(x)) <= 1e-12


cdef inline double _sinpi(double x) nogil:
    cdef double r = x - 2.0 * floor(0.5 * x)
    return sin(M_PI * r)


cdef inline double _lanczos_series(double x) nogil:
    cdef double a = _P[0]
    cdef int i
    for i in range(1, 9):
        a += _P[i] / (x + i)
    return a


cdef inline double _gamma_pos(double x) nogil:
    x -= 1.0
    cdef double a = _lanczos_series(x)
    cdef double t = x + _G + 0.5
    cdef double half = pow(t, 0.5 * (x + 0.5))
    return _SQRT_2PI * half * (half * exp(-t)) * a


cdef inline double _lgamma_pos(double x) nogil:
    x -= 1.0
    cdef double a = _lanczos_series(x)
    cdef double t = x + _G + 0.5
    return _LOG_SQRT_2PI + (x + 0.5) * log(t) - t + log(a)


cdef double _gamma_nopole(double x) nogil:
    if x < 0.5:
        return M_PI / (_sinpi(x) * _gamma_nopole(1.0 - x))
    if x > _GAMMA_MAX:
        return INFINITY
    return _gamma_pos(x)


cdef double _rgamma(double x) nogil:
    if _is_pole(x):
        return 0.0
    if x < 0.5:
        return _sinpi(x) * _gamma_nopole(1.0 - x) / M_PI
    if x > _GAMMA_MAX:
        return exp(-_lgamma_pos(x))
    return 1.0 / _gamma_pos(x)


def is_pole(double x):
    return _is_pole(x)


def gamma(double x):
    if _is_pole(x):
        raise PoleError(f"gamma has a pole at {x!r}")
    return _gamma_nopole(x)


def rgamma(double x):
    return _rgamma(x)


cdef int _ml_sum(double xi, double zeta, double complex z, double eps,
                 int max_terms, double complex* out) nogil:
    cdef double complex total = 0
    cdef double complex power = 1
    cdef double complex term
    cdef double arg
    cdef int small = 0
    cdef int m
    for m in range(max_terms + 1):
        arg = xi * m + zeta
        term = power * _rgamma(arg)
        total = total + term
        if arg > 0.0:
            if abs(term) < eps * (1.0 + abs(total)):
                small += 1
                if small >= 2:
                    out[0] = total
                    return 0
            else:
                small = 0
        power = power * z
    return -1


def ml_sum(double xi, double zeta, z, double eps=ML_EPS, int max_terms=ML_MAX_TERMS):
    cdef double complex out
    cdef double complex zc = complex(z)
    if _ml_sum(xi, zeta, zc, eps, max_terms, &out) != 0:
        raise ConvergenceBudgetExceeded(
            f"Mittag-Leffler series E_{{{xi},{zeta}}}({complex(z)}) did not converge in {max_terms} terms"
        )
    return complex(out)


cdef inline object _ml_E_one(double t, double h, double complex c, double eps,
                             int max_terms, double complex* out):
    cdef double complex s
    if t == 0.0:
        if h > 0.0:
            out[0] = 0
            return None
        if h == 0.0:
            out[0] = _rgamma(1.0)
            return None
        raise DomainError(f"E(t, h, c) is singular at t=0 for h={h}")
    if t < 0.0:
        raise DomainError(f"E(t, h, c) requires t >= 0, got {t}")
    if _ml_sum(1.0, h + 1.0, c * t, eps, max_terms, &s) != 0:
        raise ConvergenceBudgetExceeded(
            f"Mittag-Leffler series E_{{1,{h + 1.0}}}({complex(c * t)}) did not converge in {max_terms} terms"
        )
    out[0] = pow(t, h) * s
    return None


def ml_E(double t, double h, c, double eps=ML_EPS, int max_terms=ML_MAX_TERMS):
    cdef double complex out
    _ml_E_one(t, h, complex(c), eps, max_terms, &out)
    return complex(out)


def ml_E_array(ts, double h, c, double eps=ML_EPS, int max_terms=ML_MAX_TERMS):
    arr = np.ascontiguousarray(ts, dtype=np.float64)
    result = np.empty(arr.shape, dtype=np.complex128)
    cdef double[::1] tv = arr.reshape(-1)
    cdef double complex[::1] ov = result.reshape(-1)
    cdef double complex cc = complex(c)
    cdef double complex val
    cdef Py_ssize_t j
    for j in range(tv.shape[0]):
        _ml_E_one(tv[j], h, cc, eps, max_terms, &val)
        ov[j] = val
    return result
