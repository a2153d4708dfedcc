"""Caputo, Riemann-Liouville and conformable operators.

Two kinds of routine live here:

* closed-form power rules (``caputo_power``, ``rl_integral_power``,
  ``conformable_power_rule``) used by the symbolic term algebra, and
* numeric oracles (``caputo_quadrature``, ``conformable_deriv_limit``,
  ``conformable_integral``) that evaluate the defining integrals/limits
  directly and are used to cross-check the rules.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

from .errors import DomainError, QuadratureError
from .special_functions import gamma, reciprocal_gamma

__all__ = [
    "Sense",
    "FractionalOrder",
    "ScalarFunction",
    "PowerRule",
    "caputo_quadrature",
    "caputo_power",
    "rl_integral_power",
    "conformable_deriv_limit",
    "conformable_power_rule",
    "conformable_integral",
    "simpson",
]

DEFAULT_PANELS = 256


class Sense(str, enum.Enum):
    CAPUTO = "caputo"
    CONFORMABLE = "conformable"


@dataclass(frozen=True)
class FractionalOrder:
    """An order together with the sense it is taken in.

    Single operators need 0 < value <= 1; composed orders such as 2*gamma go
    up to 2.
    """

    value: float
    sense: Sense

    def __post_init__(self):
        if not 0.0 < self.value <= 2.0:
            raise DomainError(f"fractional order must lie in (0, 2], got {self.value}")
        object.__setattr__(self, "sense", Sense(self.sense))


@dataclass(frozen=True)
class ScalarFunction:
    """A complex-valued function of one positive real variable.

    ``smooth`` declares continuous differentiability on the open domain; the
    Caputo oracle refuses functions that do not claim it. ``fn`` must not
    mutate shared state.
    """

    fn: Callable[[float], complex]
    smooth: bool = True

    def __call__(self, t: float) -> complex:
        return complex(self.fn(t))


def _as_function(h) -> ScalarFunction:
    if isinstance(h, ScalarFunction):
        return h
    if callable(h):
        return ScalarFunction(h)
    value = complex(h)
    return ScalarFunction(lambda _t: value)


class PowerRule(NamedTuple):
    """``D x**p = coefficient * x**exponent``."""

    coefficient: float
    exponent: float


def _check_order(order: float, upper: float = 1.0) -> float:
    order = float(order)
    if not 0.0 < order <= upper:
        raise DomainError(f"order must lie in (0, {upper}], got {order}")
    return order


def simpson(f: Callable[[float], complex], a: float, b: float, panels: int) -> complex:
    """Composite Simpson rule with ``panels`` subintervals (rounded up to even)."""
    if panels < 8:
        raise QuadratureError(f"need at least 8 panels, got {panels}")
    n = panels + (panels % 2)
    step = (b - a) / n
    total = f(a) + f(b)
    for j in range(1, n):
        total += (4 if j % 2 else 2) * f(a + j * step)
    return total * step / 3.0


def _central_diff(h: ScalarFunction, x: float, step: float) -> complex:
    return (h(x + step) - h(x - step)) / (2.0 * step)


def caputo_quadrature(h, order: float, t: float, panels: int = DEFAULT_PANELS) -> complex:
    """Caputo derivative of order in (0, 1] by direct quadrature.

    Evaluates ``1/Gamma(1-order) * int_0^t (t-mu)**(-order) h'(mu) dmu`` with
    ``h'`` from central differences (step ``1e-6*max(1, t)``). The interval
    is split at t/2: near the upper end the kernel singularity is removed
    with ``u = (t-mu)**(1-order)``; near the origin ``mu = s**4`` absorbs
    integrable blow-up of ``h'`` such as ``mu**-0.75``. Order 1 returns
    ``h'(t)``.
    """
    h = _as_function(h)
    order = _check_order(order)
    if t <= 0.0:
        raise DomainError(f"t must be positive, got {t}")
    if panels < 8:
        raise QuadratureError(f"need at least 8 panels, got {panels}")
    if not h.smooth:
        raise DomainError("Caputo oracle needs a continuously differentiable function")
    step = 1e-6 * max(1.0, t)
    if order == 1.0:
        return _central_diff(h, t, step)

    half = 0.5 * t
    power = 1.0 / (1.0 - order)

    def upper(u):
        mu = t - u**power
        return _central_diff(h, mu, step)

    right = simpson(upper, 0.0, half ** (1.0 - order), panels) / (1.0 - order)

    # mu = s**4 on [0, t/2]; differentiate g(s) = h(s**4) directly in s
    def g(s):
        return h(s**4)

    s_end = half**0.25
    s_step = 1e-6 * s_end

    def lower(s):
        if s - s_step <= 0.0:
            dg = (g(s + 2 * s_step) - g(s + s_step)) / s_step
        else:
            dg = (g(s + s_step) - g(s - s_step)) / (2.0 * s_step)
        return (t - s**4) ** (-order) * dg

    left = simpson(lower, 0.0, s_end, panels)
    return (left + right) * reciprocal_gamma(1.0 - order)


def caputo_power(p: float, order: float) -> PowerRule:
    """``D^order x**p = Gamma(p+1)/Gamma(p+1-order) * x**(p-order)`` for p > 0."""
    order = _check_order(order)
    if p <= 0.0:
        raise DomainError(f"power rule needs p > 0 (constants map to zero), got {p}")
    return PowerRule(gamma(p + 1.0) / gamma(p + 1.0 - order), p - order)


def rl_integral_power(p: float, order: float) -> PowerRule:
    """``I^order x**p = Gamma(p+1)/Gamma(p+1+order) * x**(p+order)``."""
    if p < 0.0:
        raise DomainError(f"integral rule needs p >= 0, got {p}")
    if order <= 0.0:
        raise DomainError(f"order must be positive, got {order}")
    return PowerRule(gamma(p + 1.0) / gamma(p + 1.0 + order), p + order)


def conformable_deriv_limit(h, order: float, t: float, eps: float = 1e-6) -> complex:
    """Conformable derivative from its limit definition.

    Symmetric difference ``(h(t+e*t**(1-a)) - h(t-e*t**(1-a))) / (2e)``
    followed by one Richardson step between ``eps`` and ``eps/2``.
    """
    h = _as_function(h)
    order = _check_order(order)
    if t <= 0.0:
        raise DomainError(f"t must be positive, got {t}")
    if not 1e-10 <= eps <= 1e-4:
        raise DomainError(f"eps must lie in [1e-10, 1e-4], got {eps}")
    scale = t ** (1.0 - order)
    if t - eps * scale <= 0.0:
        raise DomainError("difference stencil crosses t = 0")

    def quotient(e):
        return (h(t + e * scale) - h(t - e * scale)) / (2.0 * e)

    coarse = quotient(eps)
    fine = quotient(0.5 * eps)
    return (4.0 * fine - coarse) / 3.0


def conformable_power_rule(r: float, order: float) -> PowerRule:
    """``M_order t**r = r * t**(r-order)``; r = 0 gives the zero function."""
    order = _check_order(order)
    return PowerRule(float(r), r - order)


def conformable_integral(
    h, order: float, t: float, panels: int = DEFAULT_PANELS, lower: float = 0.0
) -> complex:
    """``int_lower^t h(psi) psi**(order-1) dpsi`` via ``u = psi**order``.

    The substitution turns the weight into ``du/order`` and removes the
    singularity at the origin.
    """
    h = _as_function(h)
    order = _check_order(order)
    if panels < 8:
        raise QuadratureError(f"need at least 8 panels, got {panels}")
    if t <= 0.0 or lower < 0.0 or lower > t:
        raise DomainError(f"need 0 <= lower <= t and t > 0, got lower={lower}, t={t}")
    inv = 1.0 / order

    def integrand(u):
        psi = u**inv
        if psi == 0.0:
            # h is only defined for psi > 0; nudge the endpoint sample inward
            psi = math.ulp(1.0) * max(t, 1.0)
        return h(psi)

    return simpson(integrand, lower**order, t**order, panels) / order
