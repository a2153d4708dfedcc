import cmath

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracnls.errors import DomainError, QuadratureError
from fracnls.fractional_operators import (
    FractionalOrder,
    ScalarFunction,
    Sense,
    caputo_power,
    caputo_quadrature,
    conformable_deriv_limit,
    conformable_integral,
    conformable_power_rule,
    rl_integral_power,
)
from fracnls.special_functions import gamma, ml_E


def test_caputo_quadrature_examples():
    assert abs(caputo_quadrature(lambda t: 5.0, 0.5, 1.0, panels=64)) <= 1e-8
    assert caputo_quadrature(lambda t: t, 0.5, 1.0, panels=256) == pytest.approx(1.1283791671, rel=1e-4)
    assert caputo_quadrature(lambda t: t * t, 1.0, 0.5, panels=64) == pytest.approx(1.0, rel=1e-6)


def test_caputo_quadrature_errors():
    with pytest.raises(DomainError):
        caputo_quadrature(lambda t: t, 0.5, 0.0)
    with pytest.raises(QuadratureError):
        caputo_quadrature(lambda t: t, 0.5, 1.0, panels=4)
    with pytest.raises(DomainError):
        caputo_quadrature(ScalarFunction(abs, smooth=False), 0.5, 1.0)


def test_caputo_power_examples():
    assert caputo_power(1, 1) == pytest.approx((1.0, 0.0))
    coeff, exp = caputo_power(2 * 0.5, 0.5)
    assert (coeff, exp) == pytest.approx((1.1283791671, 0.5))
    # Gamma(1.8)/Gamma(1.5), confirmed against the quadrature oracle
    coeff, exp = caputo_power(0.8, 0.3)
    assert coeff == pytest.approx(1.0509540437, rel=1e-9)
    assert exp == pytest.approx(0.5)
    assert caputo_quadrature(lambda t: t**0.8, 0.3, 1.0) == pytest.approx(coeff, rel=1e-4)


def test_caputo_power_matches_oracle_at_sampled_x():
    coeff, exp = caputo_power(1.0, 0.5)
    for x in (0.3, 0.7, 1.0):
        assert caputo_quadrature(lambda t: t, 0.5, x) == pytest.approx(coeff * x**exp, rel=1e-4)


@pytest.mark.parametrize("p", [0.5, 1.0, 1.7, 2.4])
@pytest.mark.parametrize("order", [0.25, 0.5, 0.85])
@pytest.mark.parametrize("x", [0.3, 0.7, 1.0])
def test_caputo_closed_form_vs_quadrature(p, order, x):
    coeff, exp = caputo_power(p, order)
    numeric = caputo_quadrature(lambda t: t**p, order, x)
    assert abs(numeric - coeff * x**exp) <= 1e-4 * abs(coeff * x**exp)


def test_rl_integral_power_examples():
    assert rl_integral_power(0, 1) == pytest.approx((1.0, 1.0))
    gam = 0.25
    coeff, exp = rl_integral_power(0, 2 * gam)
    assert coeff == pytest.approx(1 / gamma(1.5)) and coeff == pytest.approx(1.1283791671)
    assert exp == pytest.approx(0.5)
    assert rl_integral_power(1.0, 1.0) == pytest.approx((0.5, 2.0))


def test_conformable_limit_examples():
    assert conformable_deriv_limit(lambda t: t * t, 0.5, 1.0, 1e-6) == pytest.approx(2.0, abs=1e-6)
    assert abs(conformable_deriv_limit(lambda t: 3.0, 0.7, 2.0, 1e-6)) <= 1e-12

    def h(t):
        return cmath.exp(1j * t**0.5 / 0.5)

    expected = 1j * h(0.8)
    assert abs(conformable_deriv_limit(h, 0.5, 0.8, 1e-6) - expected) <= 1e-5


def test_conformable_limit_errors():
    with pytest.raises(DomainError):
        conformable_deriv_limit(lambda t: t, 0.5, 1.0, eps=1e-2)
    with pytest.raises(DomainError):
        conformable_deriv_limit(lambda t: t, 0.5, -1.0)


def test_conformable_power_rule_examples():
    assert conformable_power_rule(2, 0.5) == (2.0, 1.5)
    assert conformable_power_rule(0.3, 0.3) == pytest.approx((0.3, 0.0))
    assert conformable_power_rule(0, 0.6) == pytest.approx((0.0, -0.6))


@pytest.mark.parametrize("r", [0.5, 1.0, 2.0, 2.7])
@pytest.mark.parametrize("order", [0.3, 0.5, 0.9])
@pytest.mark.parametrize("t", [0.4, 1.0, 1.6])
def test_conformable_power_rule_vs_limit(r, order, t):
    coeff, exp = conformable_power_rule(r, order)
    assert abs(conformable_deriv_limit(lambda s: s**r, order, t) - coeff * t**exp) <= 1e-5


def test_conformable_integral_examples():
    assert conformable_integral(lambda s: 1.0, 0.5, 4.0, panels=64) == pytest.approx(4.0, rel=1e-8)
    assert conformable_integral(lambda s: s**0.5, 0.5, 1.0, panels=64) == pytest.approx(1.0, rel=1e-8)
    for gam, t, c in [(0.3, 2.0, 2.5), (0.8, 0.5, -1.0)]:
        assert conformable_integral(lambda s: c, gam, t) == pytest.approx(c * t**gam / gam, rel=1e-10)
    with pytest.raises(QuadratureError):
        conformable_integral(lambda s: 1.0, 0.5, 1.0, panels=7)


BASIS = {
    "t^2": (lambda t: t * t, lambda t: 2 * t),
    "exp(it)": (lambda t: cmath.exp(1j * t), lambda t: 1j * cmath.exp(1j * t)),
    "t^1.5": (lambda t: t**1.5, lambda t: 1.5 * t**0.5),
}


@pytest.mark.parametrize("name", sorted(BASIS))
@pytest.mark.parametrize("order", [0.3, 0.5, 0.9])
def test_integral_of_derivative_round_trip(name, order):
    h, _ = BASIS[name]
    c, t = 0.2, 1.3

    def derivative(s):
        return conformable_deriv_limit(h, order, s)

    result = conformable_integral(derivative, order, t, panels=64, lower=c)
    assert abs(result - (h(t) - h(c))) <= 1e-5


@pytest.mark.parametrize("name", sorted(BASIS))
@pytest.mark.parametrize("order", [0.3, 0.5, 0.9, 1.0])
@pytest.mark.parametrize("t", [0.3, 0.8, 1.5])
def test_conformable_matches_chain_rule(name, order, t):
    h, dh = BASIS[name]
    assert abs(conformable_deriv_limit(h, order, t) - t ** (1 - order) * dh(t)) <= 1e-5


@pytest.mark.parametrize("name", sorted(BASIS))
@pytest.mark.parametrize("t", [0.3, 0.8, 1.5])
def test_order_one_reduces_to_classical(name, t):
    h, dh = BASIS[name]
    assert abs(conformable_deriv_limit(h, 1.0, t) - dh(t)) <= 1e-6
    assert abs(caputo_quadrature(h, 1.0, t) - dh(t)) <= 1e-6


names = st.sampled_from(sorted(BASIS))
coef = st.floats(-3, 3, allow_nan=False)


@settings(max_examples=40, deadline=None)
@given(a=coef, b=coef, f=names, g=names, order=st.floats(0.2, 1.0), t=st.floats(0.3, 1.5))
def test_conformable_linearity(a, b, f, g, order, t):
    hf, hg = BASIS[f][0], BASIS[g][0]
    lhs = conformable_deriv_limit(lambda s: a * hf(s) + b * hg(s), order, t)
    rhs = a * conformable_deriv_limit(hf, order, t) + b * conformable_deriv_limit(hg, order, t)
    assert abs(lhs - rhs) <= 1e-6


@settings(max_examples=40, deadline=None)
@given(f=names, g=names, order=st.floats(0.2, 1.0), t=st.floats(0.3, 1.5))
def test_conformable_product_rule(f, g, order, t):
    hf, hg = BASIS[f][0], BASIS[g][0]
    lhs = conformable_deriv_limit(lambda s: hf(s) * hg(s), order, t)
    rhs = hf(t) * conformable_deriv_limit(hg, order, t) + hg(t) * conformable_deriv_limit(hf, order, t)
    assert abs(lhs - rhs) <= 1e-5


@pytest.mark.parametrize("delta", [0.75, 1.0])
@pytest.mark.parametrize("t", [0.2, 0.4, 0.6, 0.8, 1.0])
def test_ml_shift_rule_matches_caputo_for_vanishing_start(delta, t):
    h = 1.0 - delta
    numeric = caputo_quadrature(lambda s: ml_E(s, h, 1j), delta, t)
    closed = ml_E(t, h - delta, 1j)
    assert abs(numeric - closed) <= 1e-3 * abs(closed)


@pytest.mark.parametrize("t", [0.2, 0.5, 1.0])
def test_ml_shift_rule_at_h0_carries_rl_initial_term(t):
    # E(t,0,c) = e^{ct} does not vanish at 0, so the formal shift rule picks up
    # the Riemann-Liouville term t^-delta / Gamma(1-delta) relative to Caputo.
    delta = 0.75
    numeric = caputo_quadrature(lambda s: ml_E(s, 0.0, 1j), delta, t)
    formal = ml_E(t, -delta, 1j)
    offset = t**-delta / gamma(1 - delta)
    assert abs(formal - (numeric + offset)) <= 1e-3 * abs(formal)


def test_fractional_order_validation():
    assert FractionalOrder(0.5, "caputo").sense is Sense.CAPUTO
    assert FractionalOrder(1.6, Sense.CONFORMABLE).value == 1.6
    with pytest.raises(DomainError):
        FractionalOrder(0.0, Sense.CAPUTO)
    with pytest.raises(DomainError):
        FractionalOrder(2.5, Sense.CAPUTO)
