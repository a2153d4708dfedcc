import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracnls.errors import BasisOverflow, DomainError, UnsupportedAtom
from fracnls.fractional_operators import (
    Sense,
    caputo_quadrature,
    conformable_deriv_limit,
)
from fracnls.term_algebra import (
    MLE,
    ExpClassical,
    ExpConformable,
    TermSum,
    collapse,
    conjugate,
    deriv_t,
    deriv_x,
    evaluate,
    evaluate_points,
    integrate_x,
    multiply,
    render_term,
    term,
)

CAPUTO = Sense.CAPUTO
CONF = Sense.CONFORMABLE
EIT = TermSum.of(term(1.0, 0.0, ExpClassical(1j)))
T_GRID = (0.2, 0.4, 0.6, 0.8, 1.0)


def assert_sums_close(a: TermSum, b: TermSum, tol=1e-12):
    assert len(a) == len(b), f"{a}\n!=\n{b}"
    for s, t in zip(a, b):
        assert s.same_key(t), f"{render_term(s)} vs {render_term(t)}"
        assert abs(s.coeff - t.coeff) <= tol, f"{render_term(s)} vs {render_term(t)}"


# --- multiply / conjugate -------------------------------------------------


def test_frequency_cancellation():
    emit = TermSum.of(term(1.0, 0.0, ExpClassical(-1j)))
    assert_sums_close(multiply(EIT, emit), TermSum.constant(1.0))


def test_exp_times_exp_mle():
    d = 0.5
    b = TermSum.of(term(1.0, 0.0, ExpClassical(1j), MLE(1 - 2 * d, 1j)))
    expected = TermSum.of(term(1.0, 0.0, ExpClassical(2j), MLE(1 - 2 * d, 1j)))
    assert_sums_close(multiply(EIT, b), expected)


def test_mle_product_overflows():
    a = TermSum.of(term(1.0, 0.0, None, MLE(0.3, 1j)))
    b = TermSum.of(term(1.0, 0.0, None, MLE(0.6, 1j)))
    with pytest.raises(BasisOverflow):
        multiply(a, b)


def test_mixed_exp_kinds_unsupported():
    a = TermSum.of(term(1.0, 0.0, ExpConformable(1j, 0.5)))
    with pytest.raises(UnsupportedAtom):
        multiply(a, EIT)


def test_conjugate_exp():
    assert_sums_close(conjugate(EIT), TermSum.of(term(1.0, 0.0, ExpClassical(-1j))))


def test_conjugate_mle_example():
    g, d = 0.5, 0.25
    a = TermSum.of(term(1j, 2 * g, None, MLE(1 - 2 * d, 1j)))
    expected = TermSum.of(term(-1j, 2 * g, None, MLE(1 - 2 * d, -1j)))
    assert_sums_close(conjugate(a), expected)
    for x, t in [(0.3, 0.4), (0.9, 0.7)]:
        assert abs(evaluate(conjugate(a), x, t) - evaluate(a, x, t).conjugate()) < 1e-12


# --- random basis-safe sums ----------------------------------------------

coeffs = st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False)
freqs = st.sampled_from([0j, 1j, -1j, 2j, 0.5 + 0.5j])
x_exps = st.sampled_from([0.0, 0.25, 0.5, 1.0, 1.5])
mle_atoms = st.one_of(
    st.none(),
    st.builds(MLE, st.sampled_from([0.25, 0.5, 1.0, -0.5]), st.sampled_from([1j, -1j, 0.5 + 0j])),
)


@st.composite
def sums(draw, with_mle=True):
    n = draw(st.integers(1, 4))
    terms = []
    for _ in range(n):
        k = draw(freqs)
        mle = draw(mle_atoms) if with_mle else None
        terms.append(term(draw(coeffs), draw(x_exps), ExpClassical(k), mle))
    return TermSum(tuple(terms))


POINTS = [(0.3, 0.25), (0.7, 0.5), (1.0, 0.9)]


@settings(max_examples=60, deadline=None)
@given(sums(with_mle=True), sums(with_mle=False))
def test_homomorphism(a, b):
    prod = multiply(a, b)
    for x, t in POINTS:
        lhs = evaluate(prod, x, t)
        rhs = evaluate(a, x, t) * evaluate(b, x, t)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


@settings(max_examples=60, deadline=None)
@given(sums())
def test_conjugate_evaluation(a):
    for x, t in POINTS:
        assert abs(evaluate(conjugate(a), x, t) - evaluate(a, x, t).conjugate()) <= 1e-12 * max(
            1.0, abs(evaluate(a, x, t))
        )


@settings(max_examples=40, deadline=None)
@given(sums())
def test_conjugate_involution(a):
    assert_sums_close(conjugate(conjugate(a)), a, tol=0.0)


@settings(max_examples=40, deadline=None)
@given(sums())
def test_normalization_idempotent(a):
    again = TermSum(a.terms)
    assert again.terms == a.terms
    assert TermSum(again.terms + ()).render() == a.render()


def test_normalization_merges_and_prunes():
    a = TermSum.of(
        term(1.0, 0.75, ExpClassical(1j)),
        term(2.0, 0.25 + 0.5, ExpClassical(1j)),
        term(1e-16, 0.0),
        term(1.0, 0.0, ExpClassical(0j)),
    )
    assert len(a) == 2
    assert a.terms[0].coeff == 1.0 and a.terms[0].exp_atom is None
    assert a.terms[1].coeff == 3.0


def test_canonical_order_is_by_x_exponent():
    a = TermSum.of(term(1.0, 2.0), term(1.0, 0.5), term(1.0, 1.0))
    assert [t.x_exp for t in a] == [0.5, 1.0, 2.0]


# --- deriv_t --------------------------------------------------------------


@pytest.mark.parametrize("d", [0.25, 0.5, 0.75, 1.0])
def test_caputo_exp_rule(d):
    expected = TermSum.of(term(1j, 0.0, None, MLE(1 - d, 1j)))
    assert_sums_close(deriv_t(EIT, d, CAPUTO), expected)


def test_conformable_exp_rule():
    d = 0.5
    a = TermSum.of(term(1.0, 0.0, ExpConformable(1j, d)))
    assert_sums_close(deriv_t(a, d, CONF), a.scale(1j))
    assert_sums_close(deriv_t(a, 2 * d, CONF), a.scale(-1.0))


@pytest.mark.parametrize("sense", [CAPUTO, CONF])
def test_deriv_t_constant_is_empty(sense):
    assert len(deriv_t(TermSum.constant(1.0), 0.5, sense)) == 0


def test_deriv_t_sense_mismatch():
    with pytest.raises(UnsupportedAtom):
        deriv_t(EIT, 0.5, CONF)
    with pytest.raises(UnsupportedAtom):
        deriv_t(TermSum.of(term(1.0, 0.0, ExpConformable(1j, 0.5))), 0.5, CAPUTO)
    with pytest.raises(UnsupportedAtom):
        deriv_t(TermSum.of(term(1.0, 0.0, ExpConformable(1j, 0.5))), 0.3, CONF)


def test_deriv_t_exp_and_mle_overflows():
    a = TermSum.of(term(1.0, 0.0, ExpClassical(2j), MLE(0.5, -1j)))
    with pytest.raises(BasisOverflow):
        deriv_t(a, 0.5, CAPUTO)


def test_deriv_t_order_domain():
    with pytest.raises(DomainError):
        deriv_t(EIT, 0.0, CAPUTO)
    with pytest.raises(DomainError):
        deriv_t(EIT, 2.5, CAPUTO)


def _t_function(a, x=1.0):
    return lambda t: evaluate(a, x, t)


@pytest.mark.parametrize("d", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("k", [1j, -1j, 0.5 + 0j])
def test_caputo_exp_matches_quadrature(d, k):
    a = TermSum.of(term(1.0, 0.0, ExpClassical(k)))
    da = deriv_t(a, d, CAPUTO)
    for t in T_GRID:
        ref = caputo_quadrature(_t_function(a), d, t)
        got = evaluate(da, 1.0, t)
        assert abs(got - ref) <= 1e-3 * abs(ref)


@pytest.mark.parametrize("d", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("h", [0.25, 0.5, 1.0])
def test_caputo_mle_matches_quadrature(d, h):
    a = TermSum.of(term(1.0, 0.0, None, MLE(h, 1j)))
    da = deriv_t(a, d, CAPUTO)
    for t in T_GRID:
        ref = caputo_quadrature(_t_function(a), d, t)
        got = evaluate(da, 1.0, t)
        assert abs(got - ref) <= 1e-3 * abs(ref)


@pytest.mark.parametrize("d", [0.25, 0.5, 0.75, 1.0])
@pytest.mark.parametrize("k", [1j, -1j, 2j])
def test_conformable_exp_matches_limit(d, k):
    a = TermSum.of(term(1.0, 0.0, ExpConformable(k, d)))
    da = deriv_t(a, d, CONF)
    for t in T_GRID:
        ref = conformable_deriv_limit(_t_function(a), d, t)
        got = evaluate(da, 1.0, t)
        assert abs(got - ref) <= 1e-5 * abs(ref)


# --- deriv_x / integrate_x -----------------------------------------------


@pytest.mark.parametrize("g", [0.25, 0.5, 0.75, 1.0])
def test_caputo_deriv_x_example(g):
    a = TermSum.of(term(1.0 / math.gamma(2 * g + 1), 2 * g))
    expected = TermSum.of(term(1.0 / math.gamma(g + 1), g))
    assert_sums_close(deriv_x(a, g, CAPUTO), expected)


@pytest.mark.parametrize("g", [0.25, 0.5, 0.75, 1.0])
def test_conformable_deriv_x_example(g):
    a = TermSum.of(term(1.0, 2 * g))
    assert_sums_close(deriv_x(a, g, CONF), TermSum.of(term(2 * g, g)))


@pytest.mark.parametrize("sense", [CAPUTO, CONF])
def test_deriv_x_of_t_only_is_empty(sense):
    assert len(deriv_x(EIT, 0.5, sense)) == 0


def test_caputo_deriv_x_quadrature_spot_check():
    g = 0.5
    a = TermSum.of(term(1.0 / math.gamma(2 * g + 1), 2 * g, ExpClassical(1j)))
    da = deriv_x(a, g, CAPUTO)
    t = 0.4
    for x in (0.3, 0.8):
        ref = caputo_quadrature(lambda s: evaluate(a, s, t), g, x)
        assert abs(evaluate(da, x, t) - ref) <= 1e-4 * abs(ref)


def test_caputo_deriv_x_second_order_kills_linear():
    a = TermSum.of(term(1.0, 1.0), term(1.0, 0.0), term(1.0, 2.0))
    assert_sums_close(deriv_x(a, 2.0, CAPUTO), TermSum.of(term(2.0, 0.0)))


def test_order_one_collapse():
    a = TermSum.of(
        term(1.5, 0.0),
        term(2.0, 1.0, ExpClassical(1j)),
        term(-0.5j, 2.0),
        term(0.25, 3.0, ExpClassical(-1j)),
    )
    assert_sums_close(deriv_x(a, 1.0, CAPUTO), deriv_x(a, 1.0, CONF))


def test_integrate_x_examples():
    one = TermSum.constant(1.0)
    assert_sums_close(integrate_x(one, 1.0, CAPUTO), TermSum.of(term(1.0, 1.0)))
    for g in (0.25, 0.5, 0.75, 1.0):
        assert_sums_close(
            integrate_x(one, 2 * g, CAPUTO), TermSum.of(term(1 / math.gamma(2 * g + 1), 2 * g))
        )
        assert_sums_close(integrate_x(one, 2 * g, CONF), TermSum.of(term(1 / (2 * g * g), 2 * g)))


@pytest.mark.parametrize("g", [0.25, 0.5, 0.75, 1.0])
def test_conformable_integrate_then_differentiate(g):
    a = TermSum.of(term(1.0, 0.0, ExpConformable(1j, 0.5)), term(2.0, g))
    back = deriv_x(deriv_x(integrate_x(a, 2 * g, CONF), g, CONF), g, CONF)
    assert_sums_close(back, a, tol=1e-12)


def test_integrate_x_keeps_t_atoms():
    a = TermSum.of(term(1.0, 0.0, ExpClassical(1j), MLE(0.5, 1j)))
    (t,) = integrate_x(a, 1.0, CAPUTO).terms
    assert t.exp_atom == ExpClassical(1j) and t.mle_atom == MLE(0.5, 1j)


def test_integrate_x_negative_exponent():
    with pytest.raises(DomainError):
        integrate_x(TermSum.of(term(1.0, -0.5)), 1.0, CAPUTO)


# --- evaluate -------------------------------------------------------------


def test_evaluate_examples():
    assert abs(evaluate(EIT, 0.5, math.pi) - (-1 + 0j)) < 1e-15
    a = TermSum.of(term(1.0, 2.0, ExpClassical(1j)))
    assert abs(evaluate(a, 2.0, 0.3) - 4 * cmath.exp(0.3j)) < 1e-14
    e = TermSum.of(term(1.0, 0.0, None, MLE(0.0, 1j)))
    assert abs(evaluate(e, 1.0, 0.7) - cmath.exp(0.7j)) < 1e-14


def test_evaluate_conformable_exp():
    a = TermSum.of(term(1.0, 0.0, ExpConformable(1j, 0.5)))
    t = 0.3
    assert abs(evaluate(a, 1.0, t) - cmath.exp(1j * t**0.5 / 0.5)) < 1e-15


@pytest.mark.parametrize("x,t", [(0.0, 0.5), (0.5, 0.0), (-1.0, 0.5)])
def test_evaluate_domain(x, t):
    with pytest.raises(DomainError):
        evaluate(EIT, x, t)


def test_evaluate_points_permutation():
    a = TermSum.of(term(1.0, 0.5, ExpClassical(1j), MLE(0.5, 1j)), term(2.0, 1.0))
    rng = np.random.default_rng(7)
    xs = rng.uniform(0.05, 1.0, 30)
    ts = rng.uniform(0.05, 1.0, 30)
    perm = rng.permutation(30)
    full = evaluate_points(a, xs, ts)
    assert np.array_equal(evaluate_points(a, xs[perm], ts[perm]), full[perm])
    for j in range(5):
        assert evaluate(a, xs[j], ts[j]) == full[j]


# --- collapse and rendering ----------------------------------------------


def test_collapse_integer_mle():
    a = TermSum.of(term(1.0, 0.0, None, MLE(-1.0, 1j)), term(1.0, 0.0, None, MLE(0.0, 1j)))
    c = collapse(a)
    assert_sums_close(c, TermSum.of(term(1 + 1j, 0.0, ExpClassical(1j))))
    for t in T_GRID:
        assert abs(evaluate(a, 1.0, t) - evaluate(c, 1.0, t)) < 1e-13


def test_collapse_merges_with_exp():
    a = TermSum.of(term(1.0, 0.0, ExpClassical(2j), MLE(0.0, -1j)))
    assert_sums_close(collapse(a), TermSum.of(term(1.0, 0.0, ExpClassical(1j))))


def test_collapse_keeps_fractional_mle():
    a = TermSum.of(term(1.0, 0.0, None, MLE(0.5, 1j)))
    assert_sums_close(collapse(a), a)


def test_collapse_conformable_delta_one():
    a = TermSum.of(term(1.0, 0.0, ExpConformable(1j, 1.0)))
    assert_sums_close(collapse(a), EIT)


def test_render_is_deterministic():
    t = term(-1.0, 0.5, ExpClassical(1j), MLE(-0.5, 1j))
    assert render_term(t) == "(-1+0i)*x^0.5*exp((0+1i)*t)*E(t,-0.5,(0+1i))"
    assert render_term(term(-0.0 + 0j, 1.0)) == "(0+0i)*x^1"
