"""A small closed term algebra for the ADM recursion.

Every quantity the solver manipulates is a finite sum of terms

    coeff * x**q * [exp atom] * [Mittag-Leffler atom]

with the exp atom either ``e^{k t}`` (classical) or ``e^{k t^d / d}``
(conformable), and the Mittag-Leffler atom ``E(t, h, c)``. Orders gamma and
delta are plain numbers fixed when a sum is built, so every rule below is
exact arithmetic on coefficients and exponents; no general CAS is involved.

At most one Mittag-Leffler atom may appear per term. Products that would
need two raise :class:`BasisOverflow`, which is what bounds the solver depth.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Union

import numpy as np

from .errors import BasisOverflow, DomainError, UnsupportedAtom
from .fractional_operators import Sense, caputo_power, rl_integral_power
from .special_functions import gamma, ml_E_array

__all__ = [
    "ExpClassical",
    "ExpConformable",
    "MLE",
    "SymbolicTerm",
    "TermSum",
    "term",
    "multiply",
    "conjugate",
    "deriv_t",
    "deriv_x",
    "integrate_x",
    "evaluate",
    "evaluate_points",
    "collapse",
    "render_term",
    "term_key",
    "same_key",
]

MERGE_TOL = 1e-12
PRUNE_TOL = 1e-14


def _close(a: complex, b: complex, tol: float = MERGE_TOL) -> bool:
    return abs(a - b) <= tol


@dataclass(frozen=True)
class ExpClassical:
    """e^{k t}"""

    k: complex

    def close_to(self, other) -> bool:
        return isinstance(other, ExpClassical) and _close(self.k, other.k)

    def sort_key(self):
        return (0, self.k.real, self.k.imag, 0.0)

    def conj(self) -> "ExpClassical":
        return ExpClassical(self.k.conjugate())

    def values(self, ts: np.ndarray) -> np.ndarray:
        return np.exp(self.k * ts)

    def render(self) -> str:
        return f"exp({_fmt_complex(self.k)}*t)"


@dataclass(frozen=True)
class ExpConformable:
    """e^{k t^delta / delta}"""

    k: complex
    delta: float

    def close_to(self, other) -> bool:
        return (
            isinstance(other, ExpConformable)
            and _close(self.k, other.k)
            and _close(self.delta, other.delta)
        )

    def sort_key(self):
        return (1, self.k.real, self.k.imag, self.delta)

    def conj(self) -> "ExpConformable":
        return ExpConformable(self.k.conjugate(), self.delta)

    def values(self, ts: np.ndarray) -> np.ndarray:
        return np.exp(self.k * ts**self.delta / self.delta)

    def render(self) -> str:
        d = _fmt_real(self.delta)
        return f"exp({_fmt_complex(self.k)}*t^{d}/{d})"


@dataclass(frozen=True)
class MLE:
    """E(t, h, c) = t^h E_{1,h+1}(c t)"""

    h: float
    c: complex

    def close_to(self, other) -> bool:
        return isinstance(other, MLE) and _close(self.h, other.h) and _close(self.c, other.c)

    def sort_key(self):
        return (2, self.h, self.c.real, self.c.imag)

    def conj(self) -> "MLE":
        # the series has real coefficients and t is real
        return MLE(self.h, self.c.conjugate())

    def values(self, ts: np.ndarray) -> np.ndarray:
        return ml_E_array(ts, self.h, self.c)

    def render(self) -> str:
        return f"E(t,{_fmt_real(self.h)},{_fmt_complex(self.c)})"


ExpAtom = Union[ExpClassical, ExpConformable]


def _clean_zero(v: float) -> float:
    return 0.0 if v == 0.0 else v


def _fmt_real(v: float) -> str:
    return f"{_clean_zero(float(v)):.12g}"


def _fmt_complex(z: complex) -> str:
    return f"({_clean_zero(z.real):.12g}{_clean_zero(z.imag):+.12g}i)"


@dataclass(frozen=True)
class SymbolicTerm:
    coeff: complex
    x_exp: float = 0.0
    exp_atom: ExpAtom | None = None
    mle_atom: MLE | None = None

    def __post_init__(self):
        object.__setattr__(self, "coeff", complex(self.coeff))
        object.__setattr__(self, "x_exp", float(self.x_exp))
        if not (math.isfinite(self.coeff.real) and math.isfinite(self.coeff.imag)):
            raise DomainError(f"non-finite coefficient {self.coeff!r}")
        atom = self.exp_atom
        if atom is not None and abs(atom.k) <= PRUNE_TOL:
            object.__setattr__(self, "exp_atom", None)

    def sort_key(self):
        exp_key = self.exp_atom.sort_key() if self.exp_atom else (-1, 0.0, 0.0, 0.0)
        mle_key = self.mle_atom.sort_key() if self.mle_atom else (-1, 0.0, 0.0, 0.0)
        return (self.x_exp, exp_key, mle_key)

    def same_key(self, other: "SymbolicTerm") -> bool:
        return (
            _close(self.x_exp, other.x_exp)
            and _atoms_close(self.exp_atom, other.exp_atom)
            and _atoms_close(self.mle_atom, other.mle_atom)
        )

    def with_coeff(self, coeff: complex) -> "SymbolicTerm":
        return replace(self, coeff=coeff)

    @property
    def has_t(self) -> bool:
        return self.exp_atom is not None or self.mle_atom is not None


def _atoms_close(a, b) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return a.close_to(b)


def term(coeff=1.0, x_exp=0.0, exp=None, mle=None) -> SymbolicTerm:
    return SymbolicTerm(coeff, x_exp, exp, mle)


def _normalize(terms: Iterable[SymbolicTerm]) -> tuple[SymbolicTerm, ...]:
    merged: list[SymbolicTerm] = []
    for t in sorted(terms, key=SymbolicTerm.sort_key):
        for j, m in enumerate(merged):
            if m.same_key(t):
                merged[j] = m.with_coeff(m.coeff + t.coeff)
                break
        else:
            merged.append(t)
    return tuple(t for t in sorted(merged, key=SymbolicTerm.sort_key) if abs(t.coeff) >= PRUNE_TOL)


@dataclass(frozen=True)
class TermSum:
    """An immutable, normalized sum of :class:`SymbolicTerm`."""

    terms: tuple[SymbolicTerm, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "terms", _normalize(self.terms))

    @classmethod
    def of(cls, *terms: SymbolicTerm) -> "TermSum":
        return cls(tuple(terms))

    @classmethod
    def constant(cls, value: complex) -> "TermSum":
        return cls((term(value),))

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "TermSum") -> "TermSum":
        return TermSum(self.terms + _as_sum(other).terms)

    def __sub__(self, other: "TermSum") -> "TermSum":
        return self + (-1.0) * _as_sum(other)

    def __neg__(self) -> "TermSum":
        return (-1.0) * self

    def __mul__(self, other) -> "TermSum":
        if isinstance(other, TermSum):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other) -> "TermSum":
        return self.scale(other)

    def scale(self, factor: complex) -> "TermSum":
        factor = complex(factor)
        return TermSum(tuple(t.with_coeff(t.coeff * factor) for t in self.terms))

    def conj(self) -> "TermSum":
        return conjugate(self)

    @property
    def depends_on_x(self) -> bool:
        return any(not _close(t.x_exp, 0.0) for t in self.terms)

    def render(self) -> list[str]:
        return [render_term(t) for t in self.terms]

    def __str__(self):
        return " + ".join(self.render()) or "0"


def _as_sum(value) -> TermSum:
    if isinstance(value, TermSum):
        return value
    if isinstance(value, SymbolicTerm):
        return TermSum((value,))
    return TermSum.constant(value)


def render_term(t: SymbolicTerm) -> str:
    """Deterministic plain-text form, e.g. ``(-1+0i)*x^0.5*exp((0+1i)*t)``."""
    return f"{_fmt_complex(t.coeff)}*{term_key(t)}"


def term_key(t: SymbolicTerm) -> str:
    parts = [f"x^{_fmt_real(t.x_exp)}"]
    if t.exp_atom is not None:
        parts.append(t.exp_atom.render())
    if t.mle_atom is not None:
        parts.append(t.mle_atom.render())
    return "*".join(parts)


def same_key(a: SymbolicTerm, b: SymbolicTerm) -> bool:
    return a.same_key(b)


def _multiply_exp(a: ExpAtom | None, b: ExpAtom | None) -> ExpAtom | None:
    if a is None:
        return b
    if b is None:
        return a
    if isinstance(a, ExpClassical) and isinstance(b, ExpClassical):
        return ExpClassical(a.k + b.k)
    if isinstance(a, ExpConformable) and isinstance(b, ExpConformable) and _close(a.delta, b.delta):
        return ExpConformable(a.k + b.k, a.delta)
    raise UnsupportedAtom(f"cannot multiply {a.render()} by {b.render()}")


def _multiply_terms(a: SymbolicTerm, b: SymbolicTerm) -> SymbolicTerm:
    if a.mle_atom is not None and b.mle_atom is not None:
        raise BasisOverflow(
            f"product {a.mle_atom.render()} * {b.mle_atom.render()} leaves the term basis"
        )
    return SymbolicTerm(
        a.coeff * b.coeff,
        a.x_exp + b.x_exp,
        _multiply_exp(a.exp_atom, b.exp_atom),
        a.mle_atom or b.mle_atom,
    )


def multiply(a: TermSum, b: TermSum) -> TermSum:
    """Distributive product; exp frequencies add, x exponents add."""
    a, b = _as_sum(a), _as_sum(b)
    return TermSum(tuple(_multiply_terms(s, t) for s in a.terms for t in b.terms))


def conjugate(a: TermSum) -> TermSum:
    a = _as_sum(a)
    return TermSum(
        tuple(
            SymbolicTerm(
                t.coeff.conjugate(),
                t.x_exp,
                t.exp_atom.conj() if t.exp_atom else None,
                t.mle_atom.conj() if t.mle_atom else None,
            )
            for t in a.terms
        )
    )


def _check_order(order: float) -> float:
    order = float(order)
    if not 0.0 < order <= 2.0:
        raise DomainError(f"order must lie in (0, 2], got {order}")
    return order


def _caputo_t(t: SymbolicTerm, order: float) -> SymbolicTerm | None:
    exp, mle = t.exp_atom, t.mle_atom
    if exp is None and mle is None:
        return None
    if isinstance(exp, ExpConformable):
        raise UnsupportedAtom(f"Caputo rule requested on conformable atom {exp.render()}")
    if exp is not None and mle is not None:
        raise BasisOverflow(
            f"Caputo time derivative of {exp.render()}*{mle.render()} leaves the term basis"
        )
    if exp is not None:
        # D^a e^{kt} = k E(t, 1-a, k)
        return SymbolicTerm(t.coeff * exp.k, t.x_exp, None, MLE(1.0 - order, exp.k))
    # D^a E(t, h, c) = E(t, h-a, c)
    return SymbolicTerm(t.coeff, t.x_exp, None, MLE(mle.h - order, mle.c))


def _conformable_t(t: SymbolicTerm, order: float) -> SymbolicTerm | None:
    exp, mle = t.exp_atom, t.mle_atom
    if exp is None and mle is None:
        return None
    if mle is not None or isinstance(exp, ExpClassical):
        atom = mle if mle is not None else exp
        raise UnsupportedAtom(f"conformable rule requested on Caputo atom {atom.render()}")
    ratio = order / exp.delta
    if _close(ratio, 1.0):
        return t.with_coeff(t.coeff * exp.k)
    if _close(ratio, 2.0):
        return t.with_coeff(t.coeff * exp.k * exp.k)
    raise UnsupportedAtom(
        f"conformable time derivative of order {order} on {exp.render()} needs order delta or 2*delta"
    )


def deriv_t(a: TermSum, order: float, sense: Sense) -> TermSum:
    """Fractional time derivative, termwise.

    Caputo: ``e^{kt} -> k E(t,1-a,k)`` and ``E(t,h,c) -> E(t,h-a,c)`` (the
    formal shift rule, used as written for orders above 1 too).
    Conformable: ``e^{k t^d/d}`` picks up ``k`` for order d, ``k**2`` for 2d.
    """
    order = _check_order(order)
    rule = _caputo_t if Sense(sense) is Sense.CAPUTO else _conformable_t
    out = []
    for t in _as_sum(a).terms:
        d = rule(t, order)
        if d is not None:
            out.append(d)
    return TermSum(tuple(out))


def _caputo_x(p: float, order: float) -> tuple[float, float] | None:
    if p < -MERGE_TOL:
        raise DomainError(f"Caputo x-derivative needs x exponents >= 0, got {p}")
    nearest = round(p)
    if _close(p, nearest) and nearest < math.ceil(order - MERGE_TOL):
        return None  # polynomial part annihilated
    if order <= 1.0:
        return caputo_power(p, order)
    return gamma(p + 1.0) / gamma(p + 1.0 - order), p - order


def _conformable_x(p: float, order: float) -> tuple[float, float] | None:
    steps = 1 if order <= 1.0 else 2
    single = order / steps
    coeff = 1.0
    for _ in range(steps):
        if _close(p, 0.0):
            return None
        coeff *= p
        p -= single
    return coeff, p


def deriv_x(a: TermSum, order: float, sense: Sense) -> TermSum:
    """Fractional x derivative via the power rules.

    Conformable orders above 1 are read as two applications of half the order.
    """
    order = _check_order(order)
    rule = _caputo_x if Sense(sense) is Sense.CAPUTO else _conformable_x
    out = []
    for t in _as_sum(a).terms:
        r = rule(t.x_exp, order)
        if r is not None:
            coeff, exp = r
            out.append(replace(t, coeff=t.coeff * coeff, x_exp=exp))
    return TermSum(tuple(out))


def integrate_x(a: TermSum, order: float, sense: Sense) -> TermSum:
    """Fractional x integral of the given (composed) order.

    Caputo sense uses Riemann-Liouville integration; conformable sense
    applies ``I_g x**q = x**(q+g)/(q+g)`` twice with ``g = order/2``.
    """
    order = float(order)
    if order <= 0.0:
        raise DomainError(f"order must be positive, got {order}")
    caputo = Sense(sense) is Sense.CAPUTO
    out = []
    for t in _as_sum(a).terms:
        q = t.x_exp
        if q < -MERGE_TOL:
            raise DomainError(f"x integration needs exponents >= 0, got {q}")
        q = max(q, 0.0)
        if caputo:
            coeff, q_new = rl_integral_power(q, order)
        else:
            g = 0.5 * order
            coeff = 1.0 / ((q + g) * (q + 2.0 * g))
            q_new = q + 2.0 * g
        out.append(replace(t, coeff=t.coeff * coeff, x_exp=q_new))
    return TermSum(tuple(out))


def evaluate_points(a: TermSum, xs, ts) -> np.ndarray:
    """Evaluate the sum at the nodes ``(xs[j], ts[j])``.

    Each node's value depends on that node alone, so reordering the node
    list permutes the output exactly.
    """
    xs = np.asarray(xs, dtype=float)
    ts = np.asarray(ts, dtype=float)
    if xs.shape != ts.shape:
        raise DomainError("xs and ts must have the same shape")
    if np.any(xs <= 0.0) or np.any(ts <= 0.0):
        raise DomainError("evaluation needs x > 0 and t > 0")
    total = np.zeros(xs.shape, dtype=complex)
    if xs.size == 0:
        return total
    t_unique, t_index = np.unique(ts, return_inverse=True)
    t_index = t_index.reshape(ts.shape)
    cache: dict = {}
    for t in _as_sum(a).terms:
        value = t.coeff * xs**t.x_exp
        for atom in (t.exp_atom, t.mle_atom):
            if atom is None:
                continue
            if atom not in cache:
                cache[atom] = atom.values(t_unique)
            value = value * cache[atom][t_index]
        total = total + value
    if not np.all(np.isfinite(total)):
        raise DomainError("evaluation produced non-finite values")
    return total


def evaluate(a: TermSum, x: float, t: float) -> complex:
    return complex(evaluate_points(a, [x], [t])[0])


def _integer_le_zero(h: float) -> int | None:
    n = round(h)
    if n <= 0 and _close(h, n):
        return -n
    return None


def _collapse_term(t: SymbolicTerm) -> SymbolicTerm:
    coeff, exp, mle = t.coeff, t.exp_atom, t.mle_atom
    if isinstance(exp, ExpConformable) and _close(exp.delta, 1.0):
        exp = ExpClassical(exp.k)
    if mle is not None:
        n = _integer_le_zero(mle.h)
        if n is not None and (exp is None or isinstance(exp, ExpClassical)):
            # E(t, -n, c) = c^n e^{ct}
            coeff = coeff * mle.c**n
            exp = ExpClassical(mle.c if exp is None else exp.k + mle.c)
            mle = None
    return SymbolicTerm(coeff, t.x_exp, exp, mle)


def collapse(a: TermSum) -> TermSum:
    """Rewrite value-identical atoms into plain exponentials.

    ``E(t, -n, c)`` for integer n >= 0 becomes ``c**n e^{ct}`` and a
    conformable exponential with delta = 1 becomes a classical one. The
    result has the same values everywhere but is meant for display and
    comparison only: fractional derivatives of the collapsed and uncollapsed
    forms differ, so the solver never feeds collapsed sums back in.
    """
    return TermSum(tuple(_collapse_term(t) for t in _as_sum(a).terms))
