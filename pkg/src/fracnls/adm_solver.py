"""Adomian decomposition for the fractional modified NLS equation.

The equation is written as

    w3 D_x^{2g} Psi + w2 D_t^{2d} Psi + i D_x^g Psi + i w1 D_t^d Psi + |Psi|^2 Psi = 0

and solved by the recursion ``Psi_{i+1} = -I_x^{2g}[R[Psi_i] + phi_i]`` where
``R = (w2/w3) D_t^{2d} + (i/w3) D_x^g + (i w1/w3) D_t^d`` and ``phi_i`` are the
Adomian polynomials of the cubic term. Both senses share the recursion; only
the operator rules and the starting term differ.

Besides the mechanized recursion the module carries the two printed series
as fixtures (:func:`paper_series`) and a term-level comparator.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import BasisOverflow, DomainError
from .fractional_operators import Sense
from .special_functions import gamma as gamma_fn
from .term_algebra import (
    MLE,
    ExpClassical,
    ExpConformable,
    SymbolicTerm,
    TermSum,
    collapse,
    conjugate,
    deriv_t,
    deriv_x,
    evaluate_points,
    integrate_x,
    multiply,
    term,
    term_key,
)

__all__ = [
    "Experiment",
    "Provenance",
    "ProblemSpec",
    "SeriesSolution",
    "TermDiff",
    "OrderReport",
    "ComparisonReport",
    "experiment_spec",
    "initial_term",
    "adomian_polynomial",
    "remainder_R",
    "step",
    "solve",
    "paper_series",
    "compare",
    "classical_residual",
]

MATCH_TOL = 1e-10
COMPARE_GRID = (0.2, 0.4, 0.6, 0.8, 1.0)


class Experiment(enum.IntEnum):
    CAPUTO_EXP1 = 1
    CONFORMABLE_EXP2 = 2

    @property
    def sense(self) -> Sense:
        return Sense.CAPUTO if self is Experiment.CAPUTO_EXP1 else Sense.CONFORMABLE


class Provenance(str, enum.Enum):
    MECHANIZED = "mechanized"
    TRANSCRIBED = "transcribed"


def _check_unit_order(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 < value <= 1.0:
        raise DomainError(f"{name} must lie in (0, 1], got {value}")
    return value


@dataclass(frozen=True)
class ProblemSpec:
    """Equation coefficients, orders, boundary data and requested depth.

    ``b0`` and ``b1`` are the data at x = 0 (value and first x-derivative in
    the Caputo case, ``m0``/``m1`` in the conformable case).
    """

    gamma: float
    delta: float
    sense: Sense
    b0: TermSum
    b1: TermSum = field(default_factory=TermSum)
    depth: int = 2
    omega1: float = 1.0
    omega2: float = 1.0
    omega3: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "gamma", _check_unit_order("gamma", self.gamma))
        object.__setattr__(self, "delta", _check_unit_order("delta", self.delta))
        object.__setattr__(self, "sense", Sense(self.sense))
        if self.omega3 == 0.0:
            raise DomainError("omega3 must be nonzero")
        if int(self.depth) != self.depth or self.depth < 0:
            raise DomainError(f"depth must be a nonnegative integer, got {self.depth}")
        for name in ("b0", "b1"):
            if getattr(self, name).depends_on_x:
                raise DomainError(f"{name} must not depend on x")


def experiment_spec(experiment: Experiment, gamma: float, delta: float, depth: int = 2) -> ProblemSpec:
    """Boundary data of the two worked experiments (all omegas equal to 1)."""
    experiment = Experiment(experiment)
    if experiment is Experiment.CAPUTO_EXP1:
        b0 = TermSum.of(term(1.0, 0.0, ExpClassical(1j)))
    else:
        b0 = TermSum.of(term(1.0, 0.0, ExpConformable(1j, float(delta))))
    return ProblemSpec(gamma, delta, experiment.sense, b0, TermSum(), depth)


@dataclass(frozen=True)
class SeriesSolution:
    spec: ProblemSpec
    psi: tuple[TermSum, ...]
    provenance: Provenance = Provenance.MECHANIZED

    def __post_init__(self):
        if not self.psi:
            raise DomainError("a series needs at least Psi_0")
        object.__setattr__(self, "psi", tuple(self.psi))

    @property
    def depth(self) -> int:
        return len(self.psi) - 1

    def partial_sum(self, n: int | None = None) -> TermSum:
        n = self.depth if n is None else n
        total = TermSum()
        for p in self.psi[: n + 1]:
            total = total + p
        return total

    def collapsed(self) -> "SeriesSolution":
        return SeriesSolution(self.spec, tuple(collapse(p) for p in self.psi), self.provenance)

    def evaluate_points(self, xs, ts, n: int | None = None) -> np.ndarray:
        return evaluate_points(self.partial_sum(n), xs, ts)

    def to_text(self) -> str:
        s = self.spec
        lines = [
            f"# provenance: {self.provenance.value}",
            f"# sense: {s.sense.value}",
            f"# gamma: {s.gamma:.12g}",
            f"# delta: {s.delta:.12g}",
            f"# omega: {s.omega1:.12g} {s.omega2:.12g} {s.omega3:.12g}",
        ]
        for i, p in enumerate(self.psi):
            lines.append(f"psi[{i}]: {len(p)} terms")
            lines.extend(f"  {r}" for r in p.render())
        return "\n".join(lines) + "\n"


def initial_term(spec: ProblemSpec) -> TermSum:
    if spec.sense is Sense.CAPUTO:
        x_factor = TermSum.of(term(1.0, 1.0))
    else:
        x_factor = TermSum.of(term(1.0 / spec.gamma, spec.gamma))
    return spec.b0 + multiply(x_factor, spec.b1)


def adomian_polynomial(i: int, psi, omega3: float = 1.0) -> TermSum:
    """phi_i of the cubic term Psi^2 conj(Psi), divided by omega3.

    Uses the closed form ``sum_{j+k+l=i} Psi_j Psi_k conj(Psi_l)``, which
    gives the familiar phi_0 = Psi_0^2 Psi_0*, phi_1 = 2 Psi_0 Psi_1 Psi_0* +
    Psi_0^2 Psi_1* and so on.
    """
    if i < 0:
        raise DomainError(f"index must be nonnegative, got {i}")
    if len(psi) < i + 1:
        raise DomainError(f"phi_{i} needs Psi_0..Psi_{i}")
    p = list(psi)
    c = [conjugate(q) for q in p[: i + 1]]
    out = TermSum()
    for j in range(i + 1):
        for k in range(i + 1 - j):
            out = out + multiply(multiply(p[j], p[k]), c[i - j - k])
    return out.scale(1.0 / omega3)


def remainder_R(psi_i: TermSum, spec: ProblemSpec) -> TermSum:
    w1, w2, w3 = spec.omega1, spec.omega2, spec.omega3
    return (
        deriv_t(psi_i, 2.0 * spec.delta, spec.sense).scale(w2 / w3)
        + deriv_x(psi_i, spec.gamma, spec.sense).scale(1j / w3)
        + deriv_t(psi_i, spec.delta, spec.sense).scale(1j * w1 / w3)
    )


def step(psi_i: TermSum, phi_i: TermSum, spec: ProblemSpec) -> TermSum:
    return -integrate_x(remainder_R(psi_i, spec) + phi_i, 2.0 * spec.gamma, spec.sense)


def solve(spec: ProblemSpec) -> SeriesSolution:
    """Run the recursion up to ``spec.depth``.

    Raises :class:`BasisOverflow` with ``order`` set to the index of the
    component that could not be represented.
    """
    psi = [initial_term(spec)]
    for i in range(spec.depth):
        try:
            phi = adomian_polynomial(i, psi, spec.omega3)
            psi.append(step(psi[i], phi, spec))
        except BasisOverflow as exc:
            raise BasisOverflow(f"Psi_{i + 1}: {exc}", order=i + 1) from exc
    return SeriesSolution(spec, tuple(psi), Provenance.MECHANIZED)


# --- printed series ---------------------------------------------------------


def _exp1_series(g: float, d: float) -> list[TermSum]:
    eit = ExpClassical(1j)
    e2it = ExpClassical(2j)

    def E(h, exp=None, coeff=1.0, x_exp=0.0):
        return term(coeff, x_exp, exp, MLE(h, 1j))

    psi0 = TermSum.of(term(1.0, 0.0, eit))
    a1 = 1.0 / gamma_fn(2 * g + 1)
    q1 = 2 * g
    psi1 = TermSum.of(
        E(1 - 2 * d, coeff=1j, x_exp=q1),
        E(1 - d, coeff=-1.0, x_exp=q1),
        term(1.0, q1, eit),
    ).scale(-a1)

    a3, q3 = 1.0 / gamma_fn(3 * g + 1), 3 * g
    group3 = TermSum.of(
        E(1 - 2 * d, x_exp=q3),
        E(1 - d, coeff=-1j, x_exp=q3),
        term(1j, q3, eit),
    ).scale(a3)
    a4, q4 = 1.0 / gamma_fn(4 * g + 1), 4 * g
    # the braced group exactly as printed, before any merging
    group4 = TermSum.of(
        E(1 - 4 * d, coeff=1j, x_exp=q4),
        E(1 - 3 * d, coeff=-1.0, x_exp=q4),
        E(1 - 2 * d, coeff=1j, x_exp=q4),
        E(1 - 3 * d, coeff=-1.0, x_exp=q4),
        E(1 - 2 * d, coeff=-1j, x_exp=q4),
        E(1 - d, coeff=-1.0, x_exp=q4),
        E(1 - 2 * d, coeff=-2j, x_exp=q4),
        E(1 - d, coeff=-1.0, x_exp=q4),
        term(1.0, q4, eit),
        E(1 - 2 * d, e2it, coeff=-1j, x_exp=q4),
        E(1 - d, e2it, coeff=-1.0, x_exp=q4),
        term(1.0, q4, eit),
    ).scale(a4)
    return [psi0, psi1, group3 + group4]


def _exp2_series(g: float, d: float) -> list[TermSum]:
    e = ExpConformable(1j, d)
    em = ExpConformable(-1j, d)
    psi0 = TermSum.of(term(1.0, 0.0, e))
    c1 = 1.0 / (g ** (2 * g - 1) * gamma_fn(2 * g))
    psi1 = TermSum.of(term(-1.0, 2 * g - 1, e)).scale(-c1)
    c2 = 1.0 / (g ** (4 * g - 2) * gamma_fn(4 * g))
    psi2 = TermSum.of(
        term(-1j * (2 * g - 1) * c2, 3 * g - 2, e),
        term(c2, 4 * g - 2, e),
        term(2 * c2, 4 * g - 2, em),
    )
    return [psi0, psi1, psi2]


def paper_series(experiment: Experiment, gamma: float, delta: float) -> SeriesSolution:
    """The printed Psi_0..Psi_2 of the two worked experiments, term for term.

    Nothing is corrected: signs, conjugate atoms and the x exponents of the
    conformable series are taken as printed.
    """
    experiment = Experiment(experiment)
    spec = experiment_spec(experiment, gamma, delta, depth=2)
    if experiment is Experiment.CAPUTO_EXP1:
        psi = _exp1_series(spec.gamma, spec.delta)
    else:
        psi = _exp2_series(spec.gamma, spec.delta)
    return SeriesSolution(spec, tuple(psi), Provenance.TRANSCRIBED)


# --- comparison -------------------------------------------------------------


@dataclass(frozen=True)
class TermDiff:
    key: str
    mechanized: complex
    transcribed: complex

    @property
    def delta(self) -> float:
        return abs(self.mechanized - self.transcribed)

    def to_dict(self) -> dict:
        return {
            "key": self.key,
            "mechanized": [self.mechanized.real, self.mechanized.imag],
            "transcribed": [self.transcribed.real, self.transcribed.imag],
            "delta": self.delta,
        }


@dataclass(frozen=True)
class OrderReport:
    order: int
    matched: tuple[TermDiff, ...]
    mismatched: tuple[TermDiff, ...]
    missing_in_mechanized: tuple[TermDiff, ...]
    missing_in_transcribed: tuple[TermDiff, ...]
    max_coeff_delta: float
    max_pointwise: float
    argmax: tuple[float, float]

    @property
    def is_clean(self) -> bool:
        return not (self.mismatched or self.missing_in_mechanized or self.missing_in_transcribed)

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "clean": self.is_clean,
            "max_coeff_delta": self.max_coeff_delta,
            "max_pointwise": self.max_pointwise,
            "argmax": list(self.argmax),
            "matched": [d.to_dict() for d in self.matched],
            "mismatched": [d.to_dict() for d in self.mismatched],
            "missing_in_mechanized": [d.to_dict() for d in self.missing_in_mechanized],
            "missing_in_transcribed": [d.to_dict() for d in self.missing_in_transcribed],
        }


@dataclass(frozen=True)
class ComparisonReport:
    orders: tuple[OrderReport, ...]
    notes: tuple[str, ...] = ()

    @property
    def max_discrepancy(self) -> float:
        return max((o.max_coeff_delta for o in self.orders), default=0.0)

    @property
    def is_empty(self) -> bool:
        return all(o.is_clean for o in self.orders)

    def order(self, i: int) -> OrderReport:
        return self.orders[i]

    def to_dict(self) -> dict:
        return {
            "empty": self.is_empty,
            "max_discrepancy": self.max_discrepancy,
            "orders": [o.to_dict() for o in self.orders],
            "notes": list(self.notes),
        }


def _pair_terms(a: TermSum, b: TermSum):
    remaining = list(b.terms)
    for s in a.terms:
        for j, t in enumerate(remaining):
            if s.same_key(t):
                yield s, remaining.pop(j)
                break
        else:
            yield s, None
    for t in remaining:
        yield None, t


def _compare_order(i: int, mech: TermSum, trans: TermSum) -> OrderReport:
    matched, mismatched, miss_mech, miss_trans = [], [], [], []
    worst = 0.0
    for s, t in _pair_terms(mech, trans):
        ref: SymbolicTerm = s if s is not None else t
        diff = TermDiff(
            term_key(ref),
            s.coeff if s is not None else 0j,
            t.coeff if t is not None else 0j,
        )
        worst = max(worst, diff.delta)
        if diff.delta <= MATCH_TOL:
            matched.append(diff)
        elif s is None:
            miss_mech.append(diff)
        elif t is None:
            miss_trans.append(diff)
        else:
            mismatched.append(diff)
    xs, ts = (a.ravel() for a in np.meshgrid(COMPARE_GRID, COMPARE_GRID, indexing="ij"))
    gap = np.abs(evaluate_points(mech, xs, ts) - evaluate_points(trans, xs, ts))
    # near-ties (within rounding) resolve to the last node, i.e. toward (1, 1)
    top = gap.max()
    j = int(np.flatnonzero(gap >= top - 1e-12 * max(1.0, top))[-1])
    return OrderReport(
        i,
        tuple(matched),
        tuple(mismatched),
        tuple(miss_mech),
        tuple(miss_trans),
        worst,
        float(gap[j]),
        (float(xs[j]), float(ts[j])),
    )


_CONVENTION_NOTE = (
    "Caputo D_t^{2d} e^{it} is taken as i*E(t,1-2d,i) (single factor i). "
    "A two-derivative Caputo convention for 2d > 1 would give "
    "i^2*t^(2-2d)*E_{1,3-2d}(it) instead; that alternative is not mechanized."
)


def compare(mechanized: SeriesSolution, transcribed: SeriesSolution) -> ComparisonReport:
    """Termwise and pointwise comparison of two series, order by order.

    Both sides are collapsed first so value-identical atoms share a key.
    """
    a, b = mechanized.spec, transcribed.spec
    if a.sense is not b.sense or abs(a.gamma - b.gamma) > 1e-12 or abs(a.delta - b.delta) > 1e-12:
        raise DomainError("compare needs series with the same sense, gamma and delta")
    n = min(len(mechanized.psi), len(transcribed.psi))
    orders = tuple(
        _compare_order(i, collapse(mechanized.psi[i]), collapse(transcribed.psi[i]))
        for i in range(n)
    )
    notes = (_CONVENTION_NOTE,) if a.sense is Sense.CAPUTO else ()
    return ComparisonReport(orders, notes)


def classical_residual(psi, xs, ts, step: float = 1e-4) -> np.ndarray:
    """Residual of  Psi_xx + Psi_tt + i Psi_x + i Psi_t + |Psi|^2 Psi  (all omegas 1).

    ``psi`` is a TermSum or a vectorised callable ``f(xs, ts)``. Derivatives
    are central differences with the given step, so for series this is only
    meaningful at gamma = delta = 1.
    """
    xs = np.asarray(xs, dtype=float)
    ts = np.asarray(ts, dtype=float)
    fn = psi if callable(psi) else (lambda a, b: evaluate_points(psi, a, b))

    def f(dx, dt):
        return np.asarray(fn(xs + dx, ts + dt), dtype=complex)

    c = f(0.0, 0.0)
    xp, xm = f(step, 0.0), f(-step, 0.0)
    tp, tm = f(0.0, step), f(0.0, -step)
    h2 = step * step
    psi_xx = (xp - 2.0 * c + xm) / h2
    psi_tt = (tp - 2.0 * c + tm) / h2
    psi_x = (xp - xm) / (2.0 * step)
    psi_t = (tp - tm) / (2.0 * step)
    return psi_xx + psi_tt + 1j * (psi_x + psi_t) + np.abs(c) ** 2 * c
