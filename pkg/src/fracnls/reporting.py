"""Grid sampling, the comparison table and CSV/JSON export."""
from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import astuple, dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from .adm_solver import Experiment, SeriesSolution, experiment_spec, paper_series, solve
from .errors import BasisOverflow, DomainError, MissingFixture

__all__ = [
    "GridSpec",
    "SampleRow",
    "Table1Row",
    "PrintedTable1Row",
    "Table1Comparison",
    "TABLE1_EXACT",
    "TABLE1_POINTS",
    "TABLE1_ORDERS",
    "TABLE1_PRINTED",
    "MODES",
    "series_for",
    "evaluate_grid",
    "table1_rows",
    "table1",
    "table1_comparison",
    "printed_error_check",
    "format_csv",
    "format_json",
    "export_csv",
    "export_json",
    "parse_csv",
    "parse_json",
    "rows_finite",
]

MODES = ("paper", "mechanized")


@dataclass(frozen=True)
class GridSpec:
    """Rectangular sampling grid, open at the axes (x, t > 0)."""

    x_min: float = 0.02
    x_max: float = 1.0
    t_min: float = 0.02
    t_max: float = 1.0
    nx: int = 50
    nt: int = 50

    def __post_init__(self):
        if not 0.0 < self.x_min <= self.x_max:
            raise DomainError(f"need 0 < x_min <= x_max, got [{self.x_min}, {self.x_max}]")
        if not 0.0 < self.t_min <= self.t_max:
            raise DomainError(f"need 0 < t_min <= t_max, got [{self.t_min}, {self.t_max}]")
        for name in ("nx", "nt"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise DomainError(f"{name} must be a positive integer, got {value}")

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """Row-major nodes: x is the outer index, t the inner one."""
        x = np.linspace(self.x_min, self.x_max, self.nx)
        t = np.linspace(self.t_min, self.t_max, self.nt)
        xs, ts = np.meshgrid(x, t, indexing="ij")
        return xs.ravel(), ts.ravel()


@dataclass(frozen=True)
class SampleRow:
    x: float
    t: float
    re: float
    im: float
    abs: float


@dataclass(frozen=True)
class Table1Row:
    x: float
    t: float
    gamma: float
    delta: float
    exact: float
    cp: float
    cm: float
    err_cp: float
    err_cm: float


@dataclass(frozen=True)
class PrintedTable1Row:
    x: float
    t: float
    gamma: float
    delta: float
    exact: float
    cp: float
    cm: float
    err_cp: float
    err_cm: float


@dataclass(frozen=True)
class Table1Comparison:
    x: float
    t: float
    gamma: float
    delta: float
    exact: float
    cp: float
    cm: float
    err_cp: float
    err_cm: float
    printed_cp: float
    printed_cm: float
    delta_cp: float
    delta_cm: float


TABLE1_POINTS = (0.1, 0.3, 0.5, 0.7, 0.9)
TABLE1_ORDERS = ((0.25, 0.25), (0.75, 0.75), (1.0, 1.0))
TABLE1_EXACT = {0.1: 0.108060, 0.3: 0.324180, 0.5: 0.540300, 0.7: 0.756420, 0.9: 0.972540}

# point-major, then order pairs: (cp, cm, err_cp, err_cm) as printed
_PRINTED = (
    (0.034850, 0.627680, 0.073309, 0.519620),
    (0.052744, 0.972022, 0.055315, 0.863962),
    (0.060835, 0.058760, 0.047224, 0.049299),
    (0.061912, 0.983617, 0.262268, 0.659436),
    (0.142055, 0.857462, 0.182126, 0.533281),
    (0.223340, 0.199797, 0.100841, 0.124384),
    (0.054601, 0.975461, 0.485698, 0.435161),
    (0.198301, 0.701852, 0.341999, 0.161552),
    (0.440288, 0.361382, 0.100012, 0.178918),
    (0.021153, 0.869221, 0.735269, 0.112798),
    (0.211584, 0.523044, 0.544839, 0.233379),
    (0.711680, 0.530550, 0.044743, 0.225873),
    (0.034267, 0.728667, 0.938276, 0.243877),
    (0.173940, 0.332328, 0.798597, 0.640216),
    (1.037520, 0.694332, 0.064976, 0.278212),
)

TABLE1_PRINTED = tuple(
    PrintedTable1Row(p, p, g, d, TABLE1_EXACT[p], *_PRINTED[3 * i + j])
    for i, p in enumerate(TABLE1_POINTS)
    for j, (g, d) in enumerate(TABLE1_ORDERS)
)


def series_for(experiment, gamma: float, delta: float, depth: int, mode: str = "paper") -> SeriesSolution:
    """The mechanized or printed series of an experiment, truncated to ``depth``."""
    if mode not in MODES:
        raise DomainError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == "mechanized":
        return solve(experiment_spec(experiment, gamma, delta, depth))
    series = paper_series(experiment, gamma, delta)
    if depth > series.depth:
        raise BasisOverflow(
            f"the printed series stops at Psi_{series.depth}, depth {depth} requested",
            order=series.depth + 1,
        )
    return SeriesSolution(series.spec, series.psi[: depth + 1], series.provenance)


def evaluate_grid(series: SeriesSolution, grid: GridSpec) -> list[SampleRow]:
    xs, ts = grid.nodes()
    try:
        values = series.evaluate_points(xs, ts)
    except DomainError:
        for x, t in zip(xs, ts):
            try:
                series.evaluate_points([x], [t])
            except DomainError as exc:
                raise DomainError(f"evaluation failed at (x, t) = ({x:.9g}, {t:.9g}): {exc}") from exc
        raise
    return [
        SampleRow(float(x), float(t), float(v.real), float(v.imag), float(abs(v)))
        for x, t, v in zip(xs, ts, values)
    ]


def _exact(x: float, exact: dict) -> float:
    for key, value in exact.items():
        if abs(key - x) <= 1e-12:
            return value
    raise MissingFixture(f"no exact value for (x, t) = ({x}, {x})")


def table1_rows(cp: SeriesSolution, cm: SeriesSolution, exact: dict | None = None) -> list[Table1Row]:
    """Rows for one (gamma, delta) pair at the five diagonal points."""
    exact = TABLE1_EXACT if exact is None else exact
    if abs(cp.spec.gamma - cm.spec.gamma) > 1e-12 or abs(cp.spec.delta - cm.spec.delta) > 1e-12:
        raise DomainError("cp and cm series must share gamma and delta")
    pts = np.asarray(TABLE1_POINTS)
    ex = [_exact(p, exact) for p in TABLE1_POINTS]
    cp_vals = np.abs(cp.evaluate_points(pts, pts))
    cm_vals = np.abs(cm.evaluate_points(pts, pts))
    return [
        Table1Row(p, p, cp.spec.gamma, cp.spec.delta, e, a, b, abs(e - a), abs(e - b))
        for p, e, a, b in zip(TABLE1_POINTS, ex, cp_vals.tolist(), cm_vals.tolist())
    ]


def table1(depth: int = 2, mode: str = "paper", exact: dict | None = None) -> list[Table1Row]:
    """All 15 rows, ordered like the printed table (point-major)."""
    if depth < 0 or int(depth) != depth:
        raise DomainError(f"depth must be a nonnegative integer, got {depth}")
    per_order = []
    for g, d in TABLE1_ORDERS:
        cp = series_for(Experiment.CAPUTO_EXP1, g, d, depth, mode)
        cm = series_for(Experiment.CONFORMABLE_EXP2, g, d, depth, mode)
        per_order.append(table1_rows(cp, cm, exact))
    return [per_order[j][i] for i in range(len(TABLE1_POINTS)) for j in range(len(TABLE1_ORDERS))]


def table1_comparison(depth: int = 2, mode: str = "paper") -> list[Table1Comparison]:
    """Recomputed rows next to the printed approximations, with deltas."""
    out = []
    for row, printed in zip(table1(depth, mode), TABLE1_PRINTED):
        out.append(
            Table1Comparison(
                *astuple(row),
                printed.cp,
                printed.cm,
                abs(row.cp - printed.cp),
                abs(row.cm - printed.cm),
            )
        )
    return out


@dataclass(frozen=True)
class ErrorCellCheck:
    row: PrintedTable1Row
    column: str
    recomputed: float
    printed: float

    @property
    def delta(self) -> float:
        return abs(self.recomputed - self.printed)


def printed_error_check() -> list[ErrorCellCheck]:
    """Recompute the 30 printed error cells from the printed Exact/CpDLTr/CmDLTr."""
    checks = []
    for r in TABLE1_PRINTED:
        checks.append(ErrorCellCheck(r, "err_cp", abs(r.exact - r.cp), r.err_cp))
        checks.append(ErrorCellCheck(r, "err_cm", abs(r.exact - r.cm), r.err_cm))
    return checks


# --- export -----------------------------------------------------------------


def _fmt(value: float) -> str:
    if value == 0.0:
        value = 0.0
    return "%#.9g" % value


def _field_names(rows: Sequence, kind) -> list[str]:
    cls = type(rows[0]) if rows else (kind or SampleRow)
    return [f.name for f in fields(cls)]


def format_csv(rows: Sequence, kind=None) -> str:
    """CSV text; ``kind`` picks the header when ``rows`` is empty."""
    names = _field_names(rows, kind)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(names)
    for row in rows:
        writer.writerow(_fmt(v) for v in astuple(row))
    return buf.getvalue()


def format_json(rows: Sequence, kind=None) -> str:
    names = _field_names(rows, kind)
    records = [dict(zip(names, (float(v) for v in astuple(row)))) for row in rows]
    return json.dumps(records, indent=2) + "\n"


def _write(text: str, destination) -> None:
    if destination is None or destination == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    if hasattr(destination, "write"):
        destination.write(text)
        return
    try:
        with open(destination, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {destination}: {exc.strerror}") from exc


def export_csv(rows: Sequence, destination="-", kind=None) -> None:
    _write(format_csv(rows, kind), destination)


def export_json(rows: Sequence, destination="-", kind=None) -> None:
    _write(format_json(rows, kind), destination)


def parse_csv(text: str) -> list[dict]:
    reader = csv.DictReader(io.StringIO(text))
    return [{k: float(v) for k, v in rec.items()} for rec in reader]


def parse_json(text: str) -> list[dict]:
    return [{k: float(v) for k, v in rec.items()} for rec in json.loads(text)]


def rows_finite(rows: Iterable[SampleRow]) -> bool:
    return all(math.isfinite(v) for r in rows for v in astuple(r))
