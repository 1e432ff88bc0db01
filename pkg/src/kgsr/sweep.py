"""Parameter sweeps and their CSV form."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .model import CONFIG_KEYS, PhysicalConfig, QuantumNumbers
from .oracle import GridSpec, OracleError, oracle_energy
from .spectrum import RootSearchSpec, quantization_residual, select_branch, solve_energy

__all__ = [
    "HEADER",
    "SWEEPABLE",
    "SweepSpec",
    "SweepRow",
    "SweepTable",
    "run_sweep",
    "apply_point",
    "level_rows",
    "format_number",
    "read_table",
    "verify_rows",
]

HEADER = (
    "swept_param", "swept_value", "family_param", "family_value",
    "n", "l", "k", "E", "residual", "oracle_E", "oracle_gap",
)
SWEEPABLE = ("alpha", "omega", "Omega", "lambda", "xi1", "xi2", "B0", "PhiB")
QUANTUM_KEYS = ("n", "l", "k")


def format_number(value) -> str:
    """Shortest round-trip text; empty for None."""
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return repr(float(value))


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    start: float
    stop: float
    steps: int
    family: str = ""
    family_values: tuple = (None,)

    def __post_init__(self):
        if self.parameter not in SWEEPABLE:
            raise ValueError(f"cannot sweep {self.parameter!r}; choose from {', '.join(SWEEPABLE)}")
        if not self.start < self.stop:
            raise ValueError(f"need start < stop, got {self.start} >= {self.stop}")
        if self.steps < 2:
            raise ValueError(f"steps must be >= 2, got {self.steps}")
        if self.family:
            if self.family == self.parameter:
                raise ValueError("swept parameter and family parameter must differ")
            if self.family not in QUANTUM_KEYS and (
                self.family not in CONFIG_KEYS or self.family == "mode"
            ):
                raise ValueError(f"unknown family parameter {self.family!r}")
            if not self.family_values or None in self.family_values:
                raise ValueError("family needs at least one value")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class SweepRow:
    swept_param: str
    swept_value: Optional[float]
    family_param: str
    family_value: object
    n: int
    l: int
    k: float
    E: Optional[float] = None
    residual: Optional[float] = None
    oracle_E: Optional[float] = None
    oracle_gap: Optional[float] = None

    def cells(self) -> list[str]:
        return [
            self.swept_param, format_number(self.swept_value), self.family_param,
            format_number(self.family_value), format_number(self.n), format_number(self.l),
            format_number(self.k), format_number(self.E), format_number(self.residual),
            format_number(self.oracle_E), format_number(self.oracle_gap),
        ]


@dataclass
class SweepTable:
    rows: list
    header: tuple = HEADER

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow(row.cells())
        return buf.getvalue()


def apply_point(cfg: PhysicalConfig, qn: QuantumNumbers, key: str, value):
    """Set a configuration or quantum-number field by its external name."""
    if key in QUANTUM_KEYS:
        return cfg, replace(qn, **{key: value})
    return cfg.with_values(**{CONFIG_KEYS[key]: value}), qn


def level_rows(cfg: PhysicalConfig, qn: QuantumNumbers, *, spec: Optional[RootSearchSpec] = None,
               include_negative: bool = False, with_oracle: bool = False,
               grid: Optional[GridSpec] = None, swept: tuple = ("", None),
               family: tuple = ("", None)) -> list[SweepRow]:
    """Rows for one parameter point: positive branch, then optionally the negative one."""
    levels = solve_energy(cfg, qn, spec)
    branches = ("positive", "negative") if include_negative else ("positive",)
    rows = []
    for branch in branches:
        level = select_branch(levels, branch)
        oracle_E = gap = None
        if with_oracle and level is not None:
            try:
                oracle_E = oracle_energy(cfg, qn, grid, spec, branch=branch).E
                gap = abs(oracle_E - level.E)
            except OracleError:
                pass
        rows.append(SweepRow(
            swept_param=swept[0], swept_value=swept[1],
            family_param=family[0], family_value=family[1],
            n=qn.n, l=qn.l, k=qn.k,
            E=None if level is None else level.E,
            residual=None if level is None else level.residual,
            oracle_E=oracle_E, oracle_gap=gap,
        ))
    return rows


def _point(args):
    cfg, qn, sweep, fam_value, value, kwargs = args
    cfg, qn = apply_point(cfg, qn, sweep.parameter, float(value))
    if sweep.family:
        cfg, qn = apply_point(cfg, qn, sweep.family, fam_value)
    return level_rows(cfg, qn, swept=(sweep.parameter, float(value)),
                      family=(sweep.family, fam_value), **kwargs)


def run_sweep(cfg: PhysicalConfig, qn: QuantumNumbers, sweep: SweepSpec, with_oracle: bool = False,
              *, spec: Optional[RootSearchSpec] = None, grid: Optional[GridSpec] = None,
              include_negative: bool = False, jobs: int = 1) -> SweepTable:
    """Solve every (family value, swept value) point; rows keep grid order.

    Points without a root keep their row with empty energy cells.
    """
    kwargs = dict(spec=spec, include_negative=include_negative, with_oracle=with_oracle, grid=grid)
    tasks = [
        (cfg, qn, sweep, fam, value, kwargs)
        for fam in sweep.family_values
        for value in sweep.values()
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_point, tasks))
    else:
        chunks = [_point(t) for t in tasks]
    return SweepTable(rows=[row for chunk in chunks for row in chunk])


def _parse_cell(text: str, integer: bool = False):
    if text == "":
        return None
    return int(text) if integer else float(text)


def read_table(text: str) -> list[SweepRow]:
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader))
    if header != HEADER:
        raise ValueError(f"unexpected CSV header {header!r}")
    rows = []
    for cells in reader:
        if not cells:
            continue
        fam_param = cells[2]
        fam_value = _parse_cell(cells[3], integer=fam_param in ("n", "l"))
        rows.append(SweepRow(
            swept_param=cells[0], swept_value=_parse_cell(cells[1]),
            family_param=fam_param, family_value=fam_value,
            n=int(cells[4]), l=int(cells[5]), k=float(cells[6]),
            E=_parse_cell(cells[7]), residual=_parse_cell(cells[8]),
            oracle_E=_parse_cell(cells[9]), oracle_gap=_parse_cell(cells[10]),
        ))
    return rows


def verify_rows(cfg: PhysicalConfig, rows: Sequence[SweepRow], tol: float) -> list[tuple[int, float]]:
    """Re-evaluate the energy condition at every stored root.

    Returns ``(row index, |residual|)`` for rows above ``tol``.
    """
    bad = []
    for i, row in enumerate(rows):
        if row.E is None:
            continue
        point_cfg, qn = cfg, QuantumNumbers(row.n, row.l, row.k)
        if row.swept_param:
            point_cfg, qn = apply_point(point_cfg, qn, row.swept_param, row.swept_value)
        if row.family_param and row.family_param not in QUANTUM_KEYS:
            point_cfg, qn = apply_point(point_cfg, qn, row.family_param, row.family_value)
        res = abs(quantization_residual(point_cfg, qn, row.E))
        if not res <= tol or math.isnan(res):
            bad.append((i, res))
    return bad
