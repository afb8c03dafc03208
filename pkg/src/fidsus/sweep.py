"""Parameter sweeps: evaluate the full bound report along a 1-D grid.

A sweep pins one model kind, varies a single declared parameter over a
linear or logarithmic grid, and emits one CSV row per point with chi_F,
its decomposition, every bound, and the consistency flags.  Rows are
computed before anything is written, so a failure at any grid point
leaves no partial output file behind.

Sweeps over ``beta`` take a fast path: the Hamiltonian and perturbation
do not depend on beta for any registered kind, so the model is built
(and eigendecomposed) once and only the Gibbs weights are recomputed per
point.  The result is bit-identical to rebuilding from scratch because
the eigensolver is deterministic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence

import numpy as np

from .bounds import BoundReport, bound_report
from .config import DEFAULT_TOLS, Tolerances
from .errors import ModelSchemaError
from .gibbs import family_at_beta
from .models import MODEL_KINDS, ModelSpec, build_model

__all__ = [
    "CSV_HEADER",
    "SweepRow",
    "SweepSpec",
    "format_csv",
    "run_sweep",
    "sweep_grid",
]

CSV_HEADER = (
    "param,beta,chi_f,chi_f_classical,chi_f_quantum,ub,lb_paper,lb_aasc,"
    "chi_fg,ds2,bd,dcomm,chi_n,sandwich_ok,degenerate_pairs"
)


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: a model kind, the parameter to vary, and the grid.

    ``start`` and ``stop`` delimit the grid (start < stop); ``scale``
    selects linear or logarithmic spacing (log requires start > 0).  The
    swept name must be a declared real parameter of the model kind, so
    integer cutoffs cannot be swept.
    """

    model: ModelSpec
    sweep_param: str
    start: float
    stop: float
    steps: int
    scale: str = "linear"
    csv_path: Optional[str] = None
    svg_path: Optional[str] = None

    def __post_init__(self) -> None:
        if self.sweep_param not in MODEL_KINDS[self.model.kind]["parameters"]:
            raise ModelSchemaError(
                f"model kind {self.model.kind!r} has no sweepable parameter "
                f"{self.sweep_param!r}"
            )
        if not (np.isfinite(self.start) and np.isfinite(self.stop)):
            raise ValueError("sweep endpoints must be finite")
        if not self.start < self.stop:
            raise ValueError(
                f"sweep needs start < stop, got [{self.start}, {self.stop}]"
            )
        if self.steps < 2:
            raise ValueError(f"sweep needs at least 2 steps, got {self.steps}")
        if self.scale not in ("linear", "log"):
            raise ValueError(f"unknown sweep scale {self.scale!r}")
        if self.scale == "log" and self.start <= 0.0:
            raise ValueError("log-scale sweep requires start > 0")
        if self.svg_path is not None and self.csv_path is None:
            raise ValueError("an SVG output requires a CSV output path")


@dataclass(frozen=True)
class SweepRow:
    """One CSV row: the swept value plus the flattened bound report."""

    param: float
    beta: float
    chi_f: float
    chi_f_classical: float
    chi_f_quantum: float
    ub: float
    lb_paper: float
    lb_aasc: float
    chi_fg: float
    ds2: float
    bd: float
    dcomm: float
    chi_n: float
    sandwich_ok: bool
    degenerate_pairs: int


def sweep_grid(spec: SweepSpec) -> np.ndarray:
    """The grid of swept values, ascending, endpoints included."""
    if spec.scale == "log":
        return np.geomspace(spec.start, spec.stop, spec.steps)
    return np.linspace(spec.start, spec.stop, spec.steps)


def _row_from_report(value: float, rep: BoundReport) -> SweepRow:
    return SweepRow(
        param=float(value),
        beta=rep.beta,
        chi_f=rep.chi_f,
        chi_f_classical=rep.chi_f_classical,
        chi_f_quantum=rep.chi_f_quantum,
        ub=rep.upper,
        lb_paper=rep.lower_paper,
        lb_aasc=rep.lower_aasc,
        chi_fg=rep.lower_aasc,
        ds2=rep.ds2,
        bd=rep.bd_product,
        dcomm=rep.dcomm,
        chi_n=rep.chi_n,
        sandwich_ok=rep.sandwich_ok,
        degenerate_pairs=rep.degenerate_pair_count,
    )


def _model_at(spec: SweepSpec, value: float) -> ModelSpec:
    params = dict(spec.model.parameters)
    params[spec.sweep_param] = float(value)
    return replace(spec.model, parameters=params)


def compute_rows(
    spec: SweepSpec,
    tols: Tolerances = DEFAULT_TOLS,
    *,
    check_chi_n: bool = True,
) -> List[SweepRow]:
    """Evaluate every grid point; nothing touches the filesystem here."""
    grid = sweep_grid(spec)
    rows: List[SweepRow] = []
    if spec.sweep_param == "beta":
        base = build_model(_model_at(spec, grid[0]), tols)
        rep = bound_report(base, tols, check_chi_n=check_chi_n)
        rows.append(_row_from_report(grid[0], rep))
        for value in grid[1:]:
            fam = family_at_beta(base, float(value))
            rep = bound_report(fam, tols, check_chi_n=check_chi_n)
            rows.append(_row_from_report(value, rep))
        return rows
    for value in grid:
        fam = build_model(_model_at(spec, value), tols)
        rep = bound_report(fam, tols, check_chi_n=check_chi_n)
        rows.append(_row_from_report(value, rep))
    return rows


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def format_csv(rows: Sequence[SweepRow]) -> str:
    """Render rows as the fixed-schema CSV text, 17 significant digits."""
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                [
                    _fmt(r.param),
                    _fmt(r.beta),
                    _fmt(r.chi_f),
                    _fmt(r.chi_f_classical),
                    _fmt(r.chi_f_quantum),
                    _fmt(r.ub),
                    _fmt(r.lb_paper),
                    _fmt(r.lb_aasc),
                    _fmt(r.chi_fg),
                    _fmt(r.ds2),
                    _fmt(r.bd),
                    _fmt(r.dcomm),
                    _fmt(r.chi_n),
                    "true" if r.sandwich_ok else "false",
                    str(int(r.degenerate_pairs)),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def run_sweep(
    spec: SweepSpec,
    tols: Tolerances = DEFAULT_TOLS,
    *,
    check_chi_n: bool = True,
) -> List[SweepRow]:
    """Compute the sweep and write the CSV (and optional SVG) outputs.

    All points are evaluated before the first byte is written, so an
    error at any grid point aborts with no output file.  If a file of
    the target name already exists and the write itself fails partway,
    the partial file is removed before the error propagates.
    """
    rows = compute_rows(spec, tols, check_chi_n=check_chi_n)
    if spec.csv_path is not None:
        text = format_csv(rows)
        try:
            with open(spec.csv_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except BaseException:
            if os.path.exists(spec.csv_path):
                os.remove(spec.csv_path)
            raise
        if spec.svg_path is not None:
            from .plotting import emit_plot

            emit_plot(
                spec.csv_path,
                ["chi_f", "ub", "lb_paper"],
                spec.svg_path,
            )
    return rows
