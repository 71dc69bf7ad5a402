"""Parameter sweeps over placement scenarios and batching-cost curves.

``run_sweep`` evaluates the edge/cloud energy ratio over a dense one- or
two-dimensional grid of scenario parameters.  Grid points whose cycle does
not fit inside the period are kept as explicit error cells instead of being
dropped, so downstream consumers always see the full grid.

``cost_curve`` trades energy against data freshness for a node that
produces a fixed amount of data per hour: batching more data per request
(a larger period) amortises the radio's quiet-time tail energy but delays
the data.  The combined cost ``c = alpha * E/E_max + (1-alpha) * D/D_max``
is normalised by the maxima over the evaluated grid.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from typing import TextIO

from .analytic import (
    ComparisonResult,
    ConnectionlessScenario,
    PeriodOverrunError,
    compare,
    cycle_energy,
    phase_timing,
)
from ._fmt import fmt_axis, fmt_cost, fmt_mj, fmt_ms, fmt_rho
from .power_model import PowerProfile

__all__ = [
    "SWEEP_AXES",
    "SweepAxis",
    "SweepSpec",
    "SweepCell",
    "SweepResult",
    "run_sweep",
    "per_cycle_payload",
    "CostSpec",
    "CostPoint",
    "CostCurve",
    "cost_curve",
]

# Scenario parameters a sweep may vary.  "payload" sets both byte counts.
SWEEP_AXES = ("t_i", "rtt_cloud", "payload", "t_elab")

MS_PER_HOUR = 3_600_000.0


@dataclass(frozen=True)
class SweepAxis:
    """One swept parameter with an inclusive arithmetic grid."""

    name: str
    start: float
    stop: float
    step: float

    def __post_init__(self) -> None:
        if self.name not in SWEEP_AXES:
            raise ValueError(
                f"unknown sweep axis {self.name!r}; expected one of {SWEEP_AXES}"
            )
        if self.step <= 0:
            raise ValueError("axis step must be strictly positive")
        if self.start > self.stop:
            raise ValueError(f"empty grid: axis {self.name} has start > stop")

    def values(self) -> list[float]:
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [self.start + i * self.step for i in range(count)]


@dataclass(frozen=True)
class SweepSpec:
    """A base edge/cloud scenario pair plus one or two axes to vary."""

    base_edge: ConnectionlessScenario
    base_cloud: ConnectionlessScenario
    axes: tuple[SweepAxis, ...]

    def __post_init__(self) -> None:
        if len(self.axes) == 0:
            raise ValueError("empty grid: no sweep axes given")
        if len(self.axes) > 2:
            raise ValueError("at most two sweep axes are supported")
        names = [axis.name for axis in self.axes]
        if len(set(names)) != len(names):
            raise ValueError("sweep axes must be distinct")
        if replace(self.base_edge, rtt=self.base_cloud.rtt) != self.base_cloud:
            raise ValueError("base scenarios must differ only in rtt")


@dataclass(frozen=True)
class SweepCell:
    """One grid point: either a comparison result or an overrun marker."""

    values: tuple[float, ...]
    result: ComparisonResult | None
    error: str | None = None

    @property
    def rho(self) -> float | None:
        return self.result.rho if self.result is not None else None


@dataclass(frozen=True)
class SweepResult:
    """Dense grid of comparison results, row-major in axis order."""

    spec: SweepSpec
    cells: tuple[SweepCell, ...]

    @property
    def columns(self) -> list[str]:
        axis_names = [axis.name for axis in self.spec.axes]
        return axis_names + [
            "rho", "e_i_edge_mj", "e_i_cloud_mj", "delta_rtt_ms", "error",
        ]

    def rows(self) -> list[list[str]]:
        out = []
        for cell in self.cells:
            row = [fmt_axis(v) for v in cell.values]
            if cell.result is None:
                row += ["", "", "", "", cell.error or "error"]
            else:
                r = cell.result
                row += [
                    fmt_rho(r.rho),
                    fmt_mj(r.edge.e_i),
                    fmt_mj(r.cloud.e_i),
                    fmt_ms(r.delta_rtt),
                    "",
                ]
            out.append(row)
        return out

    def to_csv(self, fp: TextIO) -> None:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(self.columns)
        writer.writerows(self.rows())

    def to_json_obj(self) -> dict:
        cells = []
        for cell in self.cells:
            entry: dict = {
                name: _round6(value)
                for name, value in zip(self.columns, cell.values)
            }
            if cell.result is None:
                entry["error"] = cell.error or "error"
            else:
                r = cell.result
                entry["rho"] = round(r.rho, 3)
                entry["e_i_edge_mj"] = round(r.edge.e_i, 1)
                entry["e_i_cloud_mj"] = round(r.cloud.e_i, 1)
                entry["delta_rtt_ms"] = _round6(r.delta_rtt)
            cells.append(entry)
        return {
            "axes": [
                {
                    "name": a.name,
                    "start": _round6(a.start),
                    "stop": _round6(a.stop),
                    "step": _round6(a.step),
                }
                for a in self.spec.axes
            ],
            "cells": cells,
        }


def _round6(x: float) -> float | int:
    return int(x) if float(x).is_integer() else round(x, 6)


def _apply_axis(edge: ConnectionlessScenario, cloud: ConnectionlessScenario,
                name: str, value: float
                ) -> tuple[ConnectionlessScenario, ConnectionlessScenario]:
    if name == "t_i":
        return replace(edge, t_i=value), replace(cloud, t_i=value)
    if name == "rtt_cloud":
        return edge, replace(cloud, rtt=value)
    if name == "payload":
        return (
            replace(edge, b_tx=value, b_rx=value),
            replace(cloud, b_tx=value, b_rx=value),
        )
    if name == "t_elab":
        return replace(edge, t_elab=value), replace(cloud, t_elab=value)
    raise ValueError(f"unknown sweep axis {name!r}")


def run_sweep(spec: SweepSpec, profile: PowerProfile) -> SweepResult:
    """Evaluate the placement comparison at every grid point.

    Each cell is an independent call to :func:`ltenergy.analytic.compare`;
    period overruns become error cells carrying the diagnostic.
    """
    grids = [axis.values() for axis in spec.axes]
    if len(grids) == 1:
        points = [(v,) for v in grids[0]]
    else:
        points = [(a, b) for a in grids[0] for b in grids[1]]

    cells = []
    for values in points:
        edge, cloud = spec.base_edge, spec.base_cloud
        for axis, value in zip(spec.axes, values):
            edge, cloud = _apply_axis(edge, cloud, axis.name, value)
        try:
            cells.append(SweepCell(values, compare(edge, cloud, profile)))
        except PeriodOverrunError as exc:
            cells.append(SweepCell(values, None, error=str(exc)))
    return SweepResult(spec=spec, cells=tuple(cells))


def per_cycle_payload(hourly_bytes: float, t_i: float) -> int:
    """Bytes each request must carry so that ``hourly_bytes`` leave per hour.

    ``hourly_bytes * t_i / 3_600_000`` rounded to the nearest byte (halves
    away from zero).
    """
    if t_i <= 0:
        raise ValueError("t_i must be strictly positive")
    return int(math.floor(hourly_bytes * t_i / MS_PER_HOUR + 0.5))


@dataclass(frozen=True)
class CostSpec:
    """Configuration of a batching-cost evaluation.

    ``alpha`` weighs energy against delay; ``hourly_bytes`` is the data the
    node produces per hour; the reply is a short confirmation.
    """

    alpha: float
    hourly_bytes: float
    rtt: float
    t_i_grid: tuple[float, ...]
    reply_bytes: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if self.hourly_bytes <= 0:
            raise ValueError("hourly_bytes must be strictly positive")
        if len(self.t_i_grid) == 0:
            raise ValueError("empty grid: no period values given")
        if any(t <= 0 for t in self.t_i_grid):
            raise ValueError("grid periods must be strictly positive")


@dataclass(frozen=True)
class CostPoint:
    """Cost evaluation at one period."""

    t_i: float  # ms
    e_total: float  # energy per hour, mJ
    d: float  # delay component (the period itself), ms
    c: float  # normalised combined cost


@dataclass(frozen=True)
class CostCurve:
    points: tuple[CostPoint, ...]
    argmin_t_i: float
    e_max: float
    d_max: float

    @property
    def columns(self) -> list[str]:
        return ["t_i_ms", "e_mj_per_hour", "d_ms", "cost"]

    def rows(self) -> list[list[str]]:
        return [
            [fmt_axis(p.t_i), fmt_mj(p.e_total), fmt_axis(p.d), fmt_cost(p.c)]
            for p in self.points
        ]


def cost_curve(spec: CostSpec, profile: PowerProfile) -> CostCurve:
    """Evaluate the batching cost over the period grid and find its argmin.

    Hourly energy multiplies one cycle's energy by the (possibly
    fractional) number of cycles per hour; no partial final cycle is
    modelled.  Any period too short for its own payload raises.
    """
    energies = []
    for t_i in spec.t_i_grid:
        scn = ConnectionlessScenario(
            t_i=t_i,
            t_elab=0.0,
            rtt=spec.rtt,
            b_tx=per_cycle_payload(spec.hourly_bytes, t_i),
            b_rx=spec.reply_bytes,
        )
        e_cycle = cycle_energy(phase_timing(scn, profile), profile).e_i
        energies.append(e_cycle * (MS_PER_HOUR / t_i))

    e_max = max(energies)
    d_max = max(spec.t_i_grid)
    points = tuple(
        CostPoint(
            t_i=t_i,
            e_total=e,
            d=t_i,
            c=spec.alpha * e / e_max + (1.0 - spec.alpha) * t_i / d_max,
        )
        for t_i, e in zip(spec.t_i_grid, energies)
    )
    best = min(points, key=lambda p: (p.c, p.t_i))
    return CostCurve(points=points, argmin_t_i=best.t_i,
                     e_max=e_max, d_max=d_max)
