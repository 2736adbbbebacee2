""" Figure data of the catalog solutions.

Each figure sweeps one variable of a single solution component at fixed parameters and emits one column per
(α, β) pair. Only data is produced; rendering is left to the consumer of the CSV.
"""

from __future__ import annotations

import csv
import dataclasses
import logging
import typing as t

import numpy as np

from fracsub.catalog import eval_solution, lookup
from fracsub.errors import UnknownFigure
from fracsub.parameters import ParamValue

logger = logging.getLogger(__name__)

#: The sweep interval used when none is configured. It avoids x = 0 and t = 0.
DEFAULT_RANGE = (0.05, 3.0)

#: The (α, β) pairs drawn in most figures.
DEFAULT_PAIRS = ((1.0, 1.0), (0.9, 0.8), (0.75, 0.6), (0.5, 0.5))

#: The Hirota-Satsuma figures stay clear of α = 1 and α = 1/2.
POWER_LAW_PAIRS = ((0.25, 1.0), (0.25, 0.8), (0.4, 1.0), (0.75, 1.0))


@dataclasses.dataclass(frozen=True)
class FigureSpec:
    id: str
    family_id: str
    #: Zero based solution component shown in the figure.
    component: int
    sweep: t.Literal["x", "t"]
    #: Value of the variable that is not swept.
    fixed: float
    params: t.Mapping[str, ParamValue] = dataclasses.field(default_factory=dict)
    pairs: tuple[tuple[float, float], ...] = DEFAULT_PAIRS

    def columns(self) -> list[str]:
        return [self.sweep] + [f"u_a{alpha:g}_b{beta:g}" for alpha, beta in self.pairs]


def _figures() -> dict[str, FigureSpec]:
    specs = [
        FigureSpec("a", "E5", 0, "x", 1.0, {"a": [2.0, 1.0], "k": 1.0, "k0": 1.0, "b": [0.0, 1.0, 1.0]}),
        FigureSpec("b", "FE6", 0, "x", 2.0, {"k1": -1.0, "a1": 2.0, "a0": 0.0, "k2": 1.0, "k": 1.0, "b1": 1.0}),
        FigureSpec("c", "RE8", 0, "x", 2.0, {"k": 1.0, "k0": 1.0, "k1": 1.0, "b2": 1.0, "a1": 0.5}),
        FigureSpec("d", "RPP", 0, "x", 2.0, {"k0": 1.0, "k1": 1.0}),
        FigureSpec("e", "eqsr6", 0, "x", 2.0, {"k": 1.0, "b": [0.0, 1.0, 1.0], "a": [-1.0, 1.0], "k0": 2.0}),
        FigureSpec("f", "RPPP1", 0, "x", 2.0, {"k1": 1.0, "b1": -4.0, "k": 2.0}),
        FigureSpec("g", "RPPP2", 0, "t", 2.0, {"k1": 1.0, "k2": 1.0, "b0": 0.0, "k": 2.0}),
        FigureSpec("h", "sr8", 0, "x", 2.0, {"lam": [1.0, 1.0, 1.0, 1.0], "kr": [1.0], "c": 1.0}),
        FigureSpec("i", "DS6", 0, "x", 2.0, {"k0": 1.0, "b": [0.0, 1.0, -8.0], "a": [0.0, 1.0], "k": 2.0}),
        FigureSpec("j", "DS10", 0, "t", 2.0, {"c": [1.0, 1.0, 1.0], "b0": 1.0, "b1": 1.0, "a0": 1.0, "kr": [1.0]}),
        FigureSpec("k", "cc8", 0, "x", 2.0, {"k": 1.0, "a1": 1.0, "a2": 1.0}),
        FigureSpec(
            "l",
            "cc8",
            1,
            "x",
            2.0,
            {"k": 1.0, "a1": 1.0, "a2": 1.0, "a3": 1.0, "a4": 1.0, "delta": 1.0, "lam": 1.0, "gam": -1.0},
        ),
        FigureSpec(
            "m",
            "cc10",
            0,
            "x",
            2.0,
            {"k1": 1.0, "k2": 1.0, "k4": 1.0, "rho": 1.0, "delta": 1.0, "gam": 1.0, "mu": -1.0},
        ),
        FigureSpec(
            "n",
            "cc10",
            1,
            "t",
            2.0,
            {"k1": 1.0, "k2": 1.0, "k3": 1.0, "k4": 1.0, "rho": 1.0, "delta": 1.0, "gam": 1.0, "mu": -1.0},
        ),
        FigureSpec("o", "eqcs", 0, "t", 2.0, {"k1": 2.0, "k2": 1.0, "k4": 1.0}),
        FigureSpec("p", "eqcs", 1, "t", 2.0, {"k1": 2.0, "k2": 1.0, "k3": 1.0, "k4": 1.0}),
        *(
            FigureSpec(figure_id, "3s2", component, "t", 2.0, {"k1": 2.0, "k2": 1.0}, POWER_LAW_PAIRS)
            for component, figure_id in enumerate("qrs")
        ),
    ]
    return {spec.id: spec for spec in specs}


FIGURES = _figures()


def get_figure(figure_id: str) -> FigureSpec:
    try:
        return FIGURES[figure_id]
    except KeyError:
        raise UnknownFigure(f"unknown figure {figure_id!r} (known: {', '.join(FIGURES)})")


def figure_table(
    figure: FigureSpec, points: int, sweep_range: tuple[float, float] = DEFAULT_RANGE
) -> tuple[list[str], list[list[float]]]:
    """Evaluates the figure at *points* equally spaced values of the sweep variable. Returns the column names and
    the rows."""

    if points < 2:
        raise ValueError(f"a figure needs at least 2 points, got {points}")
    lo, hi = sweep_range
    if not 0 < lo < hi:
        raise ValueError(f"the sweep range must satisfy 0 < lo < hi, got {sweep_range}")

    family = lookup(figure.family_id)
    sweep = np.linspace(lo, hi, points)
    fixed = np.full_like(sweep, figure.fixed)
    x, t_ = (sweep, fixed) if figure.sweep == "x" else (fixed, sweep)
    columns = [sweep]
    for alpha, beta in figure.pairs:
        values = eval_solution(family, x, t_, figure.params, alpha, beta)
        columns.append(values[figure.component])
    logger.debug("Figure <subj>%s</subj>: %d curves of <obj>%s</obj>", figure.id, len(figure.pairs), family.id)
    return figure.columns(), np.column_stack(columns).tolist()


def write_figure_csv(
    figure: FigureSpec, points: int, fp: t.TextIO, sweep_range: tuple[float, float] = DEFAULT_RANGE
) -> None:
    """Writes the figure data as CSV with 12 significant digits and `\\n` line endings."""

    header, rows = figure_table(figure, points, sweep_range)
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([f"{value:.12g}" for value in row])
