""" Certifies catalog solutions against their equations.

The analytic tier differentiates the closed-form trajectories term by term and applies the space operator through
the closed basis rules, so a passing residual sits at rounding level. The numeric tier samples the solution on a
uniform grid and discretizes every fractional derivative, which makes it independent of the closed rules but
limited by the accuracy of the schemes.
"""

from __future__ import annotations

import dataclasses
import enum
import logging
import typing as t

import numpy as np

from fracsub.catalog import SolutionFamily, expand, list_families
from fracsub.fracderiv import DerivKind, FracOrder, grid_derivative
from fracsub.parameters import Params, perturb
from fracsub.specfun import FloatArray
from fracsub.subspace import Field, OperatorSpec, SeqDeriv, apply_operator

logger = logging.getLogger(__name__)

#: Maximum relative residual of a passing analytic report.
ANALYTIC_TOLERANCE = 1e-9

#: Relative residual that a negative control must reach to count as detected.
NEGATIVE_CONTROL_THRESHOLD = 1e-2

#: The amount by which negative controls shift a condition knob.
NEGATIVE_CONTROL_SHIFT = 0.5

#: Minimum number of nodes per axis of the numeric tier.
MIN_NUMERIC_NODES = 64


class Tier(enum.Enum):
    ANALYTIC = "analytic"
    NUMERIC = "numeric"


class ReportStatus(enum.IntEnum):
    PASS = enum.auto()
    FAIL = enum.auto()
    SKIPPED = enum.auto()


COLORS = {
    ReportStatus.PASS: "green",
    ReportStatus.FAIL: "red",
    ReportStatus.SKIPPED: "light_gray",
}


@dataclasses.dataclass(frozen=True)
class GridSpec:
    """The window on which residuals are measured and the number of nodes per axis."""

    x_range: tuple[float, float] = (0.5, 2.0)
    t_range: tuple[float, float] = (0.5, 2.0)
    nx: int = 15
    nt: int = 15

    def __post_init__(self) -> None:
        for name, (lo, hi) in (("x_range", self.x_range), ("t_range", self.t_range)):
            if not 0 < lo < hi:
                raise ValueError(f"{name} must satisfy 0 < lo < hi, got {(lo, hi)}")
        if self.nx < 2 or self.nt < 2:
            raise ValueError("a grid needs at least two nodes per axis")

    def x_nodes(self) -> FloatArray:
        return np.linspace(*self.x_range, self.nx)

    def t_nodes(self) -> FloatArray:
        return np.linspace(*self.t_range, self.nt)


ANALYTIC_GRID = GridSpec()
NUMERIC_GRID = GridSpec(nx=128, nt=128)


@dataclasses.dataclass
class ResidualReport:
    family: str
    tier: Tier
    grid: GridSpec
    alpha: float
    beta: float
    max_abs_residual: float
    max_rel_residual: float
    tolerance: float
    status: ReportStatus
    notes: list[str] = dataclasses.field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == ReportStatus.PASS

    def to_json(self) -> dict[str, t.Any]:
        import databind.json

        return t.cast(t.Dict[str, t.Any], databind.json.dump(self, ResidualReport))


@dataclasses.dataclass(frozen=True)
class NegativeControl:
    condition: str
    knob: str
    report: ResidualReport

    @property
    def detected(self) -> bool:
        return self.report.max_rel_residual >= NEGATIVE_CONTROL_THRESHOLD


@dataclasses.dataclass(frozen=True)
class RefinementStudy:
    family: str
    sizes: tuple[int, ...]
    #: Space steps h_x of the grids, derived from the upper end of the window.
    steps: tuple[float, ...]
    residuals: tuple[float, ...]
    #: Fitted slope of log(residual) against log(h); the empirical order of convergence.
    slope: float


def numeric_tolerance(order: FracOrder) -> float:
    return 2e-2 if order.alpha <= 0.9 and order.beta <= 0.9 else 5e-2


def _measure(lhs: list[FloatArray], rhs: list[FloatArray]) -> tuple[float, float]:
    worst = max(float(np.max(np.abs(left - right))) for left, right in zip(lhs, rhs))
    scale = max(float(np.max(np.abs(left))) for left in lhs)
    return worst, worst / scale if scale > 0 else worst


def _report(
    family: SolutionFamily,
    tier: Tier,
    grid: GridSpec,
    order: FracOrder,
    residuals: tuple[float, float],
    tolerance: float,
    notes: list[str],
) -> ResidualReport:
    status = ReportStatus.PASS if residuals[1] <= tolerance else ReportStatus.FAIL
    report = ResidualReport(
        family.id, tier, grid, order.alpha, order.beta, residuals[0], residuals[1], tolerance, status, notes
    )
    logger.info(
        "<subj>%s</subj> %s residual <val>%.3g</val> (%s)", family.id, tier.value, residuals[1], status.name
    )
    return report


def residual_analytic(
    family: SolutionFamily,
    params: Params | None = None,
    alpha: float | None = None,
    beta: float | None = None,
    grid: GridSpec = ANALYTIC_GRID,
    enforce: bool = True,
) -> ResidualReport:
    """Substitutes the closed-form solution into its equation with the exact derivative rules.

    With *enforce* disabled the parameter conditions are not checked, which is how negative controls evaluate
    deliberately broken parameters.

    @raises NoClosedRule: If a derivative leaves the rule table.
    @raises InadmissibleParams: If *enforce* is set and a condition of the family is violated.
    """

    merged = family.params(params)
    order = family.resolve_order(alpha, beta)
    if enforce:
        family.check(merged, order)

    op = family.operator(merged, order)
    ss = family.subspace(merged, order)
    trajectories = family.trajectories(merged, order)
    derivatives = [tr.derivative(family.time_kind) for tr in trajectories]
    x, times = grid.x_nodes(), grid.t_nodes()

    lhs = [np.zeros((times.size, x.size)) for _ in ss.components]
    rhs = [np.zeros((times.size, x.size)) for _ in ss.components]
    for i, time in enumerate(times):
        coefficients = np.array([tr(time) for tr in trajectories])
        rates = np.array([d(time) for d in derivatives])
        vectors = [coefficients[ss.offset(p) : ss.offset(p) + n] for p, n in enumerate(ss.dimensions)]
        for p, values in enumerate(apply_operator(op, ss, vectors, x)):
            rhs[p][i] = values
            lhs[p][i] = ss.matrix(p, x) @ rates[ss.offset(p) : ss.offset(p) + ss.dimensions[p]]

    residuals = _measure(lhs, rhs)
    notes = [f"{family.time_kind.value} time derivative, closed rules"]
    if family.classical_only:
        assert family.display is not None
        xs, ts = np.meshgrid(x, times)
        display = family.display(merged, xs, ts)
        mismatch, relative = _measure(display, expand(family, merged, order, xs, ts))
        notes.append(f"classical display agrees to {relative:.3g}")
        residuals = (max(residuals[0], mismatch), max(residuals[1], relative))
    return _report(family, Tier.ANALYTIC, grid, order, residuals, ANALYTIC_TOLERANCE, notes)


def _sample_powers(order: float, limit: float = 3.0) -> list[float]:
    return [j * order for j in range(1, 4) if j * order < limit]


def _space_derivative(values: FloatArray, h: float, orders: t.Sequence[float], powers: list[float]) -> FloatArray:
    result = values
    for order in orders:
        result = grid_derivative(result.T, h, order, powers).T
    return result


def _numeric_operator(
    op: OperatorSpec, fields: list[FloatArray], h: float, powers: list[float]
) -> list[FloatArray]:
    cache: dict[SeqDeriv, FloatArray] = {}
    result = []
    for terms in op.components:
        total = np.zeros_like(fields[0])
        for term in terms:
            value = np.full_like(fields[0], term.coefficient)
            for factor in term.factors:
                if isinstance(factor, Field):
                    value = value * fields[factor.component]
                    continue
                if factor not in cache:
                    cache[factor] = _space_derivative(fields[factor.component], h, factor.orders, powers)
                value = value * cache[factor]
            total = total + value
        result.append(total)
    return result


def residual_numeric(
    family: SolutionFamily,
    grid: GridSpec = NUMERIC_GRID,
    params: Params | None = None,
    alpha: float | None = None,
    beta: float | None = None,
) -> ResidualReport:
    """Samples the solution on uniform grids starting at x = 0 and t = 0 and discretizes every derivative: the
    corrected L1 scheme for orders below one, fourth-order differences for integer orders. The residual is measured
    on the window of *grid*, whose upper bounds also end the sampling grids.

    Families with Riemann-Liouville time derivatives are reported as skipped.
    """

    if grid.nx < MIN_NUMERIC_NODES or grid.nt < MIN_NUMERIC_NODES:
        raise ValueError(f"the numeric tier needs at least {MIN_NUMERIC_NODES} nodes per axis")
    order = family.resolve_order(alpha, beta)
    merged = family.params(params)
    family.check(merged, order)
    op = family.operator(merged, order)
    tolerance = numeric_tolerance(order)

    if family.time_kind is not DerivKind.CAPUTO or op.kind is not DerivKind.CAPUTO:
        report = ResidualReport(
            family.id, Tier.NUMERIC, grid, order.alpha, order.beta, 0.0, 0.0, tolerance, ReportStatus.SKIPPED,
            ["no initial-value discretization for Riemann-Liouville derivatives"],
        )  # fmt: skip
        logger.info("<subj>%s</subj> numeric tier skipped", family.id)
        return report

    hx, ht = grid.x_range[1] / grid.nx, grid.t_range[1] / grid.nt
    x = hx * np.arange(grid.nx + 1, dtype=float)
    times = ht * np.arange(grid.nt + 1, dtype=float)
    xs, ts = np.meshgrid(x, times)
    fields = expand(family, merged, order, xs, ts)

    space_powers = sorted(set(_sample_powers(order.beta) + _sample_powers(order.beta + 1.0)))
    time_powers = _sample_powers(order.alpha)
    lhs = [grid_derivative(u, ht, order.alpha, time_powers) for u in fields]
    rhs = _numeric_operator(op, fields, hx, space_powers)

    rows = (times >= grid.t_range[0] - 1e-12) & (times <= grid.t_range[1] + 1e-12)
    columns = (x >= grid.x_range[0] - 1e-12) & (x <= grid.x_range[1] + 1e-12)
    window = np.ix_(rows, columns)
    residuals = _measure([u[window] for u in lhs], [u[window] for u in rhs])
    notes = [f"h_x={hx:.4g}, h_t={ht:.4g}"]
    return _report(family, Tier.NUMERIC, grid, order, residuals, tolerance, notes)


def refinement_study(
    family: SolutionFamily,
    sizes: t.Sequence[int] = (64, 128, 256),
    params: Params | None = None,
    alpha: float | None = None,
    beta: float | None = None,
    grid: GridSpec = NUMERIC_GRID,
) -> RefinementStudy:
    """Runs the numeric tier on the window of *grid* at increasing resolutions and fits the empirical order of
    convergence against the space step."""

    if len(sizes) < 2:
        raise ValueError("a refinement study needs at least two grid sizes")
    residuals = []
    for size in sizes:
        report = residual_numeric(family, dataclasses.replace(grid, nx=size, nt=size), params, alpha, beta)
        residuals.append(report.max_abs_residual)
    steps = [grid.x_range[1] / size for size in sizes]
    slope = float(np.polyfit(np.log(steps), np.log(np.maximum(residuals, 1e-300)), 1)[0])
    logger.debug("Refinement of <subj>%s</subj>: residuals %s, slope <val>%.3g</val>", family.id, residuals, slope)
    return RefinementStudy(family.id, tuple(sizes), tuple(steps), tuple(residuals), slope)


def negative_controls(
    family: SolutionFamily,
    params: Params | None = None,
    alpha: float | None = None,
    beta: float | None = None,
    shift: float = NEGATIVE_CONTROL_SHIFT,
) -> list[NegativeControl]:
    """Breaks each invariance condition of the family by shifting its knob and reruns the analytic tier."""

    merged = family.params(params)
    controls = []
    for condition in family.conditions_for(merged):
        if condition.knob is None:
            continue
        broken = perturb(merged, condition.knob, shift)
        report = residual_analytic(family, broken, alpha, beta, enforce=False)
        controls.append(NegativeControl(condition.name, condition.knob, report))
    return controls


def verify_family(
    family: SolutionFamily,
    tiers: t.Collection[Tier] = (Tier.ANALYTIC,),
    params: Params | None = None,
    alpha: float | None = None,
    beta: float | None = None,
    numeric_grid: GridSpec = NUMERIC_GRID,
) -> list[ResidualReport]:
    reports = []
    if Tier.ANALYTIC in tiers:
        reports.append(residual_analytic(family, params, alpha, beta))
    if Tier.NUMERIC in tiers:
        reports.append(residual_numeric(family, numeric_grid, params, alpha, beta))
    return reports


def verify_all(
    tiers: t.Collection[Tier] = (Tier.ANALYTIC,),
    families: t.Sequence[SolutionFamily] | None = None,
    progress: bool = False,
) -> t.Iterator[ResidualReport]:
    """Verifies every family with its default parameters, optionally with a progress bar."""

    selected = list_families() if families is None else list(families)
    if progress:
        import tqdm  # type: ignore[import]

        selected = tqdm.tqdm(selected, desc="Verifying solution families", unit="family")
    for family in selected:
        yield from verify_family(family, tiers)
