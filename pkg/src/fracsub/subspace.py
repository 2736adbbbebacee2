""" Structural representation of time-space fractional operators, numerical invariance checks of candidate
subspaces and the extraction of the reduced fractional ODE system. """

from __future__ import annotations

import dataclasses
import itertools
import logging
import re
import typing as t

import numpy as np
import numpy.typing as npt
import typing_extensions as te

from fracsub.errors import ConfigurationError, DegenerateBasis, NotInvariant
from fracsub.fode import FodeSystem, Monomial, PolynomialSystem
from fracsub.fracderiv import (
    BasisFunction,
    Constant,
    DerivKind,
    FracOrder,
    MLExp,
    Power,
    derive_sequentially,
    evaluate_basis,
    evaluate_combination,
)
from fracsub.parameters import Params, resolve
from fracsub.specfun import FloatArray

logger = logging.getLogger(__name__)

#: Collocation points used when none are given.
DEFAULT_X_POINTS = np.geomspace(0.5, 2.5, 25)

#: A subspace is invariant when the relative fit residual stays below this value.
INVARIANCE_THRESHOLD = 1e-8

#: Column-normalized Gram determinants below this value make a basis degenerate.
GRAM_THRESHOLD = 1e-10

#: Randomly drawn coefficients are redrawn while their magnitude is below this value.
MIN_COEFFICIENT = 1e-3

#: Highest total degree accepted by #reduce_to_fode().
MAX_DEGREE = 3

#: A condition holds when its violation is at most this value.
CONDITION_TOLERANCE = 1e-10


@dataclasses.dataclass(frozen=True)
class Field:
    """The unknown u_q itself."""

    component: int

    def __str__(self) -> str:
        return f"u{self.component + 1}"


@dataclasses.dataclass(frozen=True)
class SeqDeriv:
    """The sequential space derivative D^{orders[-1]}(...(D^{orders[0]} u_q))."""

    component: int
    orders: tuple[float, ...]

    def __str__(self) -> str:
        inner = f"u{self.component + 1}"
        for order in self.orders:
            inner = f"D^{order:g}({inner})"
        return inner


Factor: te.TypeAlias = t.Union[Field, SeqDeriv]


@dataclasses.dataclass(frozen=True)
class Term:
    """A coefficient times a product of factors. A term without factors is a constant source."""

    coefficient: float
    factors: tuple[Factor, ...] = ()

    def __str__(self) -> str:
        return "*".join([f"{self.coefficient:g}"] + [str(f) for f in self.factors])


@dataclasses.dataclass(frozen=True)
class OperatorSpec:
    """The right-hand side of ∂^α u_p/∂t^α = G_p[u_1, ..., u_m], one list of terms per component."""

    equation_id: str
    components: tuple[tuple[Term, ...], ...]
    parameters: Params = dataclasses.field(default_factory=dict)
    kind: DerivKind = DerivKind.CAPUTO
    time_kind: DerivKind = DerivKind.CAPUTO

    def __post_init__(self) -> None:
        if not 1 <= len(self.components) <= 3:
            raise ValueError(f"operators have one to three components, got {len(self.components)}")
        for terms in self.components:
            for term in terms:
                for factor in term.factors:
                    if not 0 <= factor.component < len(self.components):
                        raise ValueError(f"factor {factor} refers to a missing component")

    @property
    def degree(self) -> int:
        return max((len(term.factors) for terms in self.components for term in terms), default=0)

    def format(self) -> list[str]:
        return [
            f"∂^α u{p + 1} = " + (" + ".join(str(term) for term in terms) if terms else "0")
            for p, terms in enumerate(self.components)
        ]


@dataclasses.dataclass(frozen=True)
class SubspaceSpec:
    """Per-component bases of a product space W¹ × ... × Wᵐ with optional per-function weights."""

    components: tuple[tuple[BasisFunction, ...], ...]
    weights: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self) -> None:
        if any(not basis for basis in self.components):
            raise ValueError("every component needs at least one basis function")
        if self.weights is not None:
            if [len(w) for w in self.weights] != [len(b) for b in self.components]:
                raise ValueError("weights must match the basis layout")
            if any(w == 0.0 for ws in self.weights for w in ws):
                raise ValueError("basis weights must be non-zero")

    @property
    def dimensions(self) -> tuple[int, ...]:
        return tuple(len(basis) for basis in self.components)

    @property
    def dimension(self) -> int:
        return sum(self.dimensions)

    def offset(self, component: int) -> int:
        return sum(self.dimensions[:component])

    def weight(self, component: int, index: int) -> float:
        return 1.0 if self.weights is None else self.weights[component][index]

    def scaled(self, factor: float) -> SubspaceSpec:
        return SubspaceSpec(
            self.components,
            tuple(tuple(self.weight(p, j) * factor for j in range(n)) for p, n in enumerate(self.dimensions)),
        )

    def matrix(self, component: int, x: npt.ArrayLike) -> FloatArray:
        """The collocation matrix with one column per (weighted) basis function."""

        return np.column_stack(
            [self.weight(component, j) * evaluate_basis(b, x) for j, b in enumerate(self.components[component])]
        )

    def __str__(self) -> str:
        return " × ".join("{" + ", ".join(str(b) for b in basis) + "}" for basis in self.components)


@dataclasses.dataclass(frozen=True)
class Condition:
    """A named parameter condition. *violation* returns zero when the condition holds. Conditions with a *knob*
    guard invariance and are perturbed through that parameter by negative controls; conditions without one only
    restrict the domain of the solution."""

    name: str
    violation: t.Callable[[Params, FracOrder], float]
    knob: str | None = None

    def holds(self, params: Params, order: FracOrder) -> bool:
        return abs(self.violation(params, order)) <= CONDITION_TOLERANCE


@dataclasses.dataclass(frozen=True)
class InvarianceReport:
    invariant: bool
    max_fit_residual: float
    trials: int
    violated_conditions: tuple[str, ...] = ()
    seed: int = 0


def _factor_table(op: OperatorSpec, ss: SubspaceSpec, x: FloatArray) -> dict[Factor, FloatArray]:
    """Values of every factor of *op* for each basis function of its component, shape `(n_q, len(x))`."""

    if len(ss.components) != len(op.components):
        raise ValueError(f"operator has {len(op.components)} components, subspace has {len(ss.components)}")
    table: dict[Factor, FloatArray] = {}
    for terms in op.components:
        for term in terms:
            for factor in term.factors:
                if factor in table:
                    continue
                rows = []
                for j, b in enumerate(ss.components[factor.component]):
                    weight = ss.weight(factor.component, j)
                    if isinstance(factor, Field):
                        rows.append(weight * evaluate_basis(b, x))
                    else:
                        image = derive_sequentially({b: weight}, op.kind, factor.orders)
                        rows.append(evaluate_combination(image, x))
                table[factor] = np.vstack(rows)
    return table


def _check_points(x_points: npt.ArrayLike) -> FloatArray:
    x = np.asarray(x_points, dtype=float)
    if x.ndim != 1 or np.any(x <= 0):
        raise ValueError("collocation points must be a one-dimensional array of positive values")
    return x


def apply_operator(
    op: OperatorSpec, ss: SubspaceSpec, coeffs: t.Sequence[npt.ArrayLike], x_points: npt.ArrayLike
) -> list[FloatArray]:
    """Evaluates G_p[u_1, ..., u_m] at *x_points* for u_q = Σ_j coeffs[q][j] φ_j^q using the closed derivative
    rules.

    @raises NoClosedRule: If a derivative of *op* leaves the basis family of *ss*.
    """

    x = _check_points(x_points)
    table = _factor_table(op, ss, x)
    vectors = [np.asarray(c, dtype=float) for c in coeffs]
    if [v.size for v in vectors] != list(ss.dimensions):
        raise ValueError(f"expected coefficient vectors of sizes {ss.dimensions}")

    result = []
    for terms in op.components:
        total = np.zeros_like(x)
        for term in terms:
            value = np.full_like(x, term.coefficient)
            for factor in term.factors:
                value = value * (vectors[factor.component] @ table[factor])
            total = total + value
        result.append(total)
    return result


def _gram_determinant(matrix: FloatArray) -> float:
    norms = np.linalg.norm(matrix, axis=0)
    if np.any(norms == 0):
        return 0.0
    normalized = matrix / norms
    return float(np.linalg.det(normalized.T @ normalized))


def _fit(matrix: FloatArray, values: FloatArray) -> tuple[FloatArray, float]:
    """Least-squares coefficients of *values* in the column span of *matrix* and the relative residual."""

    coefficients, *_ = np.linalg.lstsq(matrix, values, rcond=None)
    scale = float(np.linalg.norm(values))
    if scale == 0.0:
        return coefficients, 0.0
    return coefficients, float(np.linalg.norm(values - matrix @ coefficients)) / scale


def _draw(rng: np.random.Generator, size: int) -> FloatArray:
    values = rng.uniform(-2.0, 2.0, size)
    small = np.abs(values) < MIN_COEFFICIENT
    while np.any(small):
        values[small] = rng.uniform(-2.0, 2.0, int(small.sum()))
        small = np.abs(values) < MIN_COEFFICIENT
    return values


def check_invariance(
    op: OperatorSpec,
    ss: SubspaceSpec,
    trials: int = 8,
    seed: int = 0,
    conditions: t.Sequence[Condition] = (),
    order: FracOrder | None = None,
    x_points: npt.ArrayLike | None = None,
) -> InvarianceReport:
    """Checks G[W] ⊆ W by fitting G[u] onto the span for *trials* random members u of W.

    @raises DegenerateBasis: If the basis of a component is numerically linearly dependent.
    """

    if trials <= 0:
        raise ValueError(f"trials must be positive, got {trials}")
    x = _check_points(DEFAULT_X_POINTS if x_points is None else x_points)
    if x.size < 2 * max(ss.dimensions) + 1:
        raise ValueError(f"need at least {2 * max(ss.dimensions) + 1} collocation points")

    matrices = [ss.matrix(p, x) for p in range(len(ss.components))]
    for p, matrix in enumerate(matrices):
        determinant = _gram_determinant(matrix)
        if determinant <= GRAM_THRESHOLD:
            raise DegenerateBasis(f"basis of component {p + 1} is degenerate (Gram determinant {determinant:.3g})")

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        coeffs = [_draw(rng, n) for n in ss.dimensions]
        for matrix, values in zip(matrices, apply_operator(op, ss, coeffs, x)):
            worst = max(worst, _fit(matrix, values)[1])

    violated: tuple[str, ...] = ()
    if conditions:
        if order is None:
            raise ValueError("checking conditions requires the fractional order")
        violated = tuple(c.name for c in conditions if not c.holds(op.parameters, order))

    report = InvarianceReport(worst <= INVARIANCE_THRESHOLD, worst, trials, violated, seed)
    logger.debug(
        "Invariance of <obj>%s</obj> under <subj>%s</subj>: residual <val>%.3g</val>", ss, op.equation_id, worst
    )
    return report


def reduce_to_fode(
    op: OperatorSpec,
    ss: SubspaceSpec,
    alpha: float,
    seed: int = 0,
    x_points: npt.ArrayLike | None = None,
) -> FodeSystem:
    """Extracts Φ with d^α A = Φ(A) for the coefficient vector A = (A_1, ..., A_n) of all components.

    Every term is expanded over the coefficients: a factor of component q contributes Σ_j A_j^q ψ_j(x), so a term
    with d factors yields monomials of degree d whose x-dependent parts are projected onto the target span.

    @raises NotInvariant: If (op, ss) fails #check_invariance().
    """

    if op.degree > MAX_DEGREE:
        raise ValueError(f"operator degree {op.degree} exceeds {MAX_DEGREE}")
    report = check_invariance(op, ss, seed=seed, x_points=x_points)
    if not report.invariant:
        raise NotInvariant(f"{ss} is not invariant under {op.equation_id} (residual {report.max_fit_residual:.3g})")

    x = _check_points(DEFAULT_X_POINTS if x_points is None else x_points)
    table = _factor_table(op, ss, x)
    n = ss.dimension
    rows: list[dict[Monomial, float]] = []

    for p, terms in enumerate(op.components):
        expansion: dict[Monomial, FloatArray] = {}
        for term in terms:
            choices = [range(ss.dimensions[f.component]) for f in term.factors]
            for selection in itertools.product(*choices):
                exponents = [0] * n
                value = np.full_like(x, term.coefficient)
                for factor, j in zip(term.factors, selection):
                    exponents[ss.offset(factor.component) + j] += 1
                    value = value * table[factor][j]
                monomial = tuple(exponents)
                expansion[monomial] = expansion.get(monomial, 0.0) + value

        matrix = ss.matrix(p, x)
        norms = np.linalg.norm(matrix, axis=0)
        component_rows: list[dict[Monomial, float]] = [{} for _ in range(ss.dimensions[p])]
        for monomial, values in expansion.items():
            coefficients, _ = _fit(matrix, values)
            scale = float(np.linalg.norm(values))
            for i, c in enumerate(coefficients):
                if abs(c) * norms[i] > 1e-9 * scale:
                    component_rows[i][monomial] = float(c)
        rows.extend(component_rows)

    system = FodeSystem(alpha, PolynomialSystem(n, tuple(rows)), time_kind=op.time_kind)
    logger.debug("Reduced <subj>%s</subj> on <obj>%s</obj> to %d equations", op.equation_id, ss, n)
    return system


# Subspace text parsing

_NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_RATE = rf"(?P<rate>{_NUMBER}|-?[A-Za-z_]\w*(?:\[\d+\])?)"
_ML_ITEM = re.compile(rf"^E_?(?P<order>b|\(b\+1\))\({_RATE}\*?x\^(?P<power>b|\(b\+1\))\)$")
_POWERS = {"x^b": 1, "x^(b+1)": 2, "x^(2b)": 3, "x^2b": 3}


def _parse_rate(text: str, params: Params) -> float:
    try:
        return float(text)
    except ValueError:
        pass
    negative = text.startswith("-")
    value = resolve(params, text.lstrip("-"))
    return -value if negative else value


def _parse_item(item: str, beta: float, params: Params) -> BasisFunction:
    if item == "1":
        return Constant()
    if item in _POWERS:
        return Power({1: beta, 2: beta + 1.0, 3: 2.0 * beta}[_POWERS[item]])
    match = _ML_ITEM.match(item)
    if match:
        if match.group("order") != match.group("power"):
            raise ConfigurationError(f"mismatched Mittag-Leffler order and power in {item!r}")
        order = beta if match.group("order") == "b" else beta + 1.0
        return MLExp(order, _parse_rate(match.group("rate"), params))
    raise ConfigurationError(f"unrecognized basis function {item!r}")


def parse_subspace(text: str, beta: float, params: Params | None = None) -> SubspaceSpec:
    """Parses a subspace description such as `1, x^b, E_b(k*x^b)`. Components are separated by `;` and rates are
    decimals or (optionally negated) parameter names. `β` and `·` are accepted for `b` and `*`."""

    normalized = text.replace("β", "b").replace("·", "*").replace(" ", "")
    components = []
    for chunk in normalized.split(";"):
        items = [item for item in chunk.split(",") if item]
        if not items:
            raise ConfigurationError(f"empty component in subspace {text!r}")
        components.append(tuple(_parse_item(item, beta, params or {}) for item in items))
    return SubspaceSpec(tuple(components))
