""" Reduced fractional ODE systems d^α A_j / dt^α = Φ_j(A_1, ..., A_n).

Closed-form solutions are represented as sums of #MLTerm's, functions c · t^(γ-1) E^ρ_{α,γ}(a t^α) whose Laplace
transforms c · s^(αρ-γ) / (s^α - a)^ρ are closed under products. That makes forward substitution through affine,
triangular systems exact: every convolution with a Mittag-Leffler kernel is again a finite sum of such terms.
"""

from __future__ import annotations

import dataclasses
import logging
import math
import typing as t

import numpy as np
import numpy.typing as npt
import typing_extensions as te
from scipy.special import roots_jacobi

from fracsub.errors import DomainError, Divergence, NotTriangular
from fracsub.fracderiv import DerivKind
from fracsub.specfun import FloatArray, FloatOrArray, gamma_fn, prabhakar, rgamma
from fracsub.util.digraph import CycleError, DiGraph, topological_sort

logger = logging.getLogger(__name__)

Monomial: te.TypeAlias = t.Tuple[int, ...]

#: Largest magnitude tolerated by #frac_adams().
DIVERGENCE_LIMIT = 1e12

#: Largest grid accepted by #frac_adams().
MAX_GRID_NODES = 100_000


@dataclasses.dataclass(frozen=True)
class PolynomialSystem:
    """A polynomial map R^n -> R^n. Row `j` maps exponent tuples (one exponent per variable) to coefficients."""

    dimension: int
    rows: tuple[t.Mapping[Monomial, float], ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.dimension:
            raise ValueError(f"expected {self.dimension} rows, got {len(self.rows)}")
        for row in self.rows:
            for monomial in row:
                if len(monomial) != self.dimension:
                    raise ValueError(f"monomial {monomial} does not match dimension {self.dimension}")

    @staticmethod
    def zero(dimension: int) -> PolynomialSystem:
        return PolynomialSystem(dimension, tuple({} for _ in range(dimension)))

    @staticmethod
    def affine(matrix: npt.ArrayLike, offset: npt.ArrayLike | None = None) -> PolynomialSystem:
        m = np.atleast_2d(np.asarray(matrix, dtype=float))
        n = m.shape[0]
        f = np.zeros(n) if offset is None else np.asarray(offset, dtype=float)
        rows: list[dict[Monomial, float]] = []
        for j in range(n):
            row: dict[Monomial, float] = {}
            if f[j] != 0.0:
                row[(0,) * n] = float(f[j])
            for i in range(n):
                if m[j, i] != 0.0:
                    row[tuple(int(k == i) for k in range(n))] = float(m[j, i])
            rows.append(row)
        return PolynomialSystem(n, tuple(rows))

    @property
    def degree(self) -> int:
        return max((sum(monomial) for row in self.rows for monomial in row), default=0)

    @property
    def is_affine(self) -> bool:
        return self.degree <= 1

    def __call__(self, values: npt.ArrayLike) -> FloatArray:
        a = np.asarray(values, dtype=float)
        out = np.zeros(self.dimension)
        for j, row in enumerate(self.rows):
            out[j] = sum(c * float(np.prod(a ** np.asarray(monomial))) for monomial, c in row.items())
        return out

    def linear_part(self) -> tuple[FloatArray, FloatArray]:
        """Returns `(M, f)` with Φ(A) = M A + f.

        @raises NotTriangular: If the system has terms of degree two or higher.
        """

        if not self.is_affine:
            raise NotTriangular(f"the right-hand side has degree {self.degree}, expected an affine system")
        matrix = np.zeros((self.dimension, self.dimension))
        offset = np.zeros(self.dimension)
        for j, row in enumerate(self.rows):
            for monomial, c in row.items():
                if sum(monomial) == 0:
                    offset[j] += c
                else:
                    matrix[j, monomial.index(1)] += c
        return matrix, offset

    def format(self, labels: t.Sequence[str] | None = None) -> list[str]:
        names = list(labels) if labels else [f"A{i + 1}" for i in range(self.dimension)]
        lines = []
        for j, row in enumerate(self.rows):
            parts = []
            for monomial, c in sorted(row.items(), key=lambda item: (-sum(item[0]), item[0])):
                factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, monomial) if e]
                parts.append("*".join([f"{c:.10g}"] + factors))
            lines.append(f"d^α {names[j]} = " + (" + ".join(parts) if parts else "0"))
        return lines


@dataclasses.dataclass(frozen=True)
class FodeSystem:
    """The system d^α A / dt^α = rhs(A) with optional initial values A(0) (Caputo systems only)."""

    alpha: float
    rhs: PolynomialSystem
    initial: tuple[float, ...] | None = None
    time_kind: DerivKind = DerivKind.CAPUTO

    def __post_init__(self) -> None:
        if not 0 < self.alpha <= 1:
            raise DomainError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.initial is not None and len(self.initial) != self.rhs.dimension:
            raise ValueError(f"expected {self.rhs.dimension} initial values, got {len(self.initial)}")

    @property
    def dimension(self) -> int:
        return self.rhs.dimension

    def with_initial(self, values: t.Sequence[float]) -> FodeSystem:
        return dataclasses.replace(self, initial=tuple(float(v) for v in values))


#: Rates closer than this (relative) are convolved through a Taylor expansion in their difference instead of partial
#: fractions, which lose accuracy as the rates merge.
NEAR_RATE_TOLERANCE = 1e-3

#: Number of Taylor terms of the near-rate branch.
NEAR_RATE_TERMS = 10


def _near_rate(a: float, b: float) -> bool:
    return abs(a - b) <= NEAR_RATE_TOLERANCE * max(1.0, abs(a), abs(b))



@dataclasses.dataclass(frozen=True)
class MLTerm:
    """The function coefficient · t^(γ-1) · E^ρ_{α,γ}(rate · t^α), with α supplied by the owning #Trajectory.

    A zero rate or ρ = 0 both describe the pure power coefficient · t^(γ-1)/Γ(γ) and are stored as ρ = rate = 0.
    """

    coefficient: float
    rho: int
    gamma: float
    rate: float = 0.0

    def __post_init__(self) -> None:
        if self.rho < 0:
            raise DomainError(f"rho must be non-negative, got {self.rho}")
        if self.rho == 0 or self.rate == 0.0:
            object.__setattr__(self, "rho", 0)
            object.__setattr__(self, "rate", 0.0)

    def evaluate(self, alpha: float, t: npt.ArrayLike) -> FloatArray:
        times = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            prefactor = self.coefficient * np.power(times, self.gamma - 1.0)
        if self.rho == 0:
            return prefactor * float(rgamma(self.gamma))  # type: ignore[no-any-return]
        return prefactor * np.asarray(prabhakar(alpha, self.gamma, self.rho, self.rate * times**alpha))

    def scaled(self, factor: float) -> MLTerm:
        return dataclasses.replace(self, coefficient=self.coefficient * factor)

    def riemann_liouville_derivative(self, alpha: float) -> list[MLTerm]:
        return [dataclasses.replace(self, gamma=self.gamma - alpha)]

    def caputo_derivative(self, alpha: float) -> list[MLTerm]:
        if abs(self.gamma - 1.0) <= 1e-12:
            # d^α [t^0 E^ρ_{α,1}(a t^α)] = Σ_{i=1}^{ρ} C(ρ,i) a^i t^{α(i-1)} E^i_{α,α(i-1)+1}(a t^α)
            return [
                MLTerm(self.coefficient * math.comb(self.rho, i) * self.rate**i, i, alpha * (i - 1) + 1.0, self.rate)
                for i in range(1, self.rho + 1)
            ]
        if self.gamma < 1.0:
            raise DomainError(f"the Caputo derivative of t^{self.gamma - 1:g}(...) is undefined at t = 0")
        return self.riemann_liouville_derivative(alpha)

    def __str__(self) -> str:
        if self.rho == 0:
            return f"{self.coefficient:.6g}·t^{self.gamma - 1:g}/Γ({self.gamma:g})"
        return f"{self.coefficient:.6g}·t^{self.gamma - 1:g}·E^{self.rho}_(α,{self.gamma:g})({self.rate:.6g}·t^α)"


def convolve_terms(alpha: float, p: MLTerm, q: MLTerm) -> list[MLTerm]:
    """The Laplace convolution ∫_0^t p(t-τ) q(τ) dτ as a list of terms.

    Distinct rates are separated by partial fractions of 1 / ((X-a)^m (X-b)^n) with X = s^α. Near rates expand
    1 / (X-b)^n = Σ_k C(n+k-1, k) (b-a)^k / (X-a)^(n+k), which keeps every term at the rate a.
    """

    c = p.coefficient * q.coefficient
    g = p.gamma + q.gamma
    if p.rho == 0:
        return [MLTerm(c, q.rho, g, q.rate)]
    if q.rho == 0:
        return [MLTerm(c, p.rho, g, p.rate)]
    if _near_rate(p.rate, q.rate):
        delta = q.rate - p.rate
        near = [MLTerm(c, p.rho + q.rho, g, p.rate)]
        for k in range(1, NEAR_RATE_TERMS + 1 if delta != 0.0 else 1):
            weight = math.comb(q.rho + k - 1, k) * delta**k
            near.append(MLTerm(c * weight, p.rho + q.rho + k, g + alpha * k, p.rate))
        return near

    m, n, a, b = p.rho, q.rho, p.rate, q.rate
    terms = []
    for i in range(1, m + 1):
        weight = (-1) ** (m - i) * math.comb(m + n - i - 1, n - 1) / (a - b) ** (m + n - i)
        terms.append(MLTerm(c * weight, i, g - alpha * (m + n - i), a))
    for j in range(1, n + 1):
        weight = (-1) ** (n - j) * math.comb(m + n - j - 1, m - 1) / (b - a) ** (m + n - j)
        terms.append(MLTerm(c * weight, j, g - alpha * (m + n - j), b))
    for term in terms:
        if term.gamma <= 0:
            raise DomainError(f"convolution of {p} and {q} is not a function (γ = {term.gamma:g})")
    return terms


@dataclasses.dataclass(frozen=True)
class Trajectory:
    """A closed-form coefficient function A(t) as a finite sum of #MLTerm's of a common order α."""

    alpha: float
    terms: tuple[MLTerm, ...] = ()

    @staticmethod
    def constant(alpha: float, value: float) -> Trajectory:
        return Trajectory(alpha, (MLTerm(value, 0, 1.0),)).simplified()

    @staticmethod
    def power(alpha: float, coefficient: float, exponent: float) -> Trajectory:
        """coefficient · t^exponent"""

        return Trajectory(alpha, (MLTerm(coefficient * float(gamma_fn(exponent + 1.0)), 0, exponent + 1.0),))

    @staticmethod
    def ml(alpha: float, coefficient: float, rate: float, gamma: float = 1.0, rho: int = 1) -> Trajectory:
        """coefficient · t^(γ-1) E^ρ_{α,γ}(rate · t^α)"""

        return Trajectory(alpha, (MLTerm(coefficient, rho, gamma, rate),)).simplified()

    def __call__(self, t: npt.ArrayLike) -> FloatOrArray:
        times = np.asarray(t, dtype=float)
        total = np.zeros_like(times)
        for term in self.terms:
            total = total + term.evaluate(self.alpha, times)
        return float(total) if times.ndim == 0 else total

    def _check(self, other: Trajectory) -> None:
        if other.alpha != self.alpha:
            raise ValueError(f"cannot combine trajectories of order {self.alpha} and {other.alpha}")

    def __add__(self, other: Trajectory) -> Trajectory:
        self._check(other)
        return Trajectory(self.alpha, self.terms + other.terms).simplified()

    def __sub__(self, other: Trajectory) -> Trajectory:
        return self + other.scaled(-1.0)

    def scaled(self, factor: float) -> Trajectory:
        return Trajectory(self.alpha, tuple(term.scaled(factor) for term in self.terms)).simplified()

    def convolve(self, other: Trajectory) -> Trajectory:
        self._check(other)
        terms = [r for p in self.terms for q in other.terms for r in convolve_terms(self.alpha, p, q)]
        return Trajectory(self.alpha, tuple(terms)).simplified()

    def integral(self, order: float | None = None) -> Trajectory:
        """Riemann-Liouville integral of the given order (α by default)."""

        kernel = MLTerm(1.0, 0, self.alpha if order is None else order)
        return Trajectory(self.alpha, tuple(r for p in self.terms for r in convolve_terms(self.alpha, kernel, p)))

    def caputo_derivative(self) -> Trajectory:
        terms = tuple(r for p in self.terms for r in p.caputo_derivative(self.alpha))
        return Trajectory(self.alpha, terms).simplified()

    def riemann_liouville_derivative(self) -> Trajectory:
        return Trajectory(
            self.alpha, tuple(r for p in self.terms for r in p.riemann_liouville_derivative(self.alpha))
        ).simplified()

    def derivative(self, kind: DerivKind) -> Trajectory:
        if kind is DerivKind.CAPUTO:
            return self.caputo_derivative()
        return self.riemann_liouville_derivative()

    def initial_value(self) -> float:
        """A(0+); infinite when a term is singular at the origin."""

        value = 0.0
        for term in self.terms:
            if term.gamma < 1.0 and term.coefficient != 0.0:
                return math.inf
            if abs(term.gamma - 1.0) <= 1e-12:
                value += term.coefficient
        return value

    def simplified(self) -> Trajectory:
        merged: dict[tuple[int, float, float], float] = {}
        for term in self.terms:
            key = (term.rho, round(term.gamma, 12), term.rate)
            merged[key] = merged.get(key, 0.0) + term.coefficient
        return Trajectory(
            self.alpha, tuple(MLTerm(c, rho, gamma, rate) for (rho, gamma, rate), c in merged.items() if c != 0.0)
        )

    def __str__(self) -> str:
        return " + ".join(str(term) for term in self.terms) if self.terms else "0"


@dataclasses.dataclass(frozen=True)
class MLConvolution:
    """The convolution of t^(γ₁-1) E_{α,γ₁}(a t^α) with t^(γ₂-1) E_{α,γ₂}(b t^α)."""

    alpha: float
    gamma1: float
    gamma2: float
    a: float
    b: float

    def __post_init__(self) -> None:
        if not (self.gamma1 > 0 and self.gamma2 > 0):
            raise DomainError("convolution kernels need positive gamma parameters")

    def trajectory(self) -> Trajectory:
        left = Trajectory(self.alpha, (MLTerm(1.0, 1, self.gamma1, self.a),))
        right = Trajectory(self.alpha, (MLTerm(1.0, 1, self.gamma2, self.b),))
        return left.convolve(right)


def ml_convolve(c: MLConvolution, t: npt.ArrayLike) -> FloatOrArray:
    """Evaluates the closed form of an #MLConvolution at t > 0."""

    if np.any(np.asarray(t) <= 0):
        raise DomainError("ml_convolve() requires t > 0")
    return c.trajectory()(t)


def _jacobi_half(alpha: float, outer: MLTerm, inner: MLTerm, t: float, nodes: int) -> float:
    """∫_0^{t/2} outer(t-τ) inner(τ) dτ with τ = (t/2) w^(1/α), integrated by Gauss-Jacobi in w.

    The substitution turns the powers τ^(αr + γ - 1) of the inner kernel into the Jacobi weight w^(γ/α - 1)
    times a polynomial in w.
    """

    half = t / 2.0
    exponent = inner.gamma / alpha - 1.0
    x, weights = roots_jacobi(nodes, 0.0, exponent)
    w = (1.0 + x) / 2.0
    tau = half * w ** (1.0 / alpha)
    # inner(τ) = c τ^(γ-1) E(a τ^α) and τ^(γ-1) dτ = (half^γ / α) w^(γ/α - 1) dw
    smooth = inner.coefficient * np.asarray(prabhakar(alpha, inner.gamma, inner.rho, inner.rate * half**alpha * w))
    values = outer.evaluate(alpha, t - tau) * smooth * half**inner.gamma / alpha
    return float(np.sum(weights * values) * 2.0 ** (-exponent - 1.0))


def quadrature_convolve(c: MLConvolution, t: float, nodes: int = 64) -> float:
    """Evaluates an #MLConvolution by Gauss-Jacobi quadrature of its defining integral; an oracle for
    #ml_convolve(). The integral is split at t/2 and each half is mapped so the singular kernel becomes the
    Jacobi weight."""

    if not t > 0:
        raise DomainError("quadrature_convolve() requires t > 0")
    left = MLTerm(1.0, 1, c.gamma1, c.a)
    right = MLTerm(1.0, 1, c.gamma2, c.b)
    return _jacobi_half(c.alpha, left, right, t, nodes) + _jacobi_half(c.alpha, right, left, t, nodes)


def solve_linear_ml(system: FodeSystem) -> tuple[Trajectory, ...]:
    """Solves an affine Caputo system by forward substitution.

    Every component satisfies d^α A_j = m_jj A_j + g_j(t) with a forcing g_j made of constants and already solved
    components, so A_j = A_j(0) E_α(m_jj t^α) + [t^(α-1) E_{α,α}(m_jj t^α)] ⋆ g_j.

    @raises NotTriangular: If the system is not affine or its off-diagonal couplings contain a cycle.
    """

    if system.time_kind is not DerivKind.CAPUTO:
        raise DomainError("Riemann-Liouville systems are solved with rl_power_ansatz()")
    if system.initial is None:
        raise ValueError("solve_linear_ml() needs initial values")

    matrix, offset = system.rhs.linear_part()
    graph: DiGraph[int] = DiGraph(range(system.dimension))
    for j in range(system.dimension):
        for i in range(system.dimension):
            if i != j and matrix[j, i] != 0.0:
                graph.add_edge(i, j)
    try:
        order = topological_sort(graph)
    except CycleError as exc:
        raise NotTriangular(f"coupled components cannot be solved by forward substitution: {exc}") from exc

    alpha = system.alpha
    solution: dict[int, Trajectory] = {}
    for j in order:
        rate = float(matrix[j, j])
        forcing = Trajectory.constant(alpha, float(offset[j]))
        for i in graph.predecessors(j):
            forcing = forcing + solution[i].scaled(float(matrix[j, i]))
        kernel = Trajectory(alpha, (MLTerm(1.0, 1, alpha, rate),))
        solution[j] = Trajectory.ml(alpha, system.initial[j], rate) + kernel.convolve(forcing)
        logger.debug("Solved component <subj>A%d</subj>: <val>%s</val>", j + 1, solution[j])

    return tuple(solution[j] for j in range(system.dimension))


def frac_adams(system: FodeSystem, t_grid: npt.ArrayLike) -> FloatArray:
    """Integrates a Caputo system with the fractional Adams-Bashforth-Moulton predictor-corrector.

    *t_grid* must be uniform and start at 0. The full history is kept. Returns an array of shape
    `(len(t_grid), dimension)`.

    @raises Divergence: If the solution leaves |A| <= 1e12.
    """

    if system.time_kind is not DerivKind.CAPUTO:
        raise DomainError("frac_adams() integrates Caputo systems only")
    if system.initial is None:
        raise ValueError("frac_adams() needs initial values")
    grid = np.asarray(t_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or grid[0] != 0.0:
        raise ValueError("t_grid must be a one-dimensional grid starting at 0")
    if grid.size > MAX_GRID_NODES:
        raise ValueError(f"t_grid exceeds {MAX_GRID_NODES} nodes")
    h = grid[1] - grid[0]
    if not np.allclose(np.diff(grid), h, rtol=1e-9, atol=0.0):
        raise ValueError("t_grid must be uniform")

    alpha = system.alpha
    n_steps = grid.size - 1
    y0 = np.asarray(system.initial, dtype=float)
    y = np.zeros((grid.size, system.dimension))
    f = np.zeros_like(y)
    y[0] = y0
    f[0] = system.rhs(y0)
    predictor_scale = h**alpha / float(gamma_fn(alpha + 1.0))
    corrector_scale = h**alpha / float(gamma_fn(alpha + 2.0))

    for n in range(n_steps):
        j = np.arange(n + 1, dtype=float)
        b = (n + 1 - j) ** alpha - (n - j) ** alpha
        predicted = y0 + predictor_scale * (b @ f[: n + 1])

        a = (n - j + 2) ** (alpha + 1) + (n - j) ** (alpha + 1) - 2 * (n - j + 1) ** (alpha + 1)
        a[0] = n ** (alpha + 1) - (n - alpha) * (n + 1) ** alpha
        y[n + 1] = y0 + corrector_scale * (system.rhs(predicted) + a @ f[: n + 1])
        if not np.all(np.isfinite(y[n + 1])) or np.max(np.abs(y[n + 1])) > DIVERGENCE_LIMIT:
            raise Divergence(f"solution diverged at t = {grid[n + 1]:g}")
        f[n + 1] = system.rhs(y[n + 1])

    return y


@dataclasses.dataclass(frozen=True)
class PowerAnsatz:
    """Solution A_j(t) = c_j t^(-α) of the three-component Riemann-Liouville system."""

    alpha: float
    coefficients: tuple[float, ...]

    def trajectories(self) -> tuple[Trajectory, ...]:
        return tuple(Trajectory.power(self.alpha, c, -self.alpha) for c in self.coefficients)


def rl_power_ansatz(alpha: float, beta: float, k1: float, k2: float) -> PowerAnsatz:
    """Coefficients c_1..c_6 of the t^(-α) solution of the coupled KdV-type system in the basis {1, x^β} per
    component, using d^α t^(-α) = Γ(1-α)/Γ(1-2α) t^(-2α) (Riemann-Liouville).

    @raises DomainError: If α ∉ (0, 1), α = 1/2 or k2 = 0.
    """

    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if abs(alpha - 0.5) <= 1e-12:
        raise DomainError("the t^(-α) ansatz degenerates at α = 1/2 (Γ(1-2α) has a pole)")
    if k2 == 0:
        raise DomainError("the t^(-α) ansatz requires k2 != 0")
    ratio = float(gamma_fn(1.0 - alpha)) * float(rgamma(1.0 - 2.0 * alpha))
    g = 3.0 * float(gamma_fn(beta + 1.0))
    coefficients = (
        ratio * k1 / (g * k2),
        ratio / g,
        ratio**2 * k1 / (g**2 * k2**2),
        ratio**2 / (g**2 * k2),
        k1,
        k2,
    )
    return PowerAnsatz(alpha, coefficients)
