""" The catalog of exact solution families.

A family couples a governing equation with an invariant subspace and the closed-form coefficient trajectories of
the expansion u_p(x, t) = Σ_j A_j(t) φ_j(x). Families that exist only at classical orders (α = β = 1) carry an
exponential display and delegate their expansion to the fractional family they reduce from.
"""

from __future__ import annotations

import dataclasses
import logging
import math
import typing as t

import numpy as np
import numpy.typing as npt

from fracsub.equations import get_equation
from fracsub.errors import ConfigurationError, DomainError, InadmissibleParams, NoClassicalPair, UnknownFamily
from fracsub.fode import MLTerm, Trajectory, rl_power_ansatz
from fracsub.fracderiv import BasisFunction, Constant, DerivKind, FracOrder, MLExp, Power, evaluate_basis
from fracsub.parameters import Params, ParamValue, coerce, copy_params, indexed, scalar, vector
from fracsub.specfun import FloatArray, gamma_fn
from fracsub.subspace import Condition, OperatorSpec, SubspaceSpec

logger = logging.getLogger(__name__)

Display = t.Callable[[Params, FloatArray, FloatArray], t.List[FloatArray]]

#: Default fractional orders of families that are not pinned by their own domain.
DEFAULT_ORDER = FracOrder(0.75, 0.9)

CLASSICAL = FracOrder(1.0, 1.0)


@dataclasses.dataclass(frozen=True)
class SolutionFamily:
    """An exact solution family of one of the registered equations."""

    id: str
    pde_id: str
    title: str
    component_count: int
    defaults: t.Mapping[str, ParamValue]
    #: Human readable summary of the parameter conditions.
    conditions: str
    rules: t.Callable[[Params], tuple[Condition, ...]]
    subspace_builder: t.Callable[[Params, FracOrder], SubspaceSpec]
    trajectory_builder: t.Callable[[Params, FracOrder], tuple[Trajectory, ...]]
    order: FracOrder = DEFAULT_ORDER
    figure_ids: frozenset[str] = frozenset()
    display: Display | None = None
    classical_only: bool = False
    pair: str | None = None

    @property
    def time_kind(self) -> DerivKind:
        return get_equation(self.pde_id).time_kind

    def params(self, overrides: Params | None = None) -> dict[str, ParamValue]:
        """The default parameters with *overrides* layered on top."""

        merged = copy_params(self.defaults)
        for key, value in (overrides or {}).items():
            merged[key] = coerce(key, value)
        return merged

    def resolve_order(self, alpha: float | None = None, beta: float | None = None) -> FracOrder:
        if self.classical_only:
            return CLASSICAL
        return FracOrder(self.order.alpha if alpha is None else alpha, self.order.beta if beta is None else beta)

    def conditions_for(self, params: Params) -> tuple[Condition, ...]:
        return self.rules(params)

    def violated(self, params: Params, order: FracOrder) -> list[str]:
        return [c.name for c in self.rules(params) if not c.holds(params, order)]

    def check(self, params: Params, order: FracOrder) -> None:
        """@raises InadmissibleParams: naming the first violated condition."""

        violated = self.violated(params, order)
        if violated:
            raise InadmissibleParams(f"{self.id}: condition {violated[0]!r} does not hold")

    def operator(self, params: Params, order: FracOrder) -> OperatorSpec:
        return get_equation(self.pde_id).operator(params, order.beta)

    def subspace(self, params: Params, order: FracOrder) -> SubspaceSpec:
        return self.subspace_builder(params, order)

    def trajectories(self, params: Params, order: FracOrder) -> tuple[Trajectory, ...]:
        return self.trajectory_builder(params, order)


# Helpers


def _g(beta: float, shift: float = 1.0) -> float:
    return float(gamma_fn(beta + shift))


def _ml(order: FracOrder, coefficient: float, rate: float, gamma: float = 1.0) -> Trajectory:
    return Trajectory.ml(order.alpha, coefficient, rate, gamma)


def _const(order: FracOrder, value: float) -> Trajectory:
    return Trajectory.constant(order.alpha, value)


def _power(order: FracOrder, coefficient: float, exponent: float) -> Trajectory:
    return Trajectory.power(order.alpha, coefficient, exponent)


def _kernel(order: FracOrder, rate: float) -> Trajectory:
    """t^(α-1) E_{α,α}(rate · t^α), the response kernel of d^α A = rate · A."""

    return Trajectory(order.alpha, (MLTerm(1.0, 1, order.alpha, rate),))


def _paired(params: Params, coefficients: str, rates: str, extra: int = 0) -> tuple[list[float], list[float]]:
    c, k = vector(params, coefficients), vector(params, rates)
    if len(c) != len(k) + extra:
        raise ConfigurationError(f"expected {len(k) + extra} values for {coefficients!r}, got {len(c)}")
    return c, k


def _no_rules(params: Params) -> tuple[Condition, ...]:
    return ()


def _nonzero(name: str, label: str | None = None) -> Condition:
    return Condition(f"{label or name} != 0", lambda p, o: 0.0 if scalar(p, name) != 0 else 1.0)


def _require_nonzero(params: Params, name: str) -> float:
    value = scalar(params, name)
    if value == 0:
        raise InadmissibleParams(f"the classical display requires {name} != 0")
    return value


# Diffusion-convection


def _e5_rules(params: Params) -> tuple[Condition, ...]:
    n = len(vector(params, "a")) - 1
    return tuple(
        Condition(
            f"a_{r} k = b_{r + 1}",
            lambda p, o, r=r: indexed(p, "a", r) * scalar(p, "k") - indexed(p, "b", r + 1),  # type: ignore[misc]
            knob=f"b[{r + 1}]",
        )
        for r in range(1, n + 1)
    )


def _e5_rate(p: Params) -> float:
    k = scalar(p, "k")
    return indexed(p, "a", 0) * k**2 - indexed(p, "b", 1) * k


def _e6(p: Params, x: FloatArray, t: FloatArray) -> list[FloatArray]:
    return [scalar(p, "k0") * np.exp(_e5_rate(p) * t + scalar(p, "k") * x)]


def _fe6_rate(p: Params) -> float:
    k, a1, k1 = scalar(p, "k"), scalar(p, "a1"), scalar(p, "k1")
    return -(k**2) * a1 * k1 + scalar(p, "a0") * k**2 + k * scalar(p, "b1")


def _fe5(p: Params, x: FloatArray, t: FloatArray) -> list[FloatArray]:
    k = scalar(p, "k")
    return [scalar(p, "k1") + scalar(p, "k2") * np.exp(_fe6_rate(p) * t - k * x)]


def _re4_rates(p: Params) -> list[tuple[float, float]]:
    r, ks = _paired(p, "r", "ks")
    a0, b1 = scalar(p, "a0"), scalar(p, "b1")
    return [(rs, (a0 * k - b1) * k) for rs, k in zip(r, ks)]


def _re3(p: Params, x: FloatArray, t: FloatArray) -> list[FloatArray]:
    total = np.zeros(np.broadcast(x, t).shape)
    for (rs, rate), k in zip(_re4_rates(p), vector(p, "ks")):
        total = total + rs * np.exp(rate * t + k * x)
    return [total]


def _re8_rules(params: Params) -> tuple[Condition, ...]:
    def violation(p: Params, o: FracOrder) -> float:
        k = scalar(p, "k")
        return math.inf if k == 0 else scalar(p, "a1") - scalar(p, "b2") / (2 * k)

    return (Condition("a_1 = b_2 / (2k)", violation, knob="a1"),)


def _re7(p: Params, x: FloatArray, t: FloatArray) -> list[FloatArray]:
    k, k0, k1, b2 = (scalar(p, name) for name in ("k", "k0", "k1", "b2"))
    return [k0 + k1 * np.exp(k * (-b2 / 2 * k0 * t + x))]


# Reaction-diffusion


def _eqsr6_rules(params: Params) -> tuple[Condition, ...]:
    n = len(vector(params, "a")) - 1
    rules = [
        Condition(
            f"a_{i} k = b_{i + 1}",
            lambda p, o, i=i: indexed(p, "a", i) * scalar(p, "k") - indexed(p, "b", i + 1),  # type: ignore[misc]
            knob=f"b[{i + 1}]",
        )
        for i in range(1, n + 1)
    ]
    rules.append(Condition("b_0 = 0", lambda p, o: indexed(p, "b", 0), knob="b[0]"))
    return tuple(rules)


def _eqsr5(p: Params, x: FloatArray, t: FloatArray) -> list[FloatArray]:
    # E_2(-k x²) is cos(√k x) for k >= 0 and cosh(√-k x) otherwise
    k = scalar(p, "k")
    space = np.cos(math.sqrt(k) * x) if k >= 0 else np.cosh(math.sqrt(-k) * x)
    rate = -k * indexed(p, "a", 0) + indexed(p, "b", 1)
    return [scalar(p, "k0") * np.exp(rate * t) * space]


def _rppp1_rules(params: Params) -> tuple[Condition, ...]:
    return (Condition("b_2 = a_1 k", lambda p, o: scalar(p, "b2") - scalar(p, "a1") * scalar(p, "k"), knob="b2"),)


def _sr7_trajectories(p: Params, o: FracOrder) -> tuple[Trajectory, ...]:
    lam, kr = _paired(p, "lam", "kr", extra=3)
    c, k = scalar(p, "c"), scalar(p, "k")
    source = _kernel(o, -k).convolve(_ml(o, 1.0, -k)).scaled(c * lam[2] * _g(o.beta, 2.0))
    return (
        _ml(o, lam[0], -k) + source,
        _ml(o, lam[1], -k),
        _ml(o, lam[2], -k),
        *(_ml(o, lr, kk * c - k) for lr, kk in zip(lam[3:], kr)),
    )


def _sr8_trajectories(p: Params, o: FracOrder) -> tuple[Trajectory, ...]:
    lam, kr = _paired(p, "lam", "kr", extra=3)
    c = scalar(p, "c")
    return (
        _const(o, lam[0]) + _power(o, c * lam[2] * _g(o.beta, 2.0) / _g(o.alpha), o.alpha),
        _const(o, lam[1]),
        _const(o, lam[2]),
        *(_ml(o, lr, kk * c) for lr, kk in zip(lam[3:], kr)),
    )


def _polynomial_ml_subspace(params: Params, o: FracOrder) -> SubspaceSpec:
    _, kr = _paired(params, "lam", "kr", extra=3)
    basis: list[BasisFunction] = [Constant(), Power(o.beta), Power(o.beta + 1.0)]
    basis += [MLExp(o.beta + 1.0, k) for k in kr]
    return SubspaceSpec((tuple(basis),))


# Diffusion with source


def _ds6_rules(params: Params) -> tuple[Condition, ...]:
    n = len(vector(params, "a")) - 1
    return tuple(
        Condition(
            f"{i + 1} a_{i} k^2 = -b_{i + 1}",
            lambda p, o, i=i: (i + 1) * indexed(p, "a", i) * scalar(p, "k") ** 2  # type: ignore[misc]
            + indexed(p, "b", i + 1),
            knob=f"b[{i + 1}]",
        )
        for i in range(1, n + 1)
    )


def _ds6_rate(p: Params) -> float:
    return indexed(p, "a", 0) * scalar(p, "k") ** 2 + indexed(p, "b", 1)


def _ds4(p: Params, x: FloatArray, t: FloatArray) -> list[FloatArray]:
    return [scalar(p, "k0") * np.exp(_ds6_rate(p) * t + scalar(p, "k") * x)]


def _ds_subspace(params: Params, o: FracOrder) -> SubspaceSpec:
    _, kr = _paired(params, "c", "kr", extra=2)
    basis: list[BasisFunction] = [Constant(), Power(o.beta)]
    basis += [MLExp(o.beta, k) for k in kr]
    return SubspaceSpec((tuple(basis),))


def _ds_trajectories(p: Params, o: FracOrder, b0: float) -> tuple[Trajectory, ...]:
    c, kr = _paired(p, "c", "kr", extra=2)
    a0, b1 = scalar(p, "a0"), scalar(p, "b1")
    return (
        _ml(o, c[0], b1) + Trajectory(o.alpha, (MLTerm(b0, 1, o.alpha + 1.0, b1),)),
        _ml(o, c[1], b1),
        *(_ml(o, cr, b1 + a0 * k**2) for cr, k in zip(c[2:], kr)),
    )


# Coupled diffusion system


def _cc8_trajectories(p: Params, o: FracOrder) -> tuple[Trajectory, ...]:
    k, lam, gam, delta = (scalar(p, name) for name in ("k", "lam", "gam", "delta"))
    a1, a2, a3, a4 = (scalar(p, name) for name in ("a1", "a2", "a3", "a4"))
    coupling = _kernel(o, k**2 + delta).convolve(_ml(o, 1.0, k**2)).scaled(lam * k**2 + gam)
    return (
        _ml(o, a1, k**2),
        _ml(o, a2, k**2),
        _ml(o, a3, k**2 + delta) + coupling.scaled(a1),
        _ml(o, a4, k**2 + delta) + coupling.scaled(a2),
    )


def _cc7(p: Params, x: FloatArray, t: FloatArray) -> list[FloatArray]:
    k, lam, gam = scalar(p, "k"), scalar(p, "lam"), scalar(p, "gam")
    delta = _require_nonzero(p, "delta")
    a1, a2, a3, a4 = (scalar(p, name) for name in ("a1", "a2", "a3", "a4"))
    grow = (np.exp(delta * t) - 1) / delta
    u1 = np.exp(k**2 * t) * (a1 * np.exp(k * x) + a2 * np.exp(-k * x))
    u2 = (a3 * np.exp(delta * t) + (lam * k**2 + gam) * a1 * grow) * np.exp(k * (k * t + x)) + (
        a4 * np.exp(delta * t) + (lam * k**2 + gam) * a2 * grow
    ) * np.exp(k * (k * t - x))
    return [u1, u2]


def _cc10_trajectories(p: Params, o: FracOrder) -> tuple[Trajectory, ...]:
    k1, k2, k3, k4 = (scalar(p, name) for name in ("k1", "k2", "k3", "k4"))
    mu, rho, gam, delta = (scalar(p, name) for name in ("mu", "rho", "gam", "delta"))
    a4 = _ml(o, k4, delta) + _ml(o, gam * k2, delta, gamma=o.alpha + 1.0)
    a1 = _const(o, k1) + a4.integral().scaled(_g(o.beta) ** 2 * (rho + mu) * k2)
    a3 = _ml(o, k3, delta) + _kernel(o, delta).convolve(a1).scaled(gam)
    return (a1, _const(o, k2), a3, a4)


def _cc9(p: Params, x: FloatArray, t: FloatArray) -> list[FloatArray]:
    k1, k2, k3, k4 = (scalar(p, name) for name in ("k1", "k2", "k3", "k4"))
    mu, rho, gam = scalar(p, "mu"), scalar(p, "rho"), scalar(p, "gam")
    d = _require_nonzero(p, "delta")
    e = np.exp(d * t)
    u1 = k1 + (rho + mu) * k2 * (k4 / d * (e - 1) + gam * k2 / d**2 * (e - 1 - d * t)) + k2 * x
    u2 = (
        k3 * e
        + k1 * gam / d * (e - 1)
        + (k4 * e + gam * k2 / d * (e - 1)) * x
        + gam * (rho + mu) * k2 / d**2 * (k4 * (d * t * e - e + 1) + gam * k2 / d * (2 - 2 * e + d * t + d * t * e))
    )
    return [u1, u2]


def _polynomial_pair(o: FracOrder, components: int) -> SubspaceSpec:
    return SubspaceSpec(((Constant(), Power(o.beta)),) * components)


# Gas flow system


def _eqcs_trajectories(p: Params, o: FracOrder) -> tuple[Trajectory, ...]:
    k1, k2, k3, k4 = (scalar(p, name) for name in ("k1", "k2", "k3", "k4"))
    g, a = _g(o.beta), o.alpha

    def term(coefficient: float, j: int) -> Trajectory:
        return _power(o, coefficient * g**j / _g(j * a), j * a)

    return (
        _const(o, k1) + term(k4, 1) + term(-(k2**2), 2),
        _const(o, k2),
        _const(o, k3) + term(-k1 * k2, 1) + term(-k2 * k4, 2) + term(k2**3, 3),
        _const(o, k4) + term(-(k2**2), 1),
    )


def _eqc7(p: Params, x: FloatArray, t: FloatArray) -> list[FloatArray]:
    k1, k2, k3, k4 = (scalar(p, name) for name in ("k1", "k2", "k3", "k4"))
    u1 = k1 + k4 * t - k2**2 * t**2 / 2 + k2 * x
    u2 = k3 - k2 * (k1 + k4 / 2 * t - k2**2 / 6 * t**2) * t + (k4 - k2**2 * t) * x
    return [u1, u2]


def _3s2_rules(params: Params) -> tuple[Condition, ...]:
    return (
        Condition("alpha < 1", lambda p, o: 0.0 if o.alpha < 1 else 1.0),
        Condition("alpha != 1/2", lambda p, o: 0.0 if abs(o.alpha - 0.5) > 1e-12 else 1.0),
        _nonzero("k2", "k_2"),
    )


def _3s2_trajectories(p: Params, o: FracOrder) -> tuple[Trajectory, ...]:
    return rl_power_ansatz(o.alpha, o.beta, scalar(p, "k1"), scalar(p, "k2")).trajectories()


def _single(*basis: t.Callable[[Params, FracOrder], BasisFunction]) -> t.Callable[[Params, FracOrder], SubspaceSpec]:
    return lambda p, o: SubspaceSpec((tuple(b(p, o) for b in basis),))


def _one(p: Params, o: FracOrder) -> BasisFunction:
    return Constant()


def _xb(p: Params, o: FracOrder) -> BasisFunction:
    return Power(o.beta)


_FAMILIES = [
    SolutionFamily(
        id="E5",
        pde_id="E2",
        title="Mittag-Leffler separable solution of the diffusion-convection equation",
        component_count=1,
        defaults={"a": [2.0, 1.0], "b": [0.0, 1.0, 1.0], "k": 1.0, "k0": 1.0},
        conditions="a_r k = b_{r+1}, r=1..n",
        rules=_e5_rules,
        subspace_builder=_single(lambda p, o: MLExp(o.beta, scalar(p, "k"))),
        trajectory_builder=lambda p, o: (_ml(o, scalar(p, "k0"), _e5_rate(p)),),
        figure_ids=frozenset({"a"}),
        display=_e6,
    ),
    SolutionFamily(
        id="FE6",
        pde_id="FE1",
        title="constant plus Mittag-Leffler mode of the quadratic convection equation",
        component_count=1,
        defaults={"k1": -1.0, "a1": 2.0, "a0": 0.0, "k2": 1.0, "k": 1.0, "b1": 1.0},
        conditions="k != 0",
        rules=lambda p: (_nonzero("k"),),
        subspace_builder=_single(_one, lambda p, o: MLExp(o.beta, -scalar(p, "k"))),
        trajectory_builder=lambda p, o: (_const(o, scalar(p, "k1")), _ml(o, scalar(p, "k2"), _fe6_rate(p))),
        figure_ids=frozenset({"b"}),
        display=_fe5,
    ),
    SolutionFamily(
        id="RE4",
        pde_id="RE1",
        title="superposition of Mittag-Leffler modes of the linear diffusion-convection equation",
        component_count=1,
        defaults={"a0": 1.0, "b1": 0.5, "r": [1.0, 0.5], "ks": [1.0, -0.5]},
        conditions="none",
        rules=_no_rules,
        subspace_builder=lambda p, o: SubspaceSpec((tuple(MLExp(o.beta, k) for k in vector(p, "ks")),)),
        trajectory_builder=lambda p, o: tuple(_ml(o, rs, rate) for rs, rate in _re4_rates(p)),
        display=_re3,
    ),
    SolutionFamily(
        id="REE4",
        pde_id="RE1",
        title="affine drift plus Mittag-Leffler modes of the linear diffusion-convection equation",
        component_count=1,
        defaults={"c1": 1.0, "c2": 1.0, "a0": 1.0, "b1": 0.5, "r": [1.0, 0.5], "ks": [1.0, -0.5]},
        conditions="none",
        rules=_no_rules,
        subspace_builder=lambda p, o: SubspaceSpec(
            ((Constant(), Power(o.beta), *(MLExp(o.beta, k) for k in vector(p, "ks"))),)
        ),
        trajectory_builder=lambda p, o: (
            _const(o, scalar(p, "c1"))
            + _power(o, -scalar(p, "c2") * scalar(p, "b1") * _g(o.beta) / _g(o.alpha), o.alpha),
            _const(o, scalar(p, "c2")),
            *(_ml(o, rs, rate) for rs, rate in _re4_rates(p)),
        ),
    ),
    SolutionFamily(
        id="RE8",
        pde_id="RE5",
        title="constant plus Mittag-Leffler mode of the nonlinear diffusion-convection equation",
        component_count=1,
        defaults={"k": 1.0, "k0": 1.0, "k1": 1.0, "b2": 1.0, "a1": 0.5},
        conditions="a_1 = b_2 / (2k)",
        rules=_re8_rules,
        subspace_builder=_single(_one, lambda p, o: MLExp(o.beta, scalar(p, "k"))),
        trajectory_builder=lambda p, o: (
            _const(o, scalar(p, "k0")),
            _ml(o, scalar(p, "k1"), -scalar(p, "b2") / 2 * scalar(p, "k") * scalar(p, "k0")),
        ),
        figure_ids=frozenset({"c"}),
        display=_re7,
    ),
    SolutionFamily(
        id="RPP",
        pde_id="RE9",
        title="polynomial solution of the nonlinear diffusion equation",
        component_count=1,
        defaults={"k0": 1.0, "k1": 1.0},
        conditions="none",
        rules=_no_rules,
        subspace_builder=_single(_one, _xb),
        trajectory_builder=lambda p, o: (
            _const(o, scalar(p, "k0")) + _power(o, scalar(p, "k1") ** 2 * _g(o.beta) ** 2 / _g(o.alpha), o.alpha),
            _const(o, scalar(p, "k1")),
        ),
        figure_ids=frozenset({"d"}),
    ),
    SolutionFamily(
        id="eqsr6",
        pde_id="eqsr2",
        title="Mittag-Leffler separable solution of the reaction-diffusion equation",
        component_count=1,
        defaults={"a": [-1.0, 1.0], "b": [0.0, 1.0, 1.0], "k": 1.0, "k0": 2.0},
        conditions="a_i k = b_{i+1}, i=1..n; b_0 = 0",
        rules=_eqsr6_rules,
        subspace_builder=_single(lambda p, o: MLExp(o.beta + 1.0, -scalar(p, "k"))),
        trajectory_builder=lambda p, o: (
            _ml(o, scalar(p, "k0"), -scalar(p, "k") * indexed(p, "a", 0) + indexed(p, "b", 1)),
        ),
        figure_ids=frozenset({"e"}),
        display=_eqsr5,
    ),
    SolutionFamily(
        id="RPPP1",
        pde_id="eqsr7",
        title="Mittag-Leffler separable solution of the quadratic reaction-diffusion equation",
        component_count=1,
        defaults={"k1": 1.0, "b1": -4.0, "k": 2.0, "a1": 1.0, "b2": 2.0},
        conditions="b_2 = a_1 k",
        rules=_rppp1_rules,
        subspace_builder=_single(lambda p, o: MLExp(o.beta + 1.0, -scalar(p, "k"))),
        trajectory_builder=lambda p, o: (_ml(o, scalar(p, "k1"), scalar(p, "b1")),),
        figure_ids=frozenset({"f"}),
    ),
    SolutionFamily(
        id="RPPP2",
        pde_id="eqsr8",
        title="relaxing polynomial solution of the reaction-diffusion equation with source",
        component_count=1,
        defaults={"k1": 1.0, "k2": 1.0, "b0": 0.0, "k": 2.0},
        conditions="none",
        rules=_no_rules,
        subspace_builder=_single(_one, _xb),
        trajectory_builder=lambda p, o: (
            _ml(o, scalar(p, "k1"), -scalar(p, "k")) + _ml(o, scalar(p, "b0"), -scalar(p, "k"), o.alpha + 1.0),
            _ml(o, scalar(p, "k2"), -scalar(p, "k")),
        ),
        figure_ids=frozenset({"g"}),
    ),
    SolutionFamily(
        id="sr7",
        pde_id="eqsr9",
        title="general solution of the linear reaction-diffusion equation",
        component_count=1,
        defaults={"c": 1.0, "k": 1.0, "lam": [1.0, 1.0, 1.0, 1.0], "kr": [1.0]},
        conditions="none",
        rules=_no_rules,
        subspace_builder=_polynomial_ml_subspace,
        trajectory_builder=_sr7_trajectories,
    ),
    SolutionFamily(
        id="sr8",
        pde_id="eqsr10",
        title="general solution of the linear sub-diffusion equation",
        component_count=1,
        defaults={"c": 1.0, "lam": [1.0, 1.0, 1.0, 1.0], "kr": [1.0]},
        conditions="none",
        rules=_no_rules,
        subspace_builder=_polynomial_ml_subspace,
        trajectory_builder=_sr8_trajectories,
        figure_ids=frozenset({"h"}),
    ),
    SolutionFamily(
        id="DS6",
        pde_id="DS2",
        title="Mittag-Leffler separable solution of the diffusion equation with source",
        component_count=1,
        defaults={"a": [0.0, 1.0], "b": [0.0, 1.0, -8.0], "k": 2.0, "k0": 1.0},
        conditions="(i+1) a_i k^2 = -b_{i+1}, i=1..n",
        rules=_ds6_rules,
        subspace_builder=_single(lambda p, o: MLExp(o.beta, scalar(p, "k"))),
        trajectory_builder=lambda p, o: (_ml(o, scalar(p, "k0"), _ds6_rate(p)),),
        figure_ids=frozenset({"i"}),
        display=_ds4,
    ),
    SolutionFamily(
        id="DS10",
        pde_id="DS7",
        title="general solution of the linear diffusion equation with affine source",
        component_count=1,
        defaults={"c": [1.0, 1.0, 1.0], "kr": [1.0], "a0": 1.0, "b0": 1.0, "b1": 1.0},
        conditions="none",
        rules=_no_rules,
        subspace_builder=_ds_subspace,
        trajectory_builder=lambda p, o: _ds_trajectories(p, o, scalar(p, "b0")),
        figure_ids=frozenset({"j"}),
    ),
    SolutionFamily(
        id="DS11",
        pde_id="DS8",
        title="general solution of the linear diffusion equation with linear source",
        component_count=1,
        defaults={"c": [1.0, 1.0, 1.0], "kr": [1.0], "a0": 1.0, "b1": 1.0},
        conditions="none",
        rules=_no_rules,
        subspace_builder=_ds_subspace,
        trajectory_builder=lambda p, o: _ds_trajectories(p, o, 0.0),
    ),
    SolutionFamily(
        id="cc8",
        pde_id="cc1",
        title="Mittag-Leffler modes of the coupled diffusion system",
        component_count=2,
        defaults={
            "k": 1.0,
            "a1": 1.0,
            "a2": 1.0,
            "a3": 1.0,
            "a4": 1.0,
            "delta": 1.0,
            "lam": 1.0,
            "gam": -1.0,
            "mu": -1.0,
            "rho": 1.0,
        },
        conditions="mu = -rho",
        rules=lambda p: (
            Condition("mu = -rho", lambda q, o: scalar(q, "mu") + scalar(q, "rho"), knob="mu"),
        ),
        subspace_builder=lambda p, o: SubspaceSpec(
            ((MLExp(o.beta, scalar(p, "k")), MLExp(o.beta, -scalar(p, "k"))),) * 2
        ),
        trajectory_builder=_cc8_trajectories,
        figure_ids=frozenset({"k", "l"}),
        display=_cc7,
    ),
    SolutionFamily(
        id="cc10",
        pde_id="cc1",
        title="polynomial solution of the coupled diffusion system",
        component_count=2,
        defaults={
            "k1": 1.0,
            "k2": 1.0,
            "k3": 1.0,
            "k4": 1.0,
            "rho": 1.0,
            "mu": -1.0,
            "delta": 1.0,
            "gam": 1.0,
            "lam": 1.0,
        },
        conditions="none",
        rules=_no_rules,
        subspace_builder=lambda p, o: _polynomial_pair(o, 2),
        trajectory_builder=_cc10_trajectories,
        figure_ids=frozenset({"m", "n"}),
        display=_cc9,
    ),
    SolutionFamily(
        id="eqcs",
        pde_id="eqc1",
        title="polynomial solution of the transonic gas flow system",
        component_count=2,
        defaults={"k1": 2.0, "k2": 1.0, "k3": 1.0, "k4": 1.0},
        conditions="none",
        rules=_no_rules,
        subspace_builder=lambda p, o: _polynomial_pair(o, 2),
        trajectory_builder=_eqcs_trajectories,
        figure_ids=frozenset({"o", "p"}),
        display=_eqc7,
    ),
    SolutionFamily(
        id="3s2",
        pde_id="gkdv",
        title="power-law solution of the Hirota-Satsuma KdV system (Riemann-Liouville in time)",
        component_count=3,
        defaults={"k1": 2.0, "k2": 1.0},
        conditions="alpha in (0,1) without 1/2; k_2 != 0",
        rules=_3s2_rules,
        subspace_builder=lambda p, o: _polynomial_pair(o, 3),
        trajectory_builder=_3s2_trajectories,
        order=FracOrder(0.25, 0.8),
        figure_ids=frozenset({"q", "r", "s"}),
    ),
]


def _classical(family_id: str, pair: SolutionFamily, title: str) -> SolutionFamily:
    assert pair.display is not None, pair.id
    return dataclasses.replace(
        pair,
        id=family_id,
        title=title,
        order=CLASSICAL,
        figure_ids=frozenset(),
        classical_only=True,
        pair=pair.id,
    )


def _build_registry() -> dict[str, SolutionFamily]:
    families = {f.id: f for f in _FAMILIES}
    classical = [
        ("RE3", "RE4", "exponential modes of the linear diffusion-convection equation"),
        ("RE7", "RE8", "constant plus exponential mode of the nonlinear diffusion-convection equation"),
        ("eqsr5", "eqsr6", "separable classical solution of the reaction-diffusion equation"),
        ("DS4", "DS6", "exponential solution of the diffusion equation with source"),
        ("cc7", "cc8", "exponential modes of the coupled diffusion system"),
        ("cc9", "cc10", "classical polynomial solution of the coupled diffusion system"),
        ("eqc7", "eqcs", "classical polynomial solution of the transonic gas flow system"),
    ]
    for family_id, pair_id, title in classical:
        families[family_id] = _classical(family_id, families[pair_id], title)
        families[pair_id] = dataclasses.replace(families[pair_id], pair=family_id)
    order = [
        "E5", "FE6", "RE3", "RE4", "REE4", "RE7", "RE8", "RPP", "eqsr5", "eqsr6", "RPPP1", "RPPP2", "sr7", "sr8",
        "DS4", "DS6", "DS10", "DS11", "cc7", "cc8", "cc9", "cc10", "eqc7", "eqcs", "3s2",
    ]  # fmt: skip
    return {family_id: families[family_id] for family_id in order}


FAMILIES = _build_registry()


def list_families() -> list[SolutionFamily]:
    return list(FAMILIES.values())


def lookup(family_id: str) -> SolutionFamily:
    try:
        return FAMILIES[family_id]
    except KeyError:
        raise UnknownFamily(f"unknown solution family {family_id!r}")


def _points(x: npt.ArrayLike, t: npt.ArrayLike, closed: bool = False) -> tuple[FloatArray, FloatArray]:
    xs, ts = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    if closed:
        if np.any(ts < 0):
            raise DomainError("classical solutions are evaluated at t >= 0")
    elif np.any(xs <= 0) or np.any(ts <= 0):
        raise DomainError("solutions are evaluated at x > 0 and t > 0")
    return xs, ts


def expand(
    family: SolutionFamily, params: Params, order: FracOrder, x: npt.ArrayLike, t: npt.ArrayLike
) -> list[FloatArray]:
    """Evaluates Σ_j A_j(t) φ_j(x) per component without checking any condition."""

    xs, ts = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    ss = family.subspace(params, order)
    trajectories = family.trajectories(params, order)
    if len(trajectories) != ss.dimension:
        raise RuntimeError(f"{family.id}: {len(trajectories)} trajectories for a {ss.dimension}-dimensional space")
    values = []
    for p, basis in enumerate(ss.components):
        total = np.zeros(xs.shape)
        for j, b in enumerate(basis):
            total = total + np.asarray(trajectories[ss.offset(p) + j](ts)) * ss.weight(p, j) * evaluate_basis(b, xs)
        values.append(total)
    return values


def eval_solution(
    family: SolutionFamily,
    x: npt.ArrayLike,
    t: npt.ArrayLike,
    params: Params | None = None,
    alpha: float | None = None,
    beta: float | None = None,
) -> list[FloatArray]:
    """Evaluates every component of the family at (x, t) with x, t > 0; arrays broadcast.

    Classical families evaluate their exponential display at α = β = 1.

    @raises InadmissibleParams: If a condition of the family is violated.
    """

    merged = family.params(params)
    order = family.resolve_order(alpha, beta)
    family.check(merged, order)
    xs, ts = _points(x, t)
    logger.debug("Evaluating <subj>%s</subj> at <val>%s</val> on <val>%d</val> points", family.id, order, xs.size)
    if family.classical_only:
        assert family.display is not None
        return family.display(merged, xs, ts)
    return expand(family, merged, order, xs, ts)


def classical_limit(
    family: SolutionFamily, x: npt.ArrayLike, t: npt.ArrayLike, params: Params | None = None
) -> list[FloatArray]:
    """Evaluates the α = β = 1 display paired with the family, independently of any Mittag-Leffler evaluation.

    @raises NoClassicalPair: If the family is only stated at fractional orders.
    """

    if family.display is None:
        raise NoClassicalPair(f"{family.id} has no classical counterpart")
    merged = family.params(params)
    family.check(merged, CLASSICAL)
    xs, ts = _points(x, t, closed=True)
    return family.display(merged, xs, ts)
