""" Fractional derivatives: closed-form rules on the basis functions used by the invariant subspaces, and grid
schemes (L1, Grünwald-Letnikov, finite differences) that serve as an independent numerical check. """

from __future__ import annotations

import dataclasses
import enum
import logging
import math
import typing as t

import numpy as np
import numpy.typing as npt
import typing_extensions as te
from scipy.signal import fftconvolve

from fracsub.errors import DomainError, NoClosedRule
from fracsub.specfun import FloatArray, FloatOrArray, MLParams, gamma_fn, mittag_leffler, rgamma

logger = logging.getLogger(__name__)

#: Exponents and orders closer than this are considered equal.
ORDER_TOLERANCE = 1e-12


class DerivKind(enum.Enum):
    CAPUTO = "caputo"
    RIEMANN_LIOUVILLE = "riemann-liouville"


@dataclasses.dataclass(frozen=True)
class FracOrder:
    """The time order α and the space order β of a time-space fractional equation."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        for name, value in (("alpha", self.alpha), ("beta", self.beta)):
            if not 0 < value <= 1:
                raise DomainError(f"{name} must lie in (0, 1], got {value}")

    @property
    def is_classical(self) -> bool:
        return self.alpha == 1.0 and self.beta == 1.0

    def __str__(self) -> str:
        return f"α={self.alpha:g}, β={self.beta:g}"


@dataclasses.dataclass(frozen=True)
class Constant:
    def __str__(self) -> str:
        return "1"


@dataclasses.dataclass(frozen=True)
class Power:
    """The function x^exponent."""

    exponent: float

    def __str__(self) -> str:
        return f"x^{self.exponent:g}"


@dataclasses.dataclass(frozen=True)
class MLExp:
    """The function E_order(rate · x^order), eigenfunction of the Caputo derivative of the same order."""

    order: float
    rate: float

    def __post_init__(self) -> None:
        if not self.order > 0:
            raise DomainError(f"MLExp order must be positive, got {self.order}")

    def __str__(self) -> str:
        return f"E_{self.order:g}({self.rate:g}*x^{self.order:g})"


BasisFunction: te.TypeAlias = t.Union[Constant, Power, MLExp]

#: A finite linear combination of basis functions.
Combination: te.TypeAlias = t.Dict[BasisFunction, float]


def evaluate_basis(b: BasisFunction, x: npt.ArrayLike) -> FloatArray:
    points = np.asarray(x, dtype=float)
    if isinstance(b, Constant):
        return np.ones_like(points)
    if isinstance(b, Power):
        if b.exponent == 0:
            return np.ones_like(points)
        with np.errstate(divide="ignore"):
            return np.power(points, b.exponent)  # type: ignore[no-any-return]
    return np.asarray(mittag_leffler(MLParams(b.order), b.rate * np.power(points, b.order)))


def evaluate_combination(combination: t.Mapping[BasisFunction, float], x: npt.ArrayLike) -> FloatArray:
    points = np.asarray(x, dtype=float)
    total = np.zeros_like(points)
    for b, coefficient in combination.items():
        if coefficient != 0.0:
            total = total + coefficient * evaluate_basis(b, points)
    return total


def power_coefficient(kind: DerivKind, order: float, mu: float) -> float:
    """The factor Γ(μ+1)/Γ(μ-order+1) of the power rule; zero on the Caputo integer branch and at Γ poles."""

    if kind is DerivKind.CAPUTO:
        if mu < 0:
            raise DomainError(f"the Caputo power rule is not valid for negative exponent {mu:g}")
        if mu == math.floor(mu) and mu < math.ceil(order):
            return 0.0
    elif mu <= -1:
        raise DomainError(f"the Riemann-Liouville power rule requires exponent > -1, got {mu:g}")
    return float(gamma_fn(mu + 1.0)) * float(rgamma(mu - order + 1.0))


def power_rule(kind: DerivKind, alpha: float, mu: float, t: npt.ArrayLike) -> FloatOrArray:
    """Derivative of order *alpha* of t^μ: Γ(μ+1)/Γ(μ-α+1) · t^(μ-α)."""

    if not alpha > 0:
        raise DomainError(f"derivative order must be positive, got {alpha}")
    coefficient = power_coefficient(kind, alpha, mu)
    times = np.asarray(t, dtype=float)
    if coefficient == 0.0:
        return float(0.0) if times.ndim == 0 else np.zeros_like(times)
    exponent = mu - alpha
    if np.any(times <= 0) and exponent != math.floor(exponent):
        raise DomainError("power_rule() requires t > 0 for non-integer exponents")
    values = coefficient * np.power(times, exponent)
    return float(values) if times.ndim == 0 else values


def basis_derivative(b: BasisFunction, kind: DerivKind, order: float) -> Combination:
    """Closed-form derivative of a basis function.

    Constants and powers follow the power rule as long as the result stays a constant or a non-negative power
    (powers whose coefficient hits a Gamma pole vanish). Mittag-Leffler exponentials are Caputo eigenfunctions of
    their own order.

    Raises:
        NoClosedRule: If the result leaves the basis family.
    """

    if not order > 0:
        raise DomainError(f"derivative order must be positive, got {order}")

    if isinstance(b, MLExp):
        if kind is DerivKind.CAPUTO and abs(order - b.order) <= ORDER_TOLERANCE:
            return {b: b.rate} if b.rate != 0.0 else {}
        raise NoClosedRule(f"no closed rule for the {kind.value} derivative of order {order:g} of {b}")

    mu = 0.0 if isinstance(b, Constant) else b.exponent
    try:
        coefficient = power_coefficient(kind, order, mu)
    except DomainError as exc:
        raise NoClosedRule(str(exc)) from exc
    if coefficient == 0.0:
        return {}
    exponent = round(mu - order, 12)
    if abs(exponent) <= ORDER_TOLERANCE:
        return {Constant(): coefficient}
    if exponent < 0 and kind is DerivKind.CAPUTO:
        raise NoClosedRule(f"the order {order:g} Caputo derivative of {b} is singular at the origin")
    return {Power(exponent): coefficient}


def derive(combination: t.Mapping[BasisFunction, float], kind: DerivKind, order: float) -> Combination:
    """Applies #basis_derivative() linearly to a combination."""

    result: Combination = {}
    for b, coefficient in combination.items():
        if coefficient == 0.0:
            continue
        for image, factor in basis_derivative(b, kind, order).items():
            result[image] = result.get(image, 0.0) + coefficient * factor
    return result


def derive_sequentially(
    combination: t.Mapping[BasisFunction, float], kind: DerivKind, orders: t.Sequence[float]
) -> Combination:
    """Applies derivatives one after the other, D^{orders[-1]}(...(D^{orders[0]} u))."""

    result = dict(combination)
    for order in orders:
        result = derive(result, kind, order)
    return result


# Grid schemes


def _check_order(alpha: float) -> None:
    if not 0 < alpha < 1:
        raise DomainError(f"scheme order must lie in (0, 1), got {alpha}")


def _as_column_kernel(kernel: FloatArray, ndim: int) -> FloatArray:
    return kernel.reshape((-1,) + (1,) * (ndim - 1))


def _l1(samples: FloatArray, h: float, alpha: float) -> FloatArray:
    differences = np.diff(samples, axis=0)
    n = differences.shape[0]
    j = np.arange(n, dtype=float)
    weights = (j + 1) ** (1 - alpha) - j ** (1 - alpha)
    history = fftconvolve(_as_column_kernel(weights, differences.ndim), differences, axes=0)[:n]
    return history * (h ** (-alpha) * float(rgamma(2 - alpha)))  # type: ignore[no-any-return]


def _correction_powers(powers: t.Iterable[float]) -> list[float]:
    result: list[float] = []
    for sigma in sorted(powers):
        if sigma <= 0 or (sigma <= 1 and sigma == round(sigma)):
            continue
        if any(abs(sigma - other) <= 1e-9 for other in result):
            continue
        result.append(sigma)
    return result


def l1_caputo(
    samples: npt.ArrayLike, h: float, alpha: float, singular_powers: t.Iterable[float] = ()
) -> FloatArray:
    """L1 discretization of the Caputo derivative of order *alpha* ∈ (0, 1).

    *samples* holds the values of f at t_j = j·h, j = 0..N, along axis 0 (further axes are differentiated
    independently). The result holds the derivative at the nodes 1..N. The scheme is O(h^(2-α)) for smooth f;
    passing the non-integer powers t^σ that f contains near the origin adds starting weights that make the scheme
    exact on those powers.
    """

    _check_order(alpha)
    values = np.asarray(samples, dtype=float)
    if values.shape[0] < 3:
        raise DomainError("l1_caputo() requires at least 3 grid points")
    if not h > 0:
        raise DomainError(f"grid spacing must be positive, got {h}")

    result = _l1(values, h, alpha)
    powers = _correction_powers(singular_powers)[: values.shape[0] - 1]
    if not powers:
        return result

    n = values.shape[0] - 1
    nodes = h * np.arange(n + 1, dtype=float)
    m = len(powers)
    vandermonde = np.array([[(k * h) ** sigma for k in range(1, m + 1)] for sigma in powers])
    residuals = np.array(
        [
            power_coefficient(DerivKind.CAPUTO, alpha, s) * nodes[1:] ** (s - alpha) - _l1(nodes**s, h, alpha)
            for s in powers
        ]
    )
    weights = np.linalg.solve(vandermonde, residuals)  # m × n
    starting = values[1 : m + 1] - values[0]
    return result + np.tensordot(weights.T, starting, axes=1)  # type: ignore[no-any-return]


def gl_riemann_liouville(samples: npt.ArrayLike, h: float, alpha: float) -> FloatArray:
    """Grünwald-Letnikov approximation of the Riemann-Liouville derivative of order *alpha* ∈ (0, 1).

    Returns values at every node 0..N. The method is first order accurate; non-finite samples (an integrable
    singularity at the base point) contribute nothing.
    """

    _check_order(alpha)
    values = np.asarray(samples, dtype=float)
    values = np.where(np.isfinite(values), values, 0.0)
    n = values.shape[0]
    k = np.arange(1, n, dtype=float)
    weights = np.concatenate([[1.0], np.cumprod((k - alpha - 1) / k)])
    history = fftconvolve(_as_column_kernel(weights, values.ndim), values, axes=0)[:n]
    return history * h ** (-alpha)  # type: ignore[no-any-return]


def finite_difference(samples: npt.ArrayLike, h: float, order: int) -> FloatArray:
    """Fourth-order finite differences for the first or second derivative along axis 0."""

    f = np.asarray(samples, dtype=float)
    if f.shape[0] < 6:
        raise DomainError("finite_difference() requires at least 6 grid points")
    out = np.empty_like(f)
    if order == 1:
        out[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
        out[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h)
        out[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h)
        out[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12 * h)
        out[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12 * h)
    elif order == 2:
        h2 = 12 * h * h
        out[2:-2] = (-f[:-4] + 16 * f[1:-3] - 30 * f[2:-2] + 16 * f[3:-1] - f[4:]) / h2
        out[0] = (45 * f[0] - 154 * f[1] + 214 * f[2] - 156 * f[3] + 61 * f[4] - 10 * f[5]) / h2
        out[1] = (10 * f[0] - 15 * f[1] - 4 * f[2] + 14 * f[3] - 6 * f[4] + f[5]) / h2
        out[-1] = (45 * f[-1] - 154 * f[-2] + 214 * f[-3] - 156 * f[-4] + 61 * f[-5] - 10 * f[-6]) / h2
        out[-2] = (10 * f[-1] - 15 * f[-2] - 4 * f[-3] + 14 * f[-4] - 6 * f[-5] + f[-6]) / h2
    else:
        raise DomainError(f"finite_difference() supports orders 1 and 2, got {order}")
    return out


def _extrapolate_origin(values: FloatArray, h: float, exponents: t.Sequence[float]) -> FloatArray:
    """Fits c_0 + Σ c_i t^{e_i} over the first nodes of *values* (nodes 1..) and returns c_0 per column."""

    columns = [0.0] + [e for e in exponents if e > ORDER_TOLERANCE]
    count = min(len(columns) + 4, values.shape[0])
    nodes = h * np.arange(1, count + 1, dtype=float)
    design = np.stack([nodes**e for e in columns], axis=1)
    flat = values[:count].reshape(count, -1)
    solution, *_ = np.linalg.lstsq(design, flat, rcond=None)
    return solution[0].reshape(values.shape[1:])  # type: ignore[no-any-return]


def _linear_coefficient(values: FloatArray, h: float, exponents: t.Iterable[float]) -> FloatArray:
    """Fits c_0 + c_1 t + Σ c_i t^{e_i} over the first nodes of *values* (nodes 0..) and returns c_1 per column.

    The columns are the integer powers up to 3 and the non-integer *exponents* up to 4, so c_1 is f'(0) of the
    regular part of f."""

    fractional = [e for e in exponents if 0 < e < 4 and abs(e - round(e)) > 1e-9]
    columns = [0.0, 1.0, 2.0, 3.0] + sorted({round(e, 12) for e in fractional})
    count = min(len(columns) + 4, values.shape[0])
    nodes = np.arange(count, dtype=float)
    design = np.stack([nodes**e for e in columns], axis=1)
    norms = np.linalg.norm(design, axis=0)
    flat = values[:count].reshape(count, -1)
    solution, *_ = np.linalg.lstsq(design / norms, flat, rcond=None)
    return (solution[1] / (norms[1] * h)).reshape(values.shape[1:])  # type: ignore[no-any-return]


def grid_derivative(
    samples: npt.ArrayLike, h: float, order: float, singular_powers: t.Sequence[float] = ()
) -> FloatArray:
    """Caputo derivative of *order* on a uniform grid starting at the base point; values at every node 0..N.

    Orders 1 and 2 use fourth-order finite differences. Orders in (0, 1) use the corrected L1 scheme, with the
    value at the base point extrapolated from the first nodes. Orders in (1, 2) remove the linear part f'(0)·t,
    whose Caputo derivative vanishes, and differentiate the order-1 lower L1 derivative of the rest.
    """

    values = np.asarray(samples, dtype=float)
    if order in (1.0, 2.0):
        return finite_difference(values, h, int(order))
    if 0 < order < 1:
        inner = l1_caputo(values, h, order, singular_powers)
        exponents = sorted({round(s - order, 12) for s in singular_powers} | {round(1 - order, 12)})
        origin = _extrapolate_origin(inner, h, exponents)
        return np.concatenate([origin[None, ...], inner], axis=0)
    if 1 < order < 2:
        if values.shape[0] < 6:
            raise DomainError("grid_derivative() requires at least 6 grid points")
        slope = _linear_coefficient(values, h, singular_powers)
        nodes = _as_column_kernel(h * np.arange(values.shape[0], dtype=float), values.ndim)
        regular = values - nodes * slope
        return finite_difference(grid_derivative(regular, h, order - 1, singular_powers), h, 1)
    raise DomainError(f"no grid scheme for derivative order {order:g}")
