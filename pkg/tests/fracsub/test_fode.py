import math

import numpy as np
import pytest

from fracsub.errors import Divergence, DomainError, NotTriangular
from fracsub.fode import (
    FodeSystem,
    MLConvolution,
    PolynomialSystem,
    Trajectory,
    frac_adams,
    ml_convolve,
    quadrature_convolve,
    rl_power_ansatz,
    solve_linear_ml,
)
from fracsub.fracderiv import DerivKind


def _draws(count: int, seed: int = 7) -> list[MLConvolution]:
    rng = np.random.default_rng(seed)
    result = []
    while len(result) < count:
        alpha = rng.uniform(0.3, 1.0)
        a, b = rng.uniform(-2.0, 2.0, 2)
        if abs(a - b) < 0.2:
            continue
        result.append(MLConvolution(alpha, rng.uniform(0.8, 2.0), rng.uniform(0.8, 2.0), a, b))
    return result


@pytest.mark.parametrize("c", _draws(20))
def test__ml_convolve__matches_jacobi_quadrature(c: MLConvolution) -> None:
    for t in (0.5, 1.3, 2.0):
        assert ml_convolve(c, t) == pytest.approx(quadrature_convolve(c, t, nodes=256), rel=1e-6, abs=1e-9)


def test__ml_convolve__equal_rates_raise_the_three_parameter_index() -> None:
    c = MLConvolution(0.6, 1.0, 1.4, -0.7, -0.7)
    assert [term.rho for term in c.trajectory().terms] == [2]
    assert ml_convolve(c, 1.5) == pytest.approx(quadrature_convolve(c, 1.5, nodes=256), rel=1e-6)
    with pytest.raises(DomainError):
        ml_convolve(c, 0.0)


@pytest.mark.parametrize("gap", [1e-10, 1e-8, 1e-6, 1e-4, 1e-3, 1e-2])
def test__ml_convolve__nearly_equal_rates_match_jacobi_quadrature(gap: float) -> None:
    c = MLConvolution(0.4, 1.0, 1.4, -0.7, -0.7 + gap)
    assert ml_convolve(c, 1.5) == pytest.approx(quadrature_convolve(c, 1.5, nodes=256), rel=1e-6)


def test__ml_convolve__continuous_as_the_rates_merge() -> None:
    merged = ml_convolve(MLConvolution(0.4, 1.0, 1.4, -0.7, -0.7), 1.5)
    for gap in (1e-4, 1e-6, 1e-8, 1e-10):
        near = ml_convolve(MLConvolution(0.4, 1.0, 1.4, -0.7, -0.7 + gap), 1.5)
        assert abs(near - merged) <= 10 * gap * abs(merged), gap
    below = ml_convolve(MLConvolution(0.4, 1.0, 1.4, -0.7, -0.7 + 0.999e-3), 1.5)
    above = ml_convolve(MLConvolution(0.4, 1.0, 1.4, -0.7, -0.7 + 1.001e-3), 1.5)
    assert below == pytest.approx(above, rel=1e-5)


def test__Trajectory__eigenfunction_and_integral() -> None:
    alpha = 0.7
    t = np.linspace(0.2, 2.0, 6)
    trajectory = Trajectory.ml(alpha, 2.0, -1.0)
    np.testing.assert_allclose(trajectory.caputo_derivative()(t), -trajectory(t), rtol=1e-10)
    integral = Trajectory.constant(alpha, 1.0).integral()
    np.testing.assert_allclose(integral(t), t**alpha / math.gamma(alpha + 1), rtol=1e-12)
    assert trajectory.initial_value() == pytest.approx(2.0)
    assert Trajectory.power(alpha, 1.0, -alpha).initial_value() == math.inf
    with pytest.raises(ValueError):
        trajectory + Trajectory.constant(0.5, 1.0)


def test__Trajectory__riemann_liouville_derivative_of_inverse_power() -> None:
    alpha, t = 0.3, 1.7
    derivative = Trajectory.power(alpha, 2.0, -alpha).derivative(DerivKind.RIEMANN_LIOUVILLE)
    expected = 2.0 * math.gamma(1 - alpha) / math.gamma(1 - 2 * alpha) * t ** (-2 * alpha)
    assert derivative(t) == pytest.approx(expected, rel=1e-12)


def test__PolynomialSystem__affine_round_trip_through_linear_part() -> None:
    system = PolynomialSystem.affine([[-1.0, 0.0], [1.0, -0.5]], [1.0, 0.0])
    matrix, offset = system.linear_part()
    np.testing.assert_allclose(matrix, [[-1.0, 0.0], [1.0, -0.5]])
    np.testing.assert_allclose(offset, [1.0, 0.0])
    np.testing.assert_allclose(system([2.0, 4.0]), [-1.0, 0.0])
    assert system.format() == ["d^α A1 = -1*A1 + 1", "d^α A2 = -0.5*A2 + 1*A1"]


def test__solve_linear_ml__classical_order_gives_exponentials() -> None:
    system = FodeSystem(1.0, PolynomialSystem.affine([[-1.0]], [1.0]), initial=(2.0,))
    (solution,) = solve_linear_ml(system)
    t = np.linspace(0.1, 3.0, 7)
    np.testing.assert_allclose(solution(t), 1.0 + np.exp(-t), rtol=1e-10)


@pytest.mark.parametrize("alpha", [0.6, 0.75, 0.9])
def test__solve_linear_ml__agrees_with_frac_adams(alpha: float) -> None:
    system = FodeSystem(alpha, PolynomialSystem.affine([[-1.0, 0.0], [1.0, -0.5]], [1.0, 0.0]), initial=(1.0, 0.5))
    grid = np.linspace(0.0, 2.0, 2001)
    numeric = frac_adams(system, grid)
    closed = np.column_stack([trajectory(grid[1:]) for trajectory in solve_linear_ml(system)])
    np.testing.assert_allclose(numeric[1:], closed, atol=1e-3)


def test__solve_linear_ml__rejects_cycles_and_nonlinear_terms() -> None:
    cyclic = FodeSystem(0.5, PolynomialSystem.affine([[0.0, 1.0], [1.0, 0.0]]), initial=(1.0, 1.0))
    with pytest.raises(NotTriangular):
        solve_linear_ml(cyclic)
    quadratic = FodeSystem(0.5, PolynomialSystem(1, ({(2,): 1.0},)), initial=(1.0,))
    with pytest.raises(NotTriangular):
        solve_linear_ml(quadratic)
    with pytest.raises(ValueError):
        solve_linear_ml(FodeSystem(0.5, PolynomialSystem.zero(1)))


def test__frac_adams__reports_divergence() -> None:
    system = FodeSystem(1.0, PolynomialSystem.affine([[30.0]]), initial=(1.0,))
    with pytest.raises(Divergence):
        frac_adams(system, np.linspace(0.0, 1.0, 1001))


def test__frac_adams__validates_the_grid() -> None:
    system = FodeSystem(0.5, PolynomialSystem.affine([[-1.0]]), initial=(1.0,))
    with pytest.raises(ValueError):
        frac_adams(system, np.linspace(0.1, 1.0, 10))
    with pytest.raises(ValueError):
        frac_adams(system, [0.0, 0.1, 0.3])
    with pytest.raises(DomainError):
        frac_adams(FodeSystem(0.5, system.rhs, (1.0,), DerivKind.RIEMANN_LIOUVILLE), np.linspace(0.0, 1.0, 10))


def test__rl_power_ansatz__coefficients_and_degenerate_orders() -> None:
    ansatz = rl_power_ansatz(0.3, 1.0, 2.0, 1.5)
    c = ansatz.coefficients
    assert len(c) == 6
    assert c[4:] == (2.0, 1.5)
    assert c[2] == pytest.approx(c[0] * c[1] / 1.5)
    assert c[3] == pytest.approx(c[1] ** 2 / 1.5)
    assert ansatz.trajectories()[5](2.0) == pytest.approx(1.5 * 2.0**-0.3)
    with pytest.raises(DomainError):
        rl_power_ansatz(0.5, 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        rl_power_ansatz(0.3, 1.0, 1.0, 0.0)
