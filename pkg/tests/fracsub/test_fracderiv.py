import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracsub.errors import DomainError, NoClosedRule
from fracsub.fracderiv import (
    Constant,
    DerivKind,
    FracOrder,
    MLExp,
    Power,
    basis_derivative,
    derive,
    derive_sequentially,
    evaluate_basis,
    evaluate_combination,
    finite_difference,
    gl_riemann_liouville,
    grid_derivative,
    l1_caputo,
    power_coefficient,
    power_rule,
)

CAPUTO = DerivKind.CAPUTO
RL = DerivKind.RIEMANN_LIOUVILLE


def test__FracOrder__validates_the_unit_interval() -> None:
    assert FracOrder(1.0, 1.0).is_classical
    assert not FracOrder(0.5, 1.0).is_classical
    for alpha, beta in [(0.0, 0.5), (1.2, 0.5), (0.5, -0.1)]:
        with pytest.raises(DomainError):
            FracOrder(alpha, beta)


@given(st.floats(min_value=0.05, max_value=1.0))
def test__basis_derivative__power_of_own_order_gives_gamma_constant(beta: float) -> None:
    assert basis_derivative(Power(beta), CAPUTO, beta) == {Constant(): pytest.approx(math.gamma(beta + 1))}


def test__basis_derivative__caputo_annihilates_constants_but_riemann_liouville_does_not() -> None:
    assert basis_derivative(Constant(), CAPUTO, 0.6) == {}
    image = basis_derivative(Constant(), RL, 0.6)
    assert list(image) == [Power(-0.6)]
    assert image[Power(-0.6)] == pytest.approx(1 / math.gamma(0.4))


def test__basis_derivative__mittag_leffler_eigenfunction() -> None:
    assert basis_derivative(MLExp(0.7, -2.0), CAPUTO, 0.7) == {MLExp(0.7, -2.0): -2.0}
    assert basis_derivative(MLExp(1.7, 3.0), CAPUTO, 1.7) == {MLExp(1.7, 3.0): 3.0}
    assert basis_derivative(MLExp(0.7, 0.0), CAPUTO, 0.7) == {}


def test__basis_derivative__raises_when_the_result_leaves_the_basis() -> None:
    with pytest.raises(NoClosedRule):
        basis_derivative(MLExp(0.7, 1.0), CAPUTO, 0.5)
    with pytest.raises(NoClosedRule):
        basis_derivative(MLExp(0.7, 1.0), RL, 0.7)
    with pytest.raises(NoClosedRule):
        basis_derivative(Power(0.3), CAPUTO, 0.8)


def test__basis_derivative__higher_order_powers() -> None:
    beta = 0.6
    image = basis_derivative(Power(beta + 1), CAPUTO, beta + 1)
    assert image == {Constant(): pytest.approx(math.gamma(beta + 2))}
    image = basis_derivative(Power(2 * beta), CAPUTO, beta)
    assert image == {Power(beta): pytest.approx(math.gamma(2 * beta + 1) / math.gamma(beta + 1))}


def test__derive_sequentially__differs_from_a_single_double_order_derivative() -> None:
    beta = 0.6
    sequential = derive_sequentially({Power(2 * beta): 1.0}, CAPUTO, (beta, beta))
    assert sequential == {Constant(): pytest.approx(math.gamma(2 * beta + 1))}
    # x^β is annihilated by the sequential form but not by a single derivative of order 2β
    assert derive_sequentially({Power(beta): 1.0}, CAPUTO, (beta, beta)) == {}


def test__derive__is_linear() -> None:
    combination = {Constant(): 2.0, Power(0.5): 3.0, MLExp(0.5, 1.5): -1.0}
    image = derive(combination, CAPUTO, 0.5)
    assert image[Constant()] == pytest.approx(3.0 * math.gamma(1.5))
    assert image[MLExp(0.5, 1.5)] == pytest.approx(-1.5)
    assert len(image) == 2


def test__evaluate_basis__mittag_leffler_of_order_one_is_exponential() -> None:
    x = np.linspace(0.1, 2.0, 5)
    np.testing.assert_allclose(evaluate_basis(MLExp(1.0, -0.5), x), np.exp(-0.5 * x), rtol=1e-12)
    np.testing.assert_allclose(evaluate_combination({Constant(): 1.0, Power(2.0): 2.0}, x), 1 + 2 * x**2)


def test__power_rule__riemann_liouville_of_inverse_power() -> None:
    alpha, t = 0.25, 1.5
    expected = math.gamma(1 - alpha) / math.gamma(1 - 2 * alpha) * t ** (-2 * alpha)
    assert power_rule(RL, alpha, -alpha, t) == pytest.approx(expected, rel=1e-12)


def test__power_coefficient__integer_branch_and_domain() -> None:
    assert power_coefficient(CAPUTO, 0.5, 0.0) == 0.0
    assert power_coefficient(CAPUTO, 1.0, 1.0) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        power_coefficient(CAPUTO, 0.5, -0.5)
    with pytest.raises(DomainError):
        power_coefficient(RL, 0.5, -1.0)


def test__l1_caputo__is_exact_on_corrected_singular_powers() -> None:
    alpha, h = 0.5, 0.01
    t = h * np.arange(201)
    values = l1_caputo(2.0 + t**0.5, h, alpha, singular_powers=[0.5])
    np.testing.assert_allclose(values, math.gamma(1.5), rtol=1e-9)


def test__l1_caputo__converges_at_order_two_minus_alpha() -> None:
    alpha = 0.6
    errors = []
    for n in (100, 200, 400):
        h = 2.0 / n
        t = h * np.arange(n + 1)
        values = l1_caputo(t**2, h, alpha)
        exact = 2 / math.gamma(3 - alpha) * t[1:] ** (2 - alpha)
        errors.append(abs(values[-1] - exact[-1]))
    rates = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    assert np.all(rates > 0.8 * (2 - alpha))


def test__l1_caputo__differentiates_columns_independently() -> None:
    h = 0.01
    t = h * np.arange(101)
    samples = np.stack([t, 2 * t], axis=1)
    values = l1_caputo(samples, h, 0.4)
    np.testing.assert_allclose(values[:, 1], 2 * values[:, 0])


def test__l1_caputo__validates_its_inputs() -> None:
    with pytest.raises(DomainError):
        l1_caputo(np.zeros(10), 0.1, 1.0)
    with pytest.raises(DomainError):
        l1_caputo(np.zeros(2), 0.1, 0.5)


def test__gl_riemann_liouville__is_first_order_accurate() -> None:
    alpha, h = 0.5, 1e-3
    t = h * np.arange(2001)
    values = gl_riemann_liouville(t, h, alpha)
    exact = t ** (1 - alpha) / math.gamma(2 - alpha)
    window = t >= 0.5
    np.testing.assert_allclose(values[window], exact[window], rtol=1e-2)


def test__finite_difference__fourth_order_stencils() -> None:
    h = 0.01
    x = h * np.arange(301)
    np.testing.assert_allclose(finite_difference(np.sin(x), h, 1), np.cos(x), atol=1e-7)
    np.testing.assert_allclose(finite_difference(np.sin(x), h, 2), -np.sin(x), atol=1e-5)
    with pytest.raises(DomainError):
        finite_difference(np.sin(x), h, 3)


def test__grid_derivative__orders_between_one_and_two() -> None:
    beta, h = 0.7, 0.01
    x = h * np.arange(201)
    values = grid_derivative(x ** (beta + 1), h, beta + 1, singular_powers=[beta + 1])
    assert values.shape == x.shape
    np.testing.assert_allclose(values, math.gamma(beta + 2), rtol=1e-8)


def test__grid_derivative__linear_part_has_no_derivative_above_order_one() -> None:
    h, order = 1e-3, 1.5
    x = h * np.arange(1201)
    values = grid_derivative(x + x**2, h, order)
    expected = 2 * x ** (2 - order) / math.gamma(3 - order)
    assert values[1000] == pytest.approx(2 * 1.0**0.5 / math.gamma(1.5), rel=1e-3)
    np.testing.assert_allclose(values[200:], expected[200:], rtol=1e-3)
    np.testing.assert_allclose(grid_derivative(3 - 2 * x, h, order)[200:], 0.0, atol=1e-6)


def test__grid_derivative__power_beta_vanishes_under_order_beta_plus_one() -> None:
    beta, h = 0.6, 0.01
    x = h * np.arange(201)
    values = grid_derivative(2 * x**beta + x + x ** (beta + 1), h, beta + 1, singular_powers=[beta, beta + 1])
    np.testing.assert_allclose(values[20:], math.gamma(beta + 2), rtol=1e-6)


def test__grid_derivative__fills_the_base_point() -> None:
    alpha, h = 0.5, 0.01
    t = h * np.arange(201)
    values = grid_derivative(1 + t, h, alpha)
    assert values.shape == t.shape
    expected = t ** (1 - alpha) / math.gamma(2 - alpha)
    np.testing.assert_allclose(values, expected, atol=1e-6)
    with pytest.raises(DomainError):
        grid_derivative(t, h, 2.5)
