import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from fracsub.errors import DomainError, PoleError
from fracsub.specfun import MLParams, gamma_fn, log_gamma, mittag_leffler, ml_caputo_derivative, prabhakar, rgamma


def _mp_prabhakar(beta: float, gamma: float, rho: float, z: float, dps: int = 40, terms: int = 400) -> float:
    mpmath.mp.dps = dps
    total = mpmath.mpf(0)
    for r in range(terms):
        total += mpmath.rf(rho, r) * mpmath.mpf(z) ** r / (mpmath.factorial(r) * mpmath.gamma(beta * r + gamma))
    return float(total)


@given(st.floats(min_value=0.05, max_value=30.0))
@settings(max_examples=200)
def test__gamma_fn__satisfies_the_functional_equation(x: float) -> None:
    assert gamma_fn(x + 1.0) == pytest.approx(x * gamma_fn(x), rel=1e-12)


@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 2.5, 7.3, 20.0, -0.5, -1.5, -2.25])
def test__gamma_fn__matches_scipy(x: float) -> None:
    assert gamma_fn(x) == pytest.approx(special.gamma(x), rel=1e-13)


def test__gamma_fn__raises_at_poles_and_rgamma_vanishes() -> None:
    for pole in (0.0, -1.0, -4.0):
        with pytest.raises(PoleError):
            gamma_fn(pole)
        assert rgamma(pole) == 0.0


def test__gamma_fn__overflows_loudly() -> None:
    with pytest.raises(OverflowError):
        gamma_fn(200.0)


def test__gamma_fn__preserves_array_shape() -> None:
    values = gamma_fn(np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert isinstance(values, np.ndarray)
    np.testing.assert_allclose(values, [[1.0, 1.0], [2.0, 6.0]], rtol=1e-14)


def test__log_gamma__matches_math_lgamma() -> None:
    for x in (0.3, 1.0, 12.5, 150.0):
        assert log_gamma(x) == pytest.approx(math.lgamma(x), rel=1e-12, abs=1e-13)
    with pytest.raises(DomainError):
        log_gamma(0.0)


@given(st.floats(min_value=-5.0, max_value=5.0))
def test__mittag_leffler__reduces_to_exp_at_order_one(z: float) -> None:
    assert mittag_leffler(MLParams(1.0), z) == pytest.approx(math.exp(z), rel=1e-9)


@given(st.floats(min_value=-5.0, max_value=5.0).filter(lambda z: abs(z) > 1e-3))
def test__mittag_leffler__two_parameter_identity(z: float) -> None:
    assert mittag_leffler(MLParams(1.0, 2.0), z) == pytest.approx(math.expm1(z) / z, rel=1e-9)


def test__mittag_leffler__order_two_is_cosine() -> None:
    z = np.linspace(0.0, 4.0, 9)
    np.testing.assert_allclose(mittag_leffler(MLParams(2.0), -(z**2)), np.cos(z), atol=1e-12)
    np.testing.assert_allclose(mittag_leffler(MLParams(2.0), z**2), np.cosh(z), rtol=1e-12)


def test__mittag_leffler__half_order_matches_erfcx() -> None:
    assert mittag_leffler(MLParams(0.5), -1.0) == pytest.approx(0.4275835761, abs=1e-8)
    z = np.linspace(0.0, 6.0, 13)
    np.testing.assert_allclose(mittag_leffler(MLParams(0.5), -z), special.erfcx(z), rtol=1e-8)


@pytest.mark.parametrize("beta,gamma", [(0.5, 1.0), (0.75, 1.0), (0.9, 0.9), (1.6, 1.0), (0.6, 1.75)])
@pytest.mark.parametrize("z", [-4.0, -1.0, -0.2, 0.3, 2.0, 5.0])
def test__mittag_leffler__matches_high_precision_series(beta: float, gamma: float, z: float) -> None:
    assert mittag_leffler(MLParams(beta, gamma), z) == pytest.approx(_mp_prabhakar(beta, gamma, 1.0, z), rel=1e-9)


@pytest.mark.parametrize("z", [-20.0, -35.0, -49.0])
def test__mittag_leffler__large_negative_arguments_use_the_contour(z: float) -> None:
    expected = _mp_prabhakar(0.8, 1.0, 1.0, z, dps=100, terms=900)
    assert mittag_leffler(MLParams(0.8), z) == pytest.approx(expected, rel=1e-6, abs=1e-12)


def test__mittag_leffler__rejects_arguments_outside_the_domain() -> None:
    with pytest.raises(DomainError):
        mittag_leffler(MLParams(0.5), 51.0)
    with pytest.raises(DomainError):
        MLParams(0.0)


def test__mittag_leffler__overflow_is_reported() -> None:
    with pytest.raises(OverflowError):
        mittag_leffler(MLParams(0.1), 45.0)


@pytest.mark.parametrize("rho", [1.0, 2.0, 3.0])
def test__prabhakar__matches_high_precision_series(rho: float) -> None:
    for z in (-2.0, 0.5, 1.5):
        assert prabhakar(0.7, 1.7, rho, z) == pytest.approx(_mp_prabhakar(0.7, 1.7, rho, z), rel=1e-9)


def test__prabhakar__rho_zero_is_the_reciprocal_gamma() -> None:
    z = np.array([-1.0, 0.0, 2.0])
    np.testing.assert_allclose(prabhakar(0.5, 2.5, 0.0, z), np.full(3, 1.0 / special.gamma(2.5)))
    assert prabhakar(0.5, 0.0, 0.0, 1.0) == 0.0


def test__prabhakar__accepts_non_positive_gamma() -> None:
    # E_{1,0}(z) = z e^z
    assert prabhakar(1.0, 0.0, 1.0, 1.3) == pytest.approx(1.3 * math.exp(1.3), rel=1e-10)


@pytest.mark.parametrize("alpha", [0.3, 0.75, 1.0])
def test__ml_caputo_derivative__eigenfunction_rule(alpha: float) -> None:
    t = np.linspace(0.2, 2.0, 7)
    expected = -0.7 * np.asarray(mittag_leffler(MLParams(alpha), -0.7 * t**alpha))
    np.testing.assert_allclose(ml_caputo_derivative(alpha, MLParams(alpha), -0.7, t), expected, rtol=1e-10)


def test__ml_caputo_derivative__of_a_power_kernel() -> None:
    # t^{γ-1} E_{1,γ}(0) = t^{γ-1}/Γ(γ); its Caputo derivative of order α is t^{γ-α-1}/Γ(γ-α)
    alpha, gamma, t = 0.4, 2.5, 1.7
    expected = t ** (gamma - alpha - 1) / special.gamma(gamma - alpha)
    assert ml_caputo_derivative(alpha, MLParams(1.0, gamma), 0.0, t) == pytest.approx(expected, rel=1e-12)


def test__ml_caputo_derivative__requires_positive_times() -> None:
    with pytest.raises(DomainError):
        ml_caputo_derivative(0.5, MLParams(0.5), 1.0, 0.0)
