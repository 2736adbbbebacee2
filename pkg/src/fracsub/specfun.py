""" Gamma and Mittag-Leffler functions on real arguments.

The Gamma function is evaluated with an embedded Lanczos rational approximation plus the reflection formula. The
Mittag-Leffler functions are summed as compensated power series; for negative arguments where the series would
cancel catastrophically, the value is recovered by inverting the function's Laplace transform on a fixed Talbot
contour.

All functions accept a float or a numpy array and return a value of the same shape.
"""

from __future__ import annotations

import dataclasses
import logging
import math
import typing as t

import numpy as np
import numpy.typing as npt
import typing_extensions as te

from fracsub.errors import DomainError, NonConvergence, PoleError

logger = logging.getLogger(__name__)

FloatArray: te.TypeAlias = npt.NDArray[np.float64]
FloatOrArray: te.TypeAlias = t.Union[float, FloatArray]

#: Largest |z| accepted by the Mittag-Leffler evaluators.
Z_MAX = 50.0

#: Term budget of a single series evaluation.
MAX_TERMS = 10_000

#: Number of contour nodes of the Talbot inversion.
TALBOT_NODES = 24

#: A term counts as negligible below this multiple of the running sum.
SERIES_TOLERANCE = 1e-16

#: Negative arguments whose largest series term exceeds the sum by this factor are re-evaluated on the contour.
CANCELLATION_LIMIT = 1e4

LANCZOS_G = 6.024680040776729583740234375

# Rational Lanczos sum (numerator and denominator, highest degree first), scaled by exp(-g).
_LANCZOS_NUM = np.array(
    [
        0.006061842346248906525783753964555936883222,
        0.5098416655656676188125178644804694509993,
        19.51992788247617482847860966235652136208,
        449.9445569063168119446858607650988409623,
        6955.999602515376140356310115515198987526,
        75999.29304014542649875303443598909137092,
        601859.6171681098786670226533699352302507,
        3481712.15498064590882071018964774556468,
        14605578.08768506808414169982791359218571,
        43338889.32467613834773723740590533316085,
        86363131.28813859145546927288977868422342,
        103794043.1163445451906271053616070238554,
        56906521.91347156388090791033559122686859,
    ]
)
_LANCZOS_DEN = np.array(
    [
        1.0,
        66.0,
        1925.0,
        32670.0,
        357423.0,
        2637558.0,
        13339535.0,
        45995730.0,
        105258076.0,
        150917976.0,
        120543840.0,
        39916800.0,
        0.0,
    ]
)


@dataclasses.dataclass(frozen=True)
class MLParams:
    """Parameters of the two-parameter Mittag-Leffler function E_{β,γ}(z) = Σ z^r / Γ(βr + γ)."""

    beta: float
    gamma: float = 1.0

    def __post_init__(self) -> None:
        if not (self.beta > 0 and self.gamma > 0):
            raise DomainError(f"Mittag-Leffler parameters must be positive, got beta={self.beta}, gamma={self.gamma}")


def _like(template: t.Any, values: FloatArray) -> FloatOrArray:
    if np.ndim(template) == 0:
        return float(np.reshape(values, ()))
    return np.reshape(values, np.shape(template))


def _sinpi(x: FloatArray) -> FloatArray:
    n = np.round(x)
    return np.sin(np.pi * (x - n)) * np.where(np.mod(n, 2) == 0, 1.0, -1.0)


def _is_pole(x: FloatArray) -> npt.NDArray[np.bool_]:
    return (x <= 0) & (x == np.floor(x))


def _lanczos(x: FloatArray) -> FloatArray:
    zgh = x + LANCZOS_G - 0.5
    ratio = np.polyval(_LANCZOS_NUM, x) / np.polyval(_LANCZOS_DEN, x)
    half = np.power(zgh, (x - 0.5) / 2)
    return ratio * half * (half / np.exp(x - 0.5))  # type: ignore[no-any-return]


def _gamma(x: FloatArray) -> FloatArray:
    """Γ on a flat array; poles come out as inf and nothing is checked."""

    out = np.empty_like(x)
    right = x >= 0.5
    left = ~right
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        out[right] = _lanczos(x[right])
        out[left] = np.pi / (_sinpi(x[left]) * _lanczos(1.0 - x[left]))
    return out


def _log_abs_gamma(x: float) -> tuple[float, float]:
    """Returns `(log |Γ(x)|, sign Γ(x))` for a scalar that is not a pole."""

    if x >= 0.5:
        zgh = x + LANCZOS_G - 0.5
        ratio = float(np.polyval(_LANCZOS_NUM, x) / np.polyval(_LANCZOS_DEN, x))
        return math.log(ratio) + (x - 0.5) * (math.log(zgh) - 1.0), 1.0
    sin = float(_sinpi(np.array([x]))[0])
    reflected, _ = _log_abs_gamma(1.0 - x)
    return math.log(math.pi) - math.log(abs(sin)) - reflected, math.copysign(1.0, sin)


def gamma_fn(x: npt.ArrayLike) -> FloatOrArray:
    """Evaluates Γ(x) for real non-pole arguments.

    Raises:
        PoleError: If any argument is zero or a negative integer.
        OverflowError: If |Γ(x)| is not representable.
    """

    values = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    if np.any(_is_pole(values)):
        raise PoleError(f"Gamma function has a pole at {values[_is_pole(values)][0]:g}")
    result = _gamma(values)
    if not np.all(np.isfinite(result)):
        raise OverflowError(f"Gamma function overflows at {values[~np.isfinite(result)][0]:g}")
    return _like(x, result)


def rgamma(x: npt.ArrayLike) -> FloatOrArray:
    """Evaluates 1/Γ(x); exactly zero at the poles."""

    values = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    out = np.zeros_like(values)
    regular = ~_is_pole(values)
    with np.errstate(divide="ignore"):
        out[regular] = 1.0 / _gamma(values[regular])
    return _like(x, out)


def log_gamma(x: float) -> float:
    """Evaluates log Γ(x) for x > 0."""

    if not x > 0:
        raise DomainError(f"log_gamma() requires a positive argument, got {x}")
    return _log_abs_gamma(x)[0]


def _series(beta: float, gamma: float, rho: float, z: FloatArray) -> tuple[FloatArray, FloatArray]:
    """Sums Σ (ρ)_r z^r / (r! Γ(βr+γ)) with Kahan compensation.

    Returns the sums and the largest term magnitude seen for every argument.
    """

    total = np.zeros_like(z)
    compensation = np.zeros_like(z)
    peak = np.zeros_like(z)
    previous = np.full_like(z, np.inf)
    streak = np.zeros(z.shape, dtype=int)
    negative = z < 0
    with np.errstate(divide="ignore"):
        log_abs_z = np.log(np.abs(z))

    log_coefficient = 0.0  # log((ρ)_r / r!)
    with np.errstate(over="ignore", invalid="ignore"):
        for r in range(MAX_TERMS):
            if r > 0:
                log_coefficient += math.log((rho + r - 1) / r)
            x = beta * r + gamma
            if x <= 0 and x == math.floor(x):
                continue
            log_gamma_x, sign = _log_abs_gamma(x)
            if r == 0:
                term = np.full_like(z, sign * math.exp(log_coefficient - log_gamma_x))
            else:
                magnitude = np.exp(r * log_abs_z + log_coefficient - log_gamma_x)
                term = sign * (np.where(negative, -magnitude, magnitude) if r % 2 else magnitude)

            corrected = term - compensation
            updated = total + corrected
            compensation = (updated - total) - corrected
            total = updated

            magnitude = np.abs(term)
            peak = np.maximum(peak, magnitude)
            negligible = (magnitude <= SERIES_TOLERANCE * np.abs(total)) & (magnitude <= previous)
            streak = np.where(negligible, streak + 1, 0)
            previous = magnitude
            if x > 0 and np.all(streak >= 3):
                logger.debug("Mittag-Leffler series converged after <val>%d</val> terms", r + 1)
                return total, peak

    raise NonConvergence(f"Mittag-Leffler series (beta={beta}, gamma={gamma}) did not converge in {MAX_TERMS} terms")


def _talbot(beta: float, gamma: float, rho: float, z: FloatArray) -> FloatArray:
    """Inverts s^(βρ-γ) / (s^β - z)^ρ at t = 1 on the fixed Talbot contour."""

    theta = np.arange(TALBOT_NODES) * np.pi / TALBOT_NODES
    cot = np.zeros(TALBOT_NODES)
    cot[1:] = 1.0 / np.tan(theta[1:])
    r = 2.0 * TALBOT_NODES / 5.0
    nodes = r * theta * (cot + 1j)
    nodes[0] = r
    weights = np.exp(nodes) * (1.0 + 1j * theta * (1.0 + cot**2) - 1j * cot)
    weights[0] = 0.5 * np.exp(r)
    s = nodes[:, None]
    transform = s ** (beta * rho - gamma) / (s**beta - z[None, :]) ** rho
    return 0.4 * np.real(weights @ transform)  # type: ignore[no-any-return]


def _evaluate(beta: float, gamma: float, rho: float, z: npt.ArrayLike) -> FloatArray:
    values = np.atleast_1d(np.asarray(z, dtype=float)).ravel()
    if not np.all(np.isfinite(values)) or np.any(np.abs(values) > Z_MAX):
        raise DomainError(f"Mittag-Leffler argument outside |z| <= {Z_MAX}")
    scaled = np.abs(values) ** (1.0 / beta)
    if np.any((values > 0) & (scaled > 700.0)):
        raise OverflowError(f"E_{beta:g},{gamma:g}(z) overflows for z = {values.max():g}")

    out = np.empty_like(values)
    contour = (values < 0) & (scaled > 36.0)
    direct = np.flatnonzero(~contour)
    if direct.size:
        total, peak = _series(beta, gamma, rho, values[direct])
        out[direct] = total
        lossy = (values[direct] < 0) & (peak > CANCELLATION_LIMIT * np.abs(total))
        contour[direct[lossy]] = True
    if contour.any():
        logger.debug(
            "Evaluating <subj>E_%g,%g</subj> on the Talbot contour for <val>%d</val> negative arguments",
            beta,
            gamma,
            int(contour.sum()),
        )
        out[contour] = _talbot(beta, gamma, rho, values[contour])

    if not np.all(np.isfinite(out)):
        raise OverflowError(f"E_{beta:g},{gamma:g}(z) is not representable")
    return out


def mittag_leffler(p: MLParams, z: npt.ArrayLike) -> FloatOrArray:
    """Evaluates E_{β,γ}(z) = Σ_{r≥0} z^r / Γ(βr + γ).

    Raises:
        DomainError: If |z| > #Z_MAX.
        NonConvergence: If the series does not settle within #MAX_TERMS terms.
        OverflowError: If the value is not representable.
    """

    return _like(z, _evaluate(p.beta, p.gamma, 1.0, z))


def prabhakar(beta: float, gamma: float, rho: float, z: npt.ArrayLike) -> FloatOrArray:
    """Evaluates the three-parameter function E^ρ_{β,γ}(z) = Σ (ρ)_r z^r / (r! Γ(βr + γ)).

    Any real *gamma* is accepted; series terms whose Gamma factor sits on a pole vanish.
    """

    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    if rho < 0:
        raise DomainError(f"rho must be non-negative, got {rho}")
    if rho == 0:
        return _like(z, np.full(np.size(z), float(rgamma(gamma))))
    return _like(z, _evaluate(beta, gamma, rho, z))


def ml_caputo_derivative(alpha: float, p: MLParams, k: float, t: npt.ArrayLike) -> FloatOrArray:
    """Caputo derivative of order *alpha* of t^(γ-1) E_{β,γ}(k t^β).

    For γ != 1 this is t^(γ-α-1) E_{β,γ-α}(k t^β). For γ = 1 the function starts at 1 and the Riemann-Liouville
    kernel is reduced by t^(-α)/Γ(1-α); with β = α the result is k E_α(k t^α).
    """

    if not 0 < alpha <= 1:
        raise DomainError(f"derivative order must lie in (0, 1], got {alpha}")
    times = np.atleast_1d(np.asarray(t, dtype=float)).ravel()
    if np.any(times <= 0):
        raise DomainError("ml_caputo_derivative() requires t > 0")

    z = k * times**p.beta
    if p.gamma == 1.0 and abs(p.beta - alpha) <= 1e-12:
        return _like(t, k * _evaluate(p.beta, 1.0, 1.0, z))
    values = times ** (p.gamma - alpha - 1) * _evaluate(p.beta, p.gamma - alpha, 1.0, z)
    if p.gamma == 1.0:
        values = values - times ** (-alpha) * float(rgamma(1.0 - alpha))
    return _like(t, values)
