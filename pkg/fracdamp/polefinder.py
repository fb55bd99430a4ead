"""Upper-half-plane root of s² + λsᵛ + ω² = 0 for 0 < ν < 1.

With s = r e^{iθ} the imaginary part gives r^(2−ν) = −λ sin(νθ)/sin(2θ) and
substituting into the real part leaves a single equation in θ,

    ((sin νθ)^ν / (sin 2θ)²)^(1/(2−ν)) · sin((2−ν)θ) = (ω / λ^(1/(2−ν)))²,

whose left side decreases strictly from +∞ to 0 on π/2 < θ < π/(2−ν). The
root is therefore unique; we bracket it in log space, solve with Brent's
method and polish (r, θ) jointly with a few complex Newton steps.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from fracdamp.errors import BracketFailure, DomainError
from fracdamp.model import DampingRegime, OscillatorParams, Pole, damping_regime

logger = logging.getLogger(__name__)

HALF_PI = 0.5 * math.pi
ENDPOINT_OFFSET = 1e-9
MAX_OFFSET_SHRINKS = 6
THETA_XTOL = 1e-14
NEWTON_MAX_ITER = 5
# Width of the warm-start bracket around a θ hint, relative to the domain width.
HINT_HALF_WIDTH = 0.05
# |derivative| below this is treated as a double root.
DEGENERATE_TOL = 1e-14


@dataclass(frozen=True)
class AngularBracket:
    lo: float
    hi: float
    g_lo: float
    g_hi: float


def upper_angle(nu: float) -> float:
    return math.pi / (2.0 - nu)


def _check_domain(theta: float, nu: float) -> None:
    if not (0.0 < nu <= 1.0):
        raise DomainError(f"nu={nu!r} outside (0, 1]")
    if not (HALF_PI < theta < upper_angle(nu)):
        raise DomainError(
            f"theta={theta!r} outside ({HALF_PI!r}, {upper_angle(nu)!r}) for nu={nu!r}"
        )


def log_angular_lhs(theta: float, nu: float) -> float:
    """Logarithm of :func:`eq24_lhs`; finite arbitrarily close to θ = π/2."""
    _check_domain(theta, nu)
    return (
        nu * math.log(math.sin(nu * theta)) - 2.0 * math.log(-math.sin(2.0 * theta))
    ) / (2.0 - nu) + math.log(math.sin((2.0 - nu) * theta))


def eq24_lhs(theta: float, nu: float) -> float:
    """((sin νθ)^ν / (sin 2θ)²)^(1/(2−ν)) · sin((2−ν)θ), strictly positive.

    Overflows to ``inf`` only when the true value exceeds float range.
    """
    try:
        return math.exp(log_angular_lhs(theta, nu))
    except OverflowError:
        return math.inf


def angular_rhs_log(lam: float, omega: float, nu: float) -> float:
    """log of (ω / λ^(1/(2−ν)))²."""
    return 2.0 * math.log(omega) - 2.0 * math.log(lam) / (2.0 - nu)


def scan_angular(
    lam: float, omega: float, nu: float, samples: int = 10_000
) -> tuple[np.ndarray, np.ndarray]:
    """(θ, log LHS − log RHS) on ``samples`` interior points of the angular domain."""
    if not (0.0 < nu < 1.0):
        raise DomainError(f"nu={nu!r} outside (0, 1)")
    theta = np.linspace(HALF_PI, upper_angle(nu), samples + 2)[1:-1]
    log_lhs = (
        nu * np.log(np.sin(nu * theta)) - 2.0 * np.log(-np.sin(2.0 * theta))
    ) / (2.0 - nu) + np.log(np.sin((2.0 - nu) * theta))
    return theta, log_lhs - angular_rhs_log(lam, omega, nu)


def r_from_theta(theta: float, nu: float, lam: float) -> float:
    """Modulus from the imaginary-part equation: (−λ sin νθ / sin 2θ)^(1/(2−ν))."""
    _check_domain(theta, nu)
    return (-lam * math.sin(nu * theta) / math.sin(2.0 * theta)) ** (1.0 / (2.0 - nu))


def residual(s: complex, params: OscillatorParams) -> complex:
    """s² + λsᵛ + ω² with the principal branch of sᵛ."""
    return s * s + params.lam * cpow(s, params.nu) + params.omega**2


def polar_residuals(r: float, theta: float, params: OscillatorParams) -> tuple[float, float]:
    """Real and imaginary parts of the pole equation in polar form."""
    lam, omega, nu = params.lam, params.omega, params.nu
    real = r * r * math.cos(2 * theta) + lam * r**nu * math.cos(nu * theta) + omega**2
    imag = r * r * math.sin(2 * theta) + lam * r**nu * math.sin(nu * theta)
    return real, imag


def monotonicity_numerator(theta: float, nu: float) -> float:
    """ν² sin²2θ − 4ν sin 2θ sin νθ cos((2−ν)θ) + 4 sin²νθ (positive on the domain)."""
    s2, sn = math.sin(2 * theta), math.sin(nu * theta)
    return nu * nu * s2 * s2 - 4 * nu * s2 * sn * math.cos((2 - nu) * theta) + 4 * sn * sn


def perfect_square(theta: float, nu: float) -> float:
    """ν² sin²2θ − 4ν sin 2θ sin νθ + 4 sin²νθ = (ν sin 2θ − 2 sin νθ)²."""
    s2, sn = math.sin(2 * theta), math.sin(nu * theta)
    return nu * nu * s2 * s2 - 4 * nu * s2 * sn + 4 * sn * sn


def cpow(s: complex, p: float) -> complex:
    """Principal branch s^p, with 0^p = 0."""
    if s == 0:
        return 0j
    return cmath.exp(p * cmath.log(s))


def _g(theta: float, nu: float, rhs_log: float) -> float:
    return log_angular_lhs(theta, nu) - rhs_log


def bracket(lam: float, omega: float, nu: float) -> AngularBracket:
    """Endpoints just inside (π/2, π/(2−ν)) with g_lo > 0 > g_hi.

    The offset starts at 1e-9 and shrinks tenfold up to six times.
    """
    if not (0.0 < nu < 1.0):
        raise DomainError(f"nu={nu!r} outside (0, 1)")
    rhs_log = angular_rhs_log(lam, omega, nu)
    top = upper_angle(nu)
    offset = ENDPOINT_OFFSET
    for attempt in range(MAX_OFFSET_SHRINKS + 1):
        lo, hi = HALF_PI + offset, top - offset
        if lo < hi:
            g_lo, g_hi = _g(lo, nu, rhs_log), _g(hi, nu, rhs_log)
            if g_lo > 0 > g_hi:
                return AngularBracket(lo, hi, g_lo, g_hi)
            logger.debug(
                "bracket attempt=%d offset=%g g_lo=%g g_hi=%g", attempt, offset, g_lo, g_hi
            )
        offset /= 10.0
    raise BracketFailure(
        f"no sign change for lambda={lam!r} omega={omega!r} nu={nu!r}"
    )


def _hint_bracket(
    theta_hint: float, nu: float, rhs_log: float
) -> AngularBracket | None:
    top = upper_angle(nu)
    half = HINT_HALF_WIDTH * (top - HALF_PI)
    lo = max(theta_hint - half, HALF_PI + ENDPOINT_OFFSET)
    hi = min(theta_hint + half, top - ENDPOINT_OFFSET)
    if not lo < hi:
        return None
    g_lo, g_hi = _g(lo, nu, rhs_log), _g(hi, nu, rhs_log)
    if g_lo > 0 > g_hi:
        return AngularBracket(lo, hi, g_lo, g_hi)
    return None


def _newton_polish(s: complex, params: OscillatorParams) -> complex:
    """A few Newton steps on the complex equation; a step is kept only if it
    stays in the upper half plane and lowers the residual."""
    lam, nu = params.lam, params.nu
    best = abs(residual(s, params))
    for _ in range(NEWTON_MAX_ITER):
        deriv = 2.0 * s + nu * lam * cpow(s, nu - 1.0)
        if deriv == 0:
            break
        candidate = s - residual(s, params) / deriv
        if candidate.imag <= 0:
            break
        value = abs(residual(candidate, params))
        if value >= best:
            break
        s, best = candidate, value
        if value == 0.0:
            break
    return s


def find_pole(params: OscillatorParams, theta_hint: float | None = None) -> Pole:
    """Unique pole with θ ∈ (π/2, π/(2−ν)); requires 0 < ν < 1."""
    nu = params.nu
    if not params.is_interior:
        raise DomainError(f"find_pole needs 0 < nu < 1, got {nu!r}; use endpoint_pole")
    rhs_log = angular_rhs_log(params.lam, params.omega, nu)

    brk = None
    if theta_hint is not None and HALF_PI < theta_hint < upper_angle(nu):
        brk = _hint_bracket(theta_hint, nu, rhs_log)
    if brk is None:
        brk = bracket(params.lam, params.omega, nu)

    theta = brentq(_g, brk.lo, brk.hi, args=(nu, rhs_log), xtol=THETA_XTOL)
    r = r_from_theta(theta, nu, params.lam)
    s = _newton_polish(cmath.rect(r, theta), params)
    logger.debug(
        "pole lambda=%g omega=%g nu=%g theta=%.17g |res|=%.3g",
        params.lam,
        params.omega,
        nu,
        theta,
        abs(residual(s, params)),
    )
    return Pole.from_complex(s)


def endpoint_pole(params: OscillatorParams) -> tuple[float, float, float, float]:
    """(β, σ, r, θ) at ν = 0 or ν = 1, where find_pole does not apply.

    ν = 0 gives i√(λ+ω²). ν = 1 gives the classical upper-half-plane root when
    under-damped, otherwise the point on the negative real axis that the pair
    reaches as ν → 1⁻: −λ/2 when critical, (−λ − √(λ²−4ω²))/2 when over-damped.
    """
    lam, omega, nu = params.lam, params.omega, params.nu
    if nu == 0.0:
        big_omega = math.sqrt(lam + omega * omega)
        return 0.0, big_omega, big_omega, HALF_PI
    if nu == 1.0:
        regime = damping_regime(lam, omega)
        if regime is DampingRegime.UNDER:
            beta = -0.5 * lam
            sigma = 0.5 * math.sqrt(4.0 * omega * omega - lam * lam)
            return beta, sigma, math.hypot(beta, sigma), math.atan2(sigma, beta)
        if regime is DampingRegime.CRITICAL:
            beta = -0.5 * lam
        else:
            beta = -0.5 * (lam + math.sqrt(lam * lam - 4.0 * omega * omega))
        return beta, 0.0, -beta, math.pi
    raise DomainError(f"endpoint_pole needs nu in {{0, 1}}, got {nu!r}")
