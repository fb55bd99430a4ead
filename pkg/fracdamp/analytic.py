"""Closed-form solution: residue pair, branch-cut decay integral, classical limits.

For 0 < ν < 1 the solution is

    x(t) = e^{βt}(A cos σt + B sin σt) − decay(t),

where β ± iσ are the two simple poles of X(s) = (s x0 + x1 + λ s^(ν−1) x0) /
(s² + λ sᵛ + ω²) and decay(t) is the contribution of the two sides of the cut
along the negative real axis. ν = 1 reduces to the textbook oscillator and
ν = 0 to an undamped one with frequency √(λ+ω²).
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from fracdamp import config
from fracdamp.errors import (
    DegenerateDenominator,
    DomainError,
    InvalidConfig,
    QuadratureNonConvergence,
)
from fracdamp.model import (
    DampingRegime,
    OscillatorParams,
    Pole,
    SolutionParts,
    Trajectory,
    TrajectorySource,
    damping_regime,
)
from fracdamp.polefinder import DEGENERATE_TOL, cpow, find_pole

logger = logging.getLogger(__name__)

CONJUGATE_TOL = 1e-12


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecayQuadratureConfig:
    rel_tol: float = config.DEFAULT_REL_TOL
    abs_tol: float = config.DEFAULT_ABS_TOL
    max_subdivisions: int = config.DEFAULT_MAX_SUBDIVISIONS

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0 and math.isfinite(self.rel_tol)):
            raise InvalidConfig("rel_tol", self.rel_tol, "must be finite and > 0")
        if not (self.abs_tol > 0 and math.isfinite(self.abs_tol)):
            raise InvalidConfig("abs_tol", self.abs_tol, "must be finite and > 0")
        if self.max_subdivisions < 1:
            raise InvalidConfig(
                "max_subdivisions", self.max_subdivisions, "must be >= 1"
            )

    @classmethod
    def from_env(cls) -> DecayQuadratureConfig:
        """Defaults overridden by FRACDAMP_TOL / FRACDAMP_ABS_TOL / FRACDAMP_MAX_SUBDIVISIONS."""
        return cls(
            rel_tol=config.get_rel_tol(),
            abs_tol=config.get_abs_tol(),
            max_subdivisions=config.get_max_subdivisions(),
        )


# ---------------------------------------------------------------------------
# Residues
# ---------------------------------------------------------------------------


def _residue_factor(s: complex, params: OscillatorParams) -> complex:
    lam, nu, x0, x1 = params.lam, params.nu, params.x0, params.x1
    s_pow = cpow(s, nu - 1.0)
    denom = 2.0 * s + nu * lam * s_pow
    if abs(denom) < DEGENERATE_TOL:
        raise DegenerateDenominator(
            f"|2s + nu*lambda*s^(nu-1)| = {abs(denom):.3g} at s={s!r}"
        )
    return (s * x0 + x1 + x0 * lam * s_pow) / denom


def residue_coefficients(params: OscillatorParams, pole: Pole) -> tuple[float, float]:
    """(A, B) with residue pair = e^{βt}(A cos σt + B sin σt).

    Both limits are evaluated explicitly (at s and at s̄); their sum must be real.
    """
    if not params.is_interior:
        raise DomainError(f"residue_coefficients needs 0 < nu < 1, got {params.nu!r}")
    s = pole.s
    c_upper = _residue_factor(s, params)
    c_lower = _residue_factor(s.conjugate(), params)
    scale = max(abs(c_upper), 1.0)
    if abs((c_upper + c_lower).imag) > CONJUGATE_TOL * scale:
        logger.warning(
            "residue pair not conjugate: c=%r c_bar=%r", c_upper, c_lower
        )
    a_coef = (c_upper + c_lower).real
    b_coef = -(c_upper - c_lower).imag
    return a_coef, b_coef


@dataclass(frozen=True)
class ExpandedFormReport:
    """Residue coefficients from the complex form and from the expanded real form."""

    complex_ab: tuple[float, float]
    expanded_ab: tuple[float, float]
    printed_ab: tuple[float, float]
    expanded_deviation: float
    printed_deviation: float

    @property
    def expanded_agrees(self) -> bool:
        return self.expanded_deviation <= 1e-10

    @property
    def printed_agrees(self) -> bool:
        return self.printed_deviation <= 1e-10


def expanded_coefficients(
    params: OscillatorParams, pole: Pole, *, as_printed: bool = False
) -> tuple[float, float]:
    """(A, B) from the real polar expansion of the residue pair.

    ``as_printed=True`` uses λᵛ and λ^(2ν) in the cosine-line denominator, where
    the sine line (and the complex form) have λ and λ².
    """
    lam, nu, x0, x1 = params.lam, params.nu, params.x0, params.x1
    r, th = pole.r, pole.theta
    r_nu = r**nu
    tail = nu * nu * r ** (2 * nu - 2)
    cross = 4 * nu * r_nu * math.cos((2 - nu) * th)

    den_sin = 4 * r * r + cross * lam + tail * lam**2
    if as_printed:
        den_cos = 4 * r * r + cross * lam**nu + tail * lam ** (2 * nu)
    else:
        den_cos = den_sin

    cos_num = x0 * (
        2 * r * r
        + nu * lam**2 * r ** (2 * nu - 2)
        + lam * r_nu * (nu + 2) * math.cos(th * (nu - 2))
    ) + x1 * (2 * r * math.cos(th) + nu * lam * r ** (nu - 1) * math.cos(th * (nu - 1)))
    sin_num = x0 * (lam * r_nu * (nu - 2) * math.sin((nu - 2) * th)) + x1 * (
        2 * r * math.sin(th) + nu * lam * r ** (nu - 1) * math.sin(th * (nu - 1))
    )
    return 2 * cos_num / den_cos, 2 * sin_num / den_sin


def crosscheck_expanded(params: OscillatorParams, pole: Pole) -> ExpandedFormReport:
    """Compare the expanded real form with the complex residues; never reconciles."""
    ab = residue_coefficients(params, pole)
    expanded = expanded_coefficients(params, pole)
    printed = expanded_coefficients(params, pole, as_printed=True)
    scale = max(abs(ab[0]), abs(ab[1]), 1.0)
    expanded_dev = max(abs(expanded[0] - ab[0]), abs(expanded[1] - ab[1])) / scale
    printed_dev = max(abs(printed[0] - ab[0]), abs(printed[1] - ab[1])) / scale
    if expanded_dev > 1e-10:
        logger.warning(
            "expanded real form disagrees with complex residues: dev=%.3g", expanded_dev
        )
    if printed_dev > 1e-10:
        logger.warning(
            "printed cosine-line denominator deviates: A=%r vs %r (lambda=%g nu=%g)",
            printed[0],
            ab[0],
            params.lam,
            params.nu,
        )
    return ExpandedFormReport(ab, expanded, printed, expanded_dev, printed_dev)


# ---------------------------------------------------------------------------
# Branch-cut decay integral
# ---------------------------------------------------------------------------


def _denominator(rr: float, r_nu: float, params: OscillatorParams) -> float:
    p = rr * rr + params.omega**2
    q = params.lam * r_nu
    return p * p + 2.0 * q * p * math.cos(params.nu * math.pi) + q * q


def decay_numerator(R: float, params: OscillatorParams, *, simplified: bool = False) -> float:
    """Numerator bracket of the cut integrand.

    Printed form: (R x0 − x1) sin νπ + (x0/R)(R²+ω²) sin(π(ν−1)).
    Simplified:   −sin(νπ)(x1 + x0 ω²/R).
    """
    nu, x0, x1, omega = params.nu, params.x0, params.x1, params.omega
    if simplified:
        return -math.sin(nu * math.pi) * (x1 + x0 * omega * omega / R)
    return (R * x0 - x1) * math.sin(nu * math.pi) + (x0 / R) * (R * R + omega * omega) * math.sin(
        math.pi * (nu - 1.0)
    )


def decay_integrand(R: float, t: float, params: OscillatorParams) -> float:
    """(λ/π)·numerator·e^{−Rt}Rᵛ / [(R²+ω²)² + 2λRᵛ(R²+ω²)cos νπ + (λRᵛ)²]."""
    if not R > 0:
        raise DomainError(f"R={R!r} must be > 0")
    r_nu = R**params.nu
    return (
        params.lam
        / math.pi
        * decay_numerator(R, params)
        * math.exp(-R * t)
        * r_nu
        / _denominator(R, r_nu, params)
    )


def _head_integrand(u: float, t: float, params: OscillatorParams, p: float) -> float:
    # R = u^p with u = Rᵛ; the Jacobian cancels the R^(ν−1) singularity at 0.
    rr = u**p
    lam, nu = params.lam, params.nu
    numer = -math.sin(nu * math.pi) * (params.x1 * rr + params.x0 * params.omega**2)
    return p * lam / math.pi * numer * math.exp(-rr * t) / _denominator(rr, u, params)


def _tail_integrand(rr: float, t: float, params: OscillatorParams) -> float:
    r_nu = rr**params.nu
    numer = decay_numerator(rr, params, simplified=True)
    return params.lam / math.pi * numer * math.exp(-rr * t) * r_nu / _denominator(
        rr, r_nu, params
    )


def _decades(centre: float, lo: float, hi: float) -> list[float]:
    """centre·10^k for k = −2..2, kept strictly inside (lo, hi)."""
    if not (centre > 0 and math.isfinite(centre)):
        return []
    return [c for c in (centre * 10.0**k for k in range(-2, 3)) if lo < c < hi]


def _quad_piece(
    func: Callable[..., float],
    a: float,
    b: float,
    args: tuple,
    cfg: DecayQuadratureConfig,
    label: str,
    points: Sequence[float] | None = None,
) -> tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        out = quad(
            func,
            a,
            b,
            args=args,
            epsabs=cfg.abs_tol,
            epsrel=cfg.rel_tol,
            limit=cfg.max_subdivisions,
            points=points or None,
            full_output=1,
        )
    value, abserr, info = out[0], out[1], out[2]
    last = info.get("last", 0)
    # tolerance scales with the larger of |value| and the summed |subinterval integrals|
    scale = abs(value)
    if "rlist" in info:
        scale = max(scale, float(np.abs(info["rlist"][:last]).sum()))
    tolerance = max(cfg.abs_tol, cfg.rel_tol * scale)
    if len(out) > 3:
        if abserr > tolerance:
            reason = (
                f"subdivision limit {cfg.max_subdivisions} reached"
                if last >= cfg.max_subdivisions
                else out[3].strip().splitlines()[0]
            )
            raise QuadratureNonConvergence(
                f"{label}: {reason}; error estimate {abserr:.3g} > {tolerance:.3g}",
                value=value,
                abserr=abserr,
            )
        logger.debug("%s: quadpack advisory within tolerance: %s", label, out[3])
    return value, abserr


def decay_function_with_error(
    t: float, params: OscillatorParams, cfg: DecayQuadratureConfig | None = None
) -> tuple[float, float]:
    """decay(t) and its QUADPACK error estimate.

    The range splits at R = max(1, ω). The head is integrated in u = Rᵛ with
    breakpoints at the decades around the scales where ω², λRᵛ and R² cross,
    which is where the peak sits when λ is large and ω small. The rest runs
    over a finite middle piece up to 10·max(1, ω, λ^(1/(2−ν))) and an
    infinite tail through QUADPACK's interval mapping.
    """
    if not params.is_interior:
        raise DomainError(f"decay_function needs 0 < nu < 1, got {params.nu!r}")
    if t < 0:
        raise DomainError(f"t={t!r} must be >= 0")
    cfg = cfg or DecayQuadratureConfig()
    if params.x0 == 0.0 and params.x1 == 0.0:
        return 0.0, 0.0

    lam, omega, nu = params.lam, params.omega, params.nu
    p = 1.0 / nu
    u_split = max(1.0, omega) ** nu
    r_split = u_split**p
    # R where λRᵛ meets R²
    r_balance = lam ** (1.0 / (2.0 - nu))
    r_mid = 10.0 * max(r_split, r_balance)

    head_points = sorted(
        set(
            _decades(omega * omega / lam, 0.0, u_split)
            + _decades(omega**nu, 0.0, u_split)
            + _decades(r_balance**nu, 0.0, u_split)
        )
    )
    mid_points = sorted(
        set(_decades(r_balance, r_split, r_mid) + _decades(omega, r_split, r_mid))
    )
    head, head_err = _quad_piece(
        _head_integrand, 0.0, u_split, (t, params, p), cfg, "decay-head", head_points
    )
    mid, mid_err = _quad_piece(
        _tail_integrand, r_split, r_mid, (t, params), cfg, "decay-mid", mid_points
    )
    tail, tail_err = _quad_piece(
        _tail_integrand, r_mid, np.inf, (t, params), cfg, "decay-tail"
    )
    logger.debug(
        "decay t=%g head=%.17g (+-%.2g) mid=%.17g (+-%.2g) tail=%.17g (+-%.2g)",
        t,
        head,
        head_err,
        mid,
        mid_err,
        tail,
        tail_err,
    )
    return head + mid + tail, head_err + mid_err + tail_err


def decay_function(
    t: float, params: OscillatorParams, cfg: DecayQuadratureConfig | None = None
) -> float:
    return decay_function_with_error(t, params, cfg)[0]


# ---------------------------------------------------------------------------
# Classical (ν = 1) and undamped (ν = 0) limits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassicalSolution:
    """Roots of s² + λs + ω² = 0 by regime.

    ``roots`` holds (s1, s2) when over-damped, (s3,) when critical and is empty
    when under-damped, where α = λ/2 and ρ = √(ω² − λ²/4) describe −α ± iρ.
    """

    case: DampingRegime
    roots: tuple[float, ...] = ()
    alpha: float = 0.0
    rho: float = 0.0

    def __post_init__(self) -> None:
        if self.case is DampingRegime.OVER:
            s1, s2 = self.roots
            if not (s1 != s2 and s1 < 0 and s2 < 0):
                raise ValueError(f"over-damped roots must be distinct and negative: {self.roots}")
        elif self.case is DampingRegime.CRITICAL:
            if len(self.roots) != 1:
                raise ValueError("critical case carries exactly one root")
        elif not (self.rho > 0 and self.alpha > 0):
            raise ValueError("under-damped case needs alpha > 0 and rho > 0")


def classical_poles(lam: float, omega: float) -> ClassicalSolution:
    case = damping_regime(lam, omega)
    if case is DampingRegime.OVER:
        root = math.sqrt(lam * lam - 4.0 * omega * omega)
        return ClassicalSolution(case, roots=((-lam + root) / 2.0, (-lam - root) / 2.0))
    if case is DampingRegime.CRITICAL:
        return ClassicalSolution(case, roots=(-lam / 2.0,))
    return ClassicalSolution(
        case, alpha=lam / 2.0, rho=math.sqrt(omega * omega - lam * lam / 4.0)
    )


def classical_solve(t: float, params: OscillatorParams) -> float:
    """x(t) for the ordinary damped oscillator (ν = 1)."""
    if params.nu != 1.0:
        raise DomainError(f"classical_solve needs nu = 1, got {params.nu!r}")
    lam, omega, x0, x1 = params.lam, params.omega, params.x0, params.x1
    sol = classical_poles(lam, omega)
    if sol.case is DampingRegime.OVER:
        total = 0.0
        for s in sol.roots:
            total += math.exp(s * t) / (2 * s + lam) * (s * x0 + x1 + lam * x0)
        return total
    if sol.case is DampingRegime.CRITICAL:
        # ω taken from the root so the formula stays exact inside the tolerance band
        w = -sol.roots[0]
        return math.exp(-w * t) * (t * (w * x0 + x1) + x0)
    rho, alpha = sol.rho, sol.alpha
    return math.exp(-alpha * t) * (
        x0 * math.cos(rho * t) + (2 * x1 + lam * x0) / (2 * rho) * math.sin(rho * t)
    )


def undamped_solve(t: float, params: OscillatorParams) -> float:
    """ν = 0 read as D⁰x = x: x0 cos Ωt + (x1/Ω) sin Ωt with Ω = √(λ+ω²)."""
    big_omega = math.sqrt(params.lam + params.omega**2)
    return params.x0 * math.cos(big_omega * t) + params.x1 / big_omega * math.sin(
        big_omega * t
    )


def caputo_zero_limit(t: float, params: OscillatorParams) -> float:
    """Limit ν → 0⁺ of the Caputo problem.

    The Caputo derivative tends to x(t) − x0, which shifts the equilibrium to
    λx0/(λ+ω²); this is the s = 0 pole that the ν = 0 transform keeps.
    """
    lam, omega, x0, x1 = params.lam, params.omega, params.x0, params.x1
    big_sq = lam + omega * omega
    big_omega = math.sqrt(big_sq)
    offset = lam * x0 / big_sq
    return (
        offset
        + (x0 - offset) * math.cos(big_omega * t)
        + x1 / big_omega * math.sin(big_omega * t)
    )


# ---------------------------------------------------------------------------
# Combined evaluator
# ---------------------------------------------------------------------------


class AnalyticSolver:
    """Caches the pole and residue coefficients for one parameter set."""

    def __init__(
        self, params: OscillatorParams, cfg: DecayQuadratureConfig | None = None
    ) -> None:
        self.params = params
        self.cfg = cfg or DecayQuadratureConfig()
        self.pole: Pole | None = None
        self.coefficients: tuple[float, float] | None = None
        if params.is_interior:
            self.pole = find_pole(params)
            self.coefficients = residue_coefficients(params, self.pole)

    def oscillatory(self, t: float) -> float:
        if self.pole is None or self.coefficients is None:
            return self._endpoint(t)
        a_coef, b_coef = self.coefficients
        envelope = math.exp(self.pole.beta * t)
        return envelope * (
            a_coef * math.cos(self.pole.sigma * t) + b_coef * math.sin(self.pole.sigma * t)
        )

    def decay(self, t: float) -> float:
        if self.pole is None:
            return 0.0
        return decay_function(t, self.params, self.cfg)

    def evaluate(self, t: float) -> float:
        if t < 0:
            raise DomainError(f"t={t!r} must be >= 0")
        return self.oscillatory(t) - self.decay(t)

    def _endpoint(self, t: float) -> float:
        if self.params.nu == 1.0:
            return classical_solve(t, self.params)
        return undamped_solve(t, self.params)

    def parts(self, t_values: np.ndarray) -> SolutionParts:
        """Oscillatory coefficients plus decay samples (interior ν only)."""
        if self.pole is None or self.coefficients is None:
            raise DomainError("solution parts are defined for 0 < nu < 1 only")
        t_arr = np.asarray(t_values, dtype=float)
        decay = np.array([self.decay(float(t)) for t in t_arr])
        return SolutionParts(
            a_coef=self.coefficients[0],
            b_coef=self.coefficients[1],
            beta=self.pole.beta,
            sigma=self.pole.sigma,
            t=t_arr,
            decay=decay,
        )

    def columns(self, t_values: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(total, oscillatory, decay) arrays; endpoints report decay = 0."""
        t_arr = np.asarray(t_values, dtype=float)
        osc = np.array([self.oscillatory(float(t)) for t in t_arr])
        dec = np.array([self.decay(float(t)) for t in t_arr])
        return osc - dec, osc, dec

    def trajectory(self, t_max: float, dt: float) -> Trajectory:
        t_arr = time_grid(t_max, dt)
        total, _, _ = self.columns(t_arr)
        source = TrajectorySource.ANALYTIC if self.pole is not None else TrajectorySource.CLASSICAL
        return Trajectory(
            t=t_arr,
            x=total,
            source=source,
            meta={"params": self.params.as_tuple(), "dt": dt, "rel_tol": self.cfg.rel_tol},
        )


def time_grid(t_max: float, dt: float) -> np.ndarray:
    """0, dt, 2dt, … up to t_max (inclusive within half a step)."""
    if not (dt > 0 and t_max > 0):
        raise InvalidConfig("dt", dt, "dt and t_max must be > 0")
    n = int(math.floor(t_max / dt + 0.5))
    return np.arange(n + 1, dtype=float) * dt


def evaluate(
    t: float, params: OscillatorParams, cfg: DecayQuadratureConfig | None = None
) -> float:
    """x(t) for any ν in [0, 1]; ν = 1 and ν = 0 route to the limit formulas."""
    return AnalyticSolver(params, cfg).evaluate(t)
