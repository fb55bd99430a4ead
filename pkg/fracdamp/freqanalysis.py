"""Oscillation frequency σ = Im(s) as a function of the derivative order.

σ(0) = √(λ+ω²) and σ(1) is the classical frequency √(4ω²−λ²)/2 (zero when
λ ≥ 2ω), so σ always ends below where it starts. How it leaves ν = 0 depends
on the sign of λ+ω²−1; together with the classical regime at ν = 1 that gives
nine qualitatively different curves.
"""

from __future__ import annotations

import cmath
import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from fracdamp.errors import DegenerateDenominator, DomainError, InvalidConfig
from fracdamp.model import (
    FIGURE_PRESETS,
    NineCase,
    OscillatorParams,
    Pole,
    damping_regime,
    slope_regime,
    validate,
)
from fracdamp.polefinder import DEGENERATE_TOL, endpoint_pole, find_pole

logger = logging.getLogger(__name__)

SWEEP_HEADER = ("nu", "sigma", "beta", "r", "theta")


@dataclass(frozen=True)
class SweepRow:
    nu: float
    sigma: float
    beta: float
    r: float
    theta: float

    @classmethod
    def from_pole(cls, nu: float, pole: Pole) -> SweepRow:
        return cls(nu=nu, sigma=pole.sigma, beta=pole.beta, r=pole.r, theta=pole.theta)

    def to_csv_row(self) -> list[str]:
        return [repr(float(v)) for v in (self.nu, self.sigma, self.beta, self.r, self.theta)]


def ds_dnu(pole: Pole, params: OscillatorParams) -> complex:
    """Implicit derivative of the pole: −λ sᵛ ln(s)·s / (2s² + λν sᵛ).

    The imaginary part is dσ/dν, the real part dβ/dν.
    """
    if not params.is_interior:
        raise DomainError(f"ds_dnu needs 0 < nu < 1, got {params.nu!r}")
    lam, nu = params.lam, params.nu
    s = pole.s
    log_s = cmath.log(s)
    s_nu = cmath.exp(nu * log_s)
    denom = 2.0 * s * s + lam * nu * s_nu
    if abs(denom) < DEGENERATE_TOL:
        raise DegenerateDenominator(f"|2s^2 + lambda*nu*s^nu| = {abs(denom):.3g} at s={s!r}")
    return -lam * s_nu * log_s * s / denom


def initial_slope(lam: float, omega: float) -> float:
    """dσ/dν at ν = 0: λ ln(λ+ω²) / (4√(λ+ω²))."""
    total = lam + omega * omega
    return lam * math.log(total) / (4.0 * math.sqrt(total))


def classify(lam: float, omega: float) -> NineCase:
    validate(lam, omega, 0.0)
    return NineCase(slope_regime(lam, omega), damping_regime(lam, omega))


def sweep_row(params: OscillatorParams, theta_hint: float | None = None) -> SweepRow:
    """One row at ``params.nu``; ν = 0 and ν = 1 come from the closed forms."""
    if params.is_interior:
        return SweepRow.from_pole(params.nu, find_pole(params, theta_hint=theta_hint))
    beta, sigma, r, theta = endpoint_pole(params)
    return SweepRow(nu=params.nu, sigma=sigma, beta=beta, r=r, theta=theta)


def sigma_at(lam: float, omega: float, nu: float) -> float:
    return sweep_row(validate(lam, omega, nu)).sigma


def nu_grid(nu_min: float, nu_max: float, steps: int) -> list[float]:
    """``steps`` evenly spaced orders from nu_min to nu_max, both inside (0, 1)."""
    if not (0.0 < nu_min < 1.0):
        raise InvalidConfig("nu_min", nu_min, "must lie in (0, 1)")
    if not (0.0 < nu_max < 1.0):
        raise InvalidConfig("nu_max", nu_max, "must lie in (0, 1)")
    if steps < 1:
        raise InvalidConfig("nu_steps", steps, "must be >= 1")
    if steps == 1:
        if nu_min != nu_max:
            raise InvalidConfig("nu_steps", steps, "a single step needs nu_min == nu_max")
        return [nu_min]
    if not nu_min < nu_max:
        raise InvalidConfig("nu_max", nu_max, f"must exceed nu_min={nu_min!r}")
    return np.linspace(nu_min, nu_max, steps).tolist()


def _check_grid(grid: Sequence[float]) -> list[float]:
    values = [float(v) for v in grid]
    for v in values:
        if not (0.0 < v < 1.0):
            raise InvalidConfig("nu_grid", v, "grid values must lie strictly inside (0, 1)")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise InvalidConfig("nu_grid", values, "grid must be strictly increasing")
    return values


def _sweep_sequential(lam: float, omega: float, grid: list[float]) -> list[SweepRow]:
    rows: list[SweepRow] = []
    hint: float | None = None
    for nu in grid:
        row = sweep_row(validate(lam, omega, nu), theta_hint=hint)
        hint = row.theta
        rows.append(row)
    return rows


def _sweep_parallel(
    lam: float, omega: float, grid: list[float], workers: int
) -> list[SweepRow]:
    """Rows are independent; results are put back in grid order."""
    rows: list[SweepRow | None] = [None] * len(grid)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        future_to_index = {
            pool.submit(sweep_row, validate(lam, omega, nu)): i for i, nu in enumerate(grid)
        }
        for future in as_completed(future_to_index):
            rows[future_to_index[future]] = future.result()
    return [row for row in rows if row is not None]


def sigma_sweep(
    lam: float,
    omega: float,
    nu_grid: Sequence[float],
    workers: int = 1,
    *,
    include_endpoints: bool = True,
) -> list[SweepRow]:
    """SweepRows ordered by ν, with the ν = 0 and ν = 1 anchors added.

    Sequential sweeps warm-start each bracket from the previous θ.
    """
    validate(lam, omega, 0.0)
    grid = _check_grid(nu_grid)
    if workers > 1 and len(grid) > 1:
        rows = _sweep_parallel(lam, omega, grid, workers)
    else:
        rows = _sweep_sequential(lam, omega, grid)
    if include_endpoints:
        rows = [
            sweep_row(validate(lam, omega, 0.0)),
            *rows,
            sweep_row(validate(lam, omega, 1.0)),
        ]
    logger.info(
        "sweep lambda=%g omega=%g rows=%d workers=%d", lam, omega, len(rows), workers
    )
    return rows


def finite_difference_slope(lam: float, omega: float, nu: float, step: float) -> float:
    """Central difference of σ(ν); the lower point is clamped to the ν = 0 branch."""
    if not step > 0:
        raise InvalidConfig("step", step, "must be > 0")
    lo = max(nu - step, 0.0)
    hi = nu + step
    if hi > 1.0:
        raise DomainError(f"nu + step = {hi!r} exceeds 1")
    return (sigma_at(lam, omega, hi) - sigma_at(lam, omega, lo)) / (hi - lo)


@dataclass(frozen=True)
class Peak:
    row: SweepRow
    index: int
    interior: bool


def peak(rows: Sequence[SweepRow]) -> Peak:
    """Row with the largest σ; ``interior`` when it is neither the first nor the last."""
    if not rows:
        raise InvalidConfig("rows", rows, "empty sweep")
    sigmas = np.array([row.sigma for row in rows])
    index = int(np.argmax(sigmas))
    return Peak(row=rows[index], index=index, interior=0 < index < len(rows) - 1)


@dataclass(frozen=True)
class FigureSweep:
    name: str
    lam: float
    omega: float
    case: NineCase
    rows: list[SweepRow]


def figure_sweeps(
    figure: int, nu_grid: Sequence[float], workers: int = 1
) -> list[FigureSweep]:
    """The three preset curves of one figure (3, 4 or 5)."""
    try:
        presets = FIGURE_PRESETS[figure]
    except KeyError:
        raise InvalidConfig("figure", figure, f"expected one of {sorted(FIGURE_PRESETS)}") from None
    return [
        FigureSweep(
            name=name,
            lam=lam,
            omega=omega,
            case=classify(lam, omega),
            rows=sigma_sweep(lam, omega, nu_grid, workers),
        )
        for name, lam, omega in presets
    ]
