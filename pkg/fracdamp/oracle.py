"""Time-domain reference integrator for the Caputo-damped oscillator.

Central differences for x'' and the L1 discretization for the Caputo
derivative,

    Dᵛx(t_n) ≈ h^(−ν)/Γ(2−ν) · Σ_{k=0}^{n−1} b_k (x_{n−k} − x_{n−k−1}),
    b_k = (k+1)^(1−ν) − k^(1−ν),

which makes x_{n+1} an explicit function of the history. The full history is
kept (O(n) memory, O(n²) work). Nothing here depends on the pole/residue
machinery in :mod:`fracdamp.analytic`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma

from fracdamp import config
from fracdamp.errors import DomainError, InvalidConfig, MemoryCapExceeded
from fracdamp.model import OscillatorParams, Trajectory, TrajectorySource

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StepperConfig:
    h: float
    t_max: float
    max_steps: int = field(default_factory=config.get_max_steps)

    def __post_init__(self) -> None:
        if not (self.h > 0 and math.isfinite(self.h)):
            raise InvalidConfig("h", self.h, "time step must be finite and > 0")
        if not (self.t_max > 0 and math.isfinite(self.t_max)):
            raise InvalidConfig("t_max", self.t_max, "horizon must be finite and > 0")
        if self.h > self.t_max:
            raise InvalidConfig("h", self.h, f"time step exceeds t_max={self.t_max!r}")

    @property
    def steps(self) -> int:
        return int(math.ceil(self.t_max / self.h - 1e-9))


def caputo_l1_weights(nu: float, n: int) -> np.ndarray:
    """b_k = (k+1)^(1−ν) − k^(1−ν) for k = 0..n−1."""
    if not (0.0 < nu < 1.0):
        raise DomainError(f"nu={nu!r} outside (0, 1)")
    if n < 1:
        raise DomainError(f"n={n!r} must be >= 1")
    k = np.arange(n + 1, dtype=float) ** (1.0 - nu)
    return np.diff(k)


def integrate(params: OscillatorParams, cfg: StepperConfig) -> Trajectory:
    """Sample x(t) at every step t_n = n·h, n = 0..N with N·h ≥ t_max."""
    nu = params.nu
    if not params.is_interior:
        raise DomainError(f"integrate needs 0 < nu < 1, got {nu!r}")
    n_steps = cfg.steps
    if n_steps > cfg.max_steps:
        raise MemoryCapExceeded(n_steps, cfg.max_steps)

    h, lam, w2 = cfg.h, params.lam, params.omega**2
    weights = caputo_l1_weights(nu, n_steps)
    damping = lam * h ** (-nu) / gamma(2.0 - nu)
    h2 = h * h

    x = np.empty(n_steps + 1)
    # inc[j] = x_{j+1} - x_j
    inc = np.empty(n_steps)
    x[0] = params.x0
    # Taylor start; the Caputo term vanishes at t = 0 for bounded x'.
    x[1] = params.x0 + h * params.x1 - 0.5 * h2 * w2 * params.x0
    inc[0] = x[1] - x[0]

    for n in range(1, n_steps):
        # history[k] pairs b_k with x_{n-k} - x_{n-k-1} = inc[n-1-k]
        history = float(np.dot(weights[:n], inc[n - 1 :: -1]))
        x[n + 1] = 2.0 * x[n] - x[n - 1] - h2 * (damping * history + w2 * x[n])
        inc[n] = x[n + 1] - x[n]

    logger.debug("oracle nu=%g h=%g steps=%d", nu, h, n_steps)
    t = np.arange(n_steps + 1, dtype=float) * h
    return Trajectory(
        t=t,
        x=x,
        source=TrajectorySource.ORACLE,
        meta={"params": params.as_tuple(), "h": h, "t_max": cfg.t_max, "scheme": "L1"},
    )


@dataclass(frozen=True)
class SelfConvergence:
    coarse_gap: float
    fine_gap: float

    @property
    def ratio(self) -> float:
        return self.coarse_gap / self.fine_gap if self.fine_gap > 0 else math.inf


def self_convergence(
    params: OscillatorParams,
    h: float,
    t_max: float,
    window: tuple[float, float] | None = None,
) -> SelfConvergence:
    """Gaps |x_h − x_{h/2}| and |x_{h/2} − x_{h/4}| (max over the window)."""
    runs = [integrate(params, StepperConfig(h / 2**k, t_max)) for k in range(3)]
    lo, hi = window or (0.0, t_max)
    coarse_t = runs[0].t
    mask = (coarse_t >= lo) & (coarse_t <= min(hi, t_max))
    # coarse grid points are shared by the finer runs (indices 2i and 4i)
    idx = np.nonzero(mask)[0]
    x0, x1, x2 = runs[0].x[idx], runs[1].x[2 * idx], runs[2].x[4 * idx]
    return SelfConvergence(
        coarse_gap=float(np.max(np.abs(x0 - x1))),
        fine_gap=float(np.max(np.abs(x1 - x2))),
    )


def envelope_maxima(traj: Trajectory, period: float) -> np.ndarray:
    """max |x| over consecutive windows of length ``period`` (complete windows only)."""
    if period <= 0:
        raise DomainError(f"period={period!r} must be > 0")
    n_windows = int(traj.t[-1] // period)
    out = np.empty(n_windows)
    for i in range(n_windows):
        mask = (traj.t >= i * period) & (traj.t < (i + 1) * period)
        out[i] = np.max(np.abs(traj.x[mask]))
    return out
