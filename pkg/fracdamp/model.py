"""Domain types, parameter validation and the nine-case taxonomy.

The oscillator is D²x + λ Dᵛx + ω²x = 0 with a Caputo derivative of order
0 ≤ ν ≤ 1, x(0) = x0 and x'(0) = x1. λ carries units of time^(ν−2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Any, Mapping

import numpy as np

from fracdamp.errors import (
    InvalidInitialData,
    NonPositiveLambda,
    NonPositiveOmega,
    NuOutOfRange,
    ParameterError,
)

# Absolute tolerance for the classification boundaries λ+ω² = 1 and λ = 2ω.
CLASSIFY_TOL = 1e-12

CSV_HEADER = ("lambda", "omega", "nu", "x0", "x1")


def _fmt(value: float) -> str:
    """Shortest decimal that round-trips to the same float."""
    return repr(float(value))


def _as_float(name: str, raw: Any) -> float:
    try:
        return float(raw)
    except (TypeError, ValueError) as exc:
        raise ParameterError(name, raw, "not a real number") from exc


# ---------------------------------------------------------------------------
# Parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OscillatorParams:
    """Validated physical inputs. Construct through :func:`validate`."""

    lam: float
    omega: float
    nu: float
    x0: float = 1.0
    x1: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise NonPositiveLambda(self.lam)
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise NonPositiveOmega(self.omega)
        if not (0.0 <= self.nu <= 1.0):
            raise NuOutOfRange(self.nu)
        if not math.isfinite(self.x0):
            raise InvalidInitialData("x0", self.x0)
        if not math.isfinite(self.x1):
            raise InvalidInitialData("x1", self.x1)

    @property
    def is_interior(self) -> bool:
        """True when 0 < ν < 1, the range handled by the pole/branch-cut machinery."""
        return 0.0 < self.nu < 1.0

    def with_nu(self, nu: float) -> OscillatorParams:
        return OscillatorParams(self.lam, self.omega, nu, self.x0, self.x1)

    # -- serialization -----------------------------------------------------

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.lam, self.omega, self.nu, self.x0, self.x1)

    def to_kv(self) -> str:
        """Plain-text ``key=value`` lines in CSV_HEADER order."""
        return "".join(
            f"{key}={_fmt(value)}\n" for key, value in zip(CSV_HEADER, self.as_tuple())
        )

    @classmethod
    def from_kv(cls, text: str) -> OscillatorParams:
        values: dict[str, str] = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ParameterError("kv", line, "expected key=value")
            values[key.strip()] = value.strip()
        missing = [k for k in CSV_HEADER if k not in values]
        if missing:
            raise ParameterError("kv", text, f"missing keys: {', '.join(missing)}")
        return validate(*(values[k] for k in CSV_HEADER))

    def to_csv_row(self) -> list[str]:
        return [_fmt(v) for v in self.as_tuple()]

    @classmethod
    def from_csv_row(cls, row: list[str] | tuple[str, ...]) -> OscillatorParams:
        if len(row) != len(CSV_HEADER):
            raise ParameterError("csv", row, f"expected {len(CSV_HEADER)} fields")
        return validate(*row)


def validate(
    lam: Any, omega: Any, nu: Any, x0: Any = 1.0, x1: Any = 0.0
) -> OscillatorParams:
    """Build :class:`OscillatorParams` from raw values.

    Raises NonPositiveLambda, NonPositiveOmega or NuOutOfRange naming the field.
    """
    return OscillatorParams(
        lam=_as_float("lambda", lam),
        omega=_as_float("omega", omega),
        nu=_as_float("nu", nu),
        x0=_as_float("x0", x0),
        x1=_as_float("x1", x1),
    )


# ---------------------------------------------------------------------------
# Poles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pole:
    """Upper-half-plane root s = β + iσ = r e^{iθ}; the conjugate is implicit."""

    r: float
    theta: float
    beta: float
    sigma: float

    def __post_init__(self) -> None:
        if not (self.beta < 0 and self.sigma > 0):
            raise ValueError(
                f"pole must lie in the second quadrant, got {self.beta}+{self.sigma}i"
            )

    @classmethod
    def from_complex(cls, s: complex) -> Pole:
        return cls(r=abs(s), theta=math.atan2(s.imag, s.real), beta=s.real, sigma=s.imag)

    @property
    def s(self) -> complex:
        return complex(self.beta, self.sigma)


# ---------------------------------------------------------------------------
# Nine-case taxonomy
# ---------------------------------------------------------------------------


class SlopeRegime(str, Enum):
    """Sign of dσ/dν at ν = 0, i.e. sign of λ + ω² − 1."""

    INCREASING = "Increasing"
    FLAT = "Flat"
    DECREASING = "Decreasing"


class DampingRegime(str, Enum):
    """Classical (ν = 1) regime, sign of λ − 2ω."""

    UNDER = "UnderDamped"
    CRITICAL = "CriticallyDamped"
    OVER = "OverDamped"


@dataclass(frozen=True)
class NineCase:
    initial_slope: SlopeRegime
    terminal: DampingRegime

    @property
    def label(self) -> str:
        return f"{self.initial_slope.value}/{self.terminal.value}"

    @property
    def index(self) -> int:
        """1..9, row-major over (slope, terminal) in declaration order."""
        slopes = list(SlopeRegime)
        terms = list(DampingRegime)
        return 3 * slopes.index(self.initial_slope) + terms.index(self.terminal) + 1


def slope_regime(lam: float, omega: float) -> SlopeRegime:
    delta = lam + omega * omega - 1.0
    if abs(delta) <= CLASSIFY_TOL:
        return SlopeRegime.FLAT
    return SlopeRegime.INCREASING if delta > 0 else SlopeRegime.DECREASING


def damping_regime(lam: float, omega: float) -> DampingRegime:
    delta = lam - 2.0 * omega
    if abs(delta) <= CLASSIFY_TOL:
        return DampingRegime.CRITICAL
    return DampingRegime.OVER if delta > 0 else DampingRegime.UNDER


# Figure presets: (name, λ, ω), three per figure, one per terminal regime.
_SQRT2 = math.sqrt(2.0)
FIGURE_PRESETS: Mapping[int, tuple[tuple[str, float, float], ...]] = MappingProxyType(
    {
        3: (
            ("green", 1.0, 1.0),
            ("black", 2.0, 1.0),
            ("red", 3.0, 1.0),
        ),
        4: (
            ("green", 0.5, 1.0 / _SQRT2),
            ("red", 2.0 * (_SQRT2 - 1.0), _SQRT2 - 1.0),
            ("black", 15.0 / 16.0, 0.25),
        ),
        5: (
            ("red", 0.5, 0.5),
            ("black", 0.5, 0.25),
            ("green", 0.5, 0.125),
        ),
    }
)


# ---------------------------------------------------------------------------
# Solution pieces and sampled trajectories
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SolutionParts:
    """x(t) = e^{βt}(A cos σt + B sin σt) − decay(t)."""

    a_coef: float
    b_coef: float
    beta: float
    sigma: float
    t: np.ndarray
    decay: np.ndarray

    def oscillatory(self) -> np.ndarray:
        envelope = np.exp(self.beta * self.t)
        return envelope * (
            self.a_coef * np.cos(self.sigma * self.t)
            + self.b_coef * np.sin(self.sigma * self.t)
        )

    def total(self) -> np.ndarray:
        return self.oscillatory() - self.decay


class TrajectorySource(str, Enum):
    ANALYTIC = "analytic"
    ORACLE = "oracle"
    CLASSICAL = "classical"


@dataclass(frozen=True)
class Trajectory:
    """Sampled time series; t strictly increasing and starting at 0."""

    t: np.ndarray
    x: np.ndarray
    source: TrajectorySource
    meta: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        t = np.array(self.t, dtype=float)
        x = np.array(self.x, dtype=float)
        if t.ndim != 1 or t.shape != x.shape or t.size == 0:
            raise ValueError("t and x must be equal-length 1-D arrays")
        if t[0] != 0.0:
            raise ValueError("first sample must be at t = 0")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise ValueError("t must be strictly increasing")
        t.setflags(write=False)
        x.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "meta", MappingProxyType(dict(self.meta)))

    def __len__(self) -> int:
        return int(self.t.size)

    def to_rows(self) -> list[tuple[float, float]]:
        return list(zip(self.t.tolist(), self.x.tolist()))

    def sample_at(self, times: np.ndarray) -> np.ndarray:
        """Linear interpolation onto ``times`` (which must lie inside the span)."""
        return np.interp(times, self.t, self.x)

    def max_abs_difference(self, other: Trajectory) -> float:
        """Max |self − other| on self's grid, restricted to the common span."""
        mask = self.t <= other.t[-1]
        return float(np.max(np.abs(self.x[mask] - other.sample_at(self.t[mask]))))
