"""Tests for residues, the branch-cut decay integral and the classical limits."""

from __future__ import annotations

import cmath
import logging
import math

import numpy as np
import pytest
import sympy
from scipy.integrate import trapezoid
from scipy.linalg import expm

from fracdamp import analytic
from fracdamp.analytic import (
    AnalyticSolver,
    DecayQuadratureConfig,
    caputo_zero_limit,
    classical_poles,
    classical_solve,
    crosscheck_expanded,
    decay_function,
    decay_function_with_error,
    decay_integrand,
    decay_numerator,
    expanded_coefficients,
    residue_coefficients,
    time_grid,
    undamped_solve,
)
from fracdamp.errors import (
    DegenerateDenominator,
    DomainError,
    InvalidConfig,
    QuadratureNonConvergence,
)
from fracdamp.model import DampingRegime, Pole, TrajectorySource, validate
from fracdamp.polefinder import find_pole


def trapezoid_decay(t: float, lam: float, omega: float, nu: float, x0: float, x1: float) -> float:
    """Cut integral on a dense log grid, R = e^y, straight from the printed integrand."""
    y = np.linspace(-120.0, 12.0, 400_001)
    R = np.exp(y)
    num = (R * x0 - x1) * np.sin(nu * np.pi) + (x0 / R) * (R**2 + omega**2) * np.sin(
        np.pi * (nu - 1.0)
    )
    r_nu = R**nu
    p = R**2 + omega**2
    den = p**2 + 2 * lam * r_nu * p * np.cos(nu * np.pi) + (lam * r_nu) ** 2
    f = lam / np.pi * num * np.exp(-R * t) * r_nu / den * R
    return float(trapezoid(f, y))


def classical_reference(t: float, lam: float, omega: float, x0: float, x1: float) -> float:
    system = np.array([[0.0, 1.0], [-(omega**2), -lam]])
    return float((expm(system * t) @ np.array([x0, x1]))[0])


# ---------------------------------------------------------------------------
# Residues
# ---------------------------------------------------------------------------


class TestResidues:
    @pytest.mark.parametrize(
        ("lam", "omega", "nu", "x0", "x1"),
        [
            (1.0, 1.0, 0.5, 1.0, 0.0),
            (2.0, 0.5, 0.3, 1.0, -1.0),
            (0.5, 2.0, 0.8, 0.0, 1.0),
            (3.0, 1.0, 0.9, 0.7, 0.2),
        ],
    )
    def test_expanded_form_matches_complex(self, lam, omega, nu, x0, x1):
        params = validate(lam, omega, nu, x0, x1)
        pole = find_pole(params)
        a_coef, b_coef = residue_coefficients(params, pole)
        a_exp, b_exp = expanded_coefficients(params, pole)
        assert a_exp == pytest.approx(a_coef, rel=1e-10, abs=1e-12)
        assert b_exp == pytest.approx(b_coef, rel=1e-10, abs=1e-12)

    def test_coefficients_from_residue_pair(self):
        params = validate(1.5, 0.75, 0.4, 0.3, -0.8)
        pole = find_pole(params)
        s = pole.s
        s_pow = cmath.exp((params.nu - 1) * cmath.log(s))
        c = (s * params.x0 + params.x1 + params.lam * params.x0 * s_pow) / (
            2 * s + params.nu * params.lam * s_pow
        )
        a_coef, b_coef = residue_coefficients(params, pole)
        assert a_coef == pytest.approx(2 * c.real, rel=1e-12)
        assert b_coef == pytest.approx(-2 * c.imag, rel=1e-12)

    def test_printed_cosine_denominator_deviates_unless_lambda_is_one(self, caplog):
        pole_params = validate(2.0, 1.0, 0.5, 1.0, 0.0)
        with caplog.at_level(logging.WARNING, logger="fracdamp.analytic"):
            report = crosscheck_expanded(pole_params, find_pole(pole_params))
        assert report.expanded_agrees
        assert not report.printed_agrees
        assert "printed cosine-line denominator" in caplog.text

        unit = validate(1.0, 1.0, 0.5, 1.0, 0.0)
        assert crosscheck_expanded(unit, find_pole(unit)).printed_agrees

    def test_degenerate_denominator(self):
        lam, nu = 1.0, 0.5
        # 2s + νλs^(ν−1) = 0 at s^(2−ν) = −νλ/2 on the principal sheet
        r = (nu * lam / 2) ** (1 / (2 - nu))
        s = cmath.rect(r, math.pi / (2 - nu))
        with pytest.raises(DegenerateDenominator):
            residue_coefficients(validate(lam, 1.0, nu), Pole.from_complex(s))

    @pytest.mark.parametrize("nu", [0.0, 1.0])
    def test_endpoints_rejected(self, nu):
        pole = Pole.from_complex(complex(-0.5, 1.0))
        with pytest.raises(DomainError):
            residue_coefficients(validate(1.0, 1.0, nu), pole)


# ---------------------------------------------------------------------------
# Decay integral
# ---------------------------------------------------------------------------


class TestDecayNumerator:
    def test_symbolic_identity(self):
        R, nu, x0, x1, omega = sympy.symbols("R nu x0 x1 omega", positive=True)
        printed = (R * x0 - x1) * sympy.sin(nu * sympy.pi) + (x0 / R) * (
            R**2 + omega**2
        ) * sympy.sin(sympy.pi * (nu - 1))
        simplified = -sympy.sin(nu * sympy.pi) * (x1 + x0 * omega**2 / R)
        assert sympy.simplify(sympy.expand(printed - simplified)) == 0

    @pytest.mark.parametrize("R", [1e-3, 0.5, 1.0, 7.0, 300.0])
    def test_numeric_identity(self, R):
        params = validate(1.3, 0.7, 0.35, 0.9, -0.4)
        printed = decay_numerator(R, params)
        simplified = decay_numerator(R, params, simplified=True)
        assert printed == pytest.approx(simplified, rel=1e-10, abs=1e-12 * R)

    def test_integrand_rejects_non_positive_radius(self):
        with pytest.raises(DomainError):
            decay_integrand(0.0, 1.0, validate(1.0, 1.0, 0.5))


class TestDecayFunction:
    @pytest.mark.parametrize(
        ("lam", "omega", "nu", "x0", "x1", "t"),
        [
            (1.0, 1.0, 0.5, 1.0, 0.0, 0.0),
            (1.0, 1.0, 0.5, 1.0, 0.0, 2.0),
            (2.0, 0.5, 0.3, 1.0, -1.0, 0.5),
            (0.5, 2.0, 0.8, 0.0, 1.0, 1.0),
            (3.0, 1.0, 0.8, 1.0, 0.0, 5.0),
        ],
    )
    def test_matches_trapezoid_oracle(self, lam, omega, nu, x0, x1, t):
        value = decay_function(t, validate(lam, omega, nu, x0, x1))
        reference = trapezoid_decay(t, lam, omega, nu, x0, x1)
        assert value == pytest.approx(reference, rel=1e-6, abs=1e-7)

    def test_zero_initial_data(self):
        assert decay_function_with_error(1.0, validate(1.0, 1.0, 0.5, 0.0, 0.0)) == (0.0, 0.0)

    def test_error_estimate_small(self):
        value, abserr = decay_function_with_error(1.0, validate(1.0, 1.0, 0.5))
        assert abserr < 1e-8 * max(1.0, abs(value))

    def test_relaxes_monotonically(self):
        params = validate(1.0, 1.0, 0.5, 1.0, 0.0)
        values = [abs(decay_function(t, params)) for t in (0.5, 1.0, 2.0, 5.0, 10.0)]
        assert all(b < a for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("nu", [0.0, 1.0])
    def test_endpoint_orders_rejected(self, nu):
        with pytest.raises(DomainError):
            decay_function(1.0, validate(1.0, 1.0, nu))

    def test_negative_time_rejected(self):
        with pytest.raises(DomainError):
            decay_function(-0.1, validate(1.0, 1.0, 0.5))

    def test_subdivision_limit_raises(self, monkeypatch):
        def exhausted(func, a, b, **kwargs):
            return 0.25, 1e-3, {"last": kwargs["limit"]}, "maximum number of subdivisions"

        monkeypatch.setattr(analytic, "quad", exhausted)
        cfg = DecayQuadratureConfig(max_subdivisions=50)
        with pytest.raises(QuadratureNonConvergence) as exc_info:
            decay_function(1.0, validate(1.0, 1.0, 0.5), cfg)
        assert exc_info.value.abserr == 1e-3
        assert exc_info.value.code == "QUADRATURE_NON_CONVERGENCE"

    def test_advisory_within_tolerance_is_kept(self, monkeypatch):
        calls = []

        def roundoff(func, a, b, **kwargs):
            calls.append((a, b))
            return 0.25, 1e-14, {"last": 3}, "roundoff error detected"

        monkeypatch.setattr(analytic, "quad", roundoff)
        assert decay_function(1.0, validate(1.0, 1.0, 0.5)) == 0.25 * len(calls)

    def test_advisory_above_tolerance_raises(self, monkeypatch):
        def roundoff(func, a, b, **kwargs):
            return 0.25, 1.0, {"last": 3}, "roundoff error detected\n  more detail"

        monkeypatch.setattr(analytic, "quad", roundoff)
        with pytest.raises(QuadratureNonConvergence) as exc_info:
            decay_function(1.0, validate(1.0, 1.0, 0.5))
        assert "roundoff error detected" in str(exc_info.value)
        assert exc_info.value.abserr == 1.0

    def test_head_gets_breakpoints_on_finite_pieces(self, monkeypatch):
        seen = []
        real_quad = analytic.quad

        def recording(func, a, b, **kwargs):
            seen.append((a, b, kwargs.get("points")))
            return real_quad(func, a, b, **kwargs)

        monkeypatch.setattr(analytic, "quad", recording)
        decay_function(0.0, validate(100.0, 0.01, 0.5))
        head, mid, tail = seen
        assert head[0] == 0.0 and head[1] == 1.0
        assert any(point == pytest.approx(1e-6) for point in head[2])
        assert all(0.0 < point < 1.0 for point in head[2])
        assert mid[0] == 1.0 and math.isinf(tail[1]) and tail[2] is None

    def test_tighter_tolerance_agrees(self):
        params = validate(2.0, 0.5, 0.3, 1.0, -1.0)
        loose = decay_function(0.5, params, DecayQuadratureConfig(rel_tol=1e-10))
        tight = decay_function(0.5, params, DecayQuadratureConfig(rel_tol=5e-11))
        assert tight == pytest.approx(loose, abs=1e-9)

    @pytest.mark.parametrize(
        "kwargs",
        [{"rel_tol": 0.0}, {"abs_tol": -1.0}, {"max_subdivisions": 0}, {"rel_tol": math.nan}],
    )
    def test_config_validated(self, kwargs):
        with pytest.raises(InvalidConfig):
            DecayQuadratureConfig(**kwargs)

    @pytest.mark.parametrize("t", [0.0, 1.0, 5.0, 10.0])
    def test_vanishes_near_unit_order(self, t):
        assert abs(decay_function(t, validate(1.0, 1.0, 1.0 - 1e-8, 1.0, 1.0))) <= 1e-6

    @pytest.mark.parametrize("t", [0.0, 1.0, 5.0, 10.0])
    def test_vanishes_near_zero_order_without_displacement(self, t):
        assert abs(decay_function(t, validate(1.0, 1.0, 1e-8, 0.0, 1.0))) <= 1e-6


# ---------------------------------------------------------------------------
# Limits
# ---------------------------------------------------------------------------


class TestClassical:
    @pytest.mark.parametrize(
        ("lam", "omega", "case"),
        [(1.0, 1.0, DampingRegime.UNDER), (2.0, 1.0, DampingRegime.CRITICAL), (3.0, 1.0, DampingRegime.OVER)],
    )
    def test_poles_by_regime(self, lam, omega, case):
        assert classical_poles(lam, omega).case is case

    @pytest.mark.parametrize(("lam", "omega"), [(1.0, 1.0), (2.0, 1.0), (3.0, 1.0), (0.5, 2.0)])
    @pytest.mark.parametrize(("x0", "x1"), [(1.0, 0.0), (0.0, 1.0), (1.0, -1.0)])
    def test_matches_matrix_exponential(self, lam, omega, x0, x1):
        params = validate(lam, omega, 1.0, x0, x1)
        for t in (0.0, 0.3, 1.0, 4.0):
            assert classical_solve(t, params) == pytest.approx(
                classical_reference(t, lam, omega, x0, x1), rel=1e-9, abs=1e-12
            )

    def test_requires_unit_order(self):
        with pytest.raises(DomainError):
            classical_solve(1.0, validate(1.0, 1.0, 0.5))


class TestZeroOrder:
    def test_undamped_frequency(self):
        params = validate(1.0, 1.0, 0.0, 1.0, 0.0)
        period = 2 * math.pi / math.sqrt(2.0)
        assert undamped_solve(period, params) == pytest.approx(1.0)
        assert undamped_solve(period / 2, params) == pytest.approx(-1.0)

    def test_caputo_limit_initial_data(self):
        params = validate(2.0, 1.0, 0.0, 1.0, 0.5)
        assert caputo_zero_limit(0.0, params) == pytest.approx(1.0)
        h = 1e-6
        slope = (caputo_zero_limit(h, params) - caputo_zero_limit(0.0, params)) / h
        assert slope == pytest.approx(0.5, abs=1e-5)

    def test_caputo_limit_oscillates_about_offset(self):
        params = validate(1.0, 1.0, 0.0, 1.0, 0.0)
        half_period = math.pi / math.sqrt(2.0)
        # centre of the oscillation is λx0/(λ+ω²)
        assert caputo_zero_limit(half_period, params) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0, 3.0])
    def test_small_order_approaches_caputo_limit(self, t):
        params = validate(1.0, 1.0, 0.01, 1.0, 0.0)
        assert AnalyticSolver(params).evaluate(t) == pytest.approx(
            caputo_zero_limit(t, params), abs=0.05
        )


# ---------------------------------------------------------------------------
# Solver
# ---------------------------------------------------------------------------


class TestHeavyDamping:
    PARAMS = (100.0, 0.01, 0.5)

    @pytest.mark.parametrize(("x0", "x1"), [(1.0, 0.0), (1.0, -1.0), (0.0, 1.0)])
    def test_initial_displacement_recovered(self, x0, x1):
        solver = AnalyticSolver(validate(*self.PARAMS, x0, x1))
        assert solver.evaluate(0.0) == pytest.approx(x0, abs=1e-6)

    @pytest.mark.parametrize("t", [0.0, 1.0])
    def test_decay_matches_trapezoid_oracle(self, t):
        value = decay_function(t, validate(*self.PARAMS, 1.0, 0.0))
        reference = trapezoid_decay(t, *self.PARAMS, 1.0, 0.0)
        assert value == pytest.approx(reference, rel=1e-6, abs=1e-7)


class TestAnalyticSolver:
    @pytest.mark.parametrize(
        ("lam", "omega", "nu"),
        [(1.0, 1.0, 0.5), (0.5, 2.0, 0.25), (2.0, 0.5, 0.75), (3.0, 1.0, 0.9)],
    )
    @pytest.mark.parametrize(("x0", "x1"), [(1.0, 0.0), (0.0, 1.0), (1.0, -1.0)])
    def test_initial_conditions(self, lam, omega, nu, x0, x1):
        solver = AnalyticSolver(validate(lam, omega, nu, x0, x1))
        h = 1e-4
        at_zero = solver.evaluate(0.0)
        assert at_zero == pytest.approx(x0, abs=1e-6)
        assert (solver.evaluate(h) - at_zero) / h == pytest.approx(x1, abs=1e-3)

    def test_parts_recombine(self):
        solver = AnalyticSolver(validate(1.0, 1.0, 0.5))
        t = np.array([0.0, 1.0, 2.5])
        parts = solver.parts(t)
        expected = [solver.evaluate(float(v)) for v in t]
        np.testing.assert_allclose(parts.total(), expected, rtol=1e-12, atol=1e-14)

    def test_near_unit_order_matches_classical(self):
        solver = AnalyticSolver(validate(1.0, 1.0, 1.0 - 1e-6, 1.0, 0.0))
        classical = validate(1.0, 1.0, 1.0, 1.0, 0.0)
        for t in np.linspace(0.0, 10.0, 21):
            assert solver.evaluate(float(t)) == pytest.approx(
                classical_solve(float(t), classical), abs=1e-3
            )

    @pytest.mark.parametrize(("lam", "omega", "nu"), [(1.0, 1.0, 0.5), (3.0, 1.0, 0.8)])
    def test_bounded_by_envelope_and_decay(self, lam, omega, nu):
        params = validate(lam, omega, nu, 1.0, -0.5)
        solver = AnalyticSolver(params)
        pole = solver.pole
        a_coef, b_coef = residue_coefficients(params, pole)
        for t in (0.0, 0.5, 2.0, 6.0):
            bound = (abs(a_coef) + abs(b_coef)) * math.exp(pole.beta * t)
            assert abs(solver.evaluate(t)) <= bound + abs(decay_function(t, params)) + 1e-12

    def test_unit_order_routes_to_classical(self):
        params = validate(3.0, 1.0, 1.0, 1.0, 0.0)
        solver = AnalyticSolver(params)
        t = np.linspace(0.0, 5.0, 11)
        total, osc, decay = solver.columns(t)
        assert np.all(decay == 0.0)
        np.testing.assert_array_equal(total, osc)
        np.testing.assert_array_equal(total, [classical_solve(float(v), params) for v in t])

    def test_zero_order_routes_to_undamped(self):
        params = validate(1.0, 1.0, 0.0)
        assert analytic.evaluate(1.3, params) == undamped_solve(1.3, params)

    def test_parts_need_interior_order(self):
        with pytest.raises(DomainError):
            AnalyticSolver(validate(1.0, 1.0, 1.0)).parts(np.array([0.0]))

    def test_negative_time_rejected(self):
        with pytest.raises(DomainError):
            AnalyticSolver(validate(1.0, 1.0, 0.5)).evaluate(-1.0)

    def test_trajectory(self):
        traj = AnalyticSolver(validate(1.0, 1.0, 0.5)).trajectory(1.0, 0.25)
        assert traj.source is TrajectorySource.ANALYTIC
        np.testing.assert_allclose(traj.t, [0.0, 0.25, 0.5, 0.75, 1.0])
        assert traj.x[0] == pytest.approx(1.0, abs=1e-6)

    def test_classical_trajectory_source(self):
        traj = AnalyticSolver(validate(1.0, 1.0, 1.0)).trajectory(1.0, 0.5)
        assert traj.source is TrajectorySource.CLASSICAL

    def test_time_grid_rejects_bad_step(self):
        with pytest.raises(InvalidConfig):
            time_grid(1.0, 0.0)
