import math

import numpy as np
import pytest

from pnodal.potentials import (
    CoefficientPair,
    ConstantPotential,
    CosinePotential,
    PolynomialPotential,
    ZeroPotential,
)
from pnodal.pruefer import (
    AccuracyError,
    NonMonotonePhaseError,
    StepUnderflowError,
    integrate_phase,
    phase_rhs,
)

from oracles import shoot_eigenvalue

ZERO_PAIR = CoefficientPair(ZeroPotential(), ZeroPotential())


class TestPhaseRhs:
    def test_free_equation_is_unit_speed(self, table_cache):
        params, table = table_cache(2.0)
        for x, theta in [(0.0, 0.0), (0.3, 0.7), (0.9, 0.2)]:
            assert phase_rhs(params, ZERO_PAIR, 7.0, x, theta, table) == 1.0

    def test_nodal_phase_is_unit_speed(self, table_cache):
        # S_p vanishes at nodal phases, so q and r drop out entirely
        params, table = table_cache(3.0)
        pair = CoefficientPair(ConstantPotential(5.0), ConstantPotential(2.0))
        lam = 40.0
        theta = 2.0 * params.pi_p / lam ** (2.0 / 3.0)
        assert phase_rhs(params, pair, lam, 0.5, theta, table) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_direct_substitution(self, table_cache):
        # p=2, q=1, r=0, lambda=10 at a phase where sin(10 theta) = 1
        params, table = table_cache(2.0)
        pair = CoefficientPair(ConstantPotential(1.0), ZeroPotential())
        theta = 0.5 * math.pi / 10.0
        assert phase_rhs(params, pair, 10.0, 0.2, theta, table) == pytest.approx(
            0.99, abs=1e-12
        )

    def test_rejects_nonpositive_lambda(self, table_cache):
        params, table = table_cache(2.0)
        with pytest.raises(ValueError):
            phase_rhs(params, ZERO_PAIR, -1.0, 0.0, 0.0, table)


class TestIntegratePhase:
    def test_zero_coefficients_exact(self, table_cache):
        params, table = table_cache(2.0)
        sol = integrate_phase(params, ZERO_PAIR, 11.0, table=table, verify=True)
        assert np.max(np.abs(sol.thetas - sol.xs)) < 1e-12
        assert sol.xs[0] == 0.0
        assert sol.xs[-1] == 1.0

    @pytest.mark.parametrize("p", (2.0, 3.0, 4.0))
    def test_dirichlet_phase_condition_free_problem(self, table_cache, p):
        params, table = table_cache(p)
        n = 4
        lam = (n * params.pi_p) ** (p / 2.0)
        sol = integrate_phase(params, ZERO_PAIR, lam, table=table)
        assert lam ** (2.0 / p) * sol.theta_end == pytest.approx(
            n * params.pi_p, abs=1e-10
        )

    def test_strictly_increasing_phase(self, table_cache):
        params, table = table_cache(2.0)
        pair = CoefficientPair(CosinePotential(1.0, 1), PolynomialPotential((0.0, 1.0, -1.0)))
        sol = integrate_phase(params, pair, 8.0, table=table)
        assert np.all(np.diff(sol.thetas) > 0.0)

    def test_non_monotone_error_at_small_lambda(self, table_cache):
        params, table = table_cache(2.0)
        pair = CoefficientPair(ConstantPotential(30.0), ConstantPotential(3.0))
        with pytest.raises(NonMonotonePhaseError):
            integrate_phase(params, pair, 2.0, table=table)

    def test_step_underflow(self, table_cache):
        params, table = table_cache(2.0)
        with pytest.raises(StepUnderflowError):
            integrate_phase(params, ZERO_PAIR, 1e12, table=table)

    def test_rejects_coarse_step_scale(self, table_cache):
        params, table = table_cache(2.0)
        with pytest.raises(ValueError):
            integrate_phase(params, ZERO_PAIR, 10.0, table=table, step_scale=0.5)

    def test_verify_catches_impossible_tolerance(self, table_cache):
        params, table = table_cache(2.0)
        pair = CoefficientPair(CosinePotential(1.0, 1), ZeroPotential())
        with pytest.raises(AccuracyError):
            integrate_phase(params, pair, 9.5, table=table, verify=True, tol=1e-17)


class TestConvergence:
    def test_step_halving_fourth_order(self, table_cache):
        params, table = table_cache(2.0)
        pair = CoefficientPair(CosinePotential(1.0, 1), PolynomialPotential((0.0, 1.0, -1.0)))
        lam = 20.1
        ends = {}
        for scale in (0.08, 0.04, 0.02):
            sol = integrate_phase(params, pair, lam, table=table, step_scale=scale)
            ends[scale] = sol.theta_end
        err_h = abs(ends[0.08] - ends[0.04])
        err_h2 = abs(ends[0.04] - ends[0.02])
        assert err_h <= 16.0 * err_h2 + 1e-13

    @pytest.mark.parametrize("p", (2.0, 3.0))
    def test_step_halving_at_default_scale(self, table_cache, p):
        params, table = table_cache(p)
        pair = CoefficientPair(CosinePotential(1.0, 1), PolynomialPotential((0.0, 1.0, -1.0)))
        lam = (7 * params.pi_p) ** (p / 2.0) * 1.003
        a = integrate_phase(params, pair, lam, table=table, step_scale=0.02).theta_end
        b = integrate_phase(params, pair, lam, table=table, step_scale=0.01).theta_end
        c = integrate_phase(params, pair, lam, table=table, step_scale=0.005).theta_end
        assert abs(a - b) <= 16.0 * abs(b - c) + 1e-13


class TestClassicalScaling:
    """p = 2 phase trajectories against direct second-order shooting."""

    def test_random_smooth_pairs_match_shooting(self, table_cache):
        from pnodal.spectrum import find_eigenvalue

        params, table = table_cache(2.0)
        rng = np.random.default_rng(42)
        for trial in range(5):
            q = PolynomialPotential(tuple(rng.uniform(-1.0, 1.0, 4)))
            r = PolynomialPotential(tuple(rng.uniform(-0.5, 0.5, 3)))
            pair = CoefficientPair(q, r)
            n = int(rng.integers(4, 9))
            lam = find_eigenvalue(params, pair, n, table=table)
            lam_oracle = shoot_eigenvalue(q, r, n, seed=lam)
            assert lam == pytest.approx(lam_oracle, abs=1e-8), (
                f"trial {trial}: n={n} phase {lam} vs shooting {lam_oracle}"
            )
