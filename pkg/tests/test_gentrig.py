import math

import numpy as np
import pytest

from pnodal.gentrig import (
    PParameters,
    QuadratureError,
    build_table,
    compute_pi_p,
    g_product,
    signed_power,
    sp,
    sp_prime,
)

from oracles import pi_p_quadrature

P_SAMPLE = (1.5, 2.0, 3.0, 4.0, 7.5)


class TestPiP:
    def test_p2_is_pi(self):
        assert abs(compute_pi_p(2.0) - math.pi) < 1e-12

    def test_closed_form_values(self):
        # pi_4 = pi/sqrt(2); pi_3/2 ~ 1.209199576
        assert abs(compute_pi_p(4.0) - math.pi / math.sqrt(2.0)) < 1e-12
        assert abs(compute_pi_p(3.0) / 2.0 - 1.209199576) < 1e-9

    @pytest.mark.parametrize("p", P_SAMPLE)
    def test_matches_independent_quadrature(self, p):
        assert abs(compute_pi_p(p) - pi_p_quadrature(p)) < 1e-9

    @pytest.mark.parametrize("p", (1.0, 0.5, -2.0))
    def test_rejects_bad_exponent(self, p):
        with pytest.raises(ValueError):
            compute_pi_p(p)


class TestParameters:
    def test_from_exponent(self):
        params = PParameters.from_exponent(3.0)
        assert params.quarter == pytest.approx(params.pi_p / 2.0, rel=1e-15)
        assert params.table_size == 4096

    def test_rejects_small_table(self):
        with pytest.raises(ValueError):
            PParameters.from_exponent(2.0, table_size=128)

    def test_rejects_inconsistent_pi_p(self):
        with pytest.raises(ValueError):
            PParameters(p=2.0, pi_p=3.0, quarter=1.5)


class TestTable:
    @pytest.mark.parametrize("p", P_SAMPLE)
    def test_build_invariants(self, table_cache, p):
        params, table = table_cache(p)
        assert table.values[0] == 0.0
        assert table.values[-1] == 1.0
        assert np.all(np.diff(table.values) > 0.0)
        assert np.all(np.diff(table.nodes) > 0.0)
        assert abs(table.nodes[-1] - params.quarter) < 1e-10
        # identity at the nodes with slope recovered via the identity
        mag = (1.0 - table.values**p) ** (1.0 / p)
        assert np.max(np.abs(table.values**p + mag**p - 1.0)) < 1e-10

    def test_node_examples(self, table_cache):
        params, table = table_cache(2.0)
        # s = 0.5 must sit at arcsin(0.5) = pi/6
        k = int(np.searchsorted(table.values, 0.5))
        if table.values[k] != 0.5:
            # not necessarily a grid point; evaluate the interpolant instead
            assert abs(sp(table, math.pi / 6.0) - 0.5) < 1e-12
        params3, table3 = table_cache(3.0)
        assert abs(table3.nodes[-1] - 1.209199576) < 1e-9


class TestEvaluation:
    def test_p2_reduces_to_sine_cosine(self, table_cache):
        _, table = table_cache(2.0)
        xs = np.linspace(0.0, 10.0, 40001)
        assert np.max(np.abs(sp(table, xs) - np.sin(xs))) < 1e-9
        assert np.max(np.abs(sp_prime(table, xs) - np.cos(xs))) < 1e-9

    def test_sample_phases_match_sine(self, table_cache):
        _, table = table_cache(2.0)
        for x in (0.3, 1.0, 2.5, 4.0, -1.2):
            assert sp(table, x) == pytest.approx(math.sin(x), abs=1e-9)
            assert sp_prime(table, x) == pytest.approx(math.cos(x), abs=1e-9)

    @pytest.mark.parametrize("p", P_SAMPLE)
    def test_endpoints(self, table_cache, p):
        params, table = table_cache(p)
        assert sp(table, 0.0) == 0.0
        assert sp(table, params.quarter) == pytest.approx(1.0, abs=1e-14)
        assert sp_prime(table, 0.0) == 1.0
        assert sp_prime(table, params.quarter) == pytest.approx(0.0, abs=1e-7)

    @pytest.mark.parametrize("p", P_SAMPLE)
    def test_identity_on_random_phases(self, table_cache, p):
        params, table = table_cache(p)
        rng = np.random.default_rng(1234)
        phases = rng.uniform(-3.0 * params.pi_p, 3.0 * params.pi_p, 1000)
        resid = np.abs(sp(table, phases)) ** p + np.abs(sp_prime(table, phases)) ** p
        assert np.max(np.abs(resid - 1.0)) < 1e-9

    @pytest.mark.parametrize("p", P_SAMPLE)
    def test_periodicity_and_symmetries(self, table_cache, p):
        params, table = table_cache(p)
        rng = np.random.default_rng(99)
        x = rng.uniform(0.0, 2.0 * params.pi_p, 500)
        assert np.max(np.abs(sp(table, x + 2.0 * params.pi_p) - sp(table, x))) < 1e-10
        assert np.max(np.abs(sp(table, params.pi_p - x) - sp(table, x))) < 1e-10
        assert np.max(np.abs(sp(table, x + params.pi_p) + sp(table, x))) < 1e-10
        assert np.max(np.abs(sp(table, -x) + sp(table, x))) < 1e-10

    def test_sp_prime_sign_convention(self, table_cache):
        params, table = table_cache(3.0)
        quarter = params.quarter
        assert sp_prime(table, 0.5 * quarter) > 0.0
        assert sp_prime(table, params.pi_p - 0.2) < 0.0
        assert sp_prime(table, params.pi_p + 0.2) < 0.0
        assert sp_prime(table, 2.0 * params.pi_p - 0.2) > 0.0


class TestGProduct:
    @pytest.mark.parametrize("p", P_SAMPLE)
    def test_vanishes_at_quarter_multiples(self, table_cache, p):
        params, table = table_cache(p)
        for k in range(5):
            assert abs(g_product(table, k * params.quarter)) < 1e-9

    def test_p2_double_angle(self, table_cache):
        _, table = table_cache(2.0)
        assert g_product(table, math.pi / 4.0) == pytest.approx(0.5, abs=1e-10)

    def test_matches_factor_product(self, table_cache):
        _, table = table_cache(3.0)
        x = 0.4
        expected = sp(table, x) * signed_power(sp_prime(table, x), 2.0)
        assert g_product(table, x) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("p", P_SAMPLE)
    def test_zero_mean_over_period(self, table_cache, p):
        params, table = table_cache(p)
        xs = np.linspace(0.0, params.pi_p, 20001)
        mean = np.trapezoid(g_product(table, xs), xs) / params.pi_p
        assert abs(mean) < 1e-8


def _richardson_derivative(f, x: float, h: float) -> float:
    d1 = (f(x + h) - f(x - h)) / (2.0 * h)
    d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h
    return (4.0 * d2 - d1) / 3.0


class TestDerivativeIdentities:
    """Finite-difference checks of the two structural derivative identities."""

    @pytest.mark.parametrize("p", P_SAMPLE)
    def test_sp_prime_derivative(self, table_cache, p):
        params, table = table_cache(p)
        # stay away from quarter points where S_p' = 0
        for x in (0.11 * params.pi_p, 0.31 * params.pi_p, 1.13 * params.pi_p):
            s = sp(table, x)
            c = sp_prime(table, x)
            assert abs(c) > 0.1
            expected = -abs(s / c) ** (p - 2.0) * s
            got = _richardson_derivative(lambda y: sp_prime(table, y), x, 1e-3)
            assert got == pytest.approx(expected, abs=5e-5)

    @pytest.mark.parametrize("p", P_SAMPLE)
    def test_g_product_derivative(self, table_cache, p):
        params, table = table_cache(p)
        for x in (0.07 * params.pi_p, 0.23 * params.pi_p, 0.86 * params.pi_p):
            s = abs(sp(table, x))
            expected = 1.0 - p * s**p
            got = _richardson_derivative(lambda y: g_product(table, y), x, 1e-3)
            assert got == pytest.approx(expected, abs=5e-5)

    @pytest.mark.parametrize("p", P_SAMPLE)
    def test_three_expressions_agree(self, table_cache, p):
        _, table = table_cache(p)
        rng = np.random.default_rng(7)
        x = rng.uniform(0.0, 4.0, 200)
        s = np.abs(sp(table, x))
        c = np.abs(sp_prime(table, x))
        e1 = c**p - (p - 1.0) * s**p
        e2 = 1.0 - p * s**p
        e3 = (1.0 - p) + p * c**p
        assert np.max(np.abs(e1 - e2)) < 1e-10
        assert np.max(np.abs(e2 - e3)) < 1e-10


class TestSignedPower:
    def test_odd_extension(self):
        assert signed_power(-2.0, 3.0) == pytest.approx(-8.0)
        assert signed_power(2.0, 0.5) == pytest.approx(math.sqrt(2.0))
        assert signed_power(-2.0, 0.5) == pytest.approx(-math.sqrt(2.0))
        assert signed_power(0.0, 1.5) == 0.0
