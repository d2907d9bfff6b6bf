import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from vvmf.errors import PrecisionLoss
from vvmf.qseries import (
    QSeries,
    delta_power,
    delta_power_value,
    eta_expansion,
    eta_quotient,
    eta_quotient_value,
    eta_value,
    hauptmodul_gamma0_2,
    hauptmodul_gamma0_2_value,
    hauptmodul_gamma2,
    hauptmodul_gamma2_value,
    modular_lambda,
    modular_lambda_value,
)

small_series = st.builds(
    lambda coeffs: QSeries(
        {Fraction(e, 2): Fraction(c) for e, c in coeffs}, Fraction(8)
    ),
    st.lists(
        st.tuples(st.integers(-4, 10), st.integers(-50, 50)), min_size=0, max_size=8
    ),
)


class TestRingAxioms:
    @given(small_series, small_series, small_series)
    @settings(max_examples=60)
    def test_mul_distributes_over_add(self, a, b, c):
        assert a * (b + c) == a * b + a * c

    @given(small_series, small_series)
    @settings(max_examples=60)
    def test_mul_commutes(self, a, b):
        assert a * b == b * a

    @given(small_series)
    def test_additive_inverse(self, a):
        assert (a + (-a)) == QSeries.constant(0)

    @given(small_series, st.integers(0, 4))
    @settings(max_examples=40)
    def test_pow_is_repeated_mul(self, a, n):
        if not a.coeffs and n == 0:
            return
        expected = QSeries.constant(1, a.prec - a.valuation * max(n - 1, 0))
        for _ in range(n):
            expected = expected * a
        assert a**n == expected


class TestInverse:
    @given(small_series, st.integers(1, 50))
    @settings(max_examples=60)
    def test_inverse_is_right_inverse(self, a, lead):
        a = a + QSeries({a.valuation - 1: Fraction(lead)}, a.prec)
        assert (a * a.inverse()) == QSeries.constant(1)

    def test_zero_series_rejected(self):
        with pytest.raises(ZeroDivisionError):
            QSeries({}, Fraction(5)).inverse()


class TestEta:
    def test_pentagonal_coefficients(self):
        e = eta_expansion(20)
        offset = Fraction(1, 24)
        signs = {0: 1, 1: -1, 2: -1, 5: 1, 7: 1, 12: -1, 15: -1}
        for n in range(16):
            assert e.coefficient(offset + n) == signs.get(n, 0)

    def test_quotient_matches_power(self):
        assert eta_quotient([(1, 3)], 10) == eta_expansion(12) ** 3

    def test_value_matches_series(self):
        tau = 0.21 + 1.4j
        series = eta_expansion(40)
        assert abs(series.evaluate(tau, 1e-12) - eta_value(tau)) < 1e-12

    def test_value_at_i(self):
        # eta(i) = Gamma(1/4) / (2 pi^(3/4))
        from math import gamma, pi

        expected = gamma(0.25) / (2 * pi**0.75)
        assert abs(eta_value(1j) - expected) < 1e-12


class TestDeltaPower:
    def test_delta_is_eta_24(self):
        d = delta_power(12, 20)
        assert d.coefficient(1) == 1
        assert d.coefficient(2) == -24
        assert d.coefficient(3) == 252
        assert d.coefficient(4) == -1472

    def test_value_matches_series(self):
        tau = -0.4 + 1.1j
        assert abs(delta_power(12, 40).evaluate(tau, 1e-12) - delta_power_value(12, tau)) < 1e-12

    def test_rejects_odd_weight(self):
        with pytest.raises(ValueError):
            delta_power(3, 10)


class TestHauptmoduls:
    def test_width_one_golden_coefficients(self):
        zh = hauptmodul_gamma0_2(10)
        expected = {
            -1: Fraction(-1, 64),
            0: Fraction(3, 8),
            1: Fraction(-276, 64),
            2: Fraction(32),
        }
        for e, c in expected.items():
            assert zh.coefficient(e) == c

    def test_width_two_golden_coefficients(self):
        zk = hauptmodul_gamma2(10)
        expected = {
            Fraction(-1, 2): Fraction(-1, 16),
            Fraction(0): Fraction(1, 2),
            Fraction(1, 2): Fraction(-5, 4),
            Fraction(1): Fraction(0),
            Fraction(3, 2): Fraction(31, 8),
            Fraction(2): Fraction(0),
            Fraction(5, 2): Fraction(-27, 2),
        }
        for e, c in expected.items():
            assert zk.coefficient(e) == c

    def test_lambda_leading_terms(self):
        lam = modular_lambda(6)
        assert lam.coefficient(Fraction(1, 2)) == 16
        assert lam.coefficient(1) == -128
        assert lam.coefficient(Fraction(3, 2)) == 704

    def test_lambda_value_identities(self):
        # lambda(tau) + lambda(-1/tau) = 1 on the imaginary axis
        tau = 1.3j
        assert abs(modular_lambda_value(tau) + modular_lambda_value(-1 / tau) - 1) < 1e-12

    @pytest.mark.parametrize(
        "series,value",
        [
            (hauptmodul_gamma0_2, hauptmodul_gamma0_2_value),
            (hauptmodul_gamma2, hauptmodul_gamma2_value),
        ],
    )
    def test_value_matches_series(self, series, value):
        tau = 0.17 + 1.9j
        assert abs(series(40).evaluate(tau, 1e-9) - value(tau)) < 1e-9

    def test_width_two_invariance(self):
        # invariant under t^2 and s t^2 s (generators of the level-2 group)
        from vvmf.psl2 import S, T, act_point

        tau = 0.3 + 0.9j
        f = hauptmodul_gamma2_value
        for g in (T**2, S * T**2 * S.inverse()):
            assert abs(f(act_point(g, tau)) - f(tau)) < 1e-11


class TestEvaluationGuard:
    def test_refuses_low_order_at_low_height(self):
        zh = hauptmodul_gamma0_2(8)
        with pytest.raises(PrecisionLoss):
            zh.evaluate(0.01 + 0.05j, 1e-10)

    def test_scale_tau(self):
        e = eta_expansion(10)
        doubled = e.scale_tau(2)
        tau = 0.1 + 1.2j
        assert abs(doubled.evaluate(tau, 1e-10) - e.evaluate(2 * tau, 1e-10)) < 1e-10

    def test_eta_quotient_value_agrees(self):
        tau = 0.4 + 1.5j
        parts = [(1, 8), (2, -4)]
        series = eta_quotient(parts, 40)
        assert abs(series.evaluate(tau, 1e-11) - eta_quotient_value(parts, tau)) < 1e-11
