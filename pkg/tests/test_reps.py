import cmath
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vvmf.errors import DomainMismatch, NotNormal
from vvmf.psl2 import IDENTITY, S, T, GroupElement
from vvmf.reps import (
    ONE,
    ExponentMatrix,
    RepMatrix,
    UnitPhase,
    dedekind_sum,
    dedekind_sum_direct,
    exponent_of,
    finite_quotient_rep,
    nu_exponent_sl2,
    nu_multiplier,
    nu_restricted,
    tensor_with_character,
    trivial_rep,
)
from vvmf.subgroups import FULL, CongruenceSubgroup


class TestUnitPhase:
    @given(st.fractions(), st.fractions())
    def test_group_law(self, a, b):
        x, y = UnitPhase(a), UnitPhase(b)
        product = x * y
        assert 0 <= product.exponent < 1
        assert abs(product.value() - x.value() * y.value()) < 1e-12

    def test_conjugate(self):
        p = UnitPhase(Fraction(1, 3))
        assert (p * p.conjugate()) == ONE


class TestRepMatrix:
    def test_phase_permutation_inverse(self):
        m = RepMatrix(
            [
                [None, UnitPhase(Fraction(1, 4))],
                [UnitPhase(Fraction(1, 2)), None],
            ]
        )
        assert m.is_phase_permutation()
        assert (m @ m.inverse()) == RepMatrix.identity(2)

    def test_matmul_matches_numpy(self):
        rng = random.Random(3)
        a = RepMatrix.from_numpy(
            np.array([[rng.random() + 1j * rng.random() for _ in range(3)] for _ in range(3)])
        )
        b = RepMatrix.from_numpy(
            np.array([[rng.random() + 1j * rng.random() for _ in range(3)] for _ in range(3)])
        )
        assert np.allclose((a @ b).to_numpy(), a.to_numpy() @ b.to_numpy())


class TestDedekindSum:
    @given(st.integers(1, 400))
    def test_reciprocity_formula_matches_direct_sum(self, c):
        d = random.Random(c).randrange(1, 2 * c + 2)
        while np.gcd(d, c) != 1:
            d += 1
        assert dedekind_sum(d, c) == dedekind_sum_direct(d, c)

    def test_small_values(self):
        assert dedekind_sum(1, 1) == 0
        assert dedekind_sum(1, 2) == 0
        assert dedekind_sum(1, 3) == Fraction(1, 18)


def random_sl2(rng: random.Random) -> tuple[int, int, int, int]:
    m = np.eye(2, dtype=object)
    t = np.array([[1, 1], [0, 1]], dtype=object)
    tinv = np.array([[1, -1], [0, 1]], dtype=object)
    s = np.array([[0, -1], [1, 0]], dtype=object)
    for _ in range(rng.randrange(1, 14)):
        m = m @ rng.choice([t, tinv, s])
    return int(m[0, 0]), int(m[0, 1]), int(m[1, 0]), int(m[1, 1])


class TestEtaMultiplier:
    def test_generator_values(self):
        assert nu_exponent_sl2(1, 1, 0, 1) == Fraction(1, 12)
        # s = (0,-1;1,0): value -i = exp(2 pi i * 3/4)
        assert nu_exponent_sl2(0, -1, 1, 0) % 1 == Fraction(3, 4)

    def test_twelfth_power_trivial(self):
        rng = random.Random(71)
        for _ in range(30):
            a, b, c, d = random_sl2(rng)
            assert (12 * nu_exponent_sl2(a, b, c, d)) % 1 == 0

    def test_multiplicative_on_sl2(self):
        rng = random.Random(9)
        for _ in range(100):
            m1 = random_sl2(rng)
            m2 = random_sl2(rng)
            prod = (
                m1[0] * m2[0] + m1[1] * m2[2],
                m1[0] * m2[1] + m1[1] * m2[3],
                m1[2] * m2[0] + m1[3] * m2[2],
                m1[2] * m2[1] + m1[3] * m2[3],
            )
            lhs = nu_exponent_sl2(*prod) % 1
            rhs = (nu_exponent_sl2(*m1) + nu_exponent_sl2(*m2)) % 1
            assert lhs == rhs

    def test_against_eta_power_oracle(self):
        # nu is the weight-1 multiplier of eta^2:
        # eta(g tau)^2 = nu(g) (c tau + d) eta(tau)^2, a genuine SL2 character
        from vvmf.qseries import eta_value

        rng = random.Random(23)
        for _ in range(20):
            a, b, c, d = random_sl2(rng)
            tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 1.6))
            moved = (a * tau + b) / (c * tau + d)
            lhs = eta_value(moved) ** 2
            nu = cmath.exp(2j * cmath.pi * float(nu_exponent_sl2(a, b, c, d)))
            rhs = nu * (c * tau + d) * eta_value(tau) ** 2
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))

    def test_restriction_homomorphism_on_gamma2(self):
        h = CongruenceSubgroup("Gamma", 2)
        rho = nu_restricted(h)
        assert rho.exact_character
        gens = h.generators()
        rng = random.Random(4)
        for _ in range(50):
            g1 = gens[rng.randrange(len(gens))]
            g2 = gens[rng.randrange(len(gens))]
            assert rho.evaluate(g1 * g2) == rho.evaluate(g1) @ rho.evaluate(g2)

    def test_gamma0_2_has_no_exact_character(self):
        rho = nu_restricted(CongruenceSubgroup("Gamma0", 2))
        assert not rho.exact_character


class TestExponent:
    def test_trivial(self):
        rho = trivial_rep(FULL, 2)
        lam = exponent_of(rho, T)
        assert lam.entries == (Fraction(0), Fraction(0))

    def test_nu_on_gamma2(self):
        h = CongruenceSubgroup("Gamma", 2)
        rho = nu_restricted(h)
        lam = exponent_of(rho, T**2)
        assert lam.entries == (Fraction(1, 6),)

    def test_range_enforced(self):
        with pytest.raises(ValueError):
            ExponentMatrix((Fraction(3, 2),), None)


class TestTensorAndQuotient:
    def test_tensor_power_cancels(self):
        rho = trivial_rep(FULL)
        nu = nu_restricted(FULL)
        twisted = tensor_with_character(rho, nu, 12)
        for g in (T, S, T * S):
            assert twisted.evaluate(g) == RepMatrix.identity(1)

    def test_domain_mismatch(self):
        rho = trivial_rep(CongruenceSubgroup("Gamma", 2))
        with pytest.raises(DomainMismatch):
            rho.evaluate(T)

    def test_quotient_requires_normal(self):
        from vvmf.subgroups import coset_table

        h = CongruenceSubgroup("Gamma0", 2)
        table = coset_table(h, FULL)
        with pytest.raises(NotNormal):
            finite_quotient_rep(
                h, table, [RepMatrix.identity(1) for _ in range(table.m)]
            )
