import random
from fractions import Fraction

import numpy as np
import pytest

from vvmf.errors import NotTransversal
from vvmf.induce import (
    block_sparsity_ok,
    coset_change_conjugator,
    induce,
    induced_cusp_blocks,
    induced_cusp_eigenvectors,
    induced_exponent,
    stabilizer_generators,
    transversal_table,
)
from vvmf.psl2 import IDENTITY, INFINITY, S, T, parse_element
from vvmf.reps import ONE, RepMatrix, UnitPhase, exponent_of, nu_restricted, trivial_rep
from vvmf.subgroups import (
    FULL,
    KNOWN_CUSP_DATA,
    CongruenceSubgroup,
    coset_table,
    cusp_system,
    parse_group,
)

GAMMA2 = CongruenceSubgroup("Gamma", 2)
GAMMA02 = CongruenceSubgroup("Gamma0", 2)


def random_word(rng: random.Random, length: int = 10):
    out = IDENTITY
    for _ in range(rng.randrange(1, length)):
        out = out * rng.choice([T, T.inverse(), S])
    return out


class TestRankTwo:
    def test_t_swaps_cosets(self):
        table = coset_table(GAMMA2, GAMMA02)
        rho = induce(trivial_rep(GAMMA2), table)
        swap = RepMatrix([[None, ONE], [ONE, None]])
        assert rho.evaluate(T) == swap

    def test_stabilizer_of_zero_acts_trivially(self):
        table = coset_table(GAMMA2, GAMMA02)
        rho = induce(trivial_rep(GAMMA2), table)
        t0 = parse_element("stts")  # generator of the stabilizer of cusp 0
        assert rho.evaluate(t0) == RepMatrix.identity(2)

    def test_exponent_multiset(self):
        system = cusp_system(GAMMA2, INFINITY, GAMMA02)
        lams = [
            exponent_of(trivial_rep(GAMMA2), t_i)
            for t_i in stabilizer_generators(system)
        ]
        omega = induced_exponent(lams, system.widths())
        assert sorted(omega.entries) == [Fraction(0), Fraction(1, 2)]


class TestRankThree:
    def test_printed_matrix_under_explicit_transversal(self):
        reps = [IDENTITY, S, T * S]
        table = transversal_table(GAMMA02, reps, FULL)
        rho = induce(trivial_rep(GAMMA02), table)
        expected = RepMatrix(
            [[ONE, None, None], [None, None, ONE], [None, ONE, None]]
        )
        assert rho.evaluate(T) == expected

    def test_exponent_multiset(self):
        system = cusp_system(GAMMA02, INFINITY, FULL)
        lams = [
            exponent_of(trivial_rep(GAMMA02), t_i)
            for t_i in stabilizer_generators(system)
        ]
        omega = induced_exponent(lams, system.widths())
        assert sorted(omega.entries) == [Fraction(0), Fraction(0), Fraction(1, 2)]


class TestRankSix:
    @pytest.mark.parametrize("base", ["trivial", "nu"])
    def test_block_rule_matches_direct_induction(self, base):
        rho = trivial_rep(GAMMA2) if base == "trivial" else nu_restricted(GAMMA2)
        system = cusp_system(GAMMA2, INFINITY, FULL)
        table = transversal_table(GAMMA2, system.transversal, FULL)
        direct = induce(rho, table).evaluate(T)
        assert induced_cusp_blocks(rho, system) == direct

    def test_block_permutation_structure(self):
        system = cusp_system(GAMMA2, INFINITY, FULL)
        blocks = induced_cusp_blocks(trivial_rep(GAMMA2), system)
        # three 2x2 blocks of shape (0 T_i; I 0) on the diagonal
        arr = blocks.to_numpy()
        for b in range(3):
            sub = arr[2 * b : 2 * b + 2, 2 * b : 2 * b + 2]
            assert sub[0, 0] == 0 and sub[1, 1] == 0
            assert sub[1, 0] == 1 and abs(sub[0, 1]) == 1
        # everything off the 2x2 diagonal blocks vanishes
        mask = np.ones((6, 6), dtype=bool)
        for b in range(3):
            mask[2 * b : 2 * b + 2, 2 * b : 2 * b + 2] = False
        assert not arr[mask].any()

    def test_omega_interleaves_halved_exponents(self):
        rho = nu_restricted(GAMMA2)
        system = cusp_system(GAMMA2, INFINITY, FULL)
        lams = [exponent_of(rho, t_i) for t_i in stabilizer_generators(system)]
        omega = induced_exponent(lams, system.widths())
        expected = []
        for lam in lams:
            e = lam.entries[0]
            expected += [e / 2, (1 + e) / 2]
        assert [e % 1 for e in expected] == list(omega.entries)


class TestHomomorphism:
    @pytest.mark.parametrize("group", ["Gamma(2)", "Gamma0(4)", "Gamma(3)"])
    def test_products_of_random_words(self, group):
        h = parse_group(group)
        table = coset_table(h)
        rho = induce(trivial_rep(h), table)
        rng = random.Random(17)
        for _ in range(40):
            g1 = random_word(rng)
            g2 = random_word(rng)
            prod = rho.evaluate(g1) @ rho.evaluate(g2)
            assert prod == rho.evaluate(g1 * g2)
            assert block_sparsity_ok(prod, rho.base.rank)


class TestEigenpairs:
    @pytest.mark.parametrize("name", list(KNOWN_CUSP_DATA), ids=str)
    def test_exact_eigenpairs(self, name):
        h = parse_group(name)
        rho = trivial_rep(h)
        system = cusp_system(h, INFINITY, FULL)
        table = transversal_table(h, system.transversal, FULL)
        matrix = induce(rho, table).evaluate(T)
        pairs = induced_cusp_eigenvectors(rho, system)
        assert len(pairs) == system.m
        for mu, vec in pairs:
            image = [None] * len(vec)
            for i, row in enumerate(matrix.entries):
                acc = None
                for j, entry in enumerate(row):
                    if entry is None or vec[j] is None:
                        continue
                    term = entry * vec[j]
                    acc = term if acc is None else acc + term
                image[i] = acc
            expected = [None if v is None else mu * v for v in vec]
            assert image == expected


class TestCosetChange:
    def test_conjugation_identity(self):
        h = GAMMA2
        rho = nu_restricted(h)
        table = coset_table(h)
        reps_tilde = table.reps
        rng = random.Random(3)
        hgens = list(h.generators())
        reps_hat = [r * rng.choice(hgens) for r in reps_tilde]
        tilde = induce(rho, transversal_table(h, reps_tilde))
        hat = induce(rho, transversal_table(h, reps_hat))
        d_mat = coset_change_conjugator(rho, reps_tilde, reps_hat)
        d_inv = d_mat.inverse()
        for _ in range(10):
            g = random_word(rng)
            assert hat.evaluate(g) == d_inv @ tilde.evaluate(g) @ d_mat

    def test_rejects_non_transversal(self):
        with pytest.raises(NotTransversal):
            transversal_table(GAMMA2, [IDENTITY, T**2], FULL)
        with pytest.raises(NotTransversal):
            coset_change_conjugator(
                trivial_rep(GAMMA2), [IDENTITY, T], [IDENTITY, S]
            )
