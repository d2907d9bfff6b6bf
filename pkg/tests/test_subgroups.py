import random

import pytest

from vvmf.errors import NotTransversal
from vvmf.psl2 import IDENTITY, INFINITY, S, T, Cusp, parse_cusp
from vvmf.subgroups import (
    FULL,
    KNOWN_CUSP_DATA,
    CongruenceSubgroup,
    coset_table,
    cusp_equivalent,
    cusp_orbits,
    cusp_system,
    cusp_width,
    parse_group,
)

GROUPS = [parse_group(name) for name in KNOWN_CUSP_DATA]


class TestMembership:
    def test_full_group_contains_everything(self):
        assert FULL.contains(S * T * S)

    def test_gamma_two(self):
        g2 = CongruenceSubgroup("Gamma", 2)
        assert g2.contains(T**2)
        assert not g2.contains(T)
        assert g2.contains(S * T**2 * S.inverse())

    def test_gamma0_vs_gamma1(self):
        g0 = CongruenceSubgroup("Gamma0", 4)
        g1 = CongruenceSubgroup("Gamma1", 4)
        w = S * T**4 * S.inverse()  # lower-left entry -4
        assert g0.contains(w) and g1.contains(w)
        elem = T * w  # (1 + ...) keeps c = -4 but moves diagonal off 1 mod 4
        assert g0.contains(elem)

    def test_generators_generate(self):
        h = CongruenceSubgroup("Gamma", 2)
        table = coset_table(h)
        rng = random.Random(5)
        gens = list(h.generators())
        for g in gens:
            assert h.contains(g)
        word = IDENTITY
        for _ in range(20):
            word = word * rng.choice(gens)
        assert h.contains(word)


class TestCosetTable:
    @pytest.mark.parametrize("group", GROUPS, ids=repr)
    def test_index_matches_reference(self, group):
        assert coset_table(group).m == KNOWN_CUSP_DATA[repr(group)][0]

    def test_representatives_are_inequivalent(self):
        table = coset_table(CongruenceSubgroup("Gamma0", 4))
        h = table.subgroup
        reps = table.reps
        for i, r1 in enumerate(reps):
            for r2 in reps[i + 1 :]:
                assert not h.contains(r1.inverse() * r2)

    def test_action_is_homomorphism(self):
        table = coset_table(CongruenceSubgroup("Gamma", 3))
        rng = random.Random(11)
        gens = [T, T.inverse(), S]
        word = IDENTITY
        perm = list(range(table.m))
        for _ in range(50):
            g = rng.choice(gens)
            word = word * g
        for i in range(table.m):
            perm[i] = table.coset_index(word * table.reps[i])
        direct = [table.coset_index(word * r) for r in table.reps]
        assert perm == direct
        assert sorted(direct) == list(range(table.m))


class TestCuspData:
    @pytest.mark.parametrize("group", GROUPS, ids=repr)
    def test_reference_rows(self, group):
        index, cusps, widths = KNOWN_CUSP_DATA[repr(group)]
        system = cusp_system(group)
        assert system.m == index
        assert sum(system.widths()) == index
        assert sorted(system.widths()) == sorted(widths)
        # printed representatives match our classes up to equivalence
        for printed, width in zip(cusps, widths):
            c = parse_cusp(printed)
            matches = [
                cl for cl in system.classes if cusp_equivalent(group, c, cl.cusp)
            ]
            assert len(matches) == 1
            assert matches[0].width == width

    @pytest.mark.parametrize("group", GROUPS, ids=repr)
    def test_orbit_representatives_inequivalent(self, group):
        reps = cusp_orbits(group)
        for i, c1 in enumerate(reps):
            for c2 in reps[i + 1 :]:
                assert not cusp_equivalent(group, c1, c2)

    def test_widths(self):
        g08 = CongruenceSubgroup("Gamma0", 8)
        assert cusp_width(g08, INFINITY) == 1
        assert cusp_width(g08, Cusp(0, 1)) == 8
        assert cusp_width(g08, Cusp(-1, 2)) == 2

    @pytest.mark.parametrize("group", GROUPS, ids=repr)
    def test_transversal_property(self, group):
        system = cusp_system(group)
        reps = system.transversal
        assert len(reps) == system.m
        for i, r1 in enumerate(reps):
            for r2 in reps[i + 1 :]:
                assert not group.contains(r1.inverse() * r2)

    def test_scalings_move_base_cusp(self):
        system = cusp_system(CongruenceSubgroup("Gamma0", 4))
        from vvmf.psl2 import act_cusp

        for cl in system.classes:
            assert act_cusp(cl.scaling, system.cusp) == cl.cusp


class TestAmbientGamma02:
    def test_gamma2_inside_gamma02(self):
        h = CongruenceSubgroup("Gamma", 2)
        ambient = CongruenceSubgroup("Gamma0", 2)
        table = coset_table(h, ambient)
        assert table.m == 2
        system = cusp_system(h, INFINITY, ambient)
        assert sum(system.widths()) == 2


class TestParse:
    def test_examples(self):
        assert repr(parse_group("Gamma0(2)")) == "Gamma0(2)"
        assert parse_group("Gamma(1)") == FULL

    def test_rejects(self):
        with pytest.raises(ValueError):
            parse_group("SL2(7)")
