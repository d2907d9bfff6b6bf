"""Congruence subgroups: membership, coset tables, cusp orbits, widths,
and the coset system attached to a cusp of the ambient group.

All left-coset enumeration is breadth-first with generators applied in a
fixed order, so coset representatives (and everything derived from them)
are reproducible bit-for-bit.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field

from .errors import LevelTooLarge
from .psl2 import IDENTITY, INFINITY, S, T, Cusp, GroupElement, act_cusp, scaling_matrix

MAX_INDEX = 20000


@dataclass(frozen=True)
class CongruenceSubgroup:
    kind: str  # "Gamma" | "Gamma0" | "Gamma1" | "Full"
    level: int = 1

    def __post_init__(self):
        if self.kind not in ("Gamma", "Gamma0", "Gamma1", "Full"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.level < 1:
            raise ValueError("level must be positive")
        if self.kind == "Full":
            object.__setattr__(self, "level", 1)

    def contains(self, g: GroupElement) -> bool:
        if self.kind == "Full" or self.level == 1:
            return True
        n = self.level
        a, b, c, d = g.a % n, g.b % n, g.c % n, g.d % n
        if self.kind == "Gamma0":
            return c == 0
        if self.kind == "Gamma1":
            return c == 0 and ((a == 1 % n and d == 1 % n) or (a == n - 1 and d == n - 1))
        # principal congruence subgroup
        plus = a == 1 % n and d == 1 % n and b == 0 and c == 0
        minus = a == n - 1 and d == n - 1 and b == 0 and c == 0
        return plus or minus

    def generators(self) -> tuple[GroupElement, ...]:
        """A finite generating set; Schreier generators for proper subgroups."""
        if self.kind == "Full" or self.level == 1:
            return (T, S)
        return _schreier_generators(self)

    def __repr__(self):
        if self.kind == "Full":
            return "Gamma(1)"
        suffix = {"Gamma": "", "Gamma0": "0", "Gamma1": "1"}[self.kind]
        return f"Gamma{suffix}({self.level})"


FULL = CongruenceSubgroup("Full")


def _modn_key(g: GroupElement, n: int):
    e = (g.a % n, g.b % n, g.c % n, g.d % n)
    f = ((-g.a) % n, (-g.b) % n, (-g.c) % n, (-g.d) % n)
    return min(e, f)


@dataclass
class CosetTable:
    subgroup: CongruenceSubgroup
    ambient: CongruenceSubgroup
    reps: tuple[GroupElement, ...]
    generators: tuple[GroupElement, ...]
    gen_perms: tuple[tuple[int, ...], ...]  # one permutation per generator
    _index_cache: dict = field(default_factory=dict, repr=False)

    @property
    def m(self) -> int:
        return len(self.reps)

    def coset_index(self, g: GroupElement) -> int:
        """Index i with g in reps[i] * H."""
        key = _modn_key(g, self.subgroup.level) if self.subgroup.level > 1 else None
        if key is not None and key in self._index_cache:
            return self._index_cache[key]
        for i, r in enumerate(self.reps):
            if self.subgroup.contains(r.inverse() * g):
                if key is not None:
                    self._index_cache[key] = i
                return i
        raise ValueError(f"{g} is not in any enumerated coset (not in the ambient group?)")


@functools.lru_cache(maxsize=None)
def coset_table(
    subgroup: CongruenceSubgroup,
    ambient: CongruenceSubgroup = FULL,
    max_index: int = MAX_INDEX,
) -> CosetTable:
    """Left cosets of `subgroup` in `ambient`, by BFS over ambient generators."""
    gens = ambient.generators()
    table = CosetTable(subgroup, ambient, (IDENTITY,), gens, ())
    reps: list[GroupElement] = [IDENTITY]
    table.reps = tuple(reps)
    if subgroup.level > 1:
        table._index_cache[_modn_key(IDENTITY, subgroup.level)] = 0

    def index_of(g: GroupElement):
        key = _modn_key(g, subgroup.level) if subgroup.level > 1 else None
        if key is not None and key in table._index_cache:
            return table._index_cache[key]
        for i, r in enumerate(reps):
            if subgroup.contains(r.inverse() * g):
                if key is not None:
                    table._index_cache[key] = i
                return i
        return None

    queue = [0]
    while queue:
        i = queue.pop(0)
        for g in gens:
            candidate = g * reps[i]
            if index_of(candidate) is None:
                if len(reps) >= max_index:
                    raise LevelTooLarge(
                        f"index of {subgroup} in {ambient} exceeds {max_index}"
                    )
                reps.append(candidate)
                table.reps = tuple(reps)
                if subgroup.level > 1:
                    table._index_cache[_modn_key(candidate, subgroup.level)] = len(reps) - 1
                queue.append(len(reps) - 1)
    table.reps = tuple(reps)
    table.gen_perms = tuple(
        tuple(table.coset_index(g * r) for r in reps) for g in gens
    )
    return table


def _schreier_generators(subgroup: CongruenceSubgroup) -> tuple[GroupElement, ...]:
    """Generators of a finite-index subgroup from its coset table in Gamma(1).

    Schreier's lemma on the right transversal {reps[i]^-1}.
    """
    table = coset_table(subgroup, FULL)
    out: list[GroupElement] = []
    seen = set()
    for r in table.reps:
        for g in (T, S):
            j = table.coset_index(g.inverse() * r)
            u = r.inverse() * g * table.reps[j]
            assert subgroup.contains(u)
            if u != IDENTITY and u.entries() not in seen:
                seen.add(u.entries())
                out.append(u)
    return tuple(out)


def contains(subgroup: CongruenceSubgroup, g: GroupElement) -> bool:
    return subgroup.contains(g)


def coset_index(table: CosetTable, g: GroupElement) -> int:
    return table.coset_index(g)


def _orbit_representative_key(c: Cusp):
    # smallest denominator, then smallest nonnegative numerator option
    if c.is_infinity:
        return (0, 0, 0)
    return (c.q, 0 if c.p >= 0 else 1, abs(c.p))


def _t_orbits(table: CosetTable, t_c: GroupElement) -> list[list[int]]:
    """Orbits of the right action of t_c on the coset space, as index lists.

    Index i carries the right coset H * reps[i]^-1; right multiplication by
    t_c sends it to the index of t_c^-1 * reps[i].
    """
    m = table.m
    perm = [table.coset_index(t_c.inverse() * r) for r in table.reps]
    seen = [False] * m
    orbits = []
    for start in range(m):
        if seen[start]:
            continue
        orbit = []
        i = start
        while not seen[i]:
            seen[i] = True
            orbit.append(i)
            i = perm[i]
        orbits.append(orbit)
    return orbits


def cusp_orbits(subgroup: CongruenceSubgroup) -> tuple[Cusp, ...]:
    """One canonical representative per orbit of cusps, infinity first."""
    table = coset_table(subgroup, FULL)
    cusps = []
    for orbit in _t_orbits(table, T):
        candidates = [act_cusp(table.reps[i].inverse(), INFINITY) for i in orbit]
        cusps.append(min(candidates, key=_orbit_representative_key))
    return tuple(sorted(cusps, key=Cusp.sort_key))


def cusp_width(subgroup: CongruenceSubgroup, c: Cusp) -> int:
    sigma = scaling_matrix(c)
    conj = sigma * T * sigma.inverse()
    g = conj
    bound = max(1, subgroup.level) ** 2 + 1
    for h in range(1, bound + 1):
        if subgroup.contains(g):
            return h
        g = g * conj
    raise RuntimeError(f"no cusp width below {bound} for {c} in {subgroup}")


def cusp_equivalent(subgroup: CongruenceSubgroup, c1: Cusp, c2: Cusp) -> bool:
    """Whether some element of the subgroup maps c1 to c2."""
    table = coset_table(subgroup, FULL)
    orbits = _t_orbits(table, T)
    i1 = table.coset_index(scaling_matrix(c1).inverse())
    i2 = table.coset_index(scaling_matrix(c2).inverse())
    for orbit in orbits:
        if i1 in orbit:
            return i2 in orbit
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class CuspClass:
    cusp: Cusp  # representative c_i of an H-orbit inside the ambient orbit
    width: int  # h_i, relative to the ambient cusp width
    scaling: GroupElement  # A_i in the ambient group with A_i(c) = c_i


@dataclass(frozen=True)
class CuspSystem:
    subgroup: CongruenceSubgroup
    ambient: CongruenceSubgroup
    cusp: Cusp
    ambient_width: int  # k_c
    stabilizer: GroupElement  # t_c, generator of the ambient stabilizer of c
    classes: tuple[CuspClass, ...]
    transversal: tuple[GroupElement, ...]  # g_ij = t_c^j * A_i^-1, class-major

    @property
    def m(self) -> int:
        return sum(cl.width for cl in self.classes)

    def widths(self) -> tuple[int, ...]:
        return tuple(cl.width for cl in self.classes)


def cusp_system(
    subgroup: CongruenceSubgroup,
    c: Cusp = INFINITY,
    ambient: CongruenceSubgroup = FULL,
) -> CuspSystem:
    """Decompose the ambient orbit of c into subgroup orbits, with the
    transversal g_ij = t_c^j A_i^-1 cross-checked against the coset table."""
    table = coset_table(subgroup, ambient)
    k_c = cusp_width(ambient, c)
    sigma = scaling_matrix(c)
    t_c = sigma * (T ** k_c) * sigma.inverse()

    classes = []
    for orbit in _t_orbits(table, t_c):
        candidates = [(act_cusp(table.reps[i].inverse(), c), i) for i in orbit]
        cusp_i, i_star = min(candidates, key=lambda ci: _orbit_representative_key(ci[0]))
        a_i = table.reps[i_star].inverse()
        h_i = len(orbit)
        # h_i must be minimal with A_i t_c^h A_i^-1 in the subgroup
        for h in range(1, h_i + 1):
            if subgroup.contains(a_i * (t_c ** h) * a_i.inverse()):
                assert h == h_i, "orbit length disagrees with stabilizer width"
                break
        classes.append(CuspClass(cusp_i, h_i, a_i))
    classes.sort(key=lambda cl: cl.cusp.sort_key())

    transversal = []
    for cl in classes:
        for j in range(cl.width):
            transversal.append((t_c ** j) * cl.scaling.inverse())
    assert len(transversal) == table.m, "sum of widths must equal the index"
    hit = sorted(table.coset_index(g) for g in transversal)
    assert hit == list(range(table.m)), "g_ij do not form a full transversal"

    return CuspSystem(
        subgroup, ambient, c, k_c, t_c, tuple(classes), tuple(transversal)
    )


_GROUP_RE = re.compile(r"^Gamma(0|1)?\((\d+)\)$")


def parse_group(text: str) -> CongruenceSubgroup:
    """Parse "Gamma(N)", "Gamma0(N)" or "Gamma1(N)"."""
    m = _GROUP_RE.match(text.strip())
    if not m:
        raise ValueError(f"cannot parse group spec: {text!r}")
    sub, n = m.group(1), int(m.group(2))
    if n == 1:
        return FULL
    kind = {None: "Gamma", "0": "Gamma0", "1": "Gamma1"}[sub]
    return CongruenceSubgroup(kind, n)


# Reference cusp data for small-level groups, in the conventional printed
# order with conventional representatives (which may differ from our
# canonical orbit representatives by equivalence; compare classes, not
# strings). Rows: index, cusp representatives, widths.
KNOWN_CUSP_DATA: dict[str, tuple[int, tuple[str, ...], tuple[int, ...]]] = {
    "Gamma0(2)": (3, ("0", "oo"), (2, 1)),
    "Gamma(2)": (6, ("0", "1", "oo"), (2, 2, 2)),
    "Gamma0(3)": (4, ("0", "oo"), (3, 1)),
    "Gamma(3)": (12, ("-1", "0", "1", "oo"), (3, 3, 3, 3)),
    "Gamma0(4)": (6, ("-1/2", "0", "oo"), (1, 4, 1)),
    "Gamma(4)": (24, ("-1", "-1/2", "0", "1", "2", "oo"), (4, 4, 4, 4, 4, 4)),
    "Gamma0(8)": (12, ("-1/4", "-1/2", "0", "oo"), (1, 2, 8, 1)),
}
