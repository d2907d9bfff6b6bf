"""Multiplier representations with an exact phase backend.

Finite-image representations in this package have matrices whose nonzero
entries are roots of unity; those are kept exact (phases stored as rational
exponents) so induced matrices, eigenvectors and exponent matrices come out
bit-for-bit reproducible.  Anything else falls back to complex floats.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainMismatch, NotAdmissible, NotHomomorphism, NotNormal
from .psl2 import GroupElement, IDENTITY
from .subgroups import CongruenceSubgroup, CosetTable, FULL, coset_table


@dataclass(frozen=True)
class UnitPhase:
    """The scalar exp(2*pi*i*r) with r rational, normalized to 0 <= r < 1."""

    exponent: Fraction

    def __post_init__(self):
        object.__setattr__(self, "exponent", Fraction(self.exponent) % 1)

    def __mul__(self, other):
        if isinstance(other, UnitPhase):
            return UnitPhase(self.exponent + other.exponent)
        return self.value() * other

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UnitPhase":
        return UnitPhase(self.exponent * k)

    def conjugate(self) -> "UnitPhase":
        return UnitPhase(-self.exponent)

    def value(self) -> complex:
        return cmath.exp(2j * cmath.pi * float(self.exponent))

    def __repr__(self):
        return f"phase({self.exponent})"


ONE = UnitPhase(Fraction(0))

Entry = Optional[object]  # None (zero) | UnitPhase | complex


def _emul(x: Entry, y: Entry) -> Entry:
    if x is None or y is None:
        return None
    if isinstance(x, UnitPhase) and isinstance(y, UnitPhase):
        return x * y
    xv = x.value() if isinstance(x, UnitPhase) else x
    yv = y.value() if isinstance(y, UnitPhase) else y
    return xv * yv


def _eadd(x: Entry, y: Entry) -> Entry:
    if x is None:
        return y
    if y is None:
        return x
    if isinstance(x, UnitPhase) and isinstance(y, UnitPhase):
        # opposite phases cancel exactly; other sums leave the exact backend
        if (x.exponent - y.exponent) % 1 == Fraction(1, 2):
            return None
    xv = x.value() if isinstance(x, UnitPhase) else x
    yv = y.value() if isinstance(y, UnitPhase) else y
    return xv + yv


def _evalue(x: Entry) -> complex:
    if x is None:
        return 0j
    if isinstance(x, UnitPhase):
        return x.value()
    return complex(x)


class RepMatrix:
    """Square matrix whose entries are 0, exact unit phases, or complex."""

    __hash__ = None

    def __init__(self, entries: Sequence[Sequence[Entry]]):
        self.entries = tuple(tuple(row) for row in entries)
        d = len(self.entries)
        if any(len(row) != d for row in self.entries):
            raise ValueError("matrix must be square")
        self.dim = d

    @classmethod
    def identity(cls, d: int) -> "RepMatrix":
        return cls([[ONE if i == j else None for j in range(d)] for i in range(d)])

    @classmethod
    def zero(cls, d: int) -> "RepMatrix":
        return cls([[None] * d for _ in range(d)])

    @classmethod
    def scalar(cls, phase: UnitPhase) -> "RepMatrix":
        return cls([[phase]])

    @classmethod
    def from_numpy(cls, arr) -> "RepMatrix":
        return cls([[complex(x) if x != 0 else None for x in row] for row in np.asarray(arr)])

    @property
    def is_exact(self) -> bool:
        return all(e is None or isinstance(e, UnitPhase) for row in self.entries for e in row)

    @property
    def is_zero(self) -> bool:
        return all(e is None for row in self.entries for e in row)

    def is_phase_permutation(self) -> bool:
        if not self.is_exact:
            return False
        for row in self.entries:
            if sum(1 for e in row if e is not None) != 1:
                return False
        for j in range(self.dim):
            if sum(1 for i in range(self.dim) if self.entries[i][j] is not None) != 1:
                return False
        return True

    def __matmul__(self, other: "RepMatrix") -> "RepMatrix":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        d = self.dim
        out = [[None] * d for _ in range(d)]
        for i in range(d):
            for k in range(d):
                x = self.entries[i][k]
                if x is None:
                    continue
                for j in range(d):
                    y = other.entries[k][j]
                    if y is None:
                        continue
                    out[i][j] = _eadd(out[i][j], _emul(x, y))
        return RepMatrix(out)

    def scale(self, factor: Entry) -> "RepMatrix":
        return RepMatrix([[_emul(factor, e) for e in row] for row in self.entries])

    def inverse(self) -> "RepMatrix":
        if self.is_phase_permutation():
            d = self.dim
            out = [[None] * d for _ in range(d)]
            for i in range(d):
                for j in range(d):
                    if self.entries[i][j] is not None:
                        out[j][i] = self.entries[i][j].conjugate()
            return RepMatrix(out)
        return RepMatrix.from_numpy(np.linalg.inv(self.to_numpy()))

    def to_numpy(self):
        return np.array([[_evalue(e) for e in row] for row in self.entries], dtype=complex)

    def __eq__(self, other):
        if not isinstance(other, RepMatrix) or self.dim != other.dim:
            return NotImplemented
        if self.is_exact and other.is_exact:
            return self.entries == other.entries
        return self.allclose(other, 0.0)

    def allclose(self, other: "RepMatrix", tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.to_numpy() - other.to_numpy()), initial=0.0) <= tol)

    def __repr__(self):
        return f"RepMatrix({self.entries!r})"


@dataclass
class Representation:
    """Rank-d multiplier of a congruence subgroup.

    The evaluator is only called on elements of the domain; use
    evaluate_ext for the zero-extension to the full group.
    """

    domain: CongruenceSubgroup
    rank: int
    evaluator: Callable[[GroupElement], RepMatrix]
    finite_image: bool = True
    name: str = ""

    def evaluate(self, g: GroupElement) -> RepMatrix:
        if not self.domain.contains(g):
            raise DomainMismatch(f"{g} is not in {self.domain}")
        return self.evaluator(g)

    def evaluate_ext(self, g: GroupElement) -> RepMatrix:
        if self.domain.contains(g):
            return self.evaluator(g)
        return RepMatrix.zero(self.rank)


def trivial_rep(domain: CongruenceSubgroup, rank: int = 1) -> Representation:
    return Representation(domain, rank, lambda g: RepMatrix.identity(rank), name="trivial")


def evaluate_ext(rho: Representation, g: GroupElement) -> RepMatrix:
    return rho.evaluate_ext(g)


@dataclass(frozen=True)
class ExponentMatrix:
    """Diagonal of an exponent matrix (rationals in [0,1)) with a conjugator
    P whose columns are the corresponding eigenvectors."""

    entries: tuple[Fraction, ...]
    conjugator: Optional[RepMatrix]

    def __post_init__(self):
        for e in self.entries:
            if not (0 <= e < 1):
                raise ValueError("exponent entries must lie in [0,1)")

    @property
    def rank(self) -> int:
        return len(self.entries)

    def eigenvalue(self, k: int) -> UnitPhase:
        return UnitPhase(self.entries[k])


def _rationalize_angle(value: complex) -> Fraction:
    angle = Fraction(cmath.phase(value) / (2 * cmath.pi)).limit_denominator(10**12) % 1
    return angle


def exponent_of(rho: Representation, t_c: GroupElement) -> ExponentMatrix:
    """Exponent matrix (and diagonalizer) of rho at a cusp stabilizer generator."""
    m = rho.evaluate(t_c)
    if m.is_phase_permutation():
        return _exponent_of_phase_permutation(m)
    return _exponent_of_numeric(m)


def _exponent_of_phase_permutation(m: RepMatrix) -> ExponentMatrix:
    d = m.dim
    # column j maps to row pi[j] with phase step[j]
    pi = [next(i for i in range(d) if m.entries[i][j] is not None) for j in range(d)]
    step = [m.entries[pi[j]][j] for j in range(d)]
    seen = [False] * d
    exponents: list[Fraction] = []
    columns: list[list[Entry]] = []
    for start in range(d):
        if seen[start]:
            continue
        cycle = []
        j = start
        while not seen[j]:
            seen[j] = True
            cycle.append(j)
            j = pi[j]
        k = len(cycle)
        total = sum((step[j].exponent for j in cycle), Fraction(0)) % 1
        for r in range(k):
            mu = Fraction(total + r, k)  # in [0,1) since total < 1, r < k
            exponents.append(mu)
            # v_{cycle[s]} = (prod of steps up to s) * mu^{-s}
            vec: list[Entry] = [None] * d
            acc = ONE
            for s, j in enumerate(cycle):
                vec[j] = acc * UnitPhase(-mu * s)
                acc = acc * step[j]
            columns.append(vec)
    p = RepMatrix([[columns[j][i] for j in range(d)] for i in range(d)])
    return ExponentMatrix(tuple(exponents), p)


def _exponent_of_numeric(m: RepMatrix, cond_bound: float = 1e8) -> ExponentMatrix:
    arr = m.to_numpy()
    eigvals, eigvecs = np.linalg.eig(arr)
    if np.linalg.cond(eigvecs) > cond_bound:
        raise NotAdmissible("matrix at the cusp stabilizer is not diagonalizable")
    exponents = tuple(_rationalize_angle(v) for v in eigvals)
    return ExponentMatrix(exponents, RepMatrix.from_numpy(eigvecs))


def dedekind_sum(d: int, c: int) -> Fraction:
    """s(d,c) = sum_{i=1}^{c-1} (i/c)(di/c - floor(di/c) - 1/2), exactly.

    Evaluated by Dedekind reciprocity in O(log c) steps; the defining sum is
    quadratic in c and infeasible for the large denominators produced by long
    words.  dedekind_sum_direct is the literal sum, kept as a cross-check.
    """
    if c < 1:
        raise ValueError("c must be a positive integer")
    d %= c
    total = Fraction(0)
    sign = 1
    while d:
        total += sign * (Fraction(d * d + c * c + 1, 12 * d * c) - Fraction(1, 4))
        c, d = d, c % d
        sign = -sign
    return total


def dedekind_sum_direct(d: int, c: int) -> Fraction:
    """The defining sum, term by term (test oracle for dedekind_sum)."""
    if c < 1:
        raise ValueError("c must be a positive integer")
    total = Fraction(0)
    for i in range(1, c):
        x = Fraction(d * i, c)
        total += Fraction(i, c) * (x - (x.numerator // x.denominator) - Fraction(1, 2))
    return total


def nu_exponent_sl2(a: int, b: int, c: int, d: int) -> Fraction:
    """Exponent of the weight-one eta-squared multiplier on SL(2,Z).

    A genuine character of SL(2,Z) with values in the 12th roots of unity;
    the sign of the matrix matters (value at -I is -1).
    """
    if a * d - b * c != 1:
        raise ValueError("not an SL(2,Z) matrix")
    if c < 0 or (c == 0 and d < 0):
        return (Fraction(1, 2) + nu_exponent_sl2(-a, -b, -c, -d)) % 1
    if c == 0:
        return Fraction(a * (b - 3) + 3, 12) % 1
    e = (Fraction(a + d, 12 * c) - dedekind_sum(d, c) - Fraction(1, 4)) % 1
    if (12 * e).denominator != 1:
        raise AssertionError(f"eta-squared multiplier not a 12th root of unity: {e}")
    return e


def nu_multiplier(g: GroupElement) -> UnitPhase:
    """Eta-squared multiplier evaluated on the canonical PSL representative."""
    return UnitPhase(nu_exponent_sl2(*g.entries()))


def sl2_sign_rule(h: CongruenceSubgroup) -> Optional[Callable[[GroupElement], int]]:
    """A multiplicative choice of SL(2,Z) lift for elements of h, as the sign
    (+1/-1) to apply to the canonical PSL representative; None if no
    congruence-defined choice exists (e.g. Gamma0(2), which has 2-torsion)."""
    n = h.level
    if h.kind == "Gamma":
        if n >= 3:
            return lambda g: 1 if g.a % n == 1 else -1
        if n == 2:
            return lambda g: 1 if g.a % 4 == 1 else -1
        return lambda g: 1  # full group: no rule needed by callers
    if h.kind in ("Gamma0", "Gamma1"):
        if n % 4 == 0:
            return lambda g: 1 if g.d % 4 == 1 else -1
        for p in range(3, n + 1, 4):  # primes p = 3 mod 4 dividing n
            if n % p == 0 and all(p % k for k in range(2, int(p**0.5) + 1)):
                return lambda g, p=p: 1 if pow(g.d % p, (p - 1) // 2, p) == 1 else -1
    return None


def nu_restricted(h: CongruenceSubgroup) -> Representation:
    """The eta-squared multiplier as a rank-1 representation of h.

    Where a multiplicative sign rule exists the result is an exact character
    (exact_character = True).  For Gamma0(2) no character of the PSL group
    agrees with the eta-squared multiplier even up to sign (the order-2
    elliptic element takes value +/-i), so the canonical-representative
    values are returned and multiplicativity only holds up to sign.
    """
    rule = sl2_sign_rule(h)
    if rule is None:
        evaluator = lambda g: RepMatrix.scalar(nu_multiplier(g))
        rep = Representation(h, 1, evaluator, name="nu")
        rep.exact_character = False
        return rep

    def evaluator(g: GroupElement) -> RepMatrix:
        sgn = rule(g)
        a, b, c, d = g.entries()
        return RepMatrix.scalar(UnitPhase(nu_exponent_sl2(sgn * a, sgn * b, sgn * c, sgn * d)))

    rep = Representation(h, 1, evaluator, name="nu")
    rep.exact_character = True
    return rep


def tensor_with_character(rho: Representation, chi: Representation, k: int) -> Representation:
    """rho twisted by the k-th power of a rank-1 character."""
    if chi.rank != 1:
        raise DomainMismatch("chi must have rank 1")
    if not _domain_subset(rho.domain, chi.domain):
        raise DomainMismatch(f"{chi.domain} does not restrict to {rho.domain}")
    if k == 0:
        return rho

    def evaluator(g: GroupElement) -> RepMatrix:
        scalar = chi.evaluate(g).entries[0][0]
        if scalar is None:
            raise DomainMismatch("character vanishes inside its domain")
        factor = scalar ** k if isinstance(scalar, UnitPhase) else scalar ** k
        return rho.evaluate(g).scale(factor)

    return Representation(
        rho.domain, rho.rank, evaluator,
        finite_image=rho.finite_image and chi.finite_image,
        name=f"{rho.name or 'rho'}*({chi.name or 'chi'}^{k})",
    )


def _domain_subset(inner: CongruenceSubgroup, outer: CongruenceSubgroup) -> bool:
    if outer.kind == "Full" or outer.level == 1:
        return True
    if inner.kind == "Full":
        return False
    # crude but sufficient test on generators
    return all(outer.contains(g) for g in inner.generators())


def finite_quotient_rep(
    h_kernel: CongruenceSubgroup,
    table: CosetTable,
    matrices: Sequence[RepMatrix],
) -> Representation:
    """Representation of the ambient group factoring through the coset space.

    Checks that h_kernel is normal and that the matrices respect the coset
    multiplication table.
    """
    if table.subgroup != h_kernel:
        raise DomainMismatch("coset table does not belong to the kernel")
    ambient = table.ambient
    for gamma in ambient.generators():
        for h in h_kernel.generators():
            if not h_kernel.contains(gamma * h * gamma.inverse()):
                raise NotNormal(f"{h_kernel} is not normal in {ambient}")
    m = table.m
    if len(matrices) != m:
        raise NotHomomorphism("need one matrix per coset")
    for i in range(m):
        for j in range(m):
            k = table.coset_index(table.reps[i] * table.reps[j])
            prod = matrices[i] @ matrices[j]
            if not prod.allclose(matrices[k], 1e-10):
                raise NotHomomorphism(
                    f"matrix product at cosets ({i},{j}) disagrees with coset {k}"
                )
    rank = matrices[0].dim

    def evaluator(g: GroupElement) -> RepMatrix:
        return matrices[table.coset_index(g)]

    rep = Representation(ambient, rank, evaluator, name=f"quotient-by-{h_kernel}")
    rep.quotient_kernel = h_kernel
    rep.quotient_table = table
    rep.coset_matrices = tuple(matrices)
    return rep
