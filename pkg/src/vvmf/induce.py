"""Induction of multiplier representations along a coset transversal.

The induced matrix of x has block (i,j) = rho(gamma_i^-1 x gamma_j); the
nonzero block in each row/column is located through the coset action, so
evaluation touches m blocks, not m^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DomainMismatch, NotTransversal
from .psl2 import GroupElement
from .reps import (
    Entry,
    ExponentMatrix,
    Representation,
    RepMatrix,
    UnitPhase,
    exponent_of,
)
from .subgroups import (
    CongruenceSubgroup,
    CosetTable,
    CuspSystem,
    FULL,
)


def transversal_table(
    subgroup: CongruenceSubgroup,
    reps: Sequence[GroupElement],
    ambient: CongruenceSubgroup = FULL,
) -> CosetTable:
    """Coset table over an explicitly chosen transversal."""
    reps = tuple(reps)
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            if subgroup.contains(reps[i].inverse() * reps[j]):
                raise NotTransversal(f"reps {i} and {j} lie in the same coset")
    return CosetTable(subgroup, ambient, reps, (), ())


@dataclass
class InducedRep(Representation):
    base: Optional[Representation] = None
    table: Optional[CosetTable] = None


def _assemble_blocks(dm: int, d: int, blocks: dict[tuple[int, int], RepMatrix]) -> RepMatrix:
    entries: list[list[Entry]] = [[None] * dm for _ in range(dm)]
    for (bi, bj), blk in blocks.items():
        for r in range(d):
            row = entries[bi * d + r]
            brow = blk.entries[r]
            for c in range(d):
                row[bj * d + c] = brow[c]
    return RepMatrix(entries)


def induce(rho: Representation, table: CosetTable) -> InducedRep:
    """The induced representation of the table's ambient group."""
    if table.subgroup != rho.domain:
        raise DomainMismatch(
            f"representation domain {rho.domain} does not match table subgroup {table.subgroup}"
        )
    d = rho.rank
    m = table.m
    reps = table.reps

    def evaluator(x: GroupElement) -> RepMatrix:
        blocks = {}
        for j in range(m):
            i = table.coset_index(x * reps[j])
            blocks[(i, j)] = rho.evaluate(reps[i].inverse() * x * reps[j])
        return _assemble_blocks(d * m, d, blocks)

    return InducedRep(
        domain=table.ambient,
        rank=d * m,
        evaluator=evaluator,
        finite_image=rho.finite_image,
        name=f"Ind[{table.subgroup}->{table.ambient}]({rho.name or 'rho'})",
        base=rho,
        table=table,
    )


def block_sparsity_ok(matrix: RepMatrix, d: int) -> bool:
    """Exactly one nonzero d x d block per block row and block column."""
    m = matrix.dim // d
    for bi in range(m):
        hits = [
            bj
            for bj in range(m)
            if any(
                matrix.entries[bi * d + r][bj * d + c] is not None
                for r in range(d)
                for c in range(d)
            )
        ]
        if len(hits) != 1:
            return False
    for bj in range(m):
        hits = [
            bi
            for bi in range(m)
            if any(
                matrix.entries[bi * d + r][bj * d + c] is not None
                for r in range(d)
                for c in range(d)
            )
        ]
        if len(hits) != 1:
            return False
    return True


def stabilizer_generators(system: CuspSystem) -> tuple[GroupElement, ...]:
    """t_i = A_i t_c^{h_i} A_i^-1, the subgroup stabilizer generator per class."""
    return tuple(
        cl.scaling * (system.stabilizer ** cl.width) * cl.scaling.inverse()
        for cl in system.classes
    )


def induced_cusp_blocks(rho: Representation, system: CuspSystem) -> RepMatrix:
    """rho~(t_c) assembled directly from the block rule of the coset system.

    Within the super-block of class i (size d*h_i), block (j, j-1) is the
    identity for 1 <= j < h_i and block (0, h_i - 1) is rho(t_i).
    """
    if system.subgroup != rho.domain:
        raise DomainMismatch("cusp system does not belong to the representation's domain")
    d = rho.rank
    m = system.m
    blocks: dict[tuple[int, int], RepMatrix] = {}
    offset = 0
    for cl, t_i in zip(system.classes, stabilizer_generators(system)):
        h = cl.width
        for j in range(1, h):
            blocks[(offset + j, offset + j - 1)] = RepMatrix.identity(d)
        blocks[(offset, offset + h - 1)] = rho.evaluate(t_i)
        offset += h
    return _assemble_blocks(d * m, d, blocks)


def induced_cusp_eigenvectors(
    rho: Representation, system: CuspSystem
) -> list[tuple[Entry, list[Entry]]]:
    """All d*m eigenpairs of rho~(t_c), ordered lexicographically in
    (class, base eigenvector, root-of-unity index)."""
    d = rho.rank
    m = system.m
    pairs: list[tuple[Entry, list[Entry]]] = []
    offset = 0
    for cl, t_i in zip(system.classes, stabilizer_generators(system)):
        h = cl.width
        exp_i = exponent_of(rho, t_i)
        for k in range(d):
            lam = exp_i.entries[k]
            base = [exp_i.conjugator.entries[r][k] for r in range(d)]
            for j in range(h):
                e = Fraction(lam + j, h)
                mu: Entry = UnitPhase(e)
                vector: list[Entry] = [None] * (d * m)
                for jj in range(h):
                    factor = UnitPhase(-e * jj)
                    for r in range(d):
                        b = base[r]
                        if b is None:
                            continue
                        val = factor * b if isinstance(b, UnitPhase) else factor.value() * b
                        vector[(offset + jj) * d + r] = val
                if not exp_i.conjugator.is_exact:
                    mu = mu.value()
                pairs.append((mu, vector))
        offset += h
    return pairs


def induced_exponent(
    exponents: Sequence[ExponentMatrix], widths: Sequence[int]
) -> ExponentMatrix:
    """Exponent diagonal of the induced representation at the cusp:
    entries ((Lambda_i)_kk + j) / h_i, normalized to [0,1)."""
    if len(exponents) != len(widths):
        raise ValueError("exponent list and width list have different lengths")
    out: list[Fraction] = []
    for lam, h in zip(exponents, widths):
        for k in range(lam.rank):
            for j in range(h):
                out.append(Fraction(lam.entries[k] + j, h) % 1)
    return ExponentMatrix(tuple(out), None)


def coset_change_conjugator(
    rho: Representation,
    reps_tilde: Sequence[GroupElement],
    reps_hat: Sequence[GroupElement],
) -> RepMatrix:
    """Block-diagonal D = Diag(rho(x_1), ..., rho(x_m)) with gamma^_i in
    gamma~_{j(i)} H and x_i = gamma~_{j(i)}^-1 gamma^_i.

    When the two transversals enumerate cosets in the same order,
    rho^(g) = D^-1 rho~(g) D for all g.
    """
    h = rho.domain
    if len(reps_tilde) != len(reps_hat):
        raise NotTransversal("transversals have different sizes")
    for reps in (reps_tilde, reps_hat):
        for i in range(len(reps)):
            for j in range(i + 1, len(reps)):
                if h.contains(reps[i].inverse() * reps[j]):
                    raise NotTransversal(f"reps {i} and {j} lie in the same coset")
    d = rho.rank
    m = len(reps_hat)
    used = set()
    blocks: dict[tuple[int, int], RepMatrix] = {}
    for i, ghat in enumerate(reps_hat):
        match = None
        for j, gtil in enumerate(reps_tilde):
            if h.contains(gtil.inverse() * ghat):
                match = j
                break
        if match is None or match in used:
            raise NotTransversal("transversals do not cover the same cosets")
        used.add(match)
        x_i = reps_tilde[match].inverse() * ghat
        blocks[(i, i)] = rho.evaluate(x_i)
    return _assemble_blocks(d * m, d, blocks)
