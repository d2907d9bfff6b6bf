"""Vector-valued modular forms: lifting along cosets, restriction,
weight shifting, and numerical verification of the transformation law.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainMismatch, NotInduced, UnsupportedAmbientGroup
from .induce import InducedRep, induce
from .psl2 import GroupElement, act_point
from .qseries import (
    DEFAULT_ORDER,
    QSeries,
    delta_power,
    delta_power_value,
    hauptmodul_gamma0_2,
    hauptmodul_gamma0_2_value,
    hauptmodul_gamma2,
    hauptmodul_gamma2_value,
)
from .reps import Representation, RepMatrix, nu_multiplier, tensor_with_character, trivial_rep
from .subgroups import CongruenceSubgroup, CosetTable, FULL

# a component maps (tau, tol) to a complex value
Component = Callable[[complex, float], complex]


@dataclass(frozen=True)
class VVMF:
    """Weight, multiplier and one evaluator per component.

    Components produced by lift are compositions (base component at
    gamma_i^-1 tau, times the automorphy factor); they are not re-expanded
    as series at infinity.
    """

    weight: int
    multiplier: Representation
    components: tuple[Component, ...]
    series: Optional[tuple[QSeries, ...]] = None
    # free-form record of how the components were built (construction
    # parameters, certification numbers); not used in computations
    provenance: Optional[dict] = None

    def __post_init__(self):
        if self.weight % 2:
            raise ValueError("weight must be even")
        if len(self.components) != self.multiplier.rank:
            raise DomainMismatch(
                f"{len(self.components)} components for a rank-"
                f"{self.multiplier.rank} multiplier"
            )

    @property
    def rank(self) -> int:
        return self.multiplier.rank

    def evaluate(self, tau: complex, tol: float = 1e-10) -> np.ndarray:
        return np.array([comp(tau, tol) for comp in self.components], dtype=complex)


def from_qseries(
    weight: int,
    multiplier: Representation,
    series: Sequence[QSeries],
) -> VVMF:
    series = tuple(series)
    components = tuple(
        (lambda tau, tol, s=s: s.evaluate(tau, tol)) for s in series
    )
    return VVMF(weight, multiplier, components, series)


def builtin_form(name: str, order: int = DEFAULT_ORDER) -> VVMF:
    """Named scalar forms: zK (width-2 hauptmodul), zH (width-1 hauptmodul),
    delta (weight 12), one (constant).

    Components evaluate through eta products (accurate at any height); the
    q-expansion is attached for coefficient access.
    """
    key = name.strip().lower()
    if key == "zk":
        return VVMF(
            0,
            trivial_rep(CongruenceSubgroup("Gamma", 2)),
            (lambda tau, tol: hauptmodul_gamma2_value(tau),),
            (hauptmodul_gamma2(order),),
        )
    if key == "zh":
        return VVMF(
            0,
            trivial_rep(CongruenceSubgroup("Gamma0", 2)),
            (lambda tau, tol: hauptmodul_gamma0_2_value(tau),),
            (hauptmodul_gamma0_2(order),),
        )
    if key == "delta":
        return VVMF(
            12,
            trivial_rep(FULL),
            (lambda tau, tol: delta_power_value(12, tau),),
            (delta_power(12, order),),
        )
    if key == "one":
        return VVMF(
            0,
            trivial_rep(FULL),
            (lambda tau, tol: 1.0 + 0j,),
            (QSeries.constant(1, order),),
        )
    raise ValueError(f"unknown form {name!r} (expected zK, zH, delta or one)")


def lift(x: VVMF, table: CosetTable) -> VVMF:
    """The rank d*m form over the ambient group with the induced multiplier.

    Component (i*d + k) is j(gamma_i^-1, tau)^-w * X_k(gamma_i^-1 tau); the
    automorphy factor is trivial at weight zero and well defined for even
    weights (sign of the representative drops out).
    """
    if x.multiplier.domain != table.subgroup:
        raise DomainMismatch(
            f"form lives on {x.multiplier.domain}, table is for {table.subgroup}"
        )
    rho_ind = induce(x.multiplier, table)
    w = x.weight
    components: list[Component] = []
    for gamma in table.reps:
        g = gamma.inverse()
        for comp in x.components:
            def lifted(tau, tol, g=g, comp=comp):
                value = comp(act_point(g, tau), tol)
                if w == 0:
                    return value
                return value * (g.c * tau + g.d) ** (-w)
            components.append(lifted)
    return VVMF(w, rho_ind, tuple(components))


def restrict(x: VVMF) -> VVMF:
    """First d components of a lifted form, back over the subgroup."""
    if not isinstance(x.multiplier, InducedRep):
        raise NotInduced("restrict needs a form whose multiplier was induced")
    base = x.multiplier.base
    return VVMF(x.weight, base, x.components[: base.rank])


def _nu_character(domain: CongruenceSubgroup) -> Representation:
    return Representation(
        domain, 1, lambda g: RepMatrix.scalar(nu_multiplier(g)), name="nu"
    )


def weight_shift(x: VVMF, new_weight: int = 0, order: int = DEFAULT_ORDER) -> VVMF:
    """Multiply by the eta power carrying weight new_weight - w and twist the
    multiplier by the matching character power; only over the full modular
    group, where that scalar form is available."""
    if x.multiplier.domain != FULL:
        raise UnsupportedAmbientGroup(
            f"weight shifting is only implemented over Gamma(1), not {x.multiplier.domain}"
        )
    shift = new_weight - x.weight
    if shift % 2:
        raise ValueError("weights must stay even")
    if shift == 0:
        return x
    multiplier = tensor_with_character(x.multiplier, _nu_character(FULL), shift)
    components = tuple(
        (lambda tau, tol, comp=comp: comp(tau, tol) * delta_power_value(shift, tau))
        for comp in x.components
    )
    series = None
    if x.series is not None:
        factor = delta_power(shift, order)
        series = tuple(s * factor for s in x.series)
    return VVMF(new_weight, multiplier, components, series)


def sample_points(count: int = 12, seed: int = 2024) -> list[complex]:
    """Reproducible sample band: |Re tau| <= 1, 1.2 <= Im tau <= 2.5."""
    rng = random.Random(seed)
    return [
        complex(rng.uniform(-1.0, 1.0), rng.uniform(1.2, 2.5)) for _ in range(count)
    ]


def verify_functional_equation(
    x: VVMF,
    generators: Sequence[GroupElement],
    samples: Optional[Sequence[complex]] = None,
    tol: float = 1e-10,
) -> float:
    """Max over samples and generators of
    ||X(gamma tau) - rho(gamma) (c tau + d)^w X(tau)||_inf / max(1, ||X(tau)||_inf)."""
    if samples is None:
        samples = sample_points()
    worst = 0.0
    for gamma in generators:
        mat = x.multiplier.evaluate(gamma).to_numpy()
        for tau in samples:
            lhs = x.evaluate(act_point(gamma, tau), tol)
            base = x.evaluate(tau, tol)
            rhs = mat @ base * (gamma.c * tau + gamma.d) ** x.weight
            denom = max(1.0, float(np.max(np.abs(base))))
            worst = max(worst, float(np.max(np.abs(lhs - rhs))) / denom)
    return worst
