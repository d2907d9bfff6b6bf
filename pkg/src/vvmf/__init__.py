"""Lifting scalar modular forms on congruence subgroups to vector-valued
modular forms on larger groups by inducing the multiplier representation.
"""

from .errors import (
    DomainMismatch,
    KernelOutOfScope,
    LevelTooLarge,
    NotAdmissible,
    NotHomomorphism,
    NotInduced,
    NotNormal,
    NotSeparating,
    NotTransversal,
    OracleMismatch,
    PrecisionLoss,
    UnsupportedAmbientGroup,
    VvmfError,
)
from .psl2 import (
    IDENTITY,
    INFINITY,
    S,
    T,
    U,
    Cusp,
    GroupElement,
    act,
    act_cusp,
    act_point,
    classify,
    parse_cusp,
    parse_element,
    scaling_matrix,
)
from .subgroups import (
    FULL,
    KNOWN_CUSP_DATA,
    CongruenceSubgroup,
    CosetTable,
    CuspClass,
    CuspSystem,
    coset_table,
    cusp_equivalent,
    cusp_orbits,
    cusp_system,
    cusp_width,
    parse_group,
)
from .reps import (
    ExponentMatrix,
    RepMatrix,
    Representation,
    UnitPhase,
    dedekind_sum,
    exponent_of,
    finite_quotient_rep,
    nu_multiplier,
    nu_restricted,
    tensor_with_character,
    trivial_rep,
)
from .induce import (
    InducedRep,
    block_sparsity_ok,
    coset_change_conjugator,
    induce,
    induced_cusp_blocks,
    induced_cusp_eigenvectors,
    induced_exponent,
    stabilizer_generators,
    transversal_table,
)
from .qseries import (
    DEFAULT_ORDER,
    QSeries,
    delta_power,
    eta_expansion,
    eta_quotient,
    eta_value,
    hauptmodul_gamma0_2,
    hauptmodul_gamma2,
    modular_lambda,
)
from .forms import (
    VVMF,
    builtin_form,
    from_qseries,
    lift,
    restrict,
    sample_points,
    verify_functional_equation,
    weight_shift,
)
from .existence import (
    construct_vvmf,
    regular_rep,
    s3_character_table,
    s3_quotient,
    s3_rep,
    separating_function,
)

__version__ = "0.1.0"
