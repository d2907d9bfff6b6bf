"""Exception types shared across the package."""


class VvmfError(Exception):
    """Base class for all package errors."""


class LevelTooLarge(VvmfError):
    """Coset enumeration exceeded the configured index bound."""


class NotAdmissible(VvmfError):
    """A multiplier failed the diagonalizability requirement at a cusp."""


class DomainMismatch(VvmfError):
    """Two objects were combined whose underlying groups do not match."""


class NotNormal(VvmfError):
    """A subgroup expected to be normal is not."""


class NotHomomorphism(VvmfError):
    """A proposed assignment of matrices is not multiplicative."""


class NotTransversal(VvmfError):
    """A list of group elements is not a full set of coset representatives."""


class NotInduced(VvmfError):
    """An operation required an induced multiplier but got a plain one."""


class NotSeparating(VvmfError):
    """No base point could be found at which the translates separate."""


class KernelOutOfScope(VvmfError):
    """The kernel of a representation is not one of the supported subgroups."""


class OracleMismatch(VvmfError):
    """An eta-quotient oracle disagrees with the pinned series coefficients."""


class PrecisionLoss(VvmfError):
    """A truncated series cannot reach the requested accuracy at this point."""


class UnsupportedAmbientGroup(VvmfError):
    """The operation is only available over the full modular group."""
