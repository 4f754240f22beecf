"""Domain errors raised by isokit operations.

Input-shape problems (malformed tables, bad JSON, wrong lengths) raise
plain ValueError; the classes below mark situations where the inputs are
well formed but the mathematics refuses.
"""


class IsokitError(Exception):
    """Base class for domain errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


class GroupTooLarge(IsokitError):
    """Group order exceeds the configured cap (ISOKIT_MAX_GROUP_ORDER)."""


class NotStrictChain(IsokitError):
    """Subgroup chain is not strictly increasing under inclusion."""


class ZeroChain(IsokitError):
    """Operation needs a chain of length at least one."""


class NotWeaklyDecreasing(IsokitError):
    """Subgroup list is not weakly decreasing under inclusion."""


class NotRegular(IsokitError):
    """A setwise-but-not-pointwise simplex stabilizer was detected."""


class NotSimplicial(IsokitError):
    """Vertex map does not send simplices to simplices."""


class NotEquivariant(IsokitError):
    """Map does not commute with the group actions."""


class NotIsovariant(IsokitError):
    """Map does not preserve pointwise stabilizers of simplices."""


class NotSelfMap(IsokitError):
    """Operation needs source and target to be the same complex."""


class NotEquivariantTriangulation(IsokitError):
    """Some closed simplex orbit is not modelled on a coset simplex."""

    def __init__(self, message: str, orbit_simplex=None):
        super().__init__(message)
        self.orbit_simplex = orbit_simplex


class NonIntegral(IsokitError):
    """Burnside coefficients are not integers; carries the rational witness."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NonAbelianPi(IsokitError):
    """Edge labels cannot come from an abelian fundamental-group quotient."""


class InconsistentLabels(IsokitError):
    """Edge labels fail the spanning-tree or map-compatibility checks."""


class MissingStratum(IsokitError):
    """A dimension override names an isotropy class the complex lacks."""
