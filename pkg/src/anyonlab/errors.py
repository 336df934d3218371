"""Exception taxonomy shared by all modules."""

from __future__ import annotations


class AnyonLabError(Exception):
    """Base class for all package errors."""


class SchemaError(AnyonLabError):
    """Input document does not match the expected schema."""


class ConsistencyError(AnyonLabError):
    """Category data violates a structural invariant.

    Carries the offending key/index tuple in ``args`` whenever available.
    """


class NumericalError(AnyonLabError):
    """A numeric routine failed to converge or produced unusable output."""


class UnknownLabel(AnyonLabError):
    """A simple label is not part of the category."""


class ShapeMismatch(AnyonLabError):
    """Morphisms are incompatible (source/target words or block shapes)."""


# equivalence_kit uses the same condition under the spec'd name.
ShapeError = ShapeMismatch


class DecompositionError(AnyonLabError):
    """Semisimple decomposition residuals exceeded tolerance."""


class HexagonResidualError(AnyonLabError):
    """An extracted half-braiding fails naturality/hexagon checks."""


class CoherenceError(AnyonLabError):
    """A symbol table fails pentagon/hexagon coherence beyond tolerance."""


class GeometryError(AnyonLabError):
    """Dual-lattice geometry violates a defining clause."""


class PlacementError(AnyonLabError):
    """An insertion placement (anchor/offset) is not supported or infeasible."""


class TruncationError(AnyonLabError):
    """The truncation depth is insufficient for the requested computation."""


class NotIntertwiner(AnyonLabError):
    """A candidate isomorphism fails its intertwiner precondition."""
