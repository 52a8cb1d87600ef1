"""Exception types shared across the package."""


class ReebSplitError(Exception):
    """Base class for all package-specific errors."""


class MeshError(ReebSplitError):
    pass


class DegenerateTriangle(MeshError):
    """A triangle repeats a vertex index."""


class NonManifoldEdge(MeshError):
    """An undirected edge belongs to three or more triangles."""


class PinchedVertex(MeshError):
    """A vertex link is not a single cycle (interior) or a single path (boundary)."""


class NonOrientable(MeshError):
    """No globally consistent triangle winding exists."""


class CycleNotLevel(MeshError):
    """Crossing data of a level cycle is inconsistent with its stated value."""


class CutNotSeparating(MeshError):
    """Cutting along a cycle did not produce exactly two pieces."""


class FieldError(ReebSplitError):
    pass


class InvalidFieldClass(FieldError):
    """Field is unusable for level-set sweeps (flat zones, critical boundary,
    or several critical vertices sharing one level component)."""


class FlatZone(InvalidFieldClass):
    """Adjacent equal values outside a whole constant boundary cycle."""


class CriticalBoundary(InvalidFieldClass):
    """A boundary cycle is non-constant or carries critical structure."""


class GenusNotZero(ReebSplitError):
    """Surface is not genus zero; its level-set graph would contain cycles."""


class ValueCollision(ReebSplitError):
    """Requested level value collides with a vertex value."""


class EdgeNotFound(ReebSplitError):
    pass


class TreeError(ReebSplitError):
    pass


class InvalidTree(TreeError):
    """Labeled tree violates structural constraints."""


class SideNotInvariant(TreeError):
    """An automorphism does not preserve a cut side's vertex set."""


class GroupTooLarge(TreeError):
    """Automorphism group exceeds the supported explicit-element bound."""


class InternalInconsistency(ReebSplitError):
    """A structural guarantee failed; indicates a bug, not bad input."""
