"""Exception types shared across the package."""


class RootHKError(Exception):
    """Base class for all roothk-specific errors."""


class GroupTooLargeError(RootHKError):
    """Raised when exhaustive group enumeration would exceed the element cap."""

    def __init__(self, label: str, predicted: int, cap: int):
        self.label = label
        self.predicted = predicted
        self.cap = cap
        super().__init__(
            f"group {label} has {predicted} elements, exceeding the cap of {cap}; "
            "use generator-only methods"
        )


class DiscriminantTooLargeError(RootHKError):
    """Raised when a discriminant group is too large for subgroup enumeration."""

    def __init__(self, order: int, cap: int):
        self.order = order
        self.cap = cap
        super().__init__(f"discriminant group of order {order} exceeds the cap of {cap}")


class NotExhaustiveError(RootHKError):
    """Raised when an operation needs an exhaustively generated group."""


class FormSpaceError(RootHKError):
    """Raised when the space of invariant bilinear forms is not one-dimensional."""

    def __init__(self, dim: int):
        self.dim = dim
        super().__init__(f"invariant bilinear form space has dimension {dim}, expected 1")


class LatticeActionError(RootHKError):
    """Raised when a group generator fails to preserve a lattice it should preserve."""
