"""Exception hierarchy shared by every module."""


class DecompKitError(Exception):
    """Base class for all library errors."""


class MalformedInputError(DecompKitError, ValueError):
    pass


class MissingEdgeError(DecompKitError, KeyError):
    pass


class EmbeddingError(DecompKitError, ValueError):
    """A rotation system does not match its graph or is not planar."""


class EmbeddingRequiredError(DecompKitError, ValueError):
    pass


class NonPlanarError(DecompKitError, ValueError):
    pass


class ModelViolationError(DecompKitError, ValueError):
    """A minor model breaks one of its defining clauses."""

    def __init__(self, clause: str, detail: str = ""):
        self.clause = clause
        super().__init__(f"{clause}: {detail}" if detail else clause)


class WidthViolationError(DecompKitError, ValueError):
    pass


class CompositionMismatchError(DecompKitError, ValueError):
    pass


class InvalidDecompositionError(DecompKitError, ValueError):
    pass


class InvalidDrawingError(DecompKitError, ValueError):
    pass


class InstanceTooLargeError(DecompKitError, ValueError):
    pass


class UnknownVertexError(MalformedInputError):
    """Well-formed input that refers to a vertex it never declares."""
