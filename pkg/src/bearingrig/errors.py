"""Exception types raised across the package.

Validation errors (bad graphs, degenerate geometry, malformed documents)
subclass :class:`InputError`; numerical failures (non-finite data,
eigensolver breakdown) subclass :class:`NumericalError`.  The CLI maps the
two families to exit codes 2 and 3.
"""


class BearingRigError(Exception):
    """Base class for all package errors."""


class InputError(BearingRigError, ValueError):
    """Invalid input: graph, geometry, or document."""


class NumericalError(BearingRigError):
    """Numerical computation failed or received non-finite data."""


# graph validation

class SelfLoopError(InputError):
    pass


class DuplicateEdgeError(InputError):
    pass


class VertexIdOutOfRangeError(InputError):
    pass


class TooFewVerticesError(InputError):
    pass


# geometry

class ZeroVectorError(InputError):
    pass


class CoincidentPointsError(InputError):
    """Two endpoints of an edge are closer than the separation floor."""

    def __init__(self, message, edge_index=None):
        super().__init__(message)
        self.edge_index = edge_index


class DegenerateConfigurationError(InputError):
    pass


class DimensionNotLargerError(InputError):
    pass


class TooFewTargetsError(InputError):
    pass


class CollinearOutEdgesError(InputError):
    pass


class NoOutEdgesError(InputError):
    pass


class InvalidSpecError(InputError):
    pass


class NonUnitDesiredBearingError(InputError):
    pass


class NotAcyclicError(InputError):
    pass


# numerics

class NonFiniteEntriesError(NumericalError, ValueError):
    pass


class ConvergenceFailureError(NumericalError):
    pass


class NotOrthonormalError(NumericalError, ValueError):
    pass


class DimensionMismatchError(NumericalError, ValueError):
    pass


class ConsistencyError(NumericalError):
    """Two formulas that must agree did not; indicates a bug or a
    configuration degenerate beyond the working tolerances."""


# dynamics

class StepSizeInvalidError(InputError):
    pass


class StateOverflowError(NumericalError):
    pass


# documents

class DocumentError(InputError):
    """Base for formation/report document problems."""


class ParseError(DocumentError):
    pass


class SchemaError(DocumentError):
    def __init__(self, message, path="$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class ValidationError(DocumentError):
    pass
