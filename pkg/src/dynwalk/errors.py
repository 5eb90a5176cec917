"""Exception hierarchy shared across the package."""


class DynwalkError(Exception):
    """Base class for all package errors."""


class GraphError(DynwalkError, ValueError):
    pass


class VertexRangeError(GraphError):
    pass


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class DimensionMismatchError(DynwalkError, ValueError):
    pass


class PlacementError(DynwalkError, ValueError):
    """Invalid qubit indices or arity for a gate."""


class UnsupportedGateError(DynwalkError, ValueError):
    pass


class MeasurementError(DynwalkError, ValueError):
    pass


class NumericError(DynwalkError, ArithmeticError):
    pass
