"""
Exception types raised by spinfold.

All are ValueError subclasses so callers that only care about "bad input"
can catch ValueError.
"""


class ChainMismatchError(ValueError):
    """Operands live on different chains or carry different scalar fields."""


class GeometryError(ValueError):
    """Operation applied to the wrong geometry (full/half line) or row count."""


class ParameterError(ValueError):
    """Invalid coupling, folding constant or search setup."""


class OracleCapError(ValueError):
    """Dense matrix requested for more sites than the configured cap."""


class UnknownOperatorError(ValueError):
    """Operator identifier not present in the registry."""
