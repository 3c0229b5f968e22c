"""Exception hierarchy shared by all modules."""


class LatticeError(Exception):
    """Base class for every error raised by :mod:`ellmono`."""


class ParameterError(LatticeError, ValueError):
    """A constructor or operation received an invalid parameter."""


class UsageError(LatticeError, ValueError):
    """Objects from different lattices were combined."""


class NotIntegralReflectionError(LatticeError, ValueError):
    """The reflection in a vector does not preserve the integral lattice."""


class IsotropicRootError(LatticeError, ValueError):
    """Reflection requested in a vector of square zero."""


class UnsupportedError(LatticeError):
    """The operation is not available for this kind of input."""


class ContainmentError(LatticeError, ValueError):
    """A vector does not lie in the expected (sub)lattice."""


class PreconditionError(LatticeError, ValueError):
    """A mathematical precondition of an operation does not hold."""


class ParseError(LatticeError, ValueError):
    """A lattice, vector, isometry or pattern file could not be parsed."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column
