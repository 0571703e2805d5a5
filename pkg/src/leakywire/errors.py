"""Exception hierarchy shared by the geometry, solver and CLI layers."""


class LeakyWireError(Exception):
    """Base class for all package errors."""


class DomainError(LeakyWireError, ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateCurveError(LeakyWireError):
    """The curve has zero or non-finite length, or duplicate nodes."""


class ExtensionError(LeakyWireError):
    """A piece could not be extended to a curve with positive chord-arc constant."""

    def __init__(self, message, piece=None):
        super().__init__(message)
        self.piece = piece


class AssemblyError(LeakyWireError):
    pass


class ConvergenceError(LeakyWireError):
    """An iterative solver stopped before reaching its tolerance."""

    def __init__(self, message, last_value=None):
        super().__init__(message)
        self.last_value = last_value


class BoundUndefinedError(LeakyWireError):
    """No lower bound is available because c(curve) <= 0 (cusp or self-intersection)."""


class GraphBoundUnavailable(BoundUndefinedError):
    def __init__(self, message, edge=None):
        super().__init__(message)
        self.edge = edge


class ConfigError(LeakyWireError):
    pass
