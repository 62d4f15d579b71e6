"""Exception hierarchy shared across the package."""


class SeejamError(Exception):
    """Base class for all package errors."""


class ValidationError(SeejamError, ValueError):
    """An input violated a documented precondition."""


class NumericsError(SeejamError, RuntimeError):
    """A numerical routine failed to converge."""


class DegenerateGeometryError(ValidationError):
    """Coincident positions or another geometric degeneracy."""


class InfeasibleScenarioError(ValidationError):
    """Scenario parameters admit no feasible solution."""


class SchemaError(ValidationError):
    """A scenario/manifest file failed schema validation."""


class SolverError(SeejamError, RuntimeError):
    """An optimization block failed irrecoverably."""
