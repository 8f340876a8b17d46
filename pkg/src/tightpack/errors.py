class GeometryDomainError(ValueError):
    """An input lies outside the domain where a construction is defined."""


class SolverError(RuntimeError):
    """A root solve failed to bracket or converge."""

    def __init__(self, message, bracket=None, values=None):
        super().__init__(message)
        self.bracket = bracket
        self.values = values
