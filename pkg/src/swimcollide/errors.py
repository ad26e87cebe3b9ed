"""Typed errors shared across the package."""

__all__ = [
    "DomainError",
    "RegionError",
    "SingularityError",
    "TruncationError",
    "StiffnessError",
    "InvalidRegimeError",
    "ConfigError",
]


class DomainError(ValueError):
    """Input lies outside the mathematical domain of an operation."""


class RegionError(ValueError):
    """Point lies outside the represented region (upper half-space, fluid side)."""


class SingularityError(ValueError):
    """Evaluation requested at a coordinate singularity (focus, point at infinity)."""


class TruncationError(RuntimeError):
    """Series tail still above tolerance at the hard mode cap.

    Carries the achieved relative residual and the mode count reached.
    """

    def __init__(self, message, residual, n_modes):
        super().__init__(message)
        self.residual = float(residual)
        self.n_modes = int(n_modes)


class StiffnessError(RuntimeError):
    """Integrator could not proceed (step underflow or step budget exhausted).

    Carries the time and state at failure for diagnosis.
    """

    def __init__(self, message, t, state):
        super().__init__(message)
        self.t = float(t)
        self.state = tuple(float(v) for v in state)


class InvalidRegimeError(ValueError):
    """Scenario is outside the regime an operation is defined for."""


class ConfigError(ValueError):
    """Config file problem. Names the offending key and line when known."""

    def __init__(self, message, key=None, line=None):
        super().__init__(message)
        self.key = key
        self.line = line
