"""Exception hierarchy shared across the simulation modules."""

from __future__ import annotations


class SimulationError(Exception):
    """Base class for all errors raised by this package."""


class MalformedInputError(SimulationError, ValueError):
    """An input matrix or scalar violates a structural precondition."""


class ThresholdError(SimulationError):
    """The parametric oscillator is at or above its oscillation threshold."""


class NoSteadyStateError(SimulationError):
    """The drift matrix is not Hurwitz, so no unique steady state exists."""


class NumericalError(SimulationError):
    """A linear-algebra routine failed or exceeded its residual budget."""


class ConfigError(SimulationError):
    """A run configuration is malformed or inconsistent."""
