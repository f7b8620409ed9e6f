"""Exception types shared across the package."""


class ProxmemError(Exception):
    """Base class for all domain errors raised by proxmem."""


class ColocationError(ProxmemError):
    """Two neurons occupy the same lattice point.

    Carries the first offending pair as 1-based neuron labels.
    """

    def __init__(self, first: int, second: int):
        self.pair = (first, second)
        super().__init__(f"neurons {first} and {second} share the same coordinates")


class RetryExhausted(ProxmemError):
    """Geometry sampling kept producing co-located neurons."""


class SizeMismatch(ProxmemError):
    """Vector/matrix/permutation dimensions do not agree."""


class NotSymmetric(ProxmemError):
    """A weight matrix expected to be symmetric with zero diagonal is not."""


class CursorClamped(ProxmemError):
    """recall_step was asked to write a position that is already clamped."""


class DegeneratePair(ProxmemError):
    """An interplay session needs two distinct start neurons."""


class NonTermination(ProxmemError):
    """Safety guard: an interplay run exceeded the round budget."""


class ConfigError(ProxmemError):
    """Experiment configuration failed validation; message carries the field path."""


class FixtureError(ProxmemError):
    """A fixture file could not be parsed or failed schema checks."""


class DegeneratePairWarning(UserWarning):
    """Stimulus pair selection found a constant X axis (both endpoints equal)."""
