"""Case-file generation pipeline for the mtreg verification tool."""

from .backend import BackendSession, MtregDriver
from .errors import BackendTimeout, FixtureGenError, GenerationError, HypothesisViolation

__all__ = [
    "BackendSession",
    "BackendTimeout",
    "FixtureGenError",
    "GenerationError",
    "HypothesisViolation",
    "MtregDriver",
]
