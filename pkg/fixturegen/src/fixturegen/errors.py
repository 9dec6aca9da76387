"""Errors raised by the generation pipeline."""


class FixtureGenError(Exception):
    pass


class BackendTimeout(FixtureGenError):
    """The backend exceeded its configured time budget."""


class HypothesisViolation(FixtureGenError):
    """An instance fails one of the standing hypotheses (a)-(i)."""

    def __init__(self, flag: str, message: str = ""):
        self.flag = flag
        super().__init__(f"hypothesis ({flag}) violated" + (f": {message}" if message else ""))


class GenerationError(FixtureGenError):
    """The engineering loop could not produce a consistent instance."""
