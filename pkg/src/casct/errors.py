"""Exception hierarchy shared by every module of the toolkit."""


class CasctError(Exception):
    """Base class for all toolkit errors."""


class ModelError(CasctError):
    """An automaton, classification or attack spec violates a structural rule."""


class DomainError(CasctError):
    """A string was supplied that the plant cannot generate."""


class ObservationError(CasctError):
    """An observation cannot be produced by the model under the given attacks."""


class CapacityError(CasctError):
    """An exhaustive enumeration would exceed its guard."""


class UnsupportedError(CasctError):
    """The operation cannot handle this input (e.g. infinite attack language in an oracle)."""


class PolicyError(CasctError):
    """An attacker policy emitted an illegal choice."""

    def __init__(self, step, message):
        super().__init__(f"step {step}: {message}")
        self.step = step
