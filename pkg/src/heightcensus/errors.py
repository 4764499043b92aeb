"""Exceptions shared across the package."""


class HeightCensusError(Exception):
    """Base class for all library errors."""


class InvalidInput(HeightCensusError):
    """Malformed or out-of-contract argument."""


class DegreeCapExceeded(HeightCensusError):
    """An operation was asked to work above its supported degree cap."""


class PrecisionExhausted(HeightCensusError):
    """Internal precision hit the configured cap without certifying the result."""


class BoxTooLarge(HeightCensusError):
    """Candidate box for an enumeration exceeds the refusal threshold."""

    def __init__(self, estimate: int, cap: int):
        super().__init__(
            f"candidate box of about {estimate} polynomials exceeds the cap {cap}"
        )
        self.estimate = estimate
        self.cap = cap
