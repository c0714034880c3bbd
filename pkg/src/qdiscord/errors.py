"""Exception hierarchy.

Every error raised by the library derives from :class:`DiscordError`, and the
value-type errors also derive from :class:`ValueError` so plain ``except
ValueError`` callers keep working.
"""


class DiscordError(Exception):
    """Base class for all library errors."""


class NotHermitian(DiscordError, ValueError):
    pass


class NoConvergence(DiscordError, RuntimeError):
    pass


class DimensionMismatch(DiscordError, ValueError):
    pass


class NotUnitTrace(DiscordError, ValueError):
    pass


class NotPositive(DiscordError, ValueError):
    pass


class NotNormalized(DiscordError, ValueError):
    pass


class OutOfRange(DiscordError, ValueError):
    pass


class InvalidMeasurement(DiscordError, ValueError):
    """Projector set is not Hermitian, idempotent, orthogonal and complete."""


class InvalidDistribution(DiscordError, ValueError):
    """Classical joint table is negative or does not sum to one."""


class StateFormatError(DiscordError, ValueError):
    """State file is structurally malformed (bad JSON, missing keys, ragged rows)."""


class NonzeroDiscord(DiscordError):
    """State is not block diagonal in the requested measurement basis."""


class UnsupportedDimension(DiscordError, ValueError):
    pass
