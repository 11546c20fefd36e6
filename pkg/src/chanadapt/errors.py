"""Exception hierarchy shared across the package.

Every error raised on a contract violation derives from ChanAdaptError so
the service layer and the CLI can map them uniformly (HTTP 400 / exit 1)
while genuine usage mistakes raise UsageError (exit 2).
"""


class ChanAdaptError(Exception):
    """Base class for all domain errors."""


class MontageError(ChanAdaptError):
    """Malformed montage definition: bad file, duplicate label, zero vector."""


class ChannelMismatchError(ChanAdaptError):
    """Signal channels do not match a matrix's expected source channels."""


class FormatError(ChanAdaptError):
    """Malformed or truncated serialized artifact."""


class NumericalError(ChanAdaptError):
    """Numerical contract violation: singular system, non-SPD input, divergence."""


class DomainError(ChanAdaptError):
    """Argument outside a mathematical domain (|x| > 1, |m| > l, ...)."""


class UsageError(ChanAdaptError):
    """Invalid invocation: unknown name, missing required option."""
