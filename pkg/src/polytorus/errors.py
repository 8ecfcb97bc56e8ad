"""Exception hierarchy shared by the library and the CLI.

The CLI maps these onto process exit codes: configuration problems exit
with 2, numerical domain violations with 3, and resource-cap hits with 4.
"""


class PolytorusError(Exception):
    """Base class for all library errors."""


class ConfigError(PolytorusError):
    """Invalid configuration: bad argument combinations, malformed input."""

    exit_code = 2


class DomainError(PolytorusError):
    """Numerical domain violation: point outside the closed polydisc, r >= 1, ..."""

    exit_code = 3


class SpectrumError(DomainError):
    """A series does not have the spectrum class an operation requires."""

    exit_code = 3


class ResourceError(PolytorusError):
    """A documented resource cap (iterations, sieve size, coordinates) was hit."""

    exit_code = 4
