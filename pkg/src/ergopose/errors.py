"""Exception types shared across the package."""


class ErgoposeError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(ErgoposeError, ValueError):
    """A caller supplied a value outside the documented domain."""


class ConfigurationError(ErgoposeError):
    """A configuration file or table is malformed or incomplete."""


class InvalidStateError(ErgoposeError):
    """An object is in a state that makes the requested computation meaningless."""


class NoSolutionError(ErgoposeError):
    """A solve or sweep produced no feasible result."""
