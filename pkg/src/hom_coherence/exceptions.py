"""Exception types shared by the library and the command line."""


class HomError(Exception):
    """Base class for errors raised by hom_coherence."""


class ConfigError(HomError, ValueError):
    """Invalid configuration: bad parameter value, empty ensemble, malformed file."""


class DomainError(HomError, ValueError):
    """Parameters outside the domain an operation supports."""
