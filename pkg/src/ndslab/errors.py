"""Exception types shared across ndslab."""


class NDSError(Exception):
    """Base class for all ndslab errors."""


class DomainError(NDSError):
    """A point or map does not belong to the expected space."""


class EmptySetError(NDSError):
    """An operation needs a nonempty point set."""


class ConfigError(NDSError):
    """Invalid parameters, scenario entries or sequence rules."""

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
