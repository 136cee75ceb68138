class DomainError(ValueError):
    """A parameter lies outside the range an operation is defined on."""


class ConfigError(ValueError):
    """A run or scenario description is inconsistent or malformed."""
