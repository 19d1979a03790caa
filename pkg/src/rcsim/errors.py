"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Malformed face, rank, probability, or dimension mismatch."""


class CapacityError(RuntimeError):
    """Instance too large for an exhaustive (brute-force) routine."""


class ConfigError(ValueError):
    """Invalid experiment configuration."""
