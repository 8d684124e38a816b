"""Exception types shared across the toolkit."""


class ConfigError(ValueError):
    """A config file or config object is invalid or self-inconsistent."""


class AdapterError(ValueError):
    """A raw record cannot be mapped into the unified sample shape."""


class ManifestError(ValueError):
    """An evaluation manifest is invalid or references missing files."""


class AlignmentError(ValueError):
    """Predictions reference sample ids absent from the gold data."""
