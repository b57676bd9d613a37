"""Exception types shared across the package."""


class HighlineError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(HighlineError):
    """Invalid configuration: bad column mapping, out-of-range parameter,
    malformed config file."""


class DataError(HighlineError):
    """Input data cannot be processed: unparseable row, empty log, broken
    invariant in a constructed log."""
