"""Exception types shared across the package."""


class GraphEvolveError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(GraphEvolveError):
    """Invalid experiment or CLI configuration."""


class DataError(GraphEvolveError):
    """Problem with dataset content or layout."""


class ParseError(DataError):
    """Malformed dataset file; carries the offending path and line number."""

    def __init__(self, path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = str(path)
        self.line = line


class SplitError(DataError):
    """Dataset cannot be partitioned as requested."""


class SampleError(GraphEvolveError):
    """Invalid weighted-sampling request."""


class FitError(GraphEvolveError):
    """Classifier training cannot proceed on the given data."""
