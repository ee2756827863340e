"""Exception types raised by arrivaltools.

All of them derive from :class:`ValueError` so that callers written against
plain argument validation keep working.
"""

class GraphFormatError(ValueError):
    """Raised when a graph document cannot be parsed or has unknown keys."""
    pass

class StructuralError(ValueError):
    """Raised when the network graph does not allow an operation to proceed,
    e.g. the vehicle reaches a node without outgoing links."""
    pass

class ConfigError(ValueError):
    """Raised for invalid scenario or experiment configurations.

    Args:
        message (str): Description of the problem.
        path (str): Path of the offending configuration file, if any.
        line (int): 1-based line number within the file, if known.
    """

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        if path is not None:
            location = str(path) if line is None else '{0}:{1}'.format(path, line)
            message = '{0}: {1}'.format(location, message)
        super().__init__(message)

class LogFormatError(ValueError):
    """Raised when a CSV event log or detection corpus is malformed.

    Args:
        message (str): Description of the problem.
        path (str): Path of the offending file.
        line (int): 1-based line number (the header is line 1), if known.
    """

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        if path is not None:
            location = str(path) if line is None else '{0}:{1}'.format(path, line)
            message = '{0}: {1}'.format(location, message)
        super().__init__(message)
