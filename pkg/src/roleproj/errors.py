"""Exception hierarchy shared across the toolkit.

The CLI maps ToolkitError subclasses to exit code 1 and OS-level I/O
failures to exit code 2.
"""


class ToolkitError(Exception):
    """Base class for all toolkit-raised errors."""


class FormatError(ToolkitError):
    """Malformed input text (bad bracketing, bad link syntax, bad block header)."""


class ValidationError(ToolkitError):
    """Well-formed input that violates a data invariant (range, overlap, parallelism)."""


class ConfigError(ToolkitError):
    """Unusable configuration or missing prerequisite input for the chosen model."""


class DegenerateGraphError(ToolkitError):
    """Alignment graph with an empty partition."""


class OracleSizeError(ToolkitError):
    """Brute-force enumeration refused: instance exceeds the size guard."""


class IntegrityError(ToolkitError):
    """Internal consistency violation (e.g. a role on a unit missing from the graph)."""
