"""
Metrics Errors
"""


class MetricsError(Exception):
    """Base error for episode metrics and report aggregation."""
    pass


class EmptyRecordSetError(MetricsError):
    """A metric was requested over no (metric-eligible) episodes."""
    pass


class ShapeMismatchError(MetricsError):
    """Per-seed reports do not cover the same cells."""
    pass


class NoPathError(MetricsError):
    """Start and goal are not connected through the drivable region."""
    pass
