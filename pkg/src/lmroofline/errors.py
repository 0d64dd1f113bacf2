"""Shared exception types."""


class ValidationError(ValueError):
    """Raised when a config, workload, or grid fails validation."""
