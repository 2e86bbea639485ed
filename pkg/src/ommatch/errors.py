"""Shared exception types."""


class UsageError(ValueError):
    """An operation was called outside its contract."""


class DegenerateMetricError(ValueError):
    """Every pairwise distance in the space is zero."""


class ContractViolationError(RuntimeError):
    """An online matcher broke the irrevocable-matching contract."""


class SkipInstance(Exception):
    """Signals an instance with optimal cost zero; excluded from ratio statistics."""


class IngestionError(ValueError):
    """An input data file could not be parsed."""


class DataInsufficiencyError(IngestionError):
    """No sampling boundary leaves enough trips for both servers and requests."""
