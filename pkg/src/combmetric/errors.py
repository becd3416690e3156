"""Exception types raised across the package."""


class CombMetricError(Exception):
    """Base class for all package errors."""


class CapExceeded(CombMetricError):
    """An enumeration would exceed its configured size cap."""


class Singular(CombMetricError):
    """Matrix is not invertible."""


class NotACovering(CombMetricError):
    """The family of sets does not cover [n]."""


class EmptySet(CombMetricError):
    """A basic set is empty."""


class IsKPartition(CombMetricError):
    """No MacWilliams counterexample exists for a k-partition."""


class NoUnequalSets(CombMetricError):
    """All basic sets have the same cardinality."""


class PreconditionFailed(CombMetricError):
    """A witness construction was called outside its hypotheses."""


class NotDecomposable(CombMetricError):
    """An isometry could not be written as T_phi * B with B respecting M."""


class ConstructionFailed(CombMetricError):
    """A witness construction did not verify (not weight-preserving or extendable)."""
