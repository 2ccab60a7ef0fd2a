"""Exception types shared across the package."""


class SeqselError(Exception):
    """Base class for every error raised by this package."""


class PoolValidationError(SeqselError):
    """A pool or sequence violates a structural invariant."""


class DimensionMismatch(PoolValidationError):
    """A frame vector's length differs from the declared dimensionality."""


class EmptyPool(PoolValidationError):
    """The pool (or a sequence) contains no entries."""


class DuplicateId(PoolValidationError):
    """Two sequences share the same identifier."""


class NonFiniteValue(PoolValidationError):
    """A frame embedding contains NaN or infinity."""


class InvalidBox(SeqselError):
    """Box coordinates are non-finite or inverted (x2 < x1 or y2 < y1)."""


class ZeroNormVector(SeqselError):
    """A vector's norm is below the degeneracy threshold.

    Signals upstream extraction failure; callers must filter the offending
    sample rather than have it silently corrupt distance statistics.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class PoolTooSmall(SeqselError):
    """The operation needs at least two samples."""


class BudgetExceedsPool(SeqselError):
    """Requested budget is larger than the pool."""


class NoEligibleSeed(SeqselError):
    """No sample satisfies the seed condition d_i <= ave_d."""


class DegeneratePair(SeqselError):
    """Both boxes have zero area (or the loss denominator vanishes)."""


class ClusterPackingFailed(SeqselError):
    """Synthetic directions could not be packed within the retry bound."""


class ManifestError(SeqselError):
    """Base class for pool file-format errors."""


class ManifestParse(ManifestError):
    """The manifest (or CSV fixture) is structurally malformed."""


class BlobSizeMismatch(ManifestError):
    """Blob length disagrees with the manifest's frame counts."""
