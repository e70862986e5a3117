"""Exception types shared across the covering pipelines."""


class PlankforgeError(Exception):
    """Invalid input or violated invariant."""


class CoverageError(PlankforgeError):
    """A claimed covering failed independent verification.

    Carries the uncovered witness points so callers can report or re-check
    them without re-running the verification.
    """

    def __init__(self, message, witnesses=None):
        super().__init__(message)
        self.witnesses = witnesses


class SlabSupplyError(PlankforgeError):
    """The supplied slab sequence ran out before the construction closed.

    ``info`` holds structured progress data (balls covered, width deficits,
    partial partitions) for diagnostics and CLI exit reporting.
    """

    def __init__(self, message, **info):
        super().__init__(message)
        self.info = info


class CertificateError(PlankforgeError):
    """A step-by-step placement certificate failed."""
