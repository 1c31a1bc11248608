"""Exception types raised by the library.

Each class carries a short machine-readable ``kind`` so sweep drivers can
report failures without matching on message text.
"""


class EigenboundError(Exception):
    kind = "error"


class DomainError(EigenboundError, ValueError):
    kind = "domain"


class BranchError(EigenboundError, ValueError):
    kind = "branch"


class UnsupportedError(EigenboundError, ValueError):
    kind = "unsupported"


class DivergentError(EigenboundError, ValueError):
    kind = "divergent"


class RangeError(EigenboundError, ValueError):
    kind = "range"


class ResolutionError(EigenboundError, ValueError):
    kind = "resolution"


class ResonanceError(EigenboundError, ValueError):
    kind = "resonance"


class DimensionMismatchError(EigenboundError, ValueError):
    kind = "dimension mismatch"


class DegenerateError(EigenboundError, ValueError):
    kind = "degenerate"


class PoleError(EigenboundError, ValueError):
    kind = "pole"


class ValidationError(EigenboundError, RuntimeError):
    kind = "validation"


class NoConvergenceError(EigenboundError, RuntimeError):
    kind = "no-convergence"


class NoRootError(EigenboundError, RuntimeError):
    kind = "no-root"


class MultiRootError(EigenboundError, RuntimeError):
    kind = "multi-root"
