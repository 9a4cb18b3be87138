"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the validity radius of a formula."""


class CutLocusError(ValueError):
    """The target point lies on or past the cut locus, so the logarithm is undefined."""


class ConjugatePointError(RuntimeError):
    """A computation would cross a conjugate point where the exponential degenerates."""


class UnsupportedManifoldError(NotImplementedError):
    """The requested operation is not available on this manifold."""
