"""Optimization on manifolds through exponential-map pullbacks.

The package bundles curvature-indexed trigonometric functions, bound
certificates for the differential and Hessian of the exponential map,
concrete manifolds, numerical verification oracles, and the pullback
optimizer, all reachable through a FastAPI service and a thin CLI.
"""

from .bounds import (
    BUILTIN_PROFILES,
    BoundCertificate,
    CurvatureProfile,
    WeakConvexityReport,
)
from .errors import (
    ConjugatePointError,
    CutLocusError,
    DomainError,
    UnsupportedManifoldError,
)
from .manifolds import (
    Euclidean,
    Grassmann,
    Hyperbolic,
    Manifold,
    SpecialOrthogonal,
    Sphere,
    make_manifold,
)
from .optimize import (
    Objective,
    OptimizerConfig,
    StoppingRule,
    TrivializationState,
    convergence_budget,
    dynamic_trivialization,
    pullback_grad,
)

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_PROFILES",
    "BoundCertificate",
    "CurvatureProfile",
    "WeakConvexityReport",
    "ConjugatePointError",
    "CutLocusError",
    "DomainError",
    "UnsupportedManifoldError",
    "Euclidean",
    "Sphere",
    "Hyperbolic",
    "SpecialOrthogonal",
    "Grassmann",
    "Manifold",
    "make_manifold",
    "Objective",
    "OptimizerConfig",
    "StoppingRule",
    "TrivializationState",
    "convergence_budget",
    "dynamic_trivialization",
    "pullback_grad",
    "__version__",
]
