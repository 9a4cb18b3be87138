"""Concrete geometries with closed-form exponential maps."""

from __future__ import annotations

from .base import Manifold, as_rng
from .euclidean import Euclidean
from .grassmann import Grassmann
from .hyperbolic import Hyperbolic
from .orthogonal import SpecialOrthogonal
from .sphere import Sphere

__all__ = [
    "Manifold",
    "Euclidean",
    "Sphere",
    "Hyperbolic",
    "SpecialOrthogonal",
    "Grassmann",
    "as_rng",
    "make_manifold",
]


def make_manifold(kind: str, dim: int, subspace_dim: int | None = None) -> Manifold:
    """Build a manifold from its wire-format identifier.

    ``dim`` is the ambient dimension: Sphere/Hyperbolic use vectors in
    R^dim, SO uses dim-by-dim matrices, Grassmann needs ``subspace_dim``.
    """
    kind = kind.lower()
    if kind == "euclidean":
        return Euclidean(dim)
    if kind == "sphere":
        return Sphere(dim)
    if kind == "hyperbolic":
        return Hyperbolic(dim)
    if kind == "so":
        return SpecialOrthogonal(dim)
    if kind == "grassmann":
        if subspace_dim is None:
            raise ValueError("grassmann needs subspace_dim")
        return Grassmann(dim, subspace_dim)
    raise ValueError(f"unknown manifold kind {kind!r}")
