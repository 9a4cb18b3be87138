"""Flat space; exponential map is translation."""

from __future__ import annotations

import numpy as np

from ..bounds import BUILTIN_PROFILES, CurvatureProfile
from .base import Manifold, as_rng, POINT_TOL


class Euclidean(Manifold):
    name = "euclidean"
    locally_symmetric = True

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("Euclidean needs n >= 1")
        self.n = n

    @property
    def dim(self) -> int:
        return self.n

    @property
    def ambient_shape(self) -> tuple:
        return (self.n,)

    def distance(self, p, q) -> float:
        return float(np.linalg.norm(q - p))

    def exp(self, p, v):
        return p + v

    def log(self, p, q):
        return q - p

    def dexp(self, p, v, w):
        return np.array(w, dtype=float)

    def transport(self, p, v, w, t: float = 1.0):
        return np.array(w, dtype=float)

    def riemann(self, p, x, y, z):
        return np.zeros_like(z)

    def project_tangent(self, p, w):
        return np.array(w, dtype=float)

    def random_point(self, seed):
        return as_rng(seed).standard_normal(self.n)

    def random_tangent(self, p, seed):
        return as_rng(seed).standard_normal(self.n)

    def check_point(self, p, tol: float = POINT_TOL) -> None:
        if np.asarray(p).shape != (self.n,):
            raise ValueError(f"expected shape ({self.n},), got {np.asarray(p).shape}")

    def check_tangent(self, p, v, tol: float = POINT_TOL) -> None:
        if np.asarray(v).shape != (self.n,):
            raise ValueError(f"expected shape ({self.n},), got {np.asarray(v).shape}")

    def curvature_profile(self) -> CurvatureProfile:
        return BUILTIN_PROFILES["euclidean"]
