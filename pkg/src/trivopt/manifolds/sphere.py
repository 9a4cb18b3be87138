"""Unit sphere S^{n-1} embedded in R^n, constant curvature +1."""

from __future__ import annotations

import math

import numpy as np

from ..bounds import BUILTIN_PROFILES, CurvatureProfile
from ..errors import CutLocusError
from .base import Manifold, as_rng, POINT_TOL

_ANTIPODE_GAP = 1e-8


def _sinc(t: float) -> float:
    """sin(t)/t with the removable singularity filled in."""
    if abs(t) < 1e-8:
        return 1.0 - t * t / 6.0
    return math.sin(t) / t


class Sphere(Manifold):
    """Sphere(n) is S^{n-1}, points are unit vectors in R^n."""

    name = "sphere"
    locally_symmetric = True

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("Sphere needs ambient dimension n >= 2")
        self.n = n

    @property
    def dim(self) -> int:
        return self.n - 1

    @property
    def ambient_shape(self) -> tuple:
        return (self.n,)

    def distance(self, p, q) -> float:
        return float(np.arccos(np.clip(np.dot(p, q), -1.0, 1.0)))

    def exp(self, p, v):
        theta = float(np.linalg.norm(v))
        out = math.cos(theta) * p + _sinc(theta) * v
        return out / np.linalg.norm(out)

    def log(self, p, q):
        c = float(np.clip(np.dot(p, q), -1.0, 1.0))
        theta = math.acos(c)
        if theta > math.pi - _ANTIPODE_GAP:
            raise CutLocusError("antipodal points have no unique logarithm")
        u = q - c * p
        nu = float(np.linalg.norm(u))
        if nu < 1e-14:
            return np.zeros_like(p)
        return (theta / nu) * u

    def dexp(self, p, v, w):
        r = float(np.linalg.norm(v))
        if r < 1e-14:
            return np.array(w, dtype=float)
        vh = v / r
        a = float(np.dot(w, vh))
        w_perp = w - a * vh
        gdot = -math.sin(r) * p + math.cos(r) * vh
        return a * gdot + _sinc(r) * w_perp

    def transport(self, p, v, w, t: float = 1.0):
        r = float(np.linalg.norm(v))
        if r < 1e-14:
            return np.array(w, dtype=float)
        vh = v / r
        s = t * r
        a = float(np.dot(w, vh))
        w_perp = w - a * vh
        gdot = -math.sin(s) * p + math.cos(s) * vh
        return w_perp + a * gdot

    def riemann(self, p, x, y, z):
        return float(np.dot(z, y)) * x - float(np.dot(z, x)) * y

    def project_tangent(self, p, w):
        return w - float(np.dot(p, w)) * p

    def random_point(self, seed):
        v = as_rng(seed).standard_normal(self.n)
        return v / np.linalg.norm(v)

    def random_tangent(self, p, seed):
        return self.project_tangent(p, as_rng(seed).standard_normal(self.n))

    def check_point(self, p, tol: float = POINT_TOL) -> None:
        if abs(float(np.linalg.norm(p)) - 1.0) > tol:
            raise ValueError(f"point is off the unit sphere by {abs(np.linalg.norm(p)-1):.2e}")

    def check_tangent(self, p, v, tol: float = POINT_TOL) -> None:
        r = abs(float(np.dot(p, v)))
        if r > tol * max(1.0, float(np.linalg.norm(v))):
            raise ValueError(f"vector is not tangent, <p, v> = {r:.2e}")

    def curvature_profile(self) -> CurvatureProfile:
        return BUILTIN_PROFILES["sphere"]
