"""Hyperboloid model of hyperbolic space, constant curvature -1.

Points live on the upper sheet of <x, x>_M = -1 in R^n with the
Minkowski form <u, v>_M = -u_0 v_0 + sum_i u_i v_i; the form restricted
to tangent spaces is positive definite.
"""

from __future__ import annotations

import math

import numpy as np

from ..bounds import BUILTIN_PROFILES, CurvatureProfile
from .base import Manifold, as_rng, POINT_TOL


def _sinhc(t: float) -> float:
    """sinh(t)/t with the removable singularity filled in."""
    if abs(t) < 1e-8:
        return 1.0 + t * t / 6.0
    return math.sinh(t) / t


class Hyperbolic(Manifold):
    """Hyperbolic(n) is H^{n-1}, points are vectors in R^n on the hyperboloid."""

    name = "hyperbolic"
    locally_symmetric = True

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("Hyperbolic needs ambient dimension n >= 2")
        self.n = n

    @property
    def dim(self) -> int:
        return self.n - 1

    @property
    def ambient_shape(self) -> tuple:
        return (self.n,)

    @staticmethod
    def minkowski(u, v) -> float:
        return float(-u[0] * v[0] + np.dot(u[1:], v[1:]))

    def inner(self, p, u, v) -> float:
        return self.minkowski(u, v)

    def distance(self, p, q) -> float:
        c = max(1.0, -self.minkowski(p, q))
        return float(np.arccosh(c))

    def exp(self, p, v):
        theta = self.norm(p, v)
        out = math.cosh(theta) * p + _sinhc(theta) * v
        # rescale onto the sheet to stop drift of the quadric constraint
        return out / math.sqrt(-self.minkowski(out, out))

    def log(self, p, q):
        c = max(1.0, -self.minkowski(p, q))
        d = float(np.arccosh(c))
        u = q - c * p
        nu = self.norm(p, u)
        if nu < 1e-14:
            return np.zeros_like(p)
        return (d / nu) * u

    def dexp(self, p, v, w):
        r = self.norm(p, v)
        if r < 1e-14:
            return np.array(w, dtype=float)
        vh = v / r
        a = self.minkowski(w, vh)
        w_perp = w - a * vh
        gdot = math.sinh(r) * p + math.cosh(r) * vh
        return a * gdot + _sinhc(r) * w_perp

    def transport(self, p, v, w, t: float = 1.0):
        r = self.norm(p, v)
        if r < 1e-14:
            return np.array(w, dtype=float)
        vh = v / r
        s = t * r
        a = self.minkowski(w, vh)
        w_perp = w - a * vh
        gdot = math.sinh(s) * p + math.cosh(s) * vh
        return w_perp + a * gdot

    def riemann(self, p, x, y, z):
        return -(self.minkowski(z, y) * x - self.minkowski(z, x) * y)

    def project_tangent(self, p, w):
        return w + self.minkowski(w, p) * p

    def random_point(self, seed):
        y = as_rng(seed).standard_normal(self.n - 1)
        return np.concatenate(([math.sqrt(1.0 + float(np.dot(y, y)))], y))

    def random_tangent(self, p, seed):
        return self.project_tangent(p, as_rng(seed).standard_normal(self.n))

    def check_point(self, p, tol: float = POINT_TOL) -> None:
        q = self.minkowski(p, p)
        if abs(q + 1.0) > tol:
            raise ValueError(f"point is off the hyperboloid by {abs(q+1):.2e}")
        if p[0] <= 0:
            raise ValueError("point must be on the upper sheet (x_0 > 0)")

    def check_tangent(self, p, v, tol: float = POINT_TOL) -> None:
        r = abs(self.minkowski(p, v))
        if r > tol * max(1.0, self.norm(p, v)):
            raise ValueError(f"vector is not tangent, <p, v>_M = {r:.2e}")

    def curvature_profile(self) -> CurvatureProfile:
        return BUILTIN_PROFILES["hyperbolic"]
