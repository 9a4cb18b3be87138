"""Common interface for the concrete geometries.

Points and tangent vectors are plain numpy arrays in ambient
coordinates; each manifold validates its own invariants.  All methods
are pure and random generators take explicit numpy Generators or seeds.
"""

from __future__ import annotations

import numpy as np

from ..bounds import CurvatureProfile
from ..errors import UnsupportedManifoldError

POINT_TOL = 1e-10


def as_rng(seed) -> np.random.Generator:
    """Accept an int seed or a ready Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


class Manifold:
    """Base class; subclasses fill in the geometry."""

    name: str = "abstract"
    locally_symmetric: bool = False
    analytic_dexp: bool = True
    # finite-difference step used when analytic_dexp is False
    fd_step: float = 1e-4

    @property
    def dim(self) -> int:
        raise NotImplementedError

    @property
    def ambient_shape(self) -> tuple:
        raise NotImplementedError

    # -- metric ------------------------------------------------------
    def inner(self, p, u, v) -> float:
        return float(np.sum(u * v))

    def norm(self, p, v) -> float:
        return float(np.sqrt(max(self.inner(p, v, v), 0.0)))

    def distance(self, p, q) -> float:
        raise NotImplementedError

    # -- exponential map and friends ----------------------------------
    def exp(self, p, v):
        raise NotImplementedError

    def log(self, p, q):
        raise NotImplementedError

    def dexp(self, p, v, w):
        """Differential of exp at v applied to w, as a tangent vector at exp(p, v)."""
        if self.analytic_dexp:
            raise NotImplementedError
        h = self.fd_step
        q = self.exp(p, v)
        diff = (self.exp(p, v + h * w) - self.exp(p, v - h * w)) / (2.0 * h)
        return self.project_tangent(q, diff)

    def transport(self, p, v, w, t: float = 1.0):
        """Parallel transport of w along s -> exp(p, s v) from s=0 to s=t.

        Internal support for the verification oracles; only the
        geometries with curvature tensors provide it.
        """
        raise UnsupportedManifoldError(f"{self.name} has no parallel transport")

    def riemann(self, p, x, y, z):
        """Curvature tensor R(x, y) z at p."""
        raise UnsupportedManifoldError(f"{self.name} has no curvature tensor")

    # -- tangent handling ---------------------------------------------
    def project_tangent(self, p, w):
        raise NotImplementedError

    def tangent_basis(self, p) -> list[np.ndarray]:
        """Orthonormal basis of the tangent space at p (deterministic)."""
        basis: list[np.ndarray] = []
        flat_dim = int(np.prod(self.ambient_shape))
        for idx in range(flat_dim):
            if len(basis) == self.dim:
                break
            e = np.zeros(flat_dim)
            e[idx] = 1.0
            cand = self.project_tangent(p, e.reshape(self.ambient_shape))
            for b in basis:
                cand = cand - self.inner(p, cand, b) * b
            n = self.norm(p, cand)
            if n > 1e-8:
                basis.append(cand / n)
        if len(basis) != self.dim:
            raise RuntimeError(f"could not build a tangent basis on {self.name}")
        return basis

    # -- sampling ------------------------------------------------------
    def random_point(self, seed):
        raise NotImplementedError

    def random_tangent(self, p, seed):
        raise NotImplementedError

    def random_unit_tangent(self, p, seed):
        rng = as_rng(seed)
        while True:
            v = self.random_tangent(p, rng)
            n = self.norm(p, v)
            if n > 1e-8:
                return v / n

    # -- invariants -----------------------------------------------------
    def check_point(self, p, tol: float = POINT_TOL) -> None:
        raise NotImplementedError

    def check_tangent(self, p, v, tol: float = POINT_TOL) -> None:
        raise NotImplementedError

    def points_close(self, p, q, tol: float = 1e-8) -> bool:
        return bool(np.max(np.abs(np.asarray(p) - np.asarray(q))) <= tol)

    def curvature_profile(self) -> CurvatureProfile:
        raise NotImplementedError
