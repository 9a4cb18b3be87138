"""Real Grassmannian of k-planes in R^n, canonical metric.

Points are represented by n-by-k orthonormal frames; two frames are the
same point when their column spans agree (equality modulo a right
orthogonal factor, tested through principal angles).  The metric on
horizontal tangents H (those with Y^T H = 0) is tr(H1^T H2), which makes
frame norms agree with the block coordinates of the quotient picture.
"""

from __future__ import annotations

import numpy as np

from ..bounds import BUILTIN_PROFILES, CurvatureProfile
from ..errors import CutLocusError
from .base import Manifold, as_rng, POINT_TOL

_CUT_GAP = 1e-8


class Grassmann(Manifold):
    name = "grassmann"
    locally_symmetric = True
    analytic_dexp = False  # differential of exp is evaluated by central differences

    def __init__(self, n: int, k: int):
        if not 1 <= k < n:
            raise ValueError("Grassmann needs 1 <= k < n")
        self.n = n
        self.k = k

    @property
    def dim(self) -> int:
        return self.k * (self.n - self.k)

    @property
    def ambient_shape(self) -> tuple:
        return (self.n, self.k)

    def principal_angles(self, p, q) -> np.ndarray:
        m = p.T @ q
        cos_s = np.linalg.svd(m, compute_uv=False)
        # sine-based values resolve small angles below the arccos noise
        # floor of sqrt(eps); pair them with the cosines in reverse order
        sin_s = np.linalg.svd(q - p @ m, compute_uv=False)[::-1]
        return np.where(
            cos_s * cos_s > 0.5,
            np.arcsin(np.clip(sin_s, 0.0, 1.0)),
            np.arccos(np.clip(cos_s, -1.0, 1.0)),
        )

    def distance(self, p, q) -> float:
        return float(np.linalg.norm(self.principal_angles(p, q)))

    def exp(self, p, v):
        u, s, vt = np.linalg.svd(v, full_matrices=False)
        return (p @ (vt.T * np.cos(s)) + u * np.sin(s)) @ vt

    def log(self, p, q):
        m = p.T @ q
        if float(np.min(np.linalg.svd(m, compute_uv=False))) < _CUT_GAP:
            raise CutLocusError("subspaces meet at a right principal angle")
        w = (q - p @ m) @ np.linalg.inv(m)
        u, s, vt = np.linalg.svd(w, full_matrices=False)
        return (u * np.arctan(s)) @ vt

    def project_tangent(self, p, w):
        return w - p @ (p.T @ w)

    def random_point(self, seed):
        rng = as_rng(seed)
        a = rng.standard_normal((self.n, self.k))
        q, r = np.linalg.qr(a)
        return q * np.sign(np.diag(r))

    def random_tangent(self, p, seed):
        rng = as_rng(seed)
        return self.project_tangent(p, rng.standard_normal((self.n, self.k)))

    def check_point(self, p, tol: float = POINT_TOL) -> None:
        err = float(np.max(np.abs(p.T @ p - np.eye(self.k))))
        if err > tol:
            raise ValueError(f"frame is not orthonormal, |Y^T Y - I| = {err:.2e}")

    def check_tangent(self, p, v, tol: float = POINT_TOL) -> None:
        err = float(np.max(np.abs(p.T @ v)))
        if err > tol * max(1.0, float(np.linalg.norm(v))):
            raise ValueError(f"vector is not horizontal, |Y^T H| = {err:.2e}")

    def points_close(self, p, q, tol: float = 1e-8) -> bool:
        return float(np.max(self.principal_angles(p, q), initial=0.0)) <= tol

    def curvature_profile(self) -> CurvatureProfile:
        return BUILTIN_PROFILES["grassmann"]
