"""Special orthogonal group SO(n) with the Frobenius (bi-invariant) metric."""

from __future__ import annotations

import numpy as np
import scipy.linalg

from ..bounds import BUILTIN_PROFILES, CurvatureProfile
from ..errors import CutLocusError
from .base import Manifold, as_rng, POINT_TOL

_SERIES_MAX_TERMS = 300


def _skew(m):
    return 0.5 * (m - m.T)


def dexpm_series(omega: np.ndarray, h: np.ndarray) -> np.ndarray:
    """phi(-ad_omega)(h) = sum_k (-ad_omega)^k(h) / (k+1)!.

    Left-translated derivative of the matrix exponential:
    d/dt expm(omega + t h) (0) = expm(omega) @ dexpm_series(omega, h).
    """
    term = np.array(h, dtype=float)
    acc = term.copy()
    scale = max(float(np.linalg.norm(h)), 1e-300)
    for k in range(1, _SERIES_MAX_TERMS):
        term = -(omega @ term - term @ omega) / (k + 1.0)
        acc += term
        if float(np.linalg.norm(term)) < 1e-17 * scale:
            break
    return acc


class SpecialOrthogonal(Manifold):
    """SO(n): rotation matrices with metric <X, Y> = tr(X^T Y)."""

    name = "so"
    locally_symmetric = True

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("SpecialOrthogonal needs n >= 2")
        self.n = n

    @property
    def dim(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def ambient_shape(self) -> tuple:
        return (self.n, self.n)

    def distance(self, p, q) -> float:
        return self.norm(p, self.log(p, q))

    def exp(self, p, v):
        return p @ scipy.linalg.expm(_skew(p.T @ v))

    def log(self, p, q):
        m = p.T @ q
        eig = np.linalg.eigvals(m)
        if float(np.min(np.abs(eig + 1.0))) < 1e-8:
            raise CutLocusError("rotation by pi has no unique logarithm")
        l = scipy.linalg.logm(m)
        return p @ _skew(np.real(l))

    def dexp(self, p, v, w):
        omega = _skew(p.T @ v)
        h = p.T @ w
        return p @ scipy.linalg.expm(omega) @ dexpm_series(omega, h)

    def transport(self, p, v, w, t: float = 1.0):
        e_half = scipy.linalg.expm(0.5 * t * _skew(p.T @ v))
        return p @ e_half @ (p.T @ w) @ e_half

    def riemann(self, p, x, y, z):
        a, b, c = p.T @ x, p.T @ y, p.T @ z
        ab = a @ b - b @ a
        return p @ (-0.25 * (ab @ c - c @ ab))

    def project_tangent(self, p, w):
        return p @ _skew(p.T @ w)

    def random_point(self, seed):
        rng = as_rng(seed)
        a = rng.standard_normal((self.n, self.n))
        q, r = np.linalg.qr(a)
        q = q * np.sign(np.diag(r))
        if np.linalg.det(q) < 0:
            q[:, [0, 1]] = q[:, [1, 0]]
        return q

    def random_tangent(self, p, seed):
        rng = as_rng(seed)
        return p @ _skew(rng.standard_normal((self.n, self.n)))

    def check_point(self, p, tol: float = POINT_TOL) -> None:
        err = float(np.max(np.abs(p.T @ p - np.eye(self.n))))
        if err > tol:
            raise ValueError(f"matrix is not orthogonal, |Q^T Q - I| = {err:.2e}")
        if np.linalg.det(p) < 0:
            raise ValueError("matrix has determinant -1, not in SO(n)")

    def check_tangent(self, p, v, tol: float = POINT_TOL) -> None:
        m = p.T @ v
        err = float(np.max(np.abs(m + m.T)))
        if err > tol * max(1.0, float(np.linalg.norm(v))):
            raise ValueError(f"Q^T V is not skew-symmetric, |sym| = {err:.2e}")

    def curvature_profile(self) -> CurvatureProfile:
        # sec(SO(3)) is identically 1/8 under this metric; for n > 3 the
        # skew commutator bound |[X,Y]| <= |X||Y| gives sec <= 1/4.
        if self.n == 3:
            return BUILTIN_PROFILES["so3"]
        return BUILTIN_PROFILES["so"]
