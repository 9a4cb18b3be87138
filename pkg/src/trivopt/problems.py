"""Benchmark objectives with known optima and conservative convexity constants.

Each constructor returns an :class:`~trivopt.optimize.Objective` whose
``alpha`` is an analytic bound on the operator norm of the Riemannian
Hessian (never a sampled estimate), together with the manifold it
lives on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import trig
from .manifolds import Euclidean, Grassmann, Hyperbolic, Manifold, SpecialOrthogonal, Sphere, as_rng
from .optimize import Objective


@dataclass
class ProblemInstance:
    """A manifold, an objective on it, and the data that generated them."""

    kind: str
    manifold: Manifold
    objective: Objective
    data: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "alpha": self.objective.alpha, "f_star": self.objective.f_star}
        for key, val in self.data.items():
            out[key] = val.tolist() if isinstance(val, np.ndarray) else val
        return out


def _require_symmetric(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if float(np.max(np.abs(a - a.T))) > 1e-10:
        raise ValueError("matrix must be symmetric")
    return a


def quadratic(b: np.ndarray) -> ProblemInstance:
    """f(x) = 0.5 |x - b|^2 on flat space; unit Hessian, minimum at b."""
    b = np.asarray(b, dtype=float)
    m = Euclidean(b.shape[0])
    obj = Objective(
        value=lambda x: 0.5 * float(np.dot(x - b, x - b)),
        grad=lambda x: x - b,
        alpha=1.0,
        f_star=0.0,
    )
    return ProblemInstance("quadratic", m, obj, {"b": b})


def rayleigh(a: np.ndarray) -> ProblemInstance:
    """Rayleigh quotient x^T A x on the unit sphere.

    The minimum is the smallest eigenvalue; alpha = 4 |A|_2 bounds the
    Riemannian Hessian 2 u^T A u - 2 (x^T A x) |u|^2 in operator norm.
    """
    a = _require_symmetric(a)
    m = Sphere(a.shape[0])
    f_star = float(np.min(np.linalg.eigvalsh(a)))
    alpha = 4.0 * float(np.linalg.norm(a, 2))
    obj = Objective(
        value=lambda x: float(x @ a @ x),
        grad=lambda x: 2.0 * m.project_tangent(x, a @ x),
        alpha=alpha,
        f_star=f_star,
    )
    return ProblemInstance("rayleigh", m, obj, {"a": a})


def procrustes(b: np.ndarray) -> ProblemInstance:
    """f(Q) = 0.5 |Q - B|_F^2 over rotations.

    The rotation-constrained minimizer comes from the SVD of B with the
    smallest singular value flipped if the polar factor has negative
    determinant; alpha = 1 + |B|_2.
    """
    b = np.asarray(b, dtype=float)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError("matrix must be square")
    n = b.shape[0]
    m = SpecialOrthogonal(n)
    u, s, vt = np.linalg.svd(b)
    d = np.ones(n)
    if np.linalg.det(u @ vt) < 0:
        d[-1] = -1.0
    q_star = (u * d) @ vt
    f_star = 0.5 * float(np.sum((q_star - b) ** 2))
    alpha = 1.0 + float(np.linalg.norm(b, 2))
    obj = Objective(
        value=lambda q: 0.5 * float(np.sum((q - b) ** 2)),
        grad=lambda q: m.project_tangent(q, q - b),
        alpha=alpha,
        f_star=f_star,
    )
    return ProblemInstance("procrustes", m, obj, {"b": b, "q_star": q_star})


def karcher_mean(points: list[np.ndarray], working_radius: float = 1.0) -> ProblemInstance:
    """Sum of squared distances to anchor points in hyperbolic space.

    alpha sums the per-anchor Hessian envelopes zeta1(-1, R_i), where
    R_i is the largest distance the anchor can reach from any point of
    the declared working ball around the anchors' reference point.
    """
    if not points:
        raise ValueError("need at least one point")
    pts = [np.asarray(p, dtype=float) for p in points]
    m = Hyperbolic(pts[0].shape[0])
    for p in pts:
        m.check_point(p)
    ref = pts[0]
    radii = [m.distance(ref, p) + working_radius for p in pts]
    alpha = float(sum(trig.zeta1(-1.0, max(r, 1e-9)) for r in radii))

    def value(x):
        return 0.5 * sum(m.distance(x, p) ** 2 for p in pts)

    def grad(x):
        g = np.zeros_like(x)
        for p in pts:
            g = g - m.log(x, p)
        return g

    obj = Objective(value=value, grad=grad, alpha=alpha, f_star=0.0 if len(pts) == 1 else _karcher_f_star(m, pts))
    return ProblemInstance(
        "karcher",
        m,
        obj,
        {"points": np.array(pts), "working_radius": working_radius},
    )


def _karcher_f_star(m: Hyperbolic, pts: list[np.ndarray], iters: int = 200) -> float:
    """Lower bound via the fixed-point iteration x <- exp_x(mean of logs)."""
    x = pts[0]
    for _ in range(iters):
        g = np.zeros_like(x)
        for p in pts:
            g = g + m.log(x, p)
        g = g / len(pts)
        if m.norm(x, g) < 1e-14:
            break
        x = m.exp(x, g)
    return 0.5 * sum(m.distance(x, p) ** 2 for p in pts)


def karcher_fixed_point(m: Hyperbolic, pts: list[np.ndarray], iters: int = 500) -> np.ndarray:
    """Independent fixed-point solver for the mean; used as a test oracle."""
    x = pts[0]
    for _ in range(iters):
        g = np.zeros_like(x)
        for p in pts:
            g = g + m.log(x, p)
        g = g / len(pts)
        if m.norm(x, g) < 1e-15:
            break
        x = m.exp(x, g)
    return x


def grassmann_trace(a: np.ndarray, k: int) -> ProblemInstance:
    """f(Y) = tr(Y^T A Y) on k-planes; the minimum is the sum of the k smallest eigenvalues."""
    a = _require_symmetric(a)
    n = a.shape[0]
    m = Grassmann(n, k)
    eig = np.linalg.eigvalsh(a)
    f_star = float(np.sum(eig[:k]))
    alpha = 4.0 * float(np.linalg.norm(a, 2))
    obj = Objective(
        value=lambda y: float(np.trace(y.T @ a @ y)),
        grad=lambda y: 2.0 * m.project_tangent(y, a @ y),
        alpha=alpha,
        f_star=f_star,
    )
    return ProblemInstance("grassmann_trace", m, obj, {"a": a, "k": k})


def random_instance(kind: str, dim: int, seed: int = 0, **kw) -> ProblemInstance:
    """Deterministic data generation for the CLI and the service."""
    rng = as_rng(seed)
    kind = kind.lower()
    if kind == "quadratic":
        inst = quadratic(rng.standard_normal(dim))
    elif kind == "rayleigh":
        a = rng.standard_normal((dim, dim))
        a = 0.5 * (a + a.T)
        nrm = float(np.linalg.norm(a, 2))
        bound = kw.get("norm_bound", 1.0)
        if nrm > bound:
            a = a * (bound / nrm)
        inst = rayleigh(a)
    elif kind == "procrustes":
        inst = procrustes(rng.standard_normal((dim, dim)))
    elif kind == "karcher":
        m = Hyperbolic(dim)
        num = kw.get("num_points", 10)
        spread = kw.get("spread", 1.0)
        base = m.random_point(rng)
        pts = [m.exp(base, spread * rng.uniform(0.1, 1.0) * m.random_unit_tangent(base, rng)) for _ in range(num)]
        inst = karcher_mean(pts, working_radius=kw.get("working_radius", 2.0 * spread))
    elif kind == "grassmann_trace":
        a = rng.standard_normal((dim, dim))
        a = 0.5 * (a + a.T)
        inst = grassmann_trace(a, kw.get("subspace_dim") or 2)
    else:
        raise ValueError(f"unknown problem kind {kind!r}")
    inst.data["seed"] = seed
    inst.data["dim"] = dim
    return inst
