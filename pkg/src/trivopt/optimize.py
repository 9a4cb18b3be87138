"""Gradient descent on exponential-map pullbacks with rebasing rules.

The optimizer minimizes f over a manifold by pulling the problem back
to a tangent space, taking plain gradient steps there, and optionally
moving the base point.  The step size comes from the pullback
weak-convexity certificate, so the iteration budget of
:func:`convergence_budget` applies whenever the iterates stay inside
the trust ball.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import bounds
from .errors import ConjugatePointError
from .manifolds import Manifold


@dataclass(frozen=True)
class StoppingRule:
    """When to move the base point: never, after every step, or on gradient ratio."""

    kind: str  # "never" | "always" | "grad_ratio"
    eps_low: float = 0.0
    eps_high: float = math.inf

    def __post_init__(self):
        if self.kind not in ("never", "always", "grad_ratio"):
            raise ValueError(f"unknown stopping rule {self.kind!r}")
        if self.kind == "grad_ratio" and not 0.0 < self.eps_low < 1.0 < self.eps_high:
            raise ValueError("grad_ratio needs 0 < eps_low < 1 < eps_high")

    @classmethod
    def never(cls) -> "StoppingRule":
        return cls("never")

    @classmethod
    def always(cls) -> "StoppingRule":
        return cls("always")

    @classmethod
    def grad_ratio(cls, eps_low: float, eps_high: float) -> "StoppingRule":
        return cls("grad_ratio", eps_low=eps_low, eps_high=eps_high)

    def should_rebase(self, pullback_norm: float, riemannian_norm: float) -> bool:
        if self.kind == "never":
            return False
        if self.kind == "always":
            return True
        if riemannian_norm <= 0.0:
            return True
        ratio = pullback_norm / riemannian_norm
        return ratio < self.eps_low or ratio > self.eps_high


@dataclass
class Objective:
    """Function on a manifold with its gradient and convexity data."""

    value: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    alpha: float
    f_star: float

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")


@dataclass
class OptimizerConfig:
    trust_radius: float
    eps_target: float = 1e-6
    max_outer: int = 1000
    max_inner: int = 100000
    seed: int = 0
    dynamic_step: bool = False  # per-step 1/alpha_hat(|v|) instead of 1/alpha_hat(r)

    def __post_init__(self):
        if self.trust_radius <= 0:
            raise ValueError("trust_radius must be positive")
        if self.eps_target <= 0:
            raise ValueError("eps_target must be positive")
        if self.max_outer < 1 or self.max_inner < 1:
            raise ValueError("iteration budgets must be at least 1")


@dataclass
class TraceRow:
    outer: int
    inner: int
    f: float
    pullback_grad_norm: float
    riem_grad_norm: float
    step_clipped: bool


@dataclass
class TrivializationState:
    """Result of a trivialization run."""

    base: np.ndarray
    iterate: np.ndarray
    outer_index: int
    inner_index: int
    converged: bool
    iterations: int
    clip_count: int
    alpha_hat: float
    budget: int
    f_final: float
    grad_norm_final: float
    trace: list[TraceRow] = field(default_factory=list)

    def current_point(self, m: Manifold) -> np.ndarray:
        return m.exp(self.base, self.iterate)

    def trace_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["outer", "inner", "f", "pullback_grad_norm", "riem_grad_norm", "step_clipped"]
        )
        for row in self.trace:
            writer.writerow(
                [
                    row.outer,
                    row.inner,
                    format(row.f, ".17g"),
                    format(row.pullback_grad_norm, ".17g"),
                    format(row.riem_grad_norm, ".17g"),
                    int(row.step_clipped),
                ]
            )
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "converged": self.converged,
            "iterations": self.iterations,
            "budget": self.budget,
            "alpha_hat": self.alpha_hat,
            "clip_count": self.clip_count,
            "outer_loops": self.outer_index + 1,
            "f_final": self.f_final,
            "grad_norm_final": self.grad_norm_final,
        }


def convergence_budget(alpha_hat: float, f0: float, f_star: float, eps: float) -> int:
    """Worst-case step count ceil(2 alpha_hat (f0 - f_star) / eps^2)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if f0 < f_star:
        raise ValueError("f0 must be at least f_star")
    return int(math.ceil(2.0 * alpha_hat * (f0 - f_star) / (eps * eps)))


def _pullback_grad_on_basis(m: Manifold, obj: Objective, p, v, basis) -> np.ndarray:
    r = m.norm(p, v)
    prof = m.curvature_profile()
    if math.isfinite(prof.radius_first) and r >= prof.radius_first:
        # at and past the zero of sn(sec_hi) the lower dexp certificate
        # is <= 0, so the pullback may sit on a conjugate point
        raise ConjugatePointError(
            f"iterate norm {r:.4f} reaches the first-order radius {prof.radius_first:.4f}"
        )
    q = m.exp(p, v)
    g = obj.grad(q)
    out = np.zeros_like(basis[0])
    for e in basis:
        out = out + m.inner(q, m.dexp(p, v, e), g) * e
    return out


def pullback_grad(m: Manifold, obj: Objective, p, v) -> np.ndarray:
    """Gradient of v -> f(exp_p(v)) on the tangent space at p.

    Assembled as the adjoint of the differential of exp on an
    orthonormal tangent basis; at v = 0 this is the Riemannian gradient.
    """
    return _pullback_grad_on_basis(m, obj, p, v, m.tangent_basis(p))


def dynamic_trivialization(
    m: Manifold,
    obj: Objective,
    x0: np.ndarray,
    cfg: OptimizerConfig,
    rule: StoppingRule,
) -> TrivializationState:
    """Double-loop pullback descent from x0 under the given rebasing rule.

    With rule "never" the base stays fixed (static pullback); with
    "always" every inner loop takes one step and rebases, which is
    plain Riemannian gradient descent.  Iterates leaving the trust
    ball are radially clipped and flagged; clipping voids the budget
    guarantee but the run continues.
    """
    prof = m.curvature_profile()
    if cfg.trust_radius >= prof.radius_second:
        raise ValueError(
            f"trust_radius {cfg.trust_radius} must stay below {prof.radius_second}"
        )
    wc = bounds.weak_convexity_constant(obj.alpha, prof, cfg.trust_radius)
    eta_fixed = 1.0 / wc.alpha_hat

    p = np.array(x0, dtype=float)
    budget = convergence_budget(wc.alpha_hat, obj.value(p), obj.f_star, cfg.eps_target)

    trace: list[TraceRow] = []
    iterations = 0
    clip_count = 0
    converged = False
    exhausted = False
    outer = 0
    v = np.zeros_like(p)

    for outer in range(cfg.max_outer):
        basis = m.tangent_basis(p)
        v = np.zeros_like(basis[0])
        v_clipped = False
        inner = 0
        rebase = False
        while True:
            g_pull = _pullback_grad_on_basis(m, obj, p, v, basis)
            q = m.exp(p, v)
            gp_norm = m.norm(p, g_pull)
            riem_norm = m.norm(q, obj.grad(q))
            trace.append(
                TraceRow(
                    outer=outer,
                    inner=inner,
                    f=obj.value(q),
                    pullback_grad_norm=gp_norm,
                    riem_grad_norm=riem_norm,
                    step_clipped=v_clipped,
                )
            )
            if gp_norm < cfg.eps_target:
                converged = True
                break
            if inner > 0 and rule.should_rebase(gp_norm, riem_norm):
                rebase = True
                break
            if inner >= cfg.max_inner:
                exhausted = True
                break
            eta = eta_fixed
            if cfg.dynamic_step:
                eta = 1.0 / bounds.alpha_hat(obj.alpha, prof, m.norm(p, v))
            v = v - eta * g_pull
            v_clipped = False
            nv = m.norm(p, v)
            if nv > cfg.trust_radius:
                v = v * (cfg.trust_radius / nv)
                v_clipped = True
                clip_count += 1
            iterations += 1
            inner += 1
        if converged or exhausted:
            break
        if rebase:
            p = m.exp(p, v)
            v = np.zeros_like(v)

    last = trace[-1]
    q = m.exp(p, v)
    return TrivializationState(
        base=p,
        iterate=v,
        outer_index=outer,
        inner_index=last.inner,
        converged=converged,
        iterations=iterations,
        clip_count=clip_count,
        alpha_hat=wc.alpha_hat,
        budget=budget,
        f_final=obj.value(q),
        grad_norm_final=last.pullback_grad_norm,
        trace=trace,
    )


def directional_derivative_residual(
    m: Manifold, obj: Objective, x, u, t: float = 1e-5
) -> float:
    """|central difference of f along exp - <grad f, u>|; O(t^2) for valid gradients."""
    fd = (obj.value(m.exp(x, t * u)) - obj.value(m.exp(x, -t * u))) / (2.0 * t)
    return abs(fd - m.inner(x, obj.grad(x), u))
