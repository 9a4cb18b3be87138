"""HTTP facade over the bounds, verification and optimization machinery.

Run with ``uvicorn trivopt.service:app``.  The CLI talks to these
endpoints (in-process by default), so everything the CLI can do is also
available to remote clients.
"""

from __future__ import annotations

import math

import numpy as np
from fastapi import FastAPI, HTTPException

from . import bounds, problems, verify
from .errors import DomainError
from .manifolds import make_manifold
from .optimize import OptimizerConfig, StoppingRule, dynamic_trivialization
from .schemas import (
    BoundsRequest,
    BoundsResponse,
    BoundsRow,
    CheckReportOut,
    CheckRowOut,
    ManifoldSpec,
    OptimizeRequest,
    OptimizeResponse,
    OptimizeSummary,
    ProfileOut,
    TraceRowOut,
    VerifyRequest,
    VerifyResponse,
)

app = FastAPI(
    title="trivopt",
    description="Curvature-certified pullback optimization on manifolds",
)


def _manifold(spec: ManifoldSpec):
    try:
        return make_manifold(spec.kind, spec.dim, spec.subspace_dim)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.get("/profiles")
def profiles() -> dict:
    return {
        name: ProfileOut.from_profile(prof).model_dump()
        for name, prof in bounds.BUILTIN_PROFILES.items()
    }


@app.post("/bounds", response_model=BoundsResponse)
def bounds_table(req: BoundsRequest) -> BoundsResponse:
    if req.profile is not None:
        try:
            prof = req.profile.resolve()
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
    else:
        prof = _manifold(req.manifold).curvature_profile()
    rows = []
    for r in sorted(req.r_grid):
        try:
            cert = bounds.certificate(prof, r)
            wc = bounds.weak_convexity_constant(req.alpha, prof, r)
        except DomainError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        rows.append(
            BoundsRow(
                r=r,
                dexp_lo=cert.dexp_lo,
                dexp_hi=cert.dexp_hi,
                hess_radial_lo=cert.hess_radial_lo,
                hess_radial_hi=cert.hess_radial_hi,
                hess_normal=cert.hess_normal,
                hess_full=cert.hess_full,
                hess_full_tight=cert.hess_full_tight,
                alpha_hat=wc.alpha_hat,
            )
        )
    return BoundsResponse(
        profile=ProfileOut.from_profile(prof), alpha=req.alpha, rows=rows
    )


def _default_grid(prof: bounds.CurvatureProfile, rmax: float | None, size: int) -> list[float]:
    if rmax is None:
        limit = prof.radius_first
        rmax = 0.9 * limit if math.isfinite(limit) else 3.0
    return list(np.linspace(rmax / size, rmax, size))


@app.post("/verify", response_model=VerifyResponse)
def run_verify(req: VerifyRequest) -> VerifyResponse:
    m = _manifold(req.manifold)
    prof = m.curvature_profile()
    if req.profile is not None:
        try:
            prof = req.profile.resolve()
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
    grid = req.r_grid if req.r_grid is not None else _default_grid(prof, req.rmax, req.grid_size)
    if not grid:
        raise HTTPException(status_code=422, detail="empty r grid")
    if max(grid) >= prof.radius_second or min(grid) <= 0:
        raise HTTPException(
            status_code=422,
            detail=(
                f"r grid must lie in (0, {prof.radius_second}); got max {max(grid)}"
            ),
        )
    checks = req.checks or ["rauch", "second_order", "law_of_cosines"]
    reports = []
    try:
        for name in checks:
            if name == "rauch":
                rep = verify.check_rauch(
                    m, req.trials, grid, seed=req.seed, h=req.h_first, profile=prof
                )
            elif name == "second_order":
                rep = verify.check_second_order(
                    m, req.trials, grid, seed=req.seed, h=req.h_second, profile=prof
                )
            elif name == "law_of_cosines":
                rep = verify.check_law_of_cosines(
                    m,
                    req.trials,
                    seed=req.seed,
                    ball_radius=req.ball_radius,
                    profile=prof,
                )
            else:  # pragma: no cover - schema forbids it
                raise HTTPException(status_code=422, detail=f"unknown check {name}")
            reports.append(rep)
    except DomainError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    outs = [
        CheckReportOut(
            name=rep.name,
            passed=rep.passed,
            worst_margin=rep.worst_margin,
            tolerance=rep.tolerance,
            seed=rep.seed,
            h=rep.h,
            steps=rep.steps,
            rows=[CheckRowOut(**row) for row in rep.rows],
        )
        for rep in reports
    ]
    return VerifyResponse(
        manifold=req.manifold,
        profile=ProfileOut.from_profile(prof),
        passed=all(r.passed for r in reports),
        reports=outs,
    )


@app.post("/optimize", response_model=OptimizeResponse)
def run_optimize(req: OptimizeRequest) -> OptimizeResponse:
    try:
        inst = problems.random_instance(
            req.problem.kind,
            req.problem.dim,
            seed=req.problem.seed,
            subspace_dim=req.problem.subspace_dim,
            norm_bound=req.problem.norm_bound,
            num_points=req.problem.num_points,
            spread=req.problem.spread,
        )
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    m = inst.manifold
    cfg = OptimizerConfig(
        trust_radius=req.config.trust_radius,
        eps_target=req.config.eps_target,
        max_outer=req.config.max_outer,
        max_inner=req.config.max_inner,
        seed=req.config.seed,
        dynamic_step=req.config.dynamic_step,
    )
    if req.rule.kind == "grad_ratio":
        rule = StoppingRule.grad_ratio(req.rule.eps_low, req.rule.eps_high)
    else:
        rule = StoppingRule(req.rule.kind)
    x0 = m.random_point(np.random.default_rng(cfg.seed))
    try:
        state = dynamic_trivialization(m, inst.objective, x0, cfg, rule)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    return OptimizeResponse(
        summary=OptimizeSummary(
            **state.summary(),
            f_star=inst.objective.f_star,
            alpha=inst.objective.alpha,
        ),
        trace=[
            TraceRowOut(
                outer=row.outer,
                inner=row.inner,
                f=row.f,
                pullback_grad_norm=row.pullback_grad_norm,
                riem_grad_norm=row.riem_grad_norm,
                step_clipped=row.step_clipped,
            )
            for row in state.trace
        ],
    )
