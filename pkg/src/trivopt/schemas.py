"""Pydantic request/response models for the HTTP service and the CLI."""

from __future__ import annotations

import math
from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

from .bounds import BUILTIN_PROFILES, CurvatureProfile


def _wire_float(x: float) -> Optional[float]:
    """Map non-finite radii to null on the wire."""
    return x if math.isfinite(x) else None


class ProfileSpec(BaseModel):
    """A named built-in profile and/or explicit curvature constants.

    Explicit fields override the named profile's entries.
    """

    name: Optional[str] = None
    sec_lo: Optional[float] = None
    sec_hi: Optional[float] = None
    dcurv: Optional[float] = None
    inj_lo: Optional[float] = None

    @model_validator(mode="after")
    def _check(self):
        if self.name is None and (self.sec_lo is None or self.sec_hi is None):
            raise ValueError("profile needs a name or explicit sec_lo/sec_hi")
        if self.name is not None and self.name not in BUILTIN_PROFILES:
            raise ValueError(
                f"unknown profile {self.name!r}; choose from {sorted(BUILTIN_PROFILES)}"
            )
        return self

    def resolve(self) -> CurvatureProfile:
        if self.name is not None:
            base = BUILTIN_PROFILES[self.name]
            return CurvatureProfile(
                sec_lo=self.sec_lo if self.sec_lo is not None else base.sec_lo,
                sec_hi=self.sec_hi if self.sec_hi is not None else base.sec_hi,
                dcurv=self.dcurv if self.dcurv is not None else base.dcurv,
                inj_lo=self.inj_lo if self.inj_lo is not None else base.inj_lo,
            )
        return CurvatureProfile(
            sec_lo=self.sec_lo,
            sec_hi=self.sec_hi,
            dcurv=self.dcurv if self.dcurv is not None else 0.0,
            inj_lo=self.inj_lo if self.inj_lo is not None else math.inf,
        )


class ProfileOut(BaseModel):
    sec_lo: float
    sec_hi: float
    dcurv: float
    inj_lo: Optional[float]
    radius_first: Optional[float]
    radius_second: Optional[float]

    @classmethod
    def from_profile(cls, prof: CurvatureProfile) -> "ProfileOut":
        return cls(
            sec_lo=prof.sec_lo,
            sec_hi=prof.sec_hi,
            dcurv=prof.dcurv,
            inj_lo=_wire_float(prof.inj_lo),
            radius_first=_wire_float(prof.radius_first),
            radius_second=_wire_float(prof.radius_second),
        )


class ManifoldSpec(BaseModel):
    kind: Literal["euclidean", "sphere", "hyperbolic", "so", "grassmann"]
    dim: int = Field(ge=1, description="ambient dimension (matrix size for so)")
    subspace_dim: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _check(self):
        if self.kind == "grassmann":
            if self.subspace_dim is None or not self.subspace_dim < self.dim:
                raise ValueError("grassmann needs subspace_dim < dim")
        if self.kind in ("sphere", "hyperbolic") and self.dim < 2:
            raise ValueError(f"{self.kind} needs ambient dim >= 2")
        if self.kind == "so" and self.dim < 2:
            raise ValueError("so needs dim >= 2")
        return self


# ---------------------------------------------------------------- bounds


class BoundsRequest(BaseModel):
    profile: Optional[ProfileSpec] = None
    manifold: Optional[ManifoldSpec] = None
    r_grid: list[float]
    alpha: float = Field(default=1.0, gt=0)

    @model_validator(mode="after")
    def _check(self):
        if (self.profile is None) == (self.manifold is None):
            raise ValueError("give exactly one of profile or manifold")
        if not self.r_grid:
            raise ValueError("r_grid must be non-empty")
        return self


class BoundsRow(BaseModel):
    r: float
    dexp_lo: float
    dexp_hi: float
    hess_radial_lo: float
    hess_radial_hi: float
    hess_normal: float
    hess_full: float
    hess_full_tight: float
    alpha_hat: float


class BoundsResponse(BaseModel):
    profile: ProfileOut
    alpha: float
    rows: list[BoundsRow]


# ---------------------------------------------------------------- verify

CheckName = Literal["rauch", "second_order", "law_of_cosines"]


class VerifyRequest(BaseModel):
    manifold: ManifoldSpec
    profile: Optional[ProfileSpec] = None  # override the manifold's own profile
    checks: Optional[list[CheckName]] = None
    trials: int = Field(default=100, ge=1)
    seed: int = 0
    r_grid: Optional[list[float]] = None
    rmax: Optional[float] = Field(default=None, gt=0)
    grid_size: int = Field(default=5, ge=1)
    ball_radius: Optional[float] = Field(default=None, gt=0)
    h_first: float = Field(default=1e-4, gt=0)
    h_second: float = Field(default=1e-3, gt=0)


class CheckRowOut(BaseModel):
    quantity: str
    r: float
    measured_lo: float
    measured_hi: float
    bound_lo: Optional[float] = None
    bound_hi: Optional[float] = None
    margin: float


class CheckReportOut(BaseModel):
    name: str
    passed: bool = Field(alias="pass")
    worst_margin: float
    tolerance: float
    seed: int
    h: float
    steps: int
    rows: list[CheckRowOut]

    model_config = {"populate_by_name": True}


class VerifyResponse(BaseModel):
    manifold: ManifoldSpec
    profile: ProfileOut
    passed: bool
    reports: list[CheckReportOut]


# ---------------------------------------------------------------- optimize


class ProblemSpec(BaseModel):
    kind: Literal["quadratic", "rayleigh", "procrustes", "karcher", "grassmann_trace"]
    dim: int = Field(ge=1)
    seed: int = 0
    subspace_dim: Optional[int] = Field(default=None, ge=1)
    norm_bound: float = Field(default=1.0, gt=0)
    num_points: int = Field(default=10, ge=1)
    spread: float = Field(default=1.0, gt=0)


class RuleSpec(BaseModel):
    kind: Literal["never", "always", "grad_ratio"]
    eps_low: float = 0.1
    eps_high: float = 10.0


class OptimizerConfigSpec(BaseModel):
    trust_radius: float = Field(gt=0)
    eps_target: float = Field(default=1e-6, gt=0)
    max_outer: int = Field(default=1000, ge=1)
    max_inner: int = Field(default=100000, ge=1)
    seed: int = 0
    dynamic_step: bool = False


class OptimizeRequest(BaseModel):
    problem: ProblemSpec
    config: OptimizerConfigSpec
    rule: RuleSpec = RuleSpec(kind="never")


class TraceRowOut(BaseModel):
    outer: int
    inner: int
    f: float
    pullback_grad_norm: float
    riem_grad_norm: float
    step_clipped: bool


class OptimizeSummary(BaseModel):
    converged: bool
    iterations: int
    budget: int
    alpha_hat: float
    clip_count: int
    outer_loops: int
    f_final: float
    grad_norm_final: float
    f_star: float
    alpha: float


class OptimizeResponse(BaseModel):
    summary: OptimizeSummary
    trace: list[TraceRowOut]
