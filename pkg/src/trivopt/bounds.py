"""Curvature-dependent bounds on the exponential map, packaged as certificates.

All formulas take a :class:`CurvatureProfile` holding the sectional
curvature box ``[sec_lo, sec_hi]``, a bound ``dcurv`` on the covariant
derivative of the curvature tensor (zero on locally symmetric spaces),
and a lower bound on the injectivity radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import trig
from .errors import DomainError


@dataclass(frozen=True)
class CurvatureProfile:
    """Geometry summary consumed by every bound formula."""

    sec_lo: float
    sec_hi: float
    dcurv: float = 0.0
    inj_lo: float = math.inf

    def __post_init__(self):
        if not self.sec_lo <= self.sec_hi:
            raise ValueError(f"need sec_lo <= sec_hi, got {self.sec_lo} > {self.sec_hi}")
        if self.dcurv < 0:
            raise ValueError(f"dcurv must be >= 0, got {self.dcurv}")
        if not self.inj_lo > 0:
            raise ValueError(f"inj_lo must be positive, got {self.inj_lo}")

    @property
    def eps(self) -> float:
        """Half-width of the curvature box."""
        return 0.5 * (self.sec_hi - self.sec_lo)

    @property
    def mu(self) -> float:
        """Midpoint of the curvature box."""
        return 0.5 * (self.sec_hi + self.sec_lo)

    @property
    def kmax(self) -> float:
        """Largest absolute sectional curvature."""
        return max(abs(self.sec_hi), abs(self.sec_lo))

    @property
    def radius_first(self) -> float:
        """Validity radius of the first-order sandwich (zero of sn at sec_hi)."""
        return trig.pi_kappa(self.sec_hi)

    @property
    def radius_second(self) -> float:
        """Validity radius of the second-order bounds (zero of sn at the box midpoint)."""
        return trig.pi_kappa(self.mu)


# Profiles of the manifolds shipped in trivopt.manifolds.  The so3 entry
# uses sec_hi = 1/8: under the Frobenius metric SO(3) has constant
# sectional curvature 1/8 (the sharp commutator constant for 3x3 skew
# matrices is 1/sqrt(2)), verified numerically in the test suite.
BUILTIN_PROFILES: dict[str, CurvatureProfile] = {
    "euclidean": CurvatureProfile(0.0, 0.0, 0.0, math.inf),
    "sphere": CurvatureProfile(1.0, 1.0, 0.0, math.pi),
    "hyperbolic": CurvatureProfile(-1.0, -1.0, 0.0, math.inf),
    "so": CurvatureProfile(0.0, 0.25, 0.0, math.sqrt(2.0) * math.pi),
    "so3": CurvatureProfile(0.0, 0.125, 0.0, math.sqrt(2.0) * math.pi),
    "grassmann": CurvatureProfile(0.0, 2.0, 0.0, math.pi / 2.0),
}


@dataclass(frozen=True)
class BoundCertificate:
    """Evaluated first- and second-order bounds at a single radius."""

    r: float
    dexp_lo: float
    dexp_hi: float
    hess_radial_lo: float
    hess_radial_hi: float
    hess_normal: float
    hess_full: float
    hess_full_tight: float
    hess_radial_env: float  # envelope sigma entering hess_full_tight
    radius_first: float
    radius_second: float


@dataclass(frozen=True)
class WeakConvexityReport:
    """Weak-convexity constant of a pullback on a ball of radius r."""

    alpha: float
    r: float
    C1: float
    C2: float
    alpha_hat: float


def _require_radius(r: float, limit: float, what: str) -> None:
    if not 0.0 < r < limit:
        raise DomainError(f"{what} requires 0 < r < {limit}, got r={r}")


def first_order_bounds(prof: CurvatureProfile, r: float) -> tuple[float, float]:
    """Sandwich ``lo <= |dexp(w)|/|w| <= hi`` for geodesics of length r.

    The lower bound is only valid up to ``radius_first``; requesting it
    past that radius raises :class:`DomainError`.  Use
    :func:`first_order_upper` alone beyond it.
    """
    if not 0.0 < r <= prof.radius_first:
        raise DomainError(
            f"first_order_bounds requires 0 < r <= {prof.radius_first}, got r={r}"
        )
    lo = min(1.0, trig.sn(prof.sec_hi, r) / r)
    return lo, first_order_upper(prof, r)


def first_order_upper(prof: CurvatureProfile, r: float) -> float:
    """Upper half of the sandwich; valid for any r > 0 short of a conjugate point."""
    if r <= 0:
        raise DomainError(f"first_order_upper requires r > 0, got r={r}")
    return max(1.0, trig.sn(prof.sec_lo, r) / r)


def hess_radial_bounds(prof: CurvatureProfile, r: float) -> tuple[float, float]:
    """Interval for the radial component of the exponential's Hessian on unit normal vectors."""
    _require_radius(r, prof.radius_first, "hess_radial_bounds")
    lo = 1.0 / r - trig.sn(4.0 * prof.sec_lo, r) / (r * r)
    hi = 1.0 / r - trig.sn(4.0 * prof.sec_hi, r) / (r * r)
    return lo, hi


def hess_radial_envelope(prof: CurvatureProfile, r: float) -> float:
    """Largest magnitude the radial Hessian component can take at radius r."""
    if r <= 0:
        raise DomainError(f"hess_radial_envelope requires r > 0, got r={r}")
    a = abs(r - trig.sn(4.0 * prof.sec_lo, r))
    b = abs(r - trig.sn(4.0 * prof.sec_hi, r))
    return max(a, b) / (r * r)


def hess_normal_bound(prof: CurvatureProfile, r: float) -> float:
    """Bound on the component of the Hessian normal to the geodesic."""
    _require_radius(r, prof.radius_second, "hess_normal_bound")
    s_half = trig.sn(prof.sec_lo, 0.5 * r)
    return (
        (8.0 / (9.0 * r * r))
        * s_half
        * s_half
        * (
            3.0 * prof.dcurv * s_half * s_half
            + 2.0 * (prof.sec_hi - prof.sec_lo) * trig.sn(prof.sec_lo, r)
        )
    )


def hess_full_bound(prof: CurvatureProfile, r: float) -> float:
    """Bound on the full Hessian of the exponential for arbitrary argument pairs."""
    _require_radius(r, prof.radius_second, "hess_full_bound")
    s_half = trig.sn(prof.sec_lo, 0.5 * r)
    return (
        (8.0 / (3.0 * r * r))
        * s_half
        * s_half
        * (
            prof.dcurv * s_half * s_half
            + 2.0 * prof.kmax * trig.sn(prof.sec_lo, r)
        )
    )


def hess_full_tight(prof: CurvatureProfile, r: float) -> float:
    """Sharper full-Hessian bound combining the radial envelope and the normal bound."""
    sigma = hess_radial_envelope(prof, r)
    rho = hess_normal_bound(prof, r)
    return math.hypot(sigma, rho)


def weak_convexity_constant(
    alpha: float, prof: CurvatureProfile, r: float
) -> WeakConvexityReport:
    """Weak-convexity constant of ``f o exp`` on a ball of radius r.

    ``C1`` bounds the squared stretch of the differential, ``C2`` is the
    r^2-scaled full-Hessian bound, and the pullback constant is
    ``alpha * (C1 + C2)``.
    """
    if alpha <= 0:
        raise DomainError(f"weak_convexity_constant requires alpha > 0, got {alpha}")
    _require_radius(r, prof.radius_second, "weak_convexity_constant")
    s = trig.sn(prof.sec_lo, r)
    C1 = max(1.0, (s * s) / (r * r))
    C2 = (r * r) * hess_full_bound(prof, r)
    return WeakConvexityReport(alpha=alpha, r=r, C1=C1, C2=C2, alpha_hat=alpha * (C1 + C2))


def alpha_hat(alpha: float, prof: CurvatureProfile, r: float) -> float:
    """Pullback weak-convexity constant; continuous r -> 0 limit is alpha itself."""
    if r <= 0.0:
        return alpha
    return weak_convexity_constant(alpha, prof, r).alpha_hat


def law_of_cosines_rhs(
    prof: CurvatureProfile,
    R: float,
    dxy: float,
    dxp: float,
    cos_alpha: float,
) -> tuple[float, float]:
    """Upper and lower right-hand sides of the curved law of cosines.

    For a geodesic triangle inside a ball of radius R, the squared
    distance ``d(y, p)^2`` lies between the returned values.
    """
    if not 0.0 < R <= prof.radius_first:
        raise DomainError(
            f"law_of_cosines_rhs requires 0 < R <= {prof.radius_first}, got R={R}"
        )
    if not (0.0 <= dxy <= R and 0.0 <= dxp <= R):
        raise DomainError(f"side lengths must lie in [0, R={R}], got {dxy}, {dxp}")
    if not -1.0 <= cos_alpha <= 1.0:
        raise DomainError(f"cos_alpha must lie in [-1, 1], got {cos_alpha}")
    cross = dxp * dxp - 2.0 * dxy * dxp * cos_alpha
    upper = trig.zeta1(prof.sec_lo, R) * dxy * dxy + cross
    lower = trig.zeta2(prof.sec_hi, R) * dxy * dxy + cross
    return upper, lower


def certificate(prof: CurvatureProfile, r: float) -> BoundCertificate:
    """Evaluate every bound at radius r; requires r < radius_first."""
    dexp_lo, dexp_hi = first_order_bounds(prof, r)
    hr_lo, hr_hi = hess_radial_bounds(prof, r)
    return BoundCertificate(
        r=r,
        dexp_lo=dexp_lo,
        dexp_hi=dexp_hi,
        hess_radial_lo=hr_lo,
        hess_radial_hi=hr_hi,
        hess_normal=hess_normal_bound(prof, r),
        hess_full=hess_full_bound(prof, r),
        hess_full_tight=hess_full_tight(prof, r),
        hess_radial_env=hess_radial_envelope(prof, r),
        radius_first=prof.radius_first,
        radius_second=prof.radius_second,
    )
