import math

import numpy as np
import pytest

from trivopt import bounds, trig, verify
from trivopt.bounds import BUILTIN_PROFILES, CurvatureProfile
from trivopt.errors import DomainError
from trivopt.manifolds import Hyperbolic, Sphere

FLAT = BUILTIN_PROFILES["euclidean"]
SPHERE = BUILTIN_PROFILES["sphere"]
HYP = BUILTIN_PROFILES["hyperbolic"]
SO = BUILTIN_PROFILES["so"]
GRASS = BUILTIN_PROFILES["grassmann"]


def fd_dexp_norm(m, r, seed=0, perp=True):
    """Finite-difference |dexp| on a random geodesic of length r."""
    rng = np.random.default_rng(seed)
    p = m.random_point(rng)
    v = m.random_unit_tangent(p, rng)
    w = m.random_unit_tangent(p, rng)
    if perp:
        w = w - m.inner(p, w, v) * v
        w = w / m.norm(p, w)
    d = verify.fd_dexp(m, p, r * v, w)
    return m.norm(m.exp(p, r * v), d)


class TestProfile:
    def test_accessors(self):
        prof = CurvatureProfile(-1.0, 0.25, 0.5, 2.0)
        assert prof.eps == pytest.approx(0.625)
        assert prof.mu == pytest.approx(-0.375)
        assert prof.kmax == pytest.approx(1.0)
        assert prof.radius_first == pytest.approx(2.0 * math.pi)
        assert prof.radius_second == math.inf

    def test_invalid(self):
        with pytest.raises(ValueError):
            CurvatureProfile(1.0, 0.0)
        with pytest.raises(ValueError):
            CurvatureProfile(0.0, 1.0, dcurv=-1.0)
        with pytest.raises(ValueError):
            CurvatureProfile(0.0, 1.0, inj_lo=0.0)

    def test_builtin_constants(self):
        assert (SPHERE.sec_lo, SPHERE.sec_hi, SPHERE.dcurv) == (1.0, 1.0, 0.0)
        assert (HYP.sec_lo, HYP.sec_hi) == (-1.0, -1.0)
        assert (SO.sec_lo, SO.sec_hi) == (0.0, 0.25)
        assert SO.radius_second == pytest.approx(2.0 * math.sqrt(2.0) * math.pi)
        assert (GRASS.sec_lo, GRASS.sec_hi) == (0.0, 2.0)
        assert GRASS.inj_lo == pytest.approx(math.pi / 2)
        # SO(3) has constant curvature 1/8 under the Frobenius metric
        so3 = BUILTIN_PROFILES["so3"]
        assert (so3.sec_lo, so3.sec_hi) == (0.0, 0.125)


class TestFirstOrder:
    def test_flat(self):
        assert bounds.first_order_bounds(FLAT, 1.0) == (1.0, 1.0)

    def test_sphere_at_quarter_turn(self):
        lo, hi = bounds.first_order_bounds(SPHERE, math.pi / 2)
        assert lo == pytest.approx(2.0 / math.pi, abs=1e-15)
        assert hi == 1.0
        # cross-check against a finite-difference |dexp| on the 2-sphere
        assert fd_dexp_norm(Sphere(3), math.pi / 2) == pytest.approx(lo, abs=1e-6)

    def test_hyperbolic_at_unit(self):
        lo, hi = bounds.first_order_bounds(HYP, 1.0)
        assert lo == 1.0
        assert hi == pytest.approx(math.sinh(1.0), abs=1e-15)
        assert fd_dexp_norm(Hyperbolic(3), 1.0) == pytest.approx(hi, abs=1e-6)

    def test_domain_error_past_first_zero(self):
        with pytest.raises(DomainError):
            bounds.first_order_bounds(SPHERE, 3.5)
        # the upper half alone is still available there
        assert bounds.first_order_upper(SPHERE, 3.5) == 1.0


class TestHessRadial:
    def test_flat(self):
        assert bounds.hess_radial_bounds(FLAT, 2.0) == (0.0, 0.0)

    def test_constant_curvature_collapses(self):
        lo, hi = bounds.hess_radial_bounds(SPHERE, 1.0)
        expected = 1.0 - math.sin(2.0) / 2.0
        assert lo == pytest.approx(expected, abs=1e-15)
        assert hi == pytest.approx(expected, abs=1e-15)
        # oracle: integrate x'' = 4 kappa sn_{4 kappa}(t), x(0)=x'(0)=0 and
        # compare x(r)/r^2
        assert _radial_ode_oracle(1.0, 1.0) == pytest.approx(expected, abs=1e-10)

    def test_mixed_profile(self):
        prof = CurvatureProfile(-1.0, 1.0)
        lo, hi = bounds.hess_radial_bounds(prof, 0.5)
        assert lo == pytest.approx(1.0 / 0.5 - trig.sn(-4.0, 0.5) / 0.25, abs=1e-15)
        assert hi == pytest.approx(1.0 / 0.5 - trig.sn(4.0, 0.5) / 0.25, abs=1e-15)
        # FD radial Hessian sits at the interval ends on the model spaces
        s2 = _fd_radial(Sphere(3), 0.5)
        h2 = _fd_radial(Hyperbolic(3), 0.5)
        assert s2 == pytest.approx(hi, abs=1e-4)
        assert h2 == pytest.approx(lo, abs=1e-4)

    def test_domain(self):
        with pytest.raises(DomainError):
            bounds.hess_radial_bounds(SPHERE, math.pi)


def _radial_ode_oracle(kappa: float, r: float, steps: int = 20000) -> float:
    x, xd = 0.0, 0.0
    h = r / steps
    for i in range(steps):
        t = i * h

        def f(t):
            return 4.0 * kappa * trig.sn(4.0 * kappa, t)

        k1x, k1d = xd, f(t)
        k2x, k2d = xd + 0.5 * h * k1d, f(t + 0.5 * h)
        k3x, k3d = xd + 0.5 * h * k2d, f(t + 0.5 * h)
        k4x, k4d = xd + h * k3d, f(t + h)
        x += (h / 6.0) * (k1x + 2 * k2x + 2 * k3x + k4x)
        xd += (h / 6.0) * (k1d + 2 * k2d + 2 * k3d + k4d)
    return x / (r * r)


def _fd_radial(m, r, seed=0):
    rng = np.random.default_rng(seed)
    p = m.random_point(rng)
    v = m.random_unit_tangent(p, rng)
    w = m.random_unit_tangent(p, rng)
    w = w - m.inner(p, w, v) * v
    w = w / m.norm(p, w)
    return verify.fd_hess_exp(m, p, r * v, w, w).radial_part


class TestHessNormal:
    @pytest.mark.parametrize("kappa", [-2.0, -1.0, 0.0, 1.0, 2.0])
    def test_constant_curvature_vanishes(self, kappa):
        prof = CurvatureProfile(kappa, kappa)
        assert bounds.hess_normal_bound(prof, 1.0) == pytest.approx(0.0, abs=1e-15)

    def test_so_profile(self):
        assert bounds.hess_normal_bound(SO, 2.0) == pytest.approx(2.0 / 9.0, abs=1e-15)

    def test_grassmann_profile(self):
        assert bounds.hess_normal_bound(GRASS, 1.0) == pytest.approx(8.0 / 9.0, abs=1e-15)

    def test_linear_in_r_for_so(self):
        for r in (0.5, 1.0, 4.0, 8.0):
            assert bounds.hess_normal_bound(SO, r) == pytest.approx(r / 9.0, abs=1e-13)


class TestHessFull:
    def test_so_profile(self):
        assert bounds.hess_full_bound(SO, 3.0) == pytest.approx(1.0, abs=1e-15)
        for r in (0.5, 2.0, 8.0):
            assert bounds.hess_full_bound(SO, r) == pytest.approx(r / 3.0, abs=1e-13)

    def test_grassmann_profile(self):
        assert bounds.hess_full_bound(GRASS, 1.0) == pytest.approx(8.0 / 3.0, abs=1e-15)

    def test_flat(self):
        assert bounds.hess_full_bound(FLAT, 1.0) == 0.0

    def test_vanishes_at_origin(self):
        for prof in (SO, GRASS, SPHERE, HYP):
            assert bounds.hess_full_bound(prof, 1e-4) <= 1e-3

    def test_domain(self):
        with pytest.raises(DomainError):
            bounds.hess_full_bound(SO, 2.0 * math.sqrt(2.0) * math.pi)


class TestHessFullTight:
    def test_flat(self):
        assert bounds.hess_full_tight(FLAT, 1.0) == 0.0

    def test_so_small_radius_under_linear_envelope(self):
        # the combined radial/normal envelope stays under 2r/9 on (0, 2 pi)
        r = 0.1
        assert bounds.hess_full_tight(SO, r) <= 2.0 * r / 9.0 + 1e-3
        for r in np.linspace(0.05, 2.0 * math.pi - 1e-6, 200):
            assert bounds.hess_full_tight(SO, r) <= 2.0 * r / 9.0 + 1e-12

    def test_constant_curvature_is_radial_envelope(self):
        assert bounds.hess_full_tight(SPHERE, 1.0) == pytest.approx(
            abs(1.0 - math.sin(2.0) / 2.0), abs=1e-15
        )

    def test_tight_below_full_on_valid_domain(self):
        # shared validity: r <= pi_kappa(4 sec_lo) when sec_lo > 0
        for kappa in (-2.0, -1.0, 1.0, 2.0):
            prof = CurvatureProfile(kappa, kappa)
            rmax = min(trig.pi_kappa(4.0 * kappa), trig.pi_kappa(kappa)) * 0.99
            rmax = min(rmax, 3.0)
            for r in np.linspace(0.1, rmax, 12):
                assert bounds.hess_full_tight(prof, r) <= bounds.hess_full_bound(prof, r) + 1e-12


class TestWeakConvexity:
    def test_flat_identity(self):
        rep = bounds.weak_convexity_constant(3.0, FLAT, 2.0)
        assert rep.C1 == 1.0 and rep.C2 == 0.0
        assert rep.alpha_hat == 3.0

    def test_so_hand_value(self):
        rep = bounds.weak_convexity_constant(1.0, SO, 1.0)
        assert rep.C1 == 1.0
        assert rep.C2 == pytest.approx(1.0 / 3.0, abs=1e-15)
        assert rep.alpha_hat == pytest.approx(4.0 / 3.0, abs=1e-15)
        # C2 is the r^2-scaled full bound
        assert rep.C2 == pytest.approx(1.0 * bounds.hess_full_bound(SO, 1.0), abs=1e-15)

    def test_hyperbolic_stretch(self):
        rep = bounds.weak_convexity_constant(1.0, HYP, 1.0)
        assert rep.C1 == pytest.approx(math.sinh(1.0) ** 2, abs=1e-14)

    def test_invariant_composition(self):
        rep = bounds.weak_convexity_constant(2.5, SO, 0.7)
        assert rep.alpha_hat == pytest.approx(rep.alpha * (rep.C1 + rep.C2))
        assert rep.C1 >= 1.0 and rep.C2 >= 0.0

    def test_alpha_hat_limit(self):
        assert bounds.alpha_hat(5.0, SO, 0.0) == 5.0
        assert bounds.alpha_hat(5.0, SO, 1e-9) == pytest.approx(5.0, rel=1e-6)


class TestLawOfCosines:
    def test_flat_is_euclidean(self):
        upper, lower = bounds.law_of_cosines_rhs(FLAT, 2.0, 1.0, 1.5, 0.3)
        euclid = 1.0 + 1.5**2 - 2.0 * 1.0 * 1.5 * 0.3
        assert upper == pytest.approx(euclid)
        assert lower == pytest.approx(euclid)

    def test_sphere_right_triangle(self):
        # right angle at x with legs pi/4: hypotenuse from the spherical
        # cosine rule, cos(d) = cos(a) cos(b)
        leg = math.pi / 4
        d_true = math.acos(math.cos(leg) ** 2)
        upper, lower = bounds.law_of_cosines_rhs(SPHERE, math.pi / 2, leg, leg, 0.0)
        assert lower == pytest.approx(
            trig.zeta2(1.0, math.pi / 2) * leg**2 + leg**2
        )
        assert lower <= d_true**2 <= upper

    def test_hyperbolic_degenerate(self):
        upper, _ = bounds.law_of_cosines_rhs(HYP, 3.0, 1.0, 2.0, -1.0)
        assert upper >= (1.0 + 2.0) ** 2 - 1e-12

    def test_upper_dominates_lower(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            prof = CurvatureProfile(rng.uniform(-2, 1), rng.uniform(1, 2))
            R = rng.uniform(0.1, 0.95) * min(prof.radius_first, 3.0)
            dxy, dxp = rng.uniform(0, R, 2)
            ca = rng.uniform(-1, 1)
            upper, lower = bounds.law_of_cosines_rhs(prof, R, dxy, dxp, ca)
            assert upper >= lower - 1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            bounds.law_of_cosines_rhs(SPHERE, 4.0, 1.0, 1.0, 0.0)
        with pytest.raises(DomainError):
            bounds.law_of_cosines_rhs(FLAT, 2.0, 3.0, 1.0, 0.0)
        with pytest.raises(DomainError):
            bounds.law_of_cosines_rhs(FLAT, 2.0, 1.0, 1.0, 2.0)


class TestMonotonicity:
    def test_widening_box_and_dcurv_never_shrink_bounds(self):
        r = 1.2
        base = CurvatureProfile(-0.5, 0.5, 0.25)
        for spread, lam in [(0.75, 0.25), (1.0, 0.5), (1.5, 1.0)]:
            wider = CurvatureProfile(-spread, spread, lam)
            assert bounds.first_order_upper(wider, r) >= bounds.first_order_upper(base, r)
            lo_w, _ = bounds.first_order_bounds(wider, r)
            lo_b, _ = bounds.first_order_bounds(base, r)
            assert lo_w <= lo_b
            assert bounds.hess_normal_bound(wider, r) >= bounds.hess_normal_bound(base, r)
            assert bounds.hess_full_bound(wider, r) >= bounds.hess_full_bound(base, r)
            wc_w = bounds.weak_convexity_constant(1.0, wider, r)
            wc_b = bounds.weak_convexity_constant(1.0, base, r)
            assert wc_w.alpha_hat >= wc_b.alpha_hat
            base = wider

    def test_sandwich_consistency(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            lo_k = rng.uniform(-3, 1)
            prof = CurvatureProfile(lo_k, lo_k + rng.uniform(0, 2))
            r = rng.uniform(0.05, 0.95) * min(prof.radius_first, 3.0)
            lo, hi = bounds.first_order_bounds(prof, r)
            assert lo <= 1.0 <= hi
        lo, hi = bounds.first_order_bounds(FLAT, 0.3)
        assert lo == hi == 1.0


class TestCertificate:
    def test_fields_are_consistent(self):
        cert = bounds.certificate(SO, 1.5)
        assert cert.r == 1.5
        assert cert.dexp_lo <= 1.0 <= cert.dexp_hi
        assert cert.hess_radial_lo <= cert.hess_radial_hi
        assert cert.hess_normal >= 0.0
        assert cert.hess_full >= 0.0
        assert cert.hess_full_tight == pytest.approx(
            math.hypot(cert.hess_radial_env, cert.hess_normal)
        )
        assert cert.r < cert.radius_second
