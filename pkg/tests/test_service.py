import math

import pytest
from fastapi.testclient import TestClient

from trivopt.service import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


class TestMeta:
    def test_health(self, client):
        assert client.get("/health").json() == {"status": "ok"}

    def test_profiles_table(self, client):
        profs = client.get("/profiles").json()
        assert set(profs) == {"euclidean", "sphere", "hyperbolic", "so", "so3", "grassmann"}
        assert profs["so"]["sec_hi"] == 0.25
        assert profs["euclidean"]["radius_second"] is None  # unbounded radius on the wire
        assert profs["grassmann"]["inj_lo"] == pytest.approx(math.pi / 2)


class TestBounds:
    def test_so_table_row(self, client):
        resp = client.post("/bounds", json={"profile": {"name": "so"}, "r_grid": [3.0]})
        assert resp.status_code == 200
        row = resp.json()["rows"][0]
        assert row["hess_full"] == pytest.approx(1.0)
        assert row["hess_normal"] == pytest.approx(1.0 / 3.0)

    def test_grassmann_row(self, client):
        resp = client.post("/bounds", json={"profile": {"name": "grassmann"}, "r_grid": [1.0]})
        row = resp.json()["rows"][0]
        assert row["hess_full"] == pytest.approx(8.0 / 3.0)
        assert row["hess_normal"] == pytest.approx(8.0 / 9.0)

    def test_euclidean_second_order_columns_vanish(self, client):
        resp = client.post(
            "/bounds", json={"profile": {"name": "euclidean"}, "r_grid": [0.5, 1.0, 2.0]}
        )
        for row in resp.json()["rows"]:
            assert row["hess_radial_lo"] == 0.0
            assert row["hess_radial_hi"] == 0.0
            assert row["hess_normal"] == 0.0
            assert row["hess_full"] == 0.0
            assert row["hess_full_tight"] == 0.0
            assert row["dexp_lo"] == 1.0 and row["dexp_hi"] == 1.0

    def test_manifold_reference_instead_of_profile(self, client):
        resp = client.post(
            "/bounds", json={"manifold": {"kind": "so", "dim": 3}, "r_grid": [1.0]}
        )
        assert resp.status_code == 200
        assert resp.json()["profile"]["sec_hi"] == 0.125

    def test_explicit_profile_override(self, client):
        resp = client.post(
            "/bounds",
            json={"profile": {"name": "so", "dcurv": 1.0}, "r_grid": [1.0], "alpha": 2.0},
        )
        assert resp.status_code == 200
        assert resp.json()["profile"]["dcurv"] == 1.0

    def test_rows_sorted_by_radius(self, client):
        resp = client.post("/bounds", json={"profile": {"name": "so"}, "r_grid": [2.0, 0.5, 1.0]})
        rs = [row["r"] for row in resp.json()["rows"]]
        assert rs == sorted(rs)

    def test_radius_outside_validity_is_422(self, client):
        resp = client.post("/bounds", json={"profile": {"name": "sphere"}, "r_grid": [3.5]})
        assert resp.status_code == 422

    def test_needs_exactly_one_source(self, client):
        resp = client.post("/bounds", json={"r_grid": [1.0]})
        assert resp.status_code == 422
        resp = client.post(
            "/bounds",
            json={
                "profile": {"name": "so"},
                "manifold": {"kind": "so", "dim": 3},
                "r_grid": [1.0],
            },
        )
        assert resp.status_code == 422

    def test_unknown_profile_name(self, client):
        resp = client.post("/bounds", json={"profile": {"name": "torus"}, "r_grid": [1.0]})
        assert resp.status_code == 422


class TestVerify:
    def test_sphere_passes(self, client):
        resp = client.post(
            "/verify",
            json={"manifold": {"kind": "sphere", "dim": 3}, "trials": 10, "seed": 0},
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["passed"] is True
        assert [rep["name"] for rep in body["reports"]] == [
            "rauch",
            "second_order",
            "law_of_cosines",
        ]

    def test_sphere_rmax_past_validity_is_422(self, client):
        resp = client.post(
            "/verify",
            json={"manifold": {"kind": "sphere", "dim": 3}, "rmax": 4.0, "trials": 5},
        )
        assert resp.status_code == 422

    def test_so4_wide_grid_passes(self, client):
        resp = client.post(
            "/verify",
            json={"manifold": {"kind": "so", "dim": 4}, "rmax": 8.88, "trials": 5, "seed": 0},
        )
        assert resp.status_code == 200
        assert resp.json()["passed"] is True

    def test_check_subset(self, client):
        resp = client.post(
            "/verify",
            json={
                "manifold": {"kind": "grassmann", "dim": 5, "subspace_dim": 2},
                "checks": ["rauch"],
                "trials": 5,
                "seed": 1,
            },
        )
        body = resp.json()
        assert [rep["name"] for rep in body["reports"]] == ["rauch"]

    def test_wrong_profile_override_fails_checks(self, client):
        # claiming the sphere is flat must be caught by the lower bound
        resp = client.post(
            "/verify",
            json={
                "manifold": {"kind": "sphere", "dim": 3},
                "profile": {"sec_lo": 0.0, "sec_hi": 0.0},
                "checks": ["rauch"],
                "trials": 10,
                "seed": 0,
                "r_grid": [1.0, 2.0],
            },
        )
        assert resp.status_code == 200
        assert resp.json()["passed"] is False

    def test_grassmann_needs_subspace_dim(self, client):
        resp = client.post(
            "/verify", json={"manifold": {"kind": "grassmann", "dim": 5}, "trials": 5}
        )
        assert resp.status_code == 422

    def test_deterministic_given_seed(self, client):
        req = {"manifold": {"kind": "hyperbolic", "dim": 3}, "trials": 8, "seed": 3}
        a = client.post("/verify", json=req).json()
        b = client.post("/verify", json=req).json()
        assert a == b


class TestOptimize:
    def test_quadratic_single_step(self, client):
        resp = client.post(
            "/optimize",
            json={
                "problem": {"kind": "quadratic", "dim": 5, "seed": 0},
                "config": {"trust_radius": 50.0, "eps_target": 1e-10, "seed": 1},
                "rule": {"kind": "never"},
            },
        )
        assert resp.status_code == 200
        summary = resp.json()["summary"]
        assert summary["converged"] is True
        assert summary["iterations"] == 1
        assert summary["clip_count"] == 0

    def test_rayleigh_rules_converge_within_budget(self, client):
        for kind in ("never", "always", "grad_ratio"):
            resp = client.post(
                "/optimize",
                json={
                    "problem": {"kind": "rayleigh", "dim": 6, "seed": 0, "norm_bound": 1.0},
                    "config": {
                        "trust_radius": 2.0,
                        "eps_target": 1e-3,
                        "seed": 1,
                        "max_outer": 100000,
                    },
                    "rule": {"kind": kind, "eps_low": 0.1, "eps_high": 10.0},
                },
            )
            summary = resp.json()["summary"]
            assert summary["converged"] is True
            assert summary["iterations"] <= summary["budget"]
            assert summary["clip_count"] == 0

    def test_karcher_grad_ratio(self, client):
        resp = client.post(
            "/optimize",
            json={
                "problem": {"kind": "karcher", "dim": 3, "seed": 2, "num_points": 6, "spread": 0.5},
                "config": {"trust_radius": 2.5, "eps_target": 1e-6, "seed": 3, "max_outer": 100000},
                "rule": {"kind": "grad_ratio", "eps_low": 0.1, "eps_high": 10.0},
            },
        )
        summary = resp.json()["summary"]
        assert summary["converged"] is True
        assert summary["clip_count"] == 0

    def test_trace_columns(self, client):
        resp = client.post(
            "/optimize",
            json={
                "problem": {"kind": "quadratic", "dim": 3, "seed": 4},
                "config": {"trust_radius": 50.0, "eps_target": 1e-8, "seed": 5},
                "rule": {"kind": "never"},
            },
        )
        trace = resp.json()["trace"]
        assert len(trace) >= 2
        assert set(trace[0]) == {
            "outer",
            "inner",
            "f",
            "pullback_grad_norm",
            "riem_grad_norm",
            "step_clipped",
        }

    def test_bad_trust_radius_is_422(self, client):
        resp = client.post(
            "/optimize",
            json={
                "problem": {"kind": "rayleigh", "dim": 5, "seed": 0},
                "config": {"trust_radius": 3.5, "eps_target": 1e-3},
                "rule": {"kind": "never"},
            },
        )
        assert resp.status_code == 422
