"""HTTP layer tests: route wiring, schema round trips, error code mapping.

Every numerical result returned over HTTP is checked against a direct call
into the core package, since the CLI relies on the two paths being
interchangeable.
"""

import pytest
from fastapi.testclient import TestClient

from configbounds import __version__
from configbounds.bounds import build_curve
from configbounds.configspace import (
    DualExtraction,
    WdpGenConfig,
    extract_dual,
    generate_instance,
    instance_seeds,
    select_kappa,
)
from configbounds.dpfit import fit
from configbounds.errors import NumericalError
from configbounds.piecewise import PiecewiseConstant
from configbounds.rademacher import DualSample, empirical_rad_exact, empirical_rad_mc
from configbounds.service import create_app
from configbounds.service.schemas import InstanceModel
from configbounds.solver import IntegerProgram, Row


@pytest.fixture(scope="module")
def client() -> TestClient:
    app = create_app()
    return TestClient(app)


def small_instance() -> IntegerProgram:
    cfg = WdpGenConfig(goods=6, bids=10, seed=3)
    return generate_instance(cfg)


def pwc_payload(breaks, values) -> dict:
    f = PiecewiseConstant(breaks, values)
    return f.to_dict()


class TestHealth:
    def test_health_reports_version(self, client):
        resp = client.get("/health")
        assert resp.status_code == 200
        assert resp.json() == {"status": "ok", "version": __version__}


class TestGen:
    def test_matches_core_generator(self, client):
        resp = client.post("/gen", json={"count": 3, "goods": 6, "bids": 10, "seed": 7})
        assert resp.status_code == 200
        body = resp.json()
        seeds = [int(s) for s in instance_seeds(7, 3)]
        assert body["seeds"] == seeds
        for seed, inst in zip(seeds, body["instances"]):
            ip = generate_instance(WdpGenConfig(goods=6, bids=10, seed=seed))
            assert inst == ip.to_dict()

    def test_deterministic(self, client):
        req = {"count": 2, "seed": 11}
        assert client.post("/gen", json=req).json() == client.post("/gen", json=req).json()

    def test_count_zero(self, client):
        body = client.post("/gen", json={"count": 0}).json()
        assert body == {"seeds": [], "instances": []}

    def test_instances_round_trip_core_type(self, client):
        body = client.post("/gen", json={"count": 1, "seed": 5}).json()
        ip = InstanceModel(**body["instances"][0]).to_core()
        assert isinstance(ip, IntegerProgram)
        assert ip.m == len(ip.rows)

    def test_bad_generator_config_is_422(self, client):
        resp = client.post("/gen", json={"count": 1, "bundle_min": 9, "bundle_max": 2})
        assert resp.status_code == 422


class TestDual:
    def test_matches_direct_extraction(self, client):
        ip = small_instance()
        req = {
            "instance": ip.to_dict(),
            "rule1": "L",
            "rule2": "S",
            "kappa": 7,
            "grid_eps": 1e-3,
            "instance_id": "inst-0000",
        }
        resp = client.post("/dual", json=req)
        assert resp.status_code == 200
        direct = extract_dual(ip, "L", "S", 7, 1e-3, instance_id="inst-0000")
        assert resp.json() == direct.to_dict()

    def test_payload_round_trips_as_dual_extraction(self, client):
        ip = small_instance()
        req = {"instance": ip.to_dict(), "kappa": 7, "grid_eps": 1e-3}
        body = client.post("/dual", json=req).json()
        ex = DualExtraction.from_dict(body)
        assert ex.kappa == 7
        assert ex.rule1 == "L" and ex.rule2 == "S"

    def test_bad_rule_is_422(self, client):
        req = {"instance": small_instance().to_dict(), "rule1": "Q", "kappa": 7}
        assert client.post("/dual", json=req).status_code == 422

    def test_missing_field_is_422(self, client):
        assert client.post("/dual", json={"kappa": 7}).status_code == 422


class TestKappa:
    def test_matches_direct_selection(self, client):
        ips = [generate_instance(WdpGenConfig(goods=6, bids=10, seed=s)) for s in (3, 4)]
        grid = [i / 20.0 for i in range(21)]
        req = {"instances": [ip.to_dict() for ip in ips], "r_grid": grid}
        resp = client.post("/kappa", json=req)
        assert resp.status_code == 200
        sel = select_kappa(ips, "L", "S", r_grid=grid)
        assert resp.json() == {"kappa": sel.kappa, "saturated": sel.saturated}

    def test_saturation_flag(self, client):
        ips = [small_instance()]
        req = {
            "instances": [ip.to_dict() for ip in ips],
            "r_grid": [0.0, 0.5, 1.0],
            "hard_cap": 3,
        }
        body = client.post("/kappa", json=req).json()
        assert body == {"kappa": 3, "saturated": True}

    def test_empty_instances_is_422(self, client):
        assert client.post("/kappa", json={"instances": []}).status_code == 422


class TestProfile:
    def test_constant_duals(self, client):
        duals = [pwc_payload((0.0, 1.0), (3 / 7,)) for _ in range(4)]
        body = client.post("/profile", json={"duals": duals, "j_lo": 1, "j_hi": 4}).json()
        assert body["j_star"] == 1
        assert [row["j"] for row in body["rows"]] == [1, 2, 3, 4]
        assert all(row["e_hat"] == 0.0 for row in body["rows"])

    def test_matches_direct_profile(self, client):
        duals = [
            pwc_payload((0.0, 0.3, 1.0), (2 / 7, 5 / 7)),
            pwc_payload((0.0, 0.5, 0.8, 1.0), (1 / 7, 4 / 7, 1.0)),
        ]
        body = client.post("/profile", json={"duals": duals, "j_hi": 3}).json()
        assert body["j_star"] == 3
        assert body["rows"][0]["e_hat"] == pytest.approx(
            (0.5 * (5 / 7 - 2 / 7) + 0.5 * (1.0 - 1 / 7)) / 2, abs=1e-12
        )
        assert body["rows"][2]["e_hat"] == 0.0

    def test_bad_j_window_is_422(self, client):
        duals = [pwc_payload((0.0, 1.0), (0.5,))]
        assert client.post("/profile", json={"duals": duals, "j_lo": 3, "j_hi": 1}).status_code == 422
        assert client.post("/profile", json={"duals": duals, "j_lo": 0}).status_code == 422

    def test_dual_extraction_payloads_accepted_directly(self, client):
        """Extra context keys in dual files must not break profile requests."""
        ip = small_instance()
        ex = extract_dual(ip, "L", "S", 7, 1e-3)
        body = client.post("/profile", json={"duals": [ex.to_dict()], "j_hi": 8}).json()
        assert body["j_star"] == ex.dual.segment_count


class TestBounds:
    REQ = {
        "e_hat": [{"j": 1, "e_hat": 0.3}, {"j": 2, "e_hat": 0.1}, {"j": 4, "e_hat": 0.0}],
        "m_profile": 50,
        "j_star": 4,
        "n_vars": 10,
        "kappa": 7,
        "n_schedule": [100, 10000, 1000000],
    }

    def test_matches_direct_curve(self, client):
        resp = client.post("/bounds", json=self.REQ)
        assert resp.status_code == 200
        body = resp.json()
        curve = build_curve({1: 0.3, 2: 0.1, 4: 0.0}, 50, 4, 10, 7, [100, 10000, 1000000], [1, 2, 4])
        assert body["csv"] == curve.to_csv()
        for got, row in zip(body["rows"], curve.rows):
            assert got["n"] == row.n_samples
            assert got["worst_case"] == row.worst_case
            assert got["srm"] == row.srm
            assert got["srm_best_j"] == row.srm_best_j
            assert got["baseline"] == row.baseline
        assert [(p["n"], p["bound"]) for p in body["reported"]] == list(curve.reported())

    def test_reported_is_min_of_components(self, client):
        body = client.post("/bounds", json=self.REQ).json()
        for row, point in zip(body["rows"], body["reported"]):
            assert point["bound"] == min(row["worst_case"], row["srm"])

    def test_paper_mode_changes_srm(self, client):
        plain = client.post("/bounds", json=self.REQ).json()
        paper = client.post("/bounds", json={**self.REQ, "paper_mode": True}).json()
        assert plain["rows"][0]["srm"] != paper["rows"][0]["srm"]
        assert plain["rows"][0]["worst_case"] == paper["rows"][0]["worst_case"]

    def test_empty_schedule_is_422(self, client):
        assert client.post("/bounds", json={**self.REQ, "n_schedule": []}).status_code == 422

    def test_rising_profile_is_422(self, client):
        bad = {**self.REQ, "e_hat": [{"j": 1, "e_hat": 0.1}, {"j": 2, "e_hat": 0.3}]}
        assert client.post("/bounds", json=bad).status_code == 422


class TestFit:
    def test_matches_direct_fit(self, client):
        f = PiecewiseConstant((0.0, 0.2, 0.5, 0.9, 1.0), (0.1, 0.6, 0.3, 0.8))
        body = client.post("/fit", json={"dual": f.to_dict(), "k": 2}).json()
        res = fit(f, 2)
        assert body["error"] == res.error
        assert body["splits"] == list(res.splits)
        assert PiecewiseConstant.from_dict(body["approximant"]) == res.approximant

    def test_sum_combine(self, client):
        f = PiecewiseConstant((0.0, 0.5, 1.0), (0.2, 0.9))
        body = client.post("/fit", json={"dual": f.to_dict(), "k": 1, "combine": "sum"}).json()
        assert body["error"] == fit(f, 1, combine="sum").error

    def test_bad_combine_is_422(self, client):
        f = PiecewiseConstant((0.0, 1.0), (0.5,))
        req = {"dual": f.to_dict(), "k": 1, "combine": "median"}
        assert client.post("/fit", json=req).status_code == 422


class TestRad:
    DUALS = [
        pwc_payload((0.0, 0.4, 1.0), (0.2, 0.8)),
        pwc_payload((0.0, 0.6, 1.0), (0.9, 0.1)),
        pwc_payload((0.0, 1.0), (0.5,)),
    ]

    def test_exact_matches_direct(self, client):
        body = client.post("/rad", json={"duals": self.DUALS}).json()
        sample = DualSample([PiecewiseConstant.from_dict(d) for d in self.DUALS])
        assert body["value"] == empirical_rad_exact(sample)
        assert body["stderr"] is None
        assert body["method"] == "exact"
        assert body["distinct"] == 3

    def test_mc_matches_direct(self, client):
        req = {"duals": self.DUALS, "method": "mc", "draws": 512, "seed": 9}
        body = client.post("/rad", json=req).json()
        sample = DualSample([PiecewiseConstant.from_dict(d) for d in self.DUALS])
        value, stderr = empirical_rad_mc(sample, 512, 9)
        assert body["value"] == value
        assert body["stderr"] == stderr

    def test_unknown_method_is_422(self, client):
        req = {"duals": self.DUALS, "method": "bootstrap"}
        assert client.post("/rad", json=req).status_code == 422

    def test_exact_guard_is_413(self, client):
        duals = [pwc_payload((0.0, (i + 1) / 22.0, 1.0), (0.0, 1.0)) for i in range(21)]
        resp = client.post("/rad", json={"duals": duals})
        assert resp.status_code == 413
        assert "empirical_rad_mc" in resp.json()["detail"]


class TestCounterexample:
    def test_small_sweep_passes(self, client):
        req = {"gammas": [0.1], "ps": [2.0], "ns": [4], "cs": [0.45]}
        resp = client.post("/counterexample", json=req)
        assert resp.status_code == 200
        body = resp.json()
        assert body["all_pass"] is True
        assert body["constant_class_rad"] == 0.0
        assert len(body["approx"]) == 1 and len(body["demos"]) == 1
        demo = body["demos"][0]
        assert 0.45 <= demo["value"] <= 0.5

    def test_gamma_out_of_range_is_422(self, client):
        req = {"gammas": [0.3], "ps": [2.0], "ns": [4], "cs": [0.45]}
        assert client.post("/counterexample", json=req).status_code == 422

    def test_oversized_demo_is_413(self, client):
        req = {"gammas": [0.1], "ps": [2.0], "ns": [17], "cs": [0.45]}
        assert client.post("/counterexample", json=req).status_code == 413


class TestErrorMapping:
    def test_numerical_error_maps_to_500(self):
        app = create_app()

        @app.post("/boom")
        def boom() -> dict:
            raise NumericalError("quadrature failed to converge")

        resp = TestClient(app).post("/boom")
        assert resp.status_code == 500
        assert resp.json() == {"detail": "quadrature failed to converge"}

    def test_domain_error_detail_is_preserved(self):
        client = TestClient(create_app())
        resp = client.post(
            "/fit",
            json={"dual": pwc_payload((0.0, 1.0), (0.5,)), "k": 0},
        )
        assert resp.status_code == 422
        assert "k must be >= 1" in resp.json()["detail"]

    def test_out_of_range_values_are_422(self):
        client = TestClient(create_app())
        bad = {"lo": 0.0, "hi": 1.0, "breaks": [0.0, 1.0], "values": [2.5]}
        assert client.post("/fit", json={"dual": bad, "k": 1}).status_code == 422
