import pytest
from fastapi.testclient import TestClient

from app import app

_CHANNEL = {"h": [0.4, 0.2, 0.4], "alpha": [0.8, 0.3, 0.1]}
_MAXIMALLY_CONVEX = {"type": "discrete", "support": [0.0, 0.4, 0.6, 1.0], "masses": [0.2, 0.5, 0.2, 0.1]}
_BINARY = {"type": "discrete", "support": [0.0, 1.0], "masses": [0.58, 0.42]}


@pytest.fixture
def _test_client():
    return TestClient(app)


def test_healthcheck(_test_client):
    response = _test_client.get("/api/v1/healthcheck")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_normalize(_test_client, _raw_channel_upload):
    response = _test_client.post("/api/v1/channel/normalize", json=_raw_channel_upload)
    assert response.status_code == 200
    assert response.json()["h"] == pytest.approx([0.4, 0.225, 0.375])
    assert response.json()["sigma"] == pytest.approx(0.05)


def test_canonicalize(_test_client):
    response = _test_client.post(
        "/api/v1/channel/canonicalize",
        json={"channel": {"h": [0.5, 0.5], "alpha": [0.9, 0.7]}, "kind": "ec"},
    )
    assert response.status_code == 200
    body = response.json()
    assert body["reduction"]["flipped"]
    assert body["channel"]["alpha"] == pytest.approx([0.3, 0.1])


def test_feasibility(_test_client):
    response = _test_client.post("/api/v1/feasibility/ec", json={"channel": _CHANNEL, "distribution": _MAXIMALLY_CONVEX})
    assert response.status_code == 200
    assert response.json()["feasible"]

    response = _test_client.post("/api/v1/feasibility/ec", json={"channel": _CHANNEL, "distribution": _BINARY})
    assert response.status_code == 200
    assert not response.json()["feasible"]


def test_unknown_kind(_test_client):
    response = _test_client.post("/api/v1/feasibility/peak", json={"channel": _CHANNEL, "distribution": _BINARY})
    assert response.status_code == 422


def test_invalid_channel(_test_client):
    channel = {"h": [0.5, 0.6], "alpha": [0.4, 0.1]}
    response = _test_client.post("/api/v1/feasibility/ec", json={"channel": channel, "distribution": _BINARY})
    assert response.status_code == 422


def test_decomposition(_test_client, _raw_channel_upload):
    ook = {"type": "discrete", "support": [0.0, 1.0], "masses": [0.9, 0.1]}
    response = _test_client.post(
        "/api/v1/decomposition/bc",
        json={"channel": _raw_channel_upload, "distribution": ook, "s": [0.0, 1.0]},
    )
    assert response.status_code == 200
    body = response.json()
    assert body["allocation"]["beta"] == pytest.approx(0.1)
    assert body["rows"][1]["x"] == pytest.approx([1.0, 1.0, 1.0])
    assert body["rows"][1]["x_raw"] == pytest.approx([2.0, 3.0, 2.5])


def test_decomposition_infeasible(_test_client):
    response = _test_client.post(
        "/api/v1/decomposition/ec",
        json={"channel": _CHANNEL, "distribution": _BINARY, "s": [0.5]},
    )
    assert response.status_code == 409


def test_maxent(_test_client):
    response = _test_client.post("/api/v1/maxent/ec", json=_CHANNEL)
    assert response.status_code == 200
    assert response.json()["lambdas"] == pytest.approx([-2.9176, 6.5987, 0.0], abs=2e-3)


def test_bounds(_test_client):
    response = _test_client.post(
        "/api/v1/bounds/ec",
        json={"channel": _CHANNEL, "sigma_min": 0.1, "sigma_max": 1.0, "points": 2},
    )
    assert response.status_code == 200
    body = response.json()
    assert body["kind"] == "ec"
    assert len(body["reports"]) == 2
