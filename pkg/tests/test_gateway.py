import json
from dataclasses import replace

import pytest
from fastapi.testclient import TestClient

from memsim.config import default_cruise, to_dict
from memsim.gateway import create_app
from memsim.host import HostRegistry
from memsim.logio import CSV_HEADER


@pytest.fixture
def client():
    registry = HostRegistry()
    app = create_app(registry)
    with TestClient(app) as c:
        yield c
    registry.shutdown()


def short_cfg_dict(seed=5, duration=0.4):
    return to_dict(replace(default_cruise(seed=seed), duration=duration))


def create_session(client, **kw):
    resp = client.post("/sessions", json=short_cfg_dict(**kw))
    assert resp.status_code == 201
    return resp.json()["id"]


def run_to_completion(client, session_id):
    resp = client.post(f"/sessions/{session_id}/command",
                       json={"command": "start", "pace": 0})
    assert resp.status_code == 200
    import time
    for _ in range(300):
        state = client.get(f"/sessions/{session_id}").json()["state"]
        if state in ("completed", "faulted"):
            return state
        time.sleep(0.02)
    raise TimeoutError("session never completed")


def test_create_returns_201_and_canonical_echo(client):
    resp = client.post("/sessions", json=short_cfg_dict())
    assert resp.status_code == 201
    body = resp.json()
    assert body["id"] >= 1
    assert body["config"]["seed"] == 5


def test_create_malformed_json_400(client):
    resp = client.post("/sessions", content=b"{nope",
                       headers={"content-type": "application/json"})
    assert resp.status_code == 400


def test_create_invalid_config_422_names_field(client):
    cfg = short_cfg_dict()
    cfg["dt"] = 0.0
    resp = client.post("/sessions", json=cfg)
    assert resp.status_code == 422
    fields = [v["field"] for v in resp.json()["violations"]]
    assert "dt" in fields


def test_lifecycle_start_completed_409(client):
    session_id = create_session(client)
    assert run_to_completion(client, session_id) == "completed"
    resp = client.post(f"/sessions/{session_id}/command",
                       json={"command": "start"})
    assert resp.status_code == 409


def test_unknown_session_404(client):
    assert client.get("/sessions/999").status_code == 404
    assert client.post("/sessions/999/command",
                       json={"command": "start"}).status_code == 404
    assert client.get("/sessions/999/metrics").status_code == 404
    assert client.get("/sessions/999/log").status_code == 404


def test_attack_spl_out_of_bounds_422(client):
    session_id = create_session(client)
    resp = client.post(f"/sessions/{session_id}/attack",
                       json={"spl_at_source": 200.0})
    assert resp.status_code == 422
    assert any("spl" in v["message"] for v in resp.json()["violations"])


def test_attack_valid_mid_run_200_and_event_visible(client):
    session_id = create_session(client, duration=1.5)
    client.post(f"/sessions/{session_id}/command",
                json={"command": "start", "pace": 0})
    resp = client.post(f"/sessions/{session_id}/attack",
                       json={"carrier_freq": 5000.0, "spl_at_source": 110.0,
                             "trigger_rate": 0.0})
    assert resp.status_code == 200
    import time
    for _ in range(200):
        if client.get(f"/sessions/{session_id}").json()["state"] == "completed":
            break
        time.sleep(0.02)
    log = client.get(f"/sessions/{session_id}/log",
                     params={"format": "json"}).json()
    kinds = [e["kind"] for e in log["events"]]
    assert "attack_applied" in kinds


def test_metrics_running_409_then_ok(client):
    session_id = create_session(client, duration=3.0)
    client.post(f"/sessions/{session_id}/command",
                json={"command": "start", "pace": 1.0})
    resp = client.get(f"/sessions/{session_id}/metrics")
    assert resp.status_code == 409
    client.post(f"/sessions/{session_id}/command", json={"command": "pause"})
    resp = client.get(f"/sessions/{session_id}/metrics")
    assert resp.status_code == 200
    assert resp.json()["attack_success"] == "no_attack"


def test_metrics_reference_seed_mismatch_422(client):
    a = create_session(client, seed=5)
    b = create_session(client, seed=6)
    run_to_completion(client, a)
    run_to_completion(client, b)
    resp = client.get(f"/sessions/{a}/metrics", params={"reference": b})
    assert resp.status_code == 422


def test_log_csv_download_exact_format(client):
    session_id = create_session(client)
    run_to_completion(client, session_id)
    resp = client.get(f"/sessions/{session_id}/log", params={"format": "csv"})
    assert resp.status_code == 200
    assert resp.text.startswith(CSV_HEADER + "\n")
    assert len(resp.text.strip().split("\n")) == 402


def test_log_unknown_format_422(client):
    session_id = create_session(client)
    run_to_completion(client, session_id)
    resp = client.get(f"/sessions/{session_id}/log", params={"format": "xml"})
    assert resp.status_code == 422


def test_reset_then_run_identical_log(client):
    session_id = create_session(client, seed=17)
    run_to_completion(client, session_id)
    first = client.get(f"/sessions/{session_id}/log",
                       params={"format": "csv"}).text
    resp = client.post(f"/sessions/{session_id}/command",
                       json={"command": "reset"})
    assert resp.status_code == 200
    run_to_completion(client, session_id)
    second = client.get(f"/sessions/{session_id}/log",
                        params={"format": "csv"}).text
    assert first == second


def test_telemetry_stream_sse_frames(client):
    session_id = create_session(client, duration=0.3)
    client.post(f"/sessions/{session_id}/command",
                json={"command": "start", "pace": 0})
    events = []
    with client.stream("GET", f"/sessions/{session_id}/telemetry",
                       params={"decimation": 50}) as resp:
        assert resp.status_code == 200
        assert resp.headers["content-type"].startswith("text/event-stream")
        name = None
        for line in resp.iter_lines():
            if line.startswith("event: "):
                name = line[len("event: "):]
            elif line.startswith("data: "):
                events.append((name, json.loads(line[len("data: "):])))
                if name == "end":
                    break
    assert events[0][0] == "snapshot"
    assert events[-1][0] == "end"
    tick_ts = [p["t"] for n, p in events if n == "tick"]
    assert tick_ts == sorted(tick_ts)


def test_telemetry_decimation_validation(client):
    session_id = create_session(client)
    resp = client.get(f"/sessions/{session_id}/telemetry",
                      params={"decimation": 0})
    assert resp.status_code == 422


def test_session_listing(client):
    create_session(client, seed=1)
    create_session(client, seed=2)
    listing = client.get("/sessions").json()
    assert len(listing) == 2
    assert listing[0]["id"] < listing[1]["id"]
