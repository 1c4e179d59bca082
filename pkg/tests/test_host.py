import time
from dataclasses import replace

import pytest

from memsim.attack import AttackConfig
from memsim.config import ValidationError, default_cruise
from memsim.host import HostRegistry, IllegalTransition, SessionHost
from memsim.session import Session, SessionState


@pytest.fixture
def registry():
    reg = HostRegistry()
    yield reg
    reg.shutdown()


def short_cfg(seed=5, duration=0.8):
    return replace(default_cruise(seed=seed), duration=duration)


def test_start_runs_to_completion_unpaced(registry):
    host = registry.create(short_cfg())
    host.start(pace=0.0)
    state = host.wait_for(SessionState.COMPLETED, timeout=30)
    assert state == SessionState.COMPLETED
    assert host.session.tick_count == 801


def test_pause_and_resume(registry):
    host = registry.create(short_cfg(duration=5.0))
    host.start(pace=0.0)
    time.sleep(0.05)
    result = host.pause()
    assert result["state"] in ("paused", "completed")
    if result["state"] == "paused":
        ticks = host.session.tick_count
        time.sleep(0.05)
        assert host.session.tick_count == ticks  # actually paused
        host.start(pace=0.0)
    host.wait_for(SessionState.COMPLETED, timeout=30)


def test_start_completed_is_illegal(registry):
    host = registry.create(short_cfg(duration=0.2))
    host.start(pace=0.0)
    host.wait_for(SessionState.COMPLETED, timeout=30)
    with pytest.raises(IllegalTransition):
        host.start()


def test_attack_command_serialized_and_validated(registry):
    host = registry.create(short_cfg(duration=1.0))
    host.start(pace=0.0)
    with pytest.raises(ValidationError):
        host.apply_attack(AttackConfig(spl_at_source=999.0))
    host.wait_for(SessionState.COMPLETED, timeout=30)
    assert host.session.active_attack is None


def test_reset_reproduces_bit_identical(registry):
    from memsim.logio import export_csv
    host = registry.create(short_cfg(seed=77, duration=0.6))
    host.start(pace=0.0)
    host.wait_for(SessionState.COMPLETED, timeout=30)
    first = export_csv(host.session.log)
    host.reset()
    assert host.session.state == SessionState.CREATED
    host.start(pace=0.0)
    host.wait_for(SessionState.COMPLETED, timeout=30)
    assert export_csv(host.session.log) == first


def test_telemetry_stream_order_and_decimation(registry):
    host = registry.create(short_cfg(duration=0.5))
    frames = []
    stream = host.telemetry(decimation=10)
    name, payload = next(stream)
    assert name == "snapshot"
    host.start(pace=0.0)
    for name, payload in stream:
        frames.append((name, payload))
        if name == "end":
            break
    ticks = [p for n, p in frames if n == "tick"]
    assert frames[-1][0] == "end"
    assert frames[-1][1]["state"] == "completed"
    # every 10th tick of a 501-record log: t = 0, 0.01, ..., 0.5
    assert len(ticks) == 51
    ts = [p["t"] for p in ticks]
    assert ts == sorted(ts)
    assert ts[0] == 0.0
    assert ts[1] == pytest.approx(0.01)


def test_two_concurrent_subscribers_identical(registry):
    host = registry.create(short_cfg(duration=0.4))
    s1 = host.telemetry(decimation=20)
    s2 = host.telemetry(decimation=20)
    assert next(s1)[0] == "snapshot"
    assert next(s2)[0] == "snapshot"
    host.start(pace=0.0)
    seq1 = [(n, p) for n, p in s1]
    seq2 = [(n, p) for n, p in s2]
    assert seq1 == seq2


def test_late_subscriber_snapshot_then_end(registry):
    host = registry.create(short_cfg(duration=0.3))
    host.start(pace=0.0)
    host.wait_for(SessionState.COMPLETED, timeout=30)
    frames = list(host.telemetry(decimation=10))
    assert frames[0][0] == "snapshot"
    assert frames[0][1]["state"] == "completed"
    assert "last_tick" in frames[0][1]
    assert frames[-1][0] == "end"
    assert all(n != "tick" for n, _ in frames)


def test_attack_event_appears_in_stream(registry):
    host = registry.create(short_cfg(duration=1.0))
    stream = host.telemetry(decimation=50)
    next(stream)  # snapshot
    host.start(pace=0.0)
    host.apply_attack(AttackConfig(carrier_freq=5000.0, spl_at_source=100.0,
                                   trigger_rate=0.0, start_t=0.0))
    names = [n for n, _ in stream]
    assert "event" in names


def test_view_shape(registry):
    host = registry.create(short_cfg())
    view = host.view()
    assert view["state"] == "created"
    assert view["tick_count"] == 0
    assert view["active_attack"] is None
    assert isinstance(view["config_digest"], str)
