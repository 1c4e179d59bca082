"""Session log export and import.

CSV uses a fixed header and shortest round-trip float formatting; JSON
carries the config, events, and full records, and re-exports
byte-identically after a parse.
"""
from __future__ import annotations

import json
from typing import Any

from .config import ScenarioConfig, from_dict, to_dict
from .session import SessionEvent, SessionLog, TickRecord

CSV_HEADER = "t,x,y,heading,v_true,v_est,v_wheel,ax_imu,gyro_z,cmd_a,cmd_yaw,brake,pressure"

EXPORT_FORMATS = ("csv", "json")

_RECORD_FIELDS = ("t", "x", "y", "heading", "v_true", "v_est", "v_wheel",
                  "ax_imu", "gyro_z", "cmd_a", "cmd_yaw", "brake", "pressure",
                  "v_imu", "a_true", "slip_ratio", "slipping", "injected")


def export_csv(log: SessionLog) -> str:
    lines = [CSV_HEADER]
    for r in log.records:
        lines.append(",".join((
            repr(r.t), repr(r.x), repr(r.y), repr(r.heading), repr(r.v_true),
            repr(r.v_est), repr(r.v_wheel), repr(r.ax_imu), repr(r.gyro_z),
            repr(r.cmd_a), repr(r.cmd_yaw), repr(r.brake), repr(r.pressure))))
    return "\n".join(lines) + "\n"


def _record_to_dict(r: TickRecord) -> dict[str, Any]:
    return {name: getattr(r, name) for name in _RECORD_FIELDS}


def export_json(log: SessionLog) -> str:
    payload = {
        "config": to_dict(log.config),
        "events": [{"t": ev.t, "kind": ev.kind, "detail": ev.detail}
                   for ev in log.events],
        "faulted_tick": log.faulted_tick,
        "records": [_record_to_dict(r) for r in log.records],
    }
    return json.dumps(payload, separators=(",", ":"))


def parse_json_log(text: str) -> SessionLog:
    data = json.loads(text)
    if not isinstance(data, dict) or "config" not in data or "records" not in data:
        raise ValueError("not a session log export")
    config = from_dict(data["config"])
    records = [TickRecord(**{name: rec[name] for name in _RECORD_FIELDS})
               for rec in data["records"]]
    events = [SessionEvent(t=ev["t"], kind=ev["kind"], detail=ev["detail"])
              for ev in data.get("events", [])]
    return SessionLog(config=config, records=records, events=events,
                      faulted_tick=data.get("faulted_tick"))


def export_log(log: SessionLog, format: str) -> bytes:
    """Byte stream for download; format is 'csv' or 'json'."""
    if format == "csv":
        return export_csv(log).encode()
    if format == "json":
        return export_json(log).encode()
    raise ValueError(f"unknown export format {format!r}")
