import json
from dataclasses import replace

import pytest

from memsim.attack import AttackConfig
from memsim.config import (ScenarioConfig, ValidationError, default_cruise,
                           from_json, to_json)
from memsim.logio import (CSV_HEADER, export_csv, export_json, export_log,
                          parse_json_log)
from memsim.session import Session, run_scenario


def short(seed=3, duration=0.5):
    return replace(default_cruise(seed=seed), duration=duration)


def test_csv_header_exact():
    assert CSV_HEADER == ("t,x,y,heading,v_true,v_est,v_wheel,ax_imu,"
                          "gyro_z,cmd_a,cmd_yaw,brake,pressure")


def test_csv_row_count():
    log = run_scenario(short(duration=0.25))
    text = export_csv(log)
    lines = text.strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == len(log.records) + 1


def test_csv_full_precision_round_trip():
    log = run_scenario(short())
    lines = export_csv(log).strip().split("\n")[1:]
    row = lines[300].split(",")
    rec = log.records[300]
    assert float(row[0]) == rec.t
    assert float(row[4]) == rec.v_true
    assert float(row[12]) == rec.pressure


def test_empty_session_is_header_only():
    # a session that never ran exports just the header
    session = Session(1, short())
    assert export_csv(session.log) == CSV_HEADER + "\n"


def test_json_round_trip_byte_identical():
    cfg = replace(short(), attack=AttackConfig(carrier_freq=5000.0,
                                               spl_at_source=95.0,
                                               start_t=0.1))
    log = run_scenario(cfg)
    first = export_json(log)
    second = export_json(parse_json_log(first))
    assert first == second


def test_json_preserves_config_and_events():
    cfg = short()
    session = Session(1, cfg)
    session.run(until_t=0.2)
    session.apply_attack(AttackConfig(carrier_freq=4000.0, spl_at_source=90.0,
                                      start_t=0.0))
    session.run()
    parsed = parse_json_log(export_json(session.log))
    assert to_json(parsed.config) == to_json(cfg)
    assert [e.kind for e in parsed.events] == ["attack_applied"]


def test_export_log_format_dispatch():
    log = run_scenario(short(duration=0.1))
    assert export_log(log, "csv").startswith(CSV_HEADER.encode())
    assert json.loads(export_log(log, "json"))["config"]["seed"] == 3
    with pytest.raises(ValueError):
        export_log(log, "parquet")


def test_config_json_round_trip():
    cfg = replace(short(), attack=AttackConfig(trigger_rate=2.0, duty=0.25))
    text = to_json(cfg)
    again = to_json(from_json(text))
    assert text == again


def test_config_json_infinite_attack_duration():
    cfg = replace(short(), attack=AttackConfig())
    parsed = from_json(to_json(cfg))
    assert parsed.attack.duration == float("inf")


def test_config_rejects_unknown_fields():
    with pytest.raises(ValidationError):
        from_json('{"seeed": 1}')


def test_config_rejects_malformed_json():
    with pytest.raises(ValidationError):
        from_json("{not json")


def test_default_config_is_valid():
    assert ScenarioConfig().validate() == []


def test_dt_sample_rate_lock():
    cfg = replace(short(), dt=0.002)
    fields = [f for f, _ in cfg.validate()]
    assert "dt" in fields
