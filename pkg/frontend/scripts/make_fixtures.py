#!/usr/bin/env python3
"""Record dashboard test fixtures from the simulation engine.

Produces fixtures/telemetry.json (the exact frame sequence a subscriber
sees for a short fusion-disabled attack run) and fixtures/metrics.json
(that run's metrics report). Rerun after engine changes:
    python3 scripts/make_fixtures.py
"""
import json
import sys
from dataclasses import replace
from pathlib import Path

from memsim.attack import AttackConfig, design_attack_frequency
from memsim.config import ScenarioConfig, to_dict
from memsim.host import SessionHost
from memsim.metrics import compute_metrics
from memsim.session import Session, SessionState


def main() -> None:
    base = ScenarioConfig(seed=2026, duration=4.0)
    base = replace(base, setpoints=replace(base.setpoints, v_set=13.89))
    controller = replace(base.controller,
                         fusion=replace(base.controller.fusion,
                                        fusion_enabled=False))
    carrier = design_attack_frequency(base.sensors.sample_rate,
                                      base.sensors.f_res_accel, 0.0)
    cfg = replace(base, controller=controller,
                  attack=AttackConfig(attacker_type="internal",
                                      carrier_freq=carrier,
                                      spl_at_source=110.0, trigger_rate=0.0,
                                      duty=1.0, start_t=1.0))

    host = SessionHost(Session(1, cfg))
    frames = []
    stream = host.telemetry(decimation=20)
    name, payload = next(stream)
    frames.append({"event": name, "payload": payload})
    host.start(pace=0.0)
    for name, payload in stream:
        frames.append({"event": name, "payload": payload})
        if name == "end":
            break
    host.wait_for(SessionState.COMPLETED)
    report = compute_metrics(host.session.log)
    host.shutdown()

    out = Path(__file__).resolve().parent.parent / "fixtures"
    out.mkdir(exist_ok=True)
    (out / "telemetry.json").write_text(
        json.dumps({"config": to_dict(cfg), "frames": frames}, indent=1) + "\n")
    (out / "metrics.json").write_text(
        json.dumps(report.to_dict(), indent=1) + "\n")
    ticks = sum(1 for f in frames if f["event"] == "tick")
    print(f"wrote {len(frames)} frames ({ticks} ticks) and metrics "
          f"(verdict {report.attack_success})", file=sys.stderr)


if __name__ == "__main__":
    main()
