"""Attack-effect metrics: IMU-vs-ground-truth comparison over a session
log, with success classification against platform thresholds."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Optional

from .config import ScenarioConfig, to_json
from .session import SessionLog
from .vehicle import wrap_angle

ATTACK_OUTCOMES = ("no_attack", "ineffective", "effective")


@dataclass(frozen=True)
class MetricsReport:
    velocity_rmse_vs_setpoint: float
    max_velocity_est_error: float
    max_lateral_deviation: float
    max_heading_error: float
    imu_wheel_discrepancy_rms: float
    jerk_rms: float
    stopping_distance: Optional[float]
    attack_success: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "velocity_rmse_vs_setpoint": self.velocity_rmse_vs_setpoint,
            "max_velocity_est_error": self.max_velocity_est_error,
            "max_lateral_deviation": self.max_lateral_deviation,
            "max_heading_error": self.max_heading_error,
            "imu_wheel_discrepancy_rms": self.imu_wheel_discrepancy_rms,
            "jerk_rms": self.jerk_rms,
            "stopping_distance": self.stopping_distance,
            "attack_success": self.attack_success,
        }


class ReferenceMismatch(ValueError):
    """Reference log does not share seed and config-minus-attack."""


def _require_compatible(cfg: ScenarioConfig, ref_cfg: ScenarioConfig) -> None:
    if to_json(cfg.without_attack()) != to_json(ref_cfg.without_attack()):
        raise ReferenceMismatch(
            "reference must share the seed and config apart from the attack")


def stopping_distance(log: SessionLog) -> float:
    """Path length until the vehicle first reaches v=0; the full path if it
    never stops (an attack that defeats braking is a legitimate outcome)."""
    total = 0.0
    prev = log.records[0]
    for rec in log.records[1:]:
        total += math.hypot(rec.x - prev.x, rec.y - prev.y)
        prev = rec
        if rec.v_true == 0.0:
            break
    return total


def _sustained_exceedance(log: SessionLog, limit: float) -> float:
    """Longest contiguous time span with |v_est - v_true| > limit."""
    dt = log.config.dt
    best = 0
    run = 0
    for rec in log.records:
        if abs(rec.v_est - rec.v_true) > limit:
            run += 1
            if run > best:
                best = run
        else:
            run = 0
    return best * dt


def compute_metrics(log: SessionLog,
                    reference: SessionLog | None = None) -> MetricsReport:
    """Quantify the run; deviations are measured against the benign
    reference path when one is provided (same seed, so the noise
    realizations cancel), else against the straight setpoint path."""
    if not log.records:
        raise ValueError("log has no records")
    if reference is not None:
        _require_compatible(log.config, reference.config)
        if len(reference.records) < len(log.records):
            raise ReferenceMismatch("reference log is shorter than the log")

    cfg = log.config
    v_set = cfg.setpoints.v_set
    heading_set = cfg.setpoints.heading_set
    records = log.records
    n = len(records)

    sq_v = 0.0
    max_est_err = 0.0
    max_heading = 0.0
    sq_disc = 0.0
    for rec in records:
        dv = rec.v_true - v_set
        sq_v += dv * dv
        est_err = abs(rec.v_est - rec.v_true)
        if est_err > max_est_err:
            max_est_err = est_err
        h_err = abs(wrap_angle(rec.heading - heading_set))
        if h_err > max_heading:
            max_heading = h_err
        disc = rec.v_imu - rec.v_wheel
        sq_disc += disc * disc

    if reference is not None:
        max_lat = max(math.hypot(r.x - ref.x, r.y - ref.y)
                      for r, ref in zip(records, reference.records))
    else:
        x0, y0 = records[0].x, records[0].y
        sin_h, cos_h = math.sin(heading_set), math.cos(heading_set)
        max_lat = max(abs(-sin_h * (r.x - x0) + cos_h * (r.y - y0))
                      for r in records)

    sq_jerk = 0.0
    for prev, rec in zip(records, records[1:]):
        jerk = (rec.a_true - prev.a_true) / cfg.dt
        sq_jerk += jerk * jerk
    jerk_rms = math.sqrt(sq_jerk / (n - 1)) if n > 1 else 0.0

    stop_dist = (stopping_distance(log)
                 if cfg.scenario_kind == "brake_test" else None)

    attacked = cfg.attack is not None or any(
        ev.kind == "attack_applied" for ev in log.events)
    if not attacked:
        outcome = "no_attack"
    else:
        th = cfg.thresholds
        effective = False
        if v_set > 0 and _sustained_exceedance(
                log, th.velocity_error_frac * v_set) >= th.sustain_s:
            effective = True
        if max_lat > th.lateral_m:
            effective = True
        if (cfg.scenario_kind == "brake_test" and reference is not None
                and stop_dist is not None):
            ref_stop = stopping_distance(reference)
            if stop_dist > th.stopping_inflation * ref_stop:
                effective = True
        outcome = "effective" if effective else "ineffective"

    return MetricsReport(
        velocity_rmse_vs_setpoint=math.sqrt(sq_v / n),
        max_velocity_est_error=max_est_err,
        max_lateral_deviation=max_lat,
        max_heading_error=max_heading,
        imu_wheel_discrepancy_rms=math.sqrt(sq_disc / n),
        jerk_rms=jerk_rms,
        stopping_distance=stop_dist,
        attack_success=outcome,
    )
