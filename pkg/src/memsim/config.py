"""Scenario configuration: one canonical JSON schema shared by the engine,
the gateway, and the CLI.

Validation collects every violated invariant with its field path instead
of stopping at the first, so clients can surface all problems at once.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from typing import Any

from .attack import AttackConfig
from .control import (AbsParams, ControllerConfig, FusionConfig, PidGains,
                      Setpoints)
from .sensors import EncoderParams, MemsParams
from .vehicle import VehicleParams

SCENARIO_KINDS = ("cruise", "brake_test")


class ValidationError(ValueError):
    """Carries the full list of (field, message) violations."""

    def __init__(self, violations: list[tuple[str, str]]):
        self.violations = violations
        super().__init__("; ".join(f"{f}: {m}" for f, m in violations))


@dataclass(frozen=True)
class SuccessThresholds:
    """Platform definition of an effective attack."""
    velocity_error_frac: float = 0.1   # of v_set, sustained
    sustain_s: float = 1.0
    lateral_m: float = 0.5
    stopping_inflation: float = 1.1    # vs benign reference stopping distance

    def validate(self) -> list[str]:
        problems = []
        for name in ("velocity_error_frac", "sustain_s", "lateral_m",
                     "stopping_inflation"):
            if not (getattr(self, name) > 0):
                problems.append(f"{name} must be > 0")
        return problems


@dataclass(frozen=True)
class ScenarioConfig:
    seed: int = 42
    dt: float = 0.001          # s; must equal 1/sensors.sample_rate
    duration: float = 30.0     # s
    scenario_kind: str = "cruise"
    vehicle: VehicleParams = VehicleParams()
    sensors: MemsParams = MemsParams()
    encoder: EncoderParams = EncoderParams()
    controller: ControllerConfig = ControllerConfig()
    setpoints: Setpoints = Setpoints()
    thresholds: SuccessThresholds = SuccessThresholds()
    attack: AttackConfig | None = None

    def validate(self) -> list[tuple[str, str]]:
        violations: list[tuple[str, str]] = []
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2 ** 64):
            violations.append(("seed", "must be an integer in [0, 2^64)"))
        if not (self.dt > 0):
            violations.append(("dt", "must be > 0"))
        if not (self.duration > 0 and math.isfinite(self.duration)):
            violations.append(("duration", "must be finite and > 0"))
        if self.scenario_kind not in SCENARIO_KINDS:
            violations.append(("scenario_kind",
                               f"must be one of {SCENARIO_KINDS}"))
        if self.dt > 0 and abs(self.dt * self.sensors.sample_rate - 1.0) > 1e-9:
            violations.append(("dt", "control tick is locked to the sensor "
                                     "rate: dt must equal 1/sample_rate"))
        for prefix, obj in (("vehicle", self.vehicle),
                            ("sensors", self.sensors),
                            ("encoder", self.encoder),
                            ("controller", self.controller),
                            ("setpoints", self.setpoints),
                            ("thresholds", self.thresholds)):
            violations += [(prefix, msg) for msg in obj.validate()]
        if self.attack is not None:
            violations += [("attack", msg) for msg in self.attack.validate()]
        return violations

    def require_valid(self) -> "ScenarioConfig":
        violations = self.validate()
        if violations:
            raise ValidationError(violations)
        return self

    def without_attack(self) -> "ScenarioConfig":
        return replace(self, attack=None)

    def digest(self) -> str:
        return hashlib.sha256(to_json(self).encode()).hexdigest()[:16]


def default_cruise(seed: int = 42, v_set_kmh: float = 50.0) -> ScenarioConfig:
    """Benign cruise at the given speed (km/h), full-scale defaults."""
    return ScenarioConfig(seed=seed,
                          setpoints=Setpoints(v_set=round(v_set_kmh / 3.6, 4)))


def default_brake_test(seed: int = 42, v0: float = 20.0,
                       duration: float = 12.0) -> ScenarioConfig:
    """Full-pressure brake test from v0 m/s; braking starts at t=0."""
    return ScenarioConfig(seed=seed, scenario_kind="brake_test",
                          duration=duration,
                          setpoints=Setpoints(v_set=v0))


# --- canonical JSON -------------------------------------------------------
#
# Field order below is the canonical wire order; digests and byte-identical
# round-trips depend on it. Infinite attack duration serializes as null.

def _attack_to_dict(cfg: AttackConfig) -> dict[str, Any]:
    return {
        "attacker_type": cfg.attacker_type,
        "carrier_freq": cfg.carrier_freq,
        "spl_at_source": cfg.spl_at_source,
        "distance": cfg.distance,
        "trigger_rate": cfg.trigger_rate,
        "duty": cfg.duty,
        "start_t": cfg.start_t,
        "duration": None if math.isinf(cfg.duration) else cfg.duration,
        "phase": cfg.phase,
    }


def attack_from_dict(data: dict[str, Any]) -> AttackConfig:
    if not isinstance(data, dict):
        raise ValidationError([("attack", "must be an object")])
    known = {"attacker_type", "carrier_freq", "spl_at_source", "distance",
             "trigger_rate", "duty", "start_t", "duration", "phase"}
    unknown = set(data) - known
    if unknown:
        raise ValidationError([("attack", f"unknown fields: {sorted(unknown)}")])
    defaults = AttackConfig()
    duration = data.get("duration", None)
    return AttackConfig(
        attacker_type=data.get("attacker_type", defaults.attacker_type),
        carrier_freq=data.get("carrier_freq", defaults.carrier_freq),
        spl_at_source=data.get("spl_at_source", defaults.spl_at_source),
        distance=data.get("distance", defaults.distance),
        trigger_rate=data.get("trigger_rate", defaults.trigger_rate),
        duty=data.get("duty", defaults.duty),
        start_t=data.get("start_t", defaults.start_t),
        duration=math.inf if duration is None else duration,
        phase=data.get("phase", defaults.phase),
    )


def to_dict(cfg: ScenarioConfig) -> dict[str, Any]:
    v, s, e = cfg.vehicle, cfg.sensors, cfg.encoder
    c = cfg.controller
    return {
        "seed": cfg.seed,
        "dt": cfg.dt,
        "duration": cfg.duration,
        "scenario_kind": cfg.scenario_kind,
        "vehicle": {
            "wheel_radius": v.wheel_radius,
            "track_width": v.track_width,
            "mass": v.mass,
            "max_accel": v.max_accel,
            "max_brake_decel": v.max_brake_decel,
            "mu_peak": v.mu_peak,
            "slip_lock_threshold": v.slip_lock_threshold,
        },
        "sensors": {
            "f_res_accel": s.f_res_accel,
            "f_res_gyro": s.f_res_gyro,
            "q_factor": s.q_factor,
            "sample_rate": s.sample_rate,
            "coupling_accel": s.coupling_accel,
            "coupling_gyro": s.coupling_gyro,
            "noise_std_accel": s.noise_std_accel,
            "noise_std_gyro": s.noise_std_gyro,
            "drift_rate_accel": s.drift_rate_accel,
            "axis_coupling": list(s.axis_coupling),
            "ticks_per_rev": e.ticks_per_rev,
        },
        "controller": {
            "speed_pid": _pid_to_dict(c.speed_pid),
            "heading_pid": _pid_to_dict(c.heading_pid),
            "fusion": {
                "alpha": c.fusion.alpha,
                "slip_threshold": c.fusion.slip_threshold,
                "fusion_enabled": c.fusion.fusion_enabled,
            },
            "abs": {
                "apply_rate": c.abs_params.apply_rate,
                "release_rate": c.abs_params.release_rate,
                "min_speed": c.abs_params.min_speed,
            },
        },
        "setpoints": {
            "v_set": cfg.setpoints.v_set,
            "heading_set": cfg.setpoints.heading_set,
        },
        "thresholds": {
            "velocity_error_frac": cfg.thresholds.velocity_error_frac,
            "sustain_s": cfg.thresholds.sustain_s,
            "lateral_m": cfg.thresholds.lateral_m,
            "stopping_inflation": cfg.thresholds.stopping_inflation,
        },
        "attack": None if cfg.attack is None else _attack_to_dict(cfg.attack),
    }


def _pid_to_dict(g: PidGains) -> dict[str, float]:
    return {"kp": g.kp, "ki": g.ki, "kd": g.kd,
            "output_min": g.output_min, "output_max": g.output_max}


def _pid_from_dict(data: dict[str, Any], fallback: PidGains) -> PidGains:
    return PidGains(
        kp=data.get("kp", fallback.kp),
        ki=data.get("ki", fallback.ki),
        kd=data.get("kd", fallback.kd),
        output_min=data.get("output_min", fallback.output_min),
        output_max=data.get("output_max", fallback.output_max),
    )


def from_dict(data: dict[str, Any]) -> ScenarioConfig:
    """Build a ScenarioConfig from parsed JSON; unknown sections or fields
    are rejected so typos never silently fall back to defaults."""
    if not isinstance(data, dict):
        raise ValidationError([("config", "must be a JSON object")])
    known = {"seed", "dt", "duration", "scenario_kind", "vehicle", "sensors",
             "controller", "setpoints", "thresholds", "attack"}
    unknown = set(data) - known
    if unknown:
        raise ValidationError([("config", f"unknown fields: {sorted(unknown)}")])

    base = ScenarioConfig()
    vehicle_d = data.get("vehicle", {})
    sensors_d = data.get("sensors", {})
    controller_d = data.get("controller", {})
    setpoints_d = data.get("setpoints", {})
    thresholds_d = data.get("thresholds", {})
    for name, section in (("vehicle", vehicle_d), ("sensors", sensors_d),
                          ("controller", controller_d),
                          ("setpoints", setpoints_d),
                          ("thresholds", thresholds_d)):
        if not isinstance(section, dict):
            raise ValidationError([(name, "must be an object")])

    vb = base.vehicle
    vehicle = VehicleParams(
        wheel_radius=vehicle_d.get("wheel_radius", vb.wheel_radius),
        track_width=vehicle_d.get("track_width", vb.track_width),
        mass=vehicle_d.get("mass", vb.mass),
        max_accel=vehicle_d.get("max_accel", vb.max_accel),
        max_brake_decel=vehicle_d.get("max_brake_decel", vb.max_brake_decel),
        mu_peak=vehicle_d.get("mu_peak", vb.mu_peak),
        slip_lock_threshold=vehicle_d.get("slip_lock_threshold",
                                          vb.slip_lock_threshold),
    )
    sb = base.sensors
    axis = sensors_d.get("axis_coupling", list(sb.axis_coupling))
    sensors = MemsParams(
        f_res_accel=sensors_d.get("f_res_accel", sb.f_res_accel),
        f_res_gyro=sensors_d.get("f_res_gyro", sb.f_res_gyro),
        q_factor=sensors_d.get("q_factor", sb.q_factor),
        sample_rate=sensors_d.get("sample_rate", sb.sample_rate),
        coupling_accel=sensors_d.get("coupling_accel", sb.coupling_accel),
        coupling_gyro=sensors_d.get("coupling_gyro", sb.coupling_gyro),
        noise_std_accel=sensors_d.get("noise_std_accel", sb.noise_std_accel),
        noise_std_gyro=sensors_d.get("noise_std_gyro", sb.noise_std_gyro),
        drift_rate_accel=sensors_d.get("drift_rate_accel", sb.drift_rate_accel),
        axis_coupling=tuple(axis),
    )
    encoder = EncoderParams(
        ticks_per_rev=sensors_d.get("ticks_per_rev",
                                    base.encoder.ticks_per_rev))
    cb = base.controller
    fusion_d = controller_d.get("fusion", {})
    abs_d = controller_d.get("abs", {})
    controller = ControllerConfig(
        speed_pid=_pid_from_dict(controller_d.get("speed_pid", {}), cb.speed_pid),
        heading_pid=_pid_from_dict(controller_d.get("heading_pid", {}),
                                   cb.heading_pid),
        fusion=FusionConfig(
            alpha=fusion_d.get("alpha", cb.fusion.alpha),
            slip_threshold=fusion_d.get("slip_threshold",
                                        cb.fusion.slip_threshold),
            fusion_enabled=fusion_d.get("fusion_enabled",
                                        cb.fusion.fusion_enabled),
        ),
        abs_params=AbsParams(
            apply_rate=abs_d.get("apply_rate", cb.abs_params.apply_rate),
            release_rate=abs_d.get("release_rate", cb.abs_params.release_rate),
            min_speed=abs_d.get("min_speed", cb.abs_params.min_speed),
        ),
        wheel_radius=vehicle.wheel_radius,
    )
    attack_d = data.get("attack", None)
    attack = None if attack_d is None else attack_from_dict(attack_d)

    return ScenarioConfig(
        seed=data.get("seed", base.seed),
        dt=data.get("dt", base.dt),
        duration=data.get("duration", base.duration),
        scenario_kind=data.get("scenario_kind", base.scenario_kind),
        vehicle=vehicle,
        sensors=sensors,
        encoder=encoder,
        controller=controller,
        setpoints=Setpoints(
            v_set=setpoints_d.get("v_set", base.setpoints.v_set),
            heading_set=setpoints_d.get("heading_set",
                                        base.setpoints.heading_set),
        ),
        thresholds=SuccessThresholds(
            velocity_error_frac=thresholds_d.get(
                "velocity_error_frac", base.thresholds.velocity_error_frac),
            sustain_s=thresholds_d.get("sustain_s", base.thresholds.sustain_s),
            lateral_m=thresholds_d.get("lateral_m", base.thresholds.lateral_m),
            stopping_inflation=thresholds_d.get(
                "stopping_inflation", base.thresholds.stopping_inflation),
        ),
        attack=attack,
    )


def to_json(cfg: ScenarioConfig) -> str:
    return json.dumps(to_dict(cfg), separators=(",", ":"))


def from_json(text: str) -> ScenarioConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError([("config", f"invalid JSON: {exc}")]) from exc
    return from_dict(data)
