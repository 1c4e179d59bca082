"""The platform controller: fixed-timestep loop coordinating attacker,
sensors, victim controller, and plant, with deterministic replay.

Tick ordering is fixed: attacker pressure, then sensor sampling, then the
control tick, then the vehicle step. Every tick appends one record, so a
run is fully determined by (seed, config, attack event schedule).
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

from . import attack as attack_mod
from .attack import AttackConfig
from .config import ScenarioConfig, ValidationError
from .control import ControllerState, Setpoints, control_tick
from .sensors import SensorRng, sample_imu, sample_wheels
from .vehicle import initial_state, step_braking, step_vehicle


class SessionState(str, Enum):
    CREATED = "created"
    RUNNING = "running"
    PAUSED = "paused"
    COMPLETED = "completed"
    FAULTED = "faulted"


class LifecycleError(RuntimeError):
    """Raised for operations illegal in the session's current state."""


@dataclass(frozen=True)
class TickRecord:
    t: float
    x: float
    y: float
    heading: float
    v_true: float
    v_est: float
    v_wheel: float      # measured (quantized) wheel velocity
    ax_imu: float       # longitudinal IMU accel sample
    gyro_z: float
    cmd_a: float
    cmd_yaw: float
    brake: float
    pressure: float     # attack pressure at the sensor, Pa
    v_imu: float        # dead-reckoned IMU velocity (diagnostic)
    a_true: float       # effective accel over the previous step
    slip_ratio: float
    slipping: bool
    injected: bool


@dataclass(frozen=True)
class SessionEvent:
    t: float
    kind: str           # "attack_applied" | "faulted" | ...
    detail: dict


@dataclass
class SessionLog:
    config: ScenarioConfig
    records: list[TickRecord] = field(default_factory=list)
    events: list[SessionEvent] = field(default_factory=list)
    faulted_tick: Optional[int] = None


class Session:
    """One deterministic simulation run. Single-threaded by contract: all
    mutation goes through run()/apply_attack() on the owning thread."""

    def __init__(self, session_id: int, cfg: ScenarioConfig):
        cfg.require_valid()
        self.id = session_id
        self.config = cfg
        self.state = SessionState.CREATED
        self.log = SessionLog(config=cfg)

        self._dt = cfg.dt
        self._n_ticks = math.floor(cfg.duration / cfg.dt + 1e-9)
        self._k = 0  # next tick index to process

        v0 = cfg.setpoints.v_set if cfg.scenario_kind == "brake_test" else 0.0
        self._vehicle = initial_state(v0, cfg.vehicle)
        self._controller = ControllerState()
        self._ctrl_cfg = replace(cfg.controller,
                                 wheel_radius=cfg.vehicle.wheel_radius)
        self._rng = SensorRng(cfg.seed)
        self._attack: AttackConfig | None = cfg.attack
        self._pressure_fn = (attack_mod.waveform(cfg.attack)
                             if cfg.attack is not None else None)
        self._carrier = cfg.attack.carrier_freq if cfg.attack else 0.0
        self._braking_scenario = cfg.scenario_kind == "brake_test"

    # -- observers ---------------------------------------------------------

    @property
    def sim_time(self) -> float:
        return max(0, self._k - 1) * self._dt

    @property
    def tick_count(self) -> int:
        return len(self.log.records)

    @property
    def active_attack(self) -> AttackConfig | None:
        return self._attack

    # -- commands ----------------------------------------------------------

    def apply_attack(self, cfg: AttackConfig) -> AttackConfig:
        """Swap in an attack at the next tick boundary. An unset start time
        defaults to the next sample instant; exactly one attack is active
        at a time."""
        if self.state in (SessionState.COMPLETED, SessionState.FAULTED):
            raise LifecycleError(f"cannot attack a {self.state.value} session")
        problems = cfg.validate()
        if problems:
            raise ValidationError([("attack", p) for p in problems])
        effective_t = self._k * self._dt
        if self.state != SessionState.CREATED and cfg.start_t <= 0.0:
            cfg = replace(cfg, start_t=effective_t)
        self._attack = cfg
        self._pressure_fn = attack_mod.waveform(cfg)
        self._carrier = cfg.carrier_freq
        self.log.events.append(SessionEvent(
            t=effective_t, kind="attack_applied",
            detail={"carrier_freq": cfg.carrier_freq,
                    "spl_at_source": cfg.spl_at_source,
                    "attacker_type": cfg.attacker_type,
                    "start_t": cfg.start_t}))
        return cfg

    def run(self, until_t: float | None = None) -> SessionState:
        """Advance tick by tick until until_t (or the configured duration).
        Pausing and resuming never changes the trajectory."""
        if self.state in (SessionState.COMPLETED, SessionState.FAULTED):
            raise LifecycleError(f"cannot run a {self.state.value} session")
        limit = self._n_ticks if until_t is None else min(
            self._n_ticks, math.floor(until_t / self._dt + 1e-9))
        self.state = SessionState.RUNNING
        while self._k <= limit:
            self._guarded_step()
            if self.state == SessionState.FAULTED:
                return self.state
        if self._k > self._n_ticks:
            self.state = SessionState.COMPLETED
        else:
            self.state = SessionState.PAUSED
        return self.state

    def step_chunk(self, max_ticks: int) -> SessionState:
        """Advance up to max_ticks ticks; used by hosts that interleave
        commands with simulation work."""
        if self.state in (SessionState.COMPLETED, SessionState.FAULTED):
            raise LifecycleError(f"cannot run a {self.state.value} session")
        self.state = SessionState.RUNNING
        limit = min(self._k + max_ticks - 1, self._n_ticks)
        while self._k <= limit:
            self._guarded_step()
            if self.state == SessionState.FAULTED:
                return self.state
        if self._k > self._n_ticks:
            self.state = SessionState.COMPLETED
        return self.state

    # -- core loop ---------------------------------------------------------

    def _guarded_step(self) -> None:
        """One tick with divergence capture: a non-finite value anywhere in
        the pipeline marks the session Faulted instead of raising."""
        k = self._k
        try:
            self._step_once()
        except (ValueError, OverflowError, FloatingPointError) as exc:
            self.state = SessionState.FAULTED
            self.log.faulted_tick = k
            self.log.events.append(SessionEvent(
                t=k * self._dt, kind="faulted",
                detail={"tick": k, "error": str(exc)}))
            self._k = k + 1

    def _step_once(self) -> None:
        k = self._k
        t = k * self._dt
        cfg = self.config
        vehicle = self._vehicle

        # 1. attacker
        pressure = self._pressure_fn(t) if self._pressure_fn is not None else 0.0

        # 2. sensors (true kinematics are the effective values over the
        #    step that just landed on t_k)
        imu = sample_imu(vehicle.a_long, vehicle.v * vehicle.yaw_rate,
                         vehicle.yaw_rate, pressure, self._carrier,
                         cfg.sensors, k, self._rng)
        wheels = sample_wheels(vehicle, cfg.encoder, cfg.vehicle,
                               cfg.sensors.sample_rate, k)

        # 3. controller
        ctrl, diag = control_tick(self._ctrl_cfg, self._controller,
                                  cfg.setpoints, imu, wheels, self._dt,
                                  braking=self._braking_scenario,
                                  brake_request=1.0 if self._braking_scenario else 0.0)
        self._controller = ctrl

        record = TickRecord(
            t=t, x=vehicle.x, y=vehicle.y, heading=vehicle.heading,
            v_true=vehicle.v, v_est=ctrl.v_est, v_wheel=diag.v_wheel,
            ax_imu=imu.accel[0], gyro_z=imu.gyro_z,
            cmd_a=ctrl.cmd_a_long, cmd_yaw=ctrl.cmd_yaw_rate,
            brake=ctrl.brake_pressure, pressure=pressure,
            v_imu=diag.v_imu, a_true=vehicle.a_long,
            slip_ratio=diag.slip_ratio, slipping=diag.slipping,
            injected=imu.injected,
        )
        self.log.records.append(record)

        if not self._finite_record(record):
            self.state = SessionState.FAULTED
            self.log.faulted_tick = k
            self.log.events.append(SessionEvent(
                t=t, kind="faulted", detail={"tick": k}))
            self._k = k + 1
            return

        # 4. plant (the final record has no step after it)
        if k < self._n_ticks:
            if self._braking_scenario:
                self._vehicle = step_braking(vehicle, ctrl.brake_pressure,
                                             self._dt, cfg.vehicle,
                                             yaw_rate=ctrl.cmd_yaw_rate)
            else:
                self._vehicle = step_vehicle(vehicle, ctrl.cmd_a_long,
                                             ctrl.cmd_yaw_rate, self._dt,
                                             cfg.vehicle)
        self._k = k + 1

    @staticmethod
    def _finite_record(record: TickRecord) -> bool:
        return all(map(math.isfinite, (
            record.x, record.y, record.heading, record.v_true, record.v_est,
            record.ax_imu, record.gyro_z, record.cmd_a, record.cmd_yaw,
            record.brake, record.pressure)))


class Engine:
    """Owns sessions; ids are unique and strictly increasing."""

    def __init__(self):
        self._lock = threading.Lock()
        self._next_id = 1
        self._sessions: dict[int, Session] = {}

    def create_session(self, cfg: ScenarioConfig) -> Session:
        cfg.require_valid()
        with self._lock:
            session_id = self._next_id
            self._next_id += 1
            session = Session(session_id, cfg)
            self._sessions[session_id] = session
            return session

    def get(self, session_id: int) -> Session:
        with self._lock:
            if session_id not in self._sessions:
                raise KeyError(f"no session {session_id}")
            return self._sessions[session_id]

    def all_sessions(self) -> list[Session]:
        with self._lock:
            return list(self._sessions.values())

    def reset(self, session_id: int) -> Session:
        """Re-create a session from its frozen config (same id, same seed);
        live attack events are discarded."""
        with self._lock:
            if session_id not in self._sessions:
                raise KeyError(f"no session {session_id}")
            old = self._sessions[session_id]
            fresh = Session(session_id, old.config)
            self._sessions[session_id] = fresh
            return fresh


def run_scenario(cfg: ScenarioConfig) -> SessionLog:
    """Convenience: run a config to completion and return its log."""
    session = Session(0, cfg)
    session.run()
    return session.log
