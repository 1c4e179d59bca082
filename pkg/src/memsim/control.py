"""The victim's controller stack.

Speed and heading PID loops run on IMU-derived estimates; a complementary
filter pulls the drifting IMU velocity back onto wheel odometry. During
braking the wheels are untrusted: the velocity reference dead-reckons on
the IMU alone so slip can be detected by comparing the two sources, and a
rate-limited bang-bang ABS modulates brake pressure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .sensors import ImuSample, WheelSample, integrate_imu_velocity
from .vehicle import wrap_angle


@dataclass(frozen=True)
class PidGains:
    kp: float = 0.0
    ki: float = 0.0
    kd: float = 0.0
    output_min: float = -1.0
    output_max: float = 1.0

    def validate(self) -> list[str]:
        problems = []
        if not (self.output_min < self.output_max):
            problems.append("output_min must be < output_max")
        for name in ("kp", "ki", "kd"):
            g = getattr(self, name)
            if not (math.isfinite(g) and g >= 0):
                problems.append(f"{name} must be finite and >= 0")
        return problems


@dataclass(frozen=True)
class PidState:
    integral: float = 0.0
    prev_error: float = 0.0


def pid_step(gains: PidGains, state: PidState, setpoint: float,
             measurement: float, dt: float) -> tuple[float, PidState]:
    """One PID update with conditional anti-windup.

    The integral only accumulates when the unclamped output stays within
    bounds, or when the error is pulling the output back inside them.
    """
    if dt <= 0.0:
        raise ValueError("dt must be > 0")
    error = setpoint - measurement
    derivative = (error - state.prev_error) / dt

    integral = state.integral + error * dt
    raw = gains.kp * error + gains.ki * integral + gains.kd * derivative
    if (raw > gains.output_max and error > 0) or (raw < gains.output_min and error < 0):
        # Saturated and the error would wind the integral further out.
        integral = state.integral
        raw = gains.kp * error + gains.ki * integral + gains.kd * derivative
    command = min(gains.output_max, max(gains.output_min, raw))
    return command, PidState(integral=integral, prev_error=error)


@dataclass(frozen=True)
class FusionConfig:
    alpha: float = 0.98          # weight on wheel-speed velocity
    slip_threshold: float = 0.15
    fusion_enabled: bool = True

    def validate(self) -> list[str]:
        problems = []
        if not (0.0 <= self.alpha <= 1.0):
            problems.append("alpha must be within [0, 1]")
        if not (self.slip_threshold > 0):
            problems.append("slip_threshold must be > 0")
        return problems


@dataclass(frozen=True)
class AbsParams:
    # Full pressure in ~0.12 s and a release twice as fast: hydraulic-rate
    # ballpark, quick enough that the engagement transient costs little
    # stopping distance.
    apply_rate: float = 8.0     # pressure fraction per second toward request
    release_rate: float = 16.0  # pressure fraction per second while slipping
    min_speed: float = 1.0      # m/s; below this the ABS stops modulating

    def validate(self) -> list[str]:
        problems = []
        if not (self.apply_rate > 0):
            problems.append("apply_rate must be > 0")
        if not (self.release_rate > 0):
            problems.append("release_rate must be > 0")
        if not (self.min_speed >= 0):
            problems.append("min_speed must be >= 0")
        return problems


def fuse_velocity(v_imu: float, v_wheel: float, cfg: FusionConfig) -> float:
    """Complementary blend alpha*v_wheel + (1-alpha)*v_imu; passes the IMU
    estimate through unchanged when fusion is disabled."""
    if not (math.isfinite(v_imu) and math.isfinite(v_wheel)):
        raise ValueError("non-finite velocity input")
    if not cfg.fusion_enabled:
        return v_imu
    return cfg.alpha * v_wheel + (1.0 - cfg.alpha) * v_imu


def detect_slip(v_est_imu: float, v_wheel: float,
                cfg: FusionConfig) -> tuple[bool, float]:
    """Slip from the IMU/wheel discrepancy, with a 0.1 m/s floor on the
    denominator so near-standstill readings stay bounded."""
    if v_est_imu < 0.0:
        raise ValueError("v_est_imu must be >= 0")
    ratio = (v_est_imu - v_wheel) / max(v_est_imu, 0.1)
    return ratio > cfg.slip_threshold, ratio


def abs_modulate(current: float, requested: float, slipping: bool,
                 dt: float, params: AbsParams) -> float:
    """Rate-limited bang-bang: bleed pressure while slipping, otherwise
    ramp toward the requested pressure."""
    if not (0.0 <= requested <= 1.0):
        raise ValueError("requested pressure must be within [0, 1]")
    if slipping:
        pressure = current - params.release_rate * dt
    else:
        step = params.apply_rate * dt
        pressure = current + min(step, max(-step, requested - current))
    return min(1.0, max(0.0, pressure))


@dataclass(frozen=True)
class ControllerConfig:
    # Speed loop tuned critically damped (zeta=1, wn=1 rad/s) so a
    # saturated ramp to the setpoint settles well inside a few seconds.
    speed_pid: PidGains = PidGains(kp=2.0, ki=1.0, kd=0.0,
                                   output_min=-3.0, output_max=3.0)
    heading_pid: PidGains = PidGains(kp=2.0, ki=0.0, kd=0.1,
                                     output_min=-1.0, output_max=1.0)
    fusion: FusionConfig = FusionConfig()
    abs_params: AbsParams = AbsParams()
    wheel_radius: float = 0.3  # m, for wheel odometry

    def validate(self) -> list[str]:
        problems = []
        problems += [f"speed_pid: {p}" for p in self.speed_pid.validate()]
        problems += [f"heading_pid: {p}" for p in self.heading_pid.validate()]
        problems += [f"fusion: {p}" for p in self.fusion.validate()]
        problems += [f"abs: {p}" for p in self.abs_params.validate()]
        if not (self.wheel_radius > 0):
            problems.append("wheel_radius must be > 0")
        return problems


@dataclass(frozen=True)
class ControllerState:
    v_est: float = 0.0
    heading_est: float = 0.0
    speed_pid: PidState = PidState()
    heading_pid: PidState = PidState()
    brake_pressure: float = 0.0
    cmd_a_long: float = 0.0
    cmd_yaw_rate: float = 0.0
    slipping: bool = False
    initialized: bool = False


@dataclass(frozen=True)
class ControlDiagnostics:
    v_imu: float = 0.0
    v_wheel: float = 0.0
    slip_ratio: float = 0.0
    slipping: bool = False
    sample_held: bool = False


@dataclass(frozen=True)
class Setpoints:
    v_set: float = 13.89       # m/s
    heading_set: float = 0.0   # rad

    def validate(self) -> list[str]:
        problems = []
        if not (self.v_set >= 0):
            problems.append("v_set must be >= 0")
        if not math.isfinite(self.heading_set):
            problems.append("heading_set must be finite")
        return problems


def control_tick(cfg: ControllerConfig, state: ControllerState,
                 setpoints: Setpoints, imu: ImuSample | None,
                 wheels: WheelSample | None, dt: float,
                 braking: bool = False,
                 brake_request: float = 0.0,
                 ) -> tuple[ControllerState, ControlDiagnostics]:
    """One controller tick: estimate velocity and heading, run both PID
    loops, and modulate brake pressure when a braking request is active.

    Missing samples hold the previous commands for one tick and flag the
    diagnostic.
    """
    if imu is None or wheels is None:
        return state, ControlDiagnostics(v_imu=state.v_est, v_wheel=state.v_est,
                                         sample_held=True)

    v_wheel = cfg.wheel_radius * 0.5 * (wheels.omega_left + wheels.omega_right)

    if not state.initialized:
        # Anchor dead reckoning to the first wheel reading when trusted.
        prev_v_est = v_wheel if cfg.fusion.fusion_enabled else 0.0
    else:
        prev_v_est = state.v_est

    v_imu = integrate_imu_velocity(prev_v_est, imu.accel[0], dt)
    v_imu = max(0.0, v_imu)

    slipping = False
    slip = 0.0
    if braking and brake_request > 0.0:
        # Wheels are untrusted under brake torque: the slip reference is
        # the IMU dead-reckoned velocity, never re-anchored to the wheels.
        v_est = v_imu
        slipping, slip = detect_slip(v_imu, v_wheel, cfg.fusion)
    else:
        v_est = fuse_velocity(v_imu, v_wheel, cfg.fusion)

    heading_est = wrap_angle(state.heading_est + imu.gyro_z * dt)
    heading_error = wrap_angle(setpoints.heading_set - heading_est)
    # Feed the wrapped error as the measurement offset so the PID always
    # sees an error in (-pi, pi].
    cmd_yaw, heading_pid = pid_step(cfg.heading_pid, state.heading_pid,
                                    heading_error, 0.0, dt)

    if braking and brake_request > 0.0:
        modulate = v_est > cfg.abs_params.min_speed
        pressure = abs_modulate(state.brake_pressure, brake_request,
                                slipping and modulate, dt, cfg.abs_params)
        cmd_a = 0.0
        speed_pid = state.speed_pid
    else:
        pressure = 0.0
        cmd_a, speed_pid = pid_step(cfg.speed_pid, state.speed_pid,
                                    setpoints.v_set, v_est, dt)

    new_state = ControllerState(
        v_est=v_est,
        heading_est=heading_est,
        speed_pid=speed_pid,
        heading_pid=heading_pid,
        brake_pressure=pressure,
        cmd_a_long=cmd_a,
        cmd_yaw_rate=cmd_yaw,
        slipping=slipping,
        initialized=True,
    )
    diag = ControlDiagnostics(v_imu=v_imu, v_wheel=v_wheel,
                              slip_ratio=slip, slipping=slipping)
    return new_state, diag
