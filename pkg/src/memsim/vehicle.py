"""Ground-truth kinematic model of the victim vehicle.

Pose advances by the exact constant-twist arc each step, so constant
(v, yaw_rate) inputs integrate a closed circle to machine precision.
Braking uses a piecewise-linear friction curve mu(slip) with a peak,
giving the ABS logic something to hold.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

GRAVITY = 9.81  # m/s^2


@dataclass(frozen=True)
class VehicleParams:
    wheel_radius: float = 0.3     # m
    track_width: float = 1.6      # m
    mass: float = 1500.0          # kg
    max_accel: float = 3.0        # m/s^2
    # Brake torque capability (expressed as wheel-surface decel) must beat
    # the tire limit mu_peak*g, or slip can never develop and wheels
    # cannot lock.
    max_brake_decel: float = 12.0  # m/s^2
    mu_peak: float = 0.9           # peak friction coefficient
    slip_lock_threshold: float = 0.15  # slip ratio at mu_peak

    def validate(self) -> list[str]:
        problems = []
        if not (self.wheel_radius > 0):
            problems.append("wheel_radius must be > 0")
        if not (self.track_width > 0):
            problems.append("track_width must be > 0")
        if not (self.mass > 0):
            problems.append("mass must be > 0")
        if not (self.max_accel > 0):
            problems.append("max_accel must be > 0")
        if not (self.max_brake_decel > 0):
            problems.append("max_brake_decel must be > 0")
        if not (0.0 < self.slip_lock_threshold < 1.0):
            problems.append("slip_lock_threshold must be in (0, 1)")
        if not (self.mu_peak > 0):
            problems.append("mu_peak must be > 0")
        return problems


# Small-scale preset for desk experiments; defaults above are full-scale car
# values matching km/h-range cruise speeds.
RC_SCALE_VEHICLE = VehicleParams(
    wheel_radius=0.05,
    track_width=0.5,
    mass=5.0,
    max_accel=2.0,
    max_brake_decel=4.0,
)


@dataclass(frozen=True)
class VehicleState:
    t: float = 0.0
    x: float = 0.0
    y: float = 0.0
    heading: float = 0.0       # rad, wrapped to (-pi, pi]
    v: float = 0.0             # longitudinal speed, m/s (never negative)
    yaw_rate: float = 0.0      # rad/s
    a_long: float = 0.0        # last applied longitudinal accel, m/s^2
    omega_wheel_left: float = 0.0   # rad/s
    omega_wheel_right: float = 0.0  # rad/s
    braking: bool = False


def wrap_angle(angle: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    wrapped = math.fmod(angle + math.pi, 2.0 * math.pi)
    if wrapped <= 0.0:
        wrapped += 2.0 * math.pi
    return wrapped - math.pi


def wheel_speeds(v: float, yaw_rate: float, params: VehicleParams) -> tuple[float, float]:
    """No-slip wheel angular speeds for a differential pair.

    omega_{l,r} = (v -/+ yaw_rate * track_width / 2) / wheel_radius
    """
    half_track = 0.5 * params.track_width
    omega_left = (v - yaw_rate * half_track) / params.wheel_radius
    omega_right = (v + yaw_rate * half_track) / params.wheel_radius
    return omega_left, omega_right


def _twist_coeffs(theta: float) -> tuple[float, float, float]:
    """Integrals over one step of the constant-twist flow.

    sinc_half = sinc(theta/2) so that dt*sinc_half*cos(h+theta/2) is the
    exact integral of cos(h + theta*u); A and B are the first-moment
    integrals int u*cos(theta*u) du and int u*sin(theta*u) du on [0,1].
    Taylor forms take over near 0 where the closed forms cancel.
    """
    if abs(theta) < 1e-4:
        t2 = theta * theta
        sinc_half = 1.0 - t2 / 24.0 + t2 * t2 / 1920.0
        a_coef = 0.5 - t2 / 8.0 + t2 * t2 / 144.0
        b_coef = theta / 3.0 - theta * t2 / 30.0
    else:
        half = 0.5 * theta
        sinc_half = math.sin(half) / half
        a_coef = (math.cos(theta) + theta * math.sin(theta) - 1.0) / (theta * theta)
        b_coef = (math.sin(theta) - theta * math.cos(theta)) / (theta * theta)
    return sinc_half, a_coef, b_coef


def _advance_pose(x: float, y: float, heading: float, v0: float, accel: float,
                  yaw_rate: float, dt: float) -> tuple[float, float, float]:
    """Exact pose update for one step of constant (accel, yaw_rate).

    Integrates x' = v(t) cos(h0 + yaw_rate*t), v(t) = v0 + accel*t in
    closed form, so steps compose exactly: two dt/2 steps equal one dt
    step, and a full circle closes to machine precision.
    """
    theta = yaw_rate * dt
    sinc_half, a_coef, b_coef = _twist_coeffs(theta)
    mid = heading + 0.5 * theta
    cos_h, sin_h = math.cos(heading), math.sin(heading)
    x += dt * (v0 * sinc_half * math.cos(mid)
               + accel * dt * (cos_h * a_coef - sin_h * b_coef))
    y += dt * (v0 * sinc_half * math.sin(mid)
               + accel * dt * (sin_h * a_coef + cos_h * b_coef))
    return x, y, wrap_angle(heading + theta)


def step_vehicle(state: VehicleState, a_long: float, yaw_rate: float,
                 dt: float, params: VehicleParams) -> VehicleState:
    """Advance the vehicle one step under an accel + yaw-rate command.

    Speed integrates as v + a_long*dt clamped at 0 (no reverse); the pose
    follows the exact constant-twist arc (radius v/yaw_rate, straight line
    in the zero-yaw limit).
    """
    if dt <= 0.0:
        raise ValueError("dt must be > 0")
    if not all(map(math.isfinite, (a_long, yaw_rate, dt, state.v, state.heading))):
        raise ValueError("non-finite input to step_vehicle")
    limit = max(params.max_accel, params.max_brake_decel)
    if abs(a_long) > limit + 1e-12:
        raise ValueError(f"a_long {a_long} exceeds +/-{limit}")

    v_new = state.v + a_long * dt
    if v_new < 0.0:
        # Clamp at standstill; the effective accel over the step shrinks.
        v_new = 0.0
    a_eff = (v_new - state.v) / dt

    x, y, heading = _advance_pose(state.x, state.y, state.heading,
                                  state.v, a_eff, yaw_rate, dt)
    omega_left, omega_right = wheel_speeds(v_new, yaw_rate, params)
    return VehicleState(
        t=state.t + dt,
        x=x, y=y, heading=heading,
        v=v_new,
        yaw_rate=yaw_rate,
        a_long=(v_new - state.v) / dt,
        omega_wheel_left=omega_left,
        omega_wheel_right=omega_right,
        braking=False,
    )


def friction_coefficient(slip: float, params: VehicleParams) -> float:
    """Piecewise-linear mu(slip): 0 at slip=0, mu_peak at the lock
    threshold, falling to 0.6*mu_peak at slip=1."""
    if slip <= 0.0:
        return 0.0
    peak_slip = params.slip_lock_threshold
    if slip <= peak_slip:
        return params.mu_peak * (slip / peak_slip)
    if slip >= 1.0:
        return 0.6 * params.mu_peak
    frac = (slip - peak_slip) / (1.0 - peak_slip)
    return params.mu_peak * (1.0 - 0.4 * frac)


def slip_ratio(v: float, omega_avg: float, wheel_radius: float) -> float:
    """Longitudinal slip (v - r*omega)/v, clamped to [0, 1]; 0 at rest."""
    if v <= 0.0:
        return 0.0
    ratio = (v - wheel_radius * omega_avg) / v
    return min(1.0, max(0.0, ratio))


def step_braking(state: VehicleState, brake_pressure: float, dt: float,
                 params: VehicleParams, yaw_rate: float = 0.0) -> VehicleState:
    """Advance one step with the wheels under brake torque.

    Brake torque decelerates the wheels at brake_pressure*max_brake_decel
    (expressed at the contact patch); the vehicle decelerates at mu(slip)*g
    from the friction curve. Wheels may lock under sustained full pressure.
    Wheels never spin faster than free rolling at the new speed.
    """
    if dt <= 0.0:
        raise ValueError("dt must be > 0")
    if not (0.0 <= brake_pressure <= 1.0):
        raise ValueError("brake_pressure must be within [0, 1]")
    if state.v < 0.0:
        raise ValueError("vehicle speed must be >= 0")

    r = params.wheel_radius
    omega_avg = 0.5 * (state.omega_wheel_left + state.omega_wheel_right)
    lam = slip_ratio(state.v, omega_avg, r)
    decel = friction_coefficient(lam, params) * GRAVITY

    v_new = state.v - decel * dt
    if v_new < 0.0:
        v_new = 0.0
    a_eff = (v_new - state.v) / dt

    x, y, heading = _advance_pose(state.x, state.y, state.heading,
                                  state.v, a_eff, yaw_rate, dt)

    # Wheel surface decel from brake torque, floored at lock (omega = 0),
    # capped at the no-slip speed so wheels never overspeed the chassis.
    wheel_decel = brake_pressure * params.max_brake_decel / r
    cap_left, cap_right = wheel_speeds(v_new, yaw_rate, params)
    omega_left = min(max(0.0, state.omega_wheel_left - wheel_decel * dt), cap_left)
    omega_right = min(max(0.0, state.omega_wheel_right - wheel_decel * dt), cap_right)

    return VehicleState(
        t=state.t + dt,
        x=x, y=y, heading=heading,
        v=v_new,
        yaw_rate=yaw_rate,
        a_long=(v_new - state.v) / dt,
        omega_wheel_left=omega_left,
        omega_wheel_right=omega_right,
        braking=brake_pressure > 0.0,
    )


def initial_state(v: float, params: VehicleParams, heading: float = 0.0) -> VehicleState:
    """Vehicle at rest-or-rolling start with no-slip wheel speeds."""
    omega_left, omega_right = wheel_speeds(v, 0.0, params)
    return VehicleState(v=v, heading=wrap_angle(heading),
                        omega_wheel_left=omega_left,
                        omega_wheel_right=omega_right)


def locked_wheel_state(v: float, params: VehicleParams) -> VehicleState:
    """Vehicle moving with wheels already locked (slip ratio 1)."""
    state = initial_state(v, params)
    return replace(state, omega_wheel_left=0.0, omega_wheel_right=0.0,
                   braking=True)
