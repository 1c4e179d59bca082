"""MEMS IMU and wheel-encoder models.

The IMU is a second-order resonator driven by acoustic pressure: an
out-of-band carrier is scaled by the resonance gain, linearly coupled
into the proof mass, and sampled with no anti-alias filter, so aliasing
emerges from the sampling instants alone. The wheel encoder is ground
truth up to quantization.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .vehicle import VehicleParams, VehicleState


@dataclass(frozen=True)
class MemsParams:
    f_res_accel: float = 5200.0    # Hz
    f_res_gyro: float = 8100.0     # Hz
    q_factor: float = 20.0
    sample_rate: float = 1000.0    # Hz (ADC rate; also the control tick rate)
    coupling_accel: float = 0.05   # (m/s^2)/Pa
    coupling_gyro: float = 0.001   # (rad/s)/Pa
    noise_std_accel: float = 0.02  # m/s^2
    noise_std_gyro: float = 0.001  # rad/s
    # Deterministic bias ramp. Small enough that open-loop dead reckoning
    # over a scenario stays below the attack-success velocity threshold,
    # so drift alone never classifies as an attack.
    drift_rate_accel: float = 0.001  # (m/s^2)/s
    # Unit vector distributing injection across (longitudinal, lateral,
    # vertical); defaults target the longitudinal accelerometer axis.
    axis_coupling: tuple[float, float, float] = (1.0, 0.0, 0.0)

    def validate(self) -> list[str]:
        problems = []
        if not (self.f_res_accel > 0):
            problems.append("f_res_accel must be > 0")
        if not (self.f_res_gyro > 0):
            problems.append("f_res_gyro must be > 0")
        if not (self.q_factor > 0.5):
            problems.append("q_factor must be > 0.5")
        if not (self.sample_rate > 0):
            problems.append("sample_rate must be > 0")
        for name in ("coupling_accel", "coupling_gyro",
                     "noise_std_accel", "noise_std_gyro"):
            if getattr(self, name) < 0:
                problems.append(f"{name} must be >= 0")
        norm = math.sqrt(sum(c * c for c in self.axis_coupling))
        if abs(norm - 1.0) > 1e-9:
            problems.append("axis_coupling must be a unit vector")
        return problems


@dataclass(frozen=True)
class EncoderParams:
    # Tick count 0 disables quantization (exact readout, for tests).
    ticks_per_rev: int = 4096

    def validate(self) -> list[str]:
        if self.ticks_per_rev < 0:
            return ["ticks_per_rev must be >= 0"]
        return []


@dataclass(frozen=True)
class ImuSample:
    t: float
    accel: tuple[float, float, float]  # (longitudinal, lateral, vertical) m/s^2
    gyro_z: float                      # rad/s
    injected: bool = False             # diagnostic only; hidden from the controller


@dataclass(frozen=True)
class WheelSample:
    t: float
    omega_left: float        # rad/s, quantized
    omega_right: float       # rad/s, quantized
    v_ground_truth: float    # m/s, pre-quantization


_CHANNELS = ("accel_long", "accel_lat", "accel_vert", "gyro_z")


def _channel_entropy(name: str) -> int:
    digest = hashlib.sha256(name.encode()).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass
class SensorRng:
    """One named noise substream per sensor channel.

    Streams are derived independently from (seed, channel name), so adding
    a channel never perturbs the draws of existing ones.
    """
    seed: int
    _gens: dict[str, np.random.Generator] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for name in _CHANNELS:
            ss = np.random.SeedSequence(entropy=(self.seed, _channel_entropy(name)))
            self._gens[name] = np.random.Generator(np.random.PCG64(ss))

    def normal(self, channel: str, std: float) -> float:
        if std == 0.0:
            # Keep the stream position advancing so enabling noise never
            # shifts other channels, but skip the multiply.
            self._gens[channel].standard_normal()
            return 0.0
        return std * float(self._gens[channel].standard_normal())


def resonance_gain(f: float, f_res: float, q: float) -> float:
    """|H(f)| of a unit-DC-gain second-order resonator.

    |H| = 1 / sqrt((1 - r^2)^2 + (r/q)^2), r = f/f_res. Equals 1 at DC
    and q at resonance.
    """
    if f < 0 or f_res <= 0 or q <= 0:
        raise ValueError("resonance_gain requires f >= 0, f_res > 0, q > 0")
    r = f / f_res
    return 1.0 / math.sqrt((1.0 - r * r) ** 2 + (r / q) ** 2)


def alias_frequency(f: float, sample_rate: float) -> float:
    """Frequency that a carrier f folds to when sampled at sample_rate."""
    if f < 0 or sample_rate <= 0:
        raise ValueError("alias_frequency requires f >= 0, sample_rate > 0")
    return abs(f - sample_rate * round(f / sample_rate))


def sample_imu(true_a_long: float, true_a_lat: float, true_yaw_rate: float,
               pressure: float, carrier_freq: float,
               params: MemsParams, k: int, rng: SensorRng) -> ImuSample:
    """One IMU sample at t_k = k/sample_rate.

    Each accel axis reads true value + bias ramp + noise + injected term;
    the injected term is the acoustic pressure at t_k scaled by the
    resonance gain at the carrier and the linear coupling, split across
    axes by axis_coupling. gyro_z is analogous with its own resonance.
    """
    if k < 0:
        raise ValueError("sample index must be >= 0")
    if not math.isfinite(pressure):
        raise ValueError("non-finite acoustic pressure")
    t = k / params.sample_rate

    inj_accel = 0.0
    inj_gyro = 0.0
    if pressure != 0.0:
        gain_a = resonance_gain(carrier_freq, params.f_res_accel, params.q_factor)
        gain_g = resonance_gain(carrier_freq, params.f_res_gyro, params.q_factor)
        inj_accel = params.coupling_accel * gain_a * pressure
        inj_gyro = params.coupling_gyro * gain_g * pressure

    bias = params.drift_rate_accel * t
    ax, ay, az = params.axis_coupling
    accel = (
        true_a_long + bias + rng.normal("accel_long", params.noise_std_accel) + inj_accel * ax,
        true_a_lat + bias + rng.normal("accel_lat", params.noise_std_accel) + inj_accel * ay,
        bias + rng.normal("accel_vert", params.noise_std_accel) + inj_accel * az,
    )
    gyro_z = true_yaw_rate + rng.normal("gyro_z", params.noise_std_gyro) + inj_gyro
    return ImuSample(t=t, accel=accel, gyro_z=gyro_z, injected=pressure != 0.0)


def quantize_omega(omega: float, ticks_per_rev: int) -> float:
    """Snap an angular speed to the encoder grid of 2*pi/ticks_per_rev rad/s.

    Models a period-measuring encoder: resolution is one tick angle per
    second, independent of how fast the ADC polls it. ticks_per_rev = 0 is
    the exact pass-through used by tests.
    """
    if ticks_per_rev == 0:
        return omega
    quantum = 2.0 * math.pi / ticks_per_rev
    return round(omega / quantum) * quantum


def sample_wheels(state: VehicleState, encoder: EncoderParams,
                  vehicle: VehicleParams, sample_rate: float, k: int) -> WheelSample:
    """One wheel-speed sample at t_k; omega per wheel is quantized, the
    ground-truth velocity is recorded before quantization."""
    if encoder.ticks_per_rev < 0:
        raise ValueError("ticks_per_rev must be >= 0")
    t = k / sample_rate
    v_truth = vehicle.wheel_radius * 0.5 * (state.omega_wheel_left +
                                            state.omega_wheel_right)
    return WheelSample(
        t=t,
        omega_left=quantize_omega(state.omega_wheel_left, encoder.ticks_per_rev),
        omega_right=quantize_omega(state.omega_wheel_right, encoder.ticks_per_rev),
        v_ground_truth=v_truth,
    )


def integrate_imu_velocity(prev_v_est: float, accel_long: float, dt: float) -> float:
    """Open-loop dead reckoning; drift accumulates by design."""
    if dt <= 0.0:
        raise ValueError("dt must be > 0")
    return prev_v_est + accel_long * dt
