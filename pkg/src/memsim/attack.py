"""Acoustic attacker: pressure waveform at the sensor from user parameters.

An internal attacker (multimedia speaker rigidly coupled to the chassis)
delivers its source pressure directly; an external one is attenuated by
the inverse-distance law. Burst gating chops the carrier at trigger_rate
bursts per second with the given duty fraction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

P_REF = 20e-6            # Pa, SPL reference
REFERENCE_DISTANCE = 1.0  # m, distance at which SPL is specified
MIN_DISTANCE = 0.1        # m, attenuation floor for external attackers
SPL_MIN = 40.0
SPL_MAX = 140.0

ATTACKER_TYPES = ("internal", "external")


@dataclass(frozen=True)
class AttackConfig:
    attacker_type: str = "internal"
    carrier_freq: float = 5000.0   # Hz
    spl_at_source: float = 110.0   # dB re 20 uPa
    distance: float = 1.0          # m, external only
    trigger_rate: float = 0.0      # bursts/s; 0 = continuous
    duty: float = 0.5              # active fraction of each burst period
    start_t: float = 0.0           # s
    duration: float = math.inf     # s
    # Default quarter-cycle phase so a DC-aliased carrier samples at its
    # full amplitude instead of at the sine's zero crossing.
    phase: float = math.pi / 2     # rad

    def validate(self) -> list[str]:
        problems = []
        if self.attacker_type not in ATTACKER_TYPES:
            problems.append(f"attacker_type must be one of {ATTACKER_TYPES}")
        if not (self.carrier_freq > 0):
            problems.append("carrier_freq must be > 0")
        if not (SPL_MIN <= self.spl_at_source <= SPL_MAX):
            problems.append(f"spl_at_source must be within [{SPL_MIN}, {SPL_MAX}] dB")
        if self.attacker_type == "external" and not (self.distance >= MIN_DISTANCE):
            problems.append(f"distance must be >= {MIN_DISTANCE} m")
        if not (self.trigger_rate >= 0):
            problems.append("trigger_rate must be >= 0")
        if not (0.0 < self.duty <= 1.0):
            problems.append("duty must be in (0, 1]")
        if not (self.start_t >= 0):
            problems.append("start_t must be >= 0")
        if not (self.duration > 0):
            problems.append("duration must be > 0")
        if not math.isfinite(self.phase):
            problems.append("phase must be finite")
        return problems

    def require_valid(self) -> "AttackConfig":
        problems = self.validate()
        if problems:
            raise ValueError("; ".join(problems))
        return self


def pressure_amplitude(cfg: AttackConfig) -> float:
    """Peak pressure at the sensor in Pa.

    Source pressure is 20e-6 * 10^(SPL/20); external attackers attenuate
    by reference_distance/distance (free-field 1/d), floored at 0.1 m.
    """
    cfg.require_valid()
    p_source = P_REF * 10.0 ** (cfg.spl_at_source / 20.0)
    if cfg.attacker_type == "external":
        return p_source * REFERENCE_DISTANCE / max(cfg.distance, MIN_DISTANCE)
    return p_source


def is_burst_active(cfg: AttackConfig, t: float) -> bool:
    """Burst gating: within the schedule, active iff the fractional part of
    (t - start_t) * trigger_rate is below the duty fraction."""
    if t < cfg.start_t or t > cfg.start_t + cfg.duration:
        return False
    if cfg.trigger_rate == 0.0:
        return True
    burst_phase = (t - cfg.start_t) * cfg.trigger_rate
    return burst_phase - math.floor(burst_phase) < cfg.duty


def pressure_at(cfg: AttackConfig, t: float) -> float:
    """Instantaneous pressure (Pa) at the sensor at time t."""
    if not is_burst_active(cfg, t):
        return 0.0
    amplitude = pressure_amplitude(cfg)
    return amplitude * math.sin(2.0 * math.pi * cfg.carrier_freq * t + cfg.phase)


def waveform(cfg: AttackConfig):
    """Precompiled pressure(t) closure for the simulation hot loop.

    Behaves identically to pressure_at but validates the config and
    resolves the amplitude once.
    """
    cfg.require_valid()
    amplitude = pressure_amplitude(cfg)
    omega = 2.0 * math.pi * cfg.carrier_freq
    start, end = cfg.start_t, cfg.start_t + cfg.duration
    rate, duty, phase = cfg.trigger_rate, cfg.duty, cfg.phase
    sin, floor = math.sin, math.floor

    def pressure(t: float) -> float:
        if t < start or t > end:
            return 0.0
        if rate != 0.0:
            burst_phase = (t - start) * rate
            if burst_phase - floor(burst_phase) >= duty:
                return 0.0
        return amplitude * sin(omega * t + phase)

    return pressure


def design_attack_frequency(sample_rate: float, f_res: float,
                            desired_alias: float) -> float:
    """Carrier that folds to desired_alias while sitting closest to the
    sensor resonance.

    Candidates are n*sample_rate +/- desired_alias for n >= 1; the one
    minimizing |f - f_res| wins, ties resolved toward the smaller carrier.
    """
    if sample_rate <= 0 or f_res <= 0:
        raise ValueError("sample_rate and f_res must be > 0")
    if not (0.0 <= desired_alias <= sample_rate / 2.0):
        raise ValueError("desired_alias must be within [0, sample_rate/2]")
    n_max = max(2, math.ceil(f_res / sample_rate) + 2)
    candidates = set()
    for n in range(1, n_max + 1):
        candidates.add(n * sample_rate + desired_alias)
        if n * sample_rate - desired_alias > 0:
            candidates.add(n * sample_rate - desired_alias)
    return min(candidates, key=lambda f: (abs(f - f_res), f))
