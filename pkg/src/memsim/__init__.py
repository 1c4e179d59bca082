"""memsim: deterministic closed-loop simulation of acoustic injection
attacks on MEMS inertial sensors in a speed/heading-controlled vehicle."""

from .attack import (AttackConfig, design_attack_frequency, pressure_amplitude,
                     pressure_at)
from .config import (ScenarioConfig, SuccessThresholds, ValidationError,
                     default_brake_test, default_cruise, from_dict, from_json,
                     to_dict, to_json)
from .control import (AbsParams, ControllerConfig, FusionConfig, PidGains,
                      PidState, Setpoints, abs_modulate, control_tick,
                      detect_slip, fuse_velocity, pid_step)
from .logio import export_csv, export_json, export_log, parse_json_log
from .metrics import MetricsReport, ReferenceMismatch, compute_metrics
from .sensors import (EncoderParams, ImuSample, MemsParams, SensorRng,
                      WheelSample, alias_frequency, integrate_imu_velocity,
                      resonance_gain, sample_imu, sample_wheels)
from .session import (Engine, LifecycleError, Session, SessionLog,
                      SessionState, TickRecord, run_scenario)
from .vehicle import (RC_SCALE_VEHICLE, VehicleParams, VehicleState,
                      friction_coefficient, initial_state, step_braking,
                      step_vehicle, wheel_speeds, wrap_angle)

__version__ = "0.1.0"
