// Wire types for the gateway API. Field names match the canonical JSON
// schema exactly; the dashboard never re-derives simulation quantities.

export interface ScenarioConfigWire {
  seed: number;
  dt: number;
  duration: number;
  scenario_kind: "cruise" | "brake_test";
  vehicle?: Partial<VehicleWire>;
  sensors?: Partial<SensorsWire>;
  controller?: ControllerWire;
  setpoints?: { v_set?: number; heading_set?: number };
  thresholds?: Record<string, number>;
  attack?: AttackConfigWire | null;
}

export interface VehicleWire {
  wheel_radius: number;
  track_width: number;
  mass: number;
  max_accel: number;
  max_brake_decel: number;
  mu_peak: number;
  slip_lock_threshold: number;
}

export interface SensorsWire {
  f_res_accel: number;
  f_res_gyro: number;
  q_factor: number;
  sample_rate: number;
  coupling_accel: number;
  coupling_gyro: number;
  noise_std_accel: number;
  noise_std_gyro: number;
  drift_rate_accel: number;
  axis_coupling: number[];
  ticks_per_rev: number;
}

export interface ControllerWire {
  speed_pid?: Record<string, number>;
  heading_pid?: Record<string, number>;
  fusion?: { alpha?: number; slip_threshold?: number; fusion_enabled?: boolean };
  abs?: Record<string, number>;
}

export interface AttackConfigWire {
  attacker_type: "internal" | "external";
  carrier_freq: number;
  spl_at_source: number;
  distance?: number;
  trigger_rate: number;
  duty: number;
  start_t?: number;
  duration?: number | null;
  phase?: number;
}

export interface SessionView {
  id: number;
  state: "created" | "running" | "paused" | "completed" | "faulted";
  sim_time: number;
  tick_count: number;
  config_digest: string;
  faulted_tick: number | null;
  active_attack: {
    attacker_type: string;
    carrier_freq: number;
    spl_at_source: number;
    start_t: number;
  } | null;
  last_tick?: { t: number; v_true: number; v_est: number; x: number; y: number };
}

export interface TelemetryTick {
  t: number;
  x: number;
  y: number;
  heading: number;
  v_true: number;
  v_est: number;
  v_wheel: number;
  ax_imu: number;
  gyro_z: number;
  pressure: number;
  cmd_a: number;
  cmd_yaw: number;
  brake: number;
}

export interface TelemetryEvent {
  t: number;
  kind: string;
  detail: Record<string, unknown>;
}

export type TelemetryFrame =
  | { event: "snapshot"; payload: SessionView }
  | { event: "tick"; payload: TelemetryTick }
  | { event: "event"; payload: TelemetryEvent }
  | { event: "end"; payload: { state: string; tick_count?: number } };

export interface MetricsReport {
  velocity_rmse_vs_setpoint: number;
  max_velocity_est_error: number;
  max_lateral_deviation: number;
  max_heading_error: number;
  imu_wheel_discrepancy_rms: number;
  jerk_rms: number;
  stopping_distance: number | null;
  attack_success: "no_attack" | "ineffective" | "effective";
}

export interface Violation {
  field: string;
  message: string;
}

export interface LogExport {
  config: ScenarioConfigWire;
  events: TelemetryEvent[];
  faulted_tick: number | null;
  records: Array<Record<string, number | boolean>>;
}
