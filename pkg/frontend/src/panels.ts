// Pure rendering of the feedback panels: every number the operator reads
// is a formatted copy of a gateway response or telemetry frame. The
// contract tests pin these strings byte-for-byte against recorded
// fixtures.

import type { MetricsReport, TelemetryTick } from "./types";
import {
  formatAccel,
  formatJerk,
  formatMeters,
  formatPressure,
  formatRadians,
  formatSeconds,
  formatSpeed,
} from "./units";

export interface PanelRow {
  key: string;
  label: string;
  value: string;
}

export function metricsRows(report: MetricsReport): PanelRow[] {
  return [
    {
      key: "velocity_rmse_vs_setpoint",
      label: "Velocity RMSE vs setpoint (km/h)",
      value: formatSpeed(report.velocity_rmse_vs_setpoint),
    },
    {
      key: "max_velocity_est_error",
      label: "Max velocity estimate error (km/h)",
      value: formatSpeed(report.max_velocity_est_error),
    },
    {
      key: "max_lateral_deviation",
      label: "Max lateral deviation (m)",
      value: formatMeters(report.max_lateral_deviation),
    },
    {
      key: "max_heading_error",
      label: "Max heading error (rad)",
      value: formatRadians(report.max_heading_error),
    },
    {
      key: "imu_wheel_discrepancy_rms",
      label: "IMU/wheel discrepancy RMS (km/h)",
      value: formatSpeed(report.imu_wheel_discrepancy_rms),
    },
    {
      key: "jerk_rms",
      label: "Jerk RMS (m/s³)",
      value: formatJerk(report.jerk_rms),
    },
    {
      key: "stopping_distance",
      label: "Stopping distance (m)",
      value: report.stopping_distance === null ? "n/a"
        : formatMeters(report.stopping_distance),
    },
    {
      key: "attack_success",
      label: "Attack outcome",
      value: report.attack_success,
    },
  ];
}

export interface ReadoutValues {
  sim_time: string;
  v_true: string;
  v_est: string;
  v_wheel: string;
  ax_imu: string;
  pressure: string;
}

export function liveReadouts(tick: TelemetryTick): ReadoutValues {
  return {
    sim_time: formatSeconds(tick.t),
    v_true: formatSpeed(tick.v_true),
    v_est: formatSpeed(tick.v_est),
    v_wheel: formatSpeed(tick.v_wheel),
    ax_imu: formatAccel(tick.ax_imu),
    pressure: formatPressure(tick.pressure),
  };
}

export function deltaRows(report: MetricsReport,
                          reference: MetricsReport): PanelRow[] {
  const rows: PanelRow[] = [];
  const fields: Array<[keyof MetricsReport, string, (v: number) => string]> = [
    ["velocity_rmse_vs_setpoint", "Δ velocity RMSE (km/h)", formatSpeed],
    ["max_velocity_est_error", "Δ max est error (km/h)", formatSpeed],
    ["max_lateral_deviation", "Δ lateral deviation (m)", formatMeters],
    ["max_heading_error", "Δ heading error (rad)", formatRadians],
    ["imu_wheel_discrepancy_rms", "Δ discrepancy RMS (km/h)", formatSpeed],
    ["jerk_rms", "Δ jerk RMS (m/s³)", formatJerk],
  ];
  for (const [key, label, fmt] of fields) {
    const a = report[key];
    const b = reference[key];
    if (typeof a === "number" && typeof b === "number") {
      rows.push({ key: `delta_${key}`, label, value: fmt(a - b) });
    }
  }
  const stopA = report.stopping_distance;
  const stopB = reference.stopping_distance;
  if (stopA !== null && stopB !== null) {
    rows.push({ key: "delta_stopping_distance", label: "Δ stopping distance (m)",
                value: formatMeters(stopA - stopB) });
  }
  rows.push({ key: "verdict", label: "Verdict", value: report.attack_success });
  return rows;
}
