// @vitest-environment jsdom
//
// Contract test: every numeric field the dashboard displays must match
// the recorded engine fixture byte-for-byte after unit conversion
// (km/h <-> m/s at factor 3.6). Expected strings are computed here,
// independently of the app's formatting helpers.

import { readFileSync } from "node:fs";
import { join } from "node:path";
import { beforeAll, describe, expect, it } from "vitest";

import { App } from "../src/app";
import type { Gateway } from "../src/api";
import type { MetricsReport, TelemetryTick } from "../src/types";

interface Fixture {
  config: { setpoints: { v_set: number } };
  frames: Array<{ event: string; payload: Record<string, number> }>;
}

const fixtureDir = join(__dirname, "..", "fixtures");
const telemetry = JSON.parse(
  readFileSync(join(fixtureDir, "telemetry.json"), "utf8")) as Fixture;
const metricsFixture = JSON.parse(
  readFileSync(join(fixtureDir, "metrics.json"), "utf8")) as MetricsReport;

const kmh = (ms: number) => (ms * 3.6).toFixed(2);

function makeApp(): App {
  document.body.innerHTML = '<div id="app"></div>';
  const stub = {
    metrics: async () => metricsFixture,
  } as unknown as Gateway;
  return new App(document.getElementById("app")!, stub);
}

describe("displayed numbers trace to the recorded fixture", () => {
  let app: App;

  beforeAll(() => {
    app = makeApp();
  });

  it("fixture sanity: speed setpoint is 50 km/h on the wire", () => {
    expect(telemetry.config.setpoints.v_set).toBe(13.89);
    expect(kmh(telemetry.config.setpoints.v_set)).toBe("50.00");
  });

  it("live readouts match every fixture tick byte-for-byte", () => {
    const ticks = telemetry.frames.filter(f => f.event === "tick");
    expect(ticks.length).toBeGreaterThan(100);
    const read = (key: string) =>
      document.querySelector(`[data-readout="${key}"]`)!.textContent;
    for (const frame of ticks) {
      const tick = frame.payload as unknown as TelemetryTick;
      app.updateReadouts(tick);
      expect(read("sim_time")).toBe(tick.t.toFixed(2));
      expect(read("v_true")).toBe(kmh(tick.v_true));
      expect(read("v_est")).toBe(kmh(tick.v_est));
      expect(read("v_wheel")).toBe(kmh(tick.v_wheel));
      expect(read("ax_imu")).toBe(tick.ax_imu.toFixed(3));
      expect(read("pressure")).toBe(tick.pressure.toFixed(3));
    }
  });

  it("metrics panel matches the fixture report byte-for-byte", async () => {
    await app.showMetrics(1);
    const cell = (key: string) =>
      document.querySelector(`[data-metric="${key}"]`)!.textContent;
    expect(cell("velocity_rmse_vs_setpoint"))
      .toBe(kmh(metricsFixture.velocity_rmse_vs_setpoint));
    expect(cell("max_velocity_est_error"))
      .toBe(kmh(metricsFixture.max_velocity_est_error));
    expect(cell("imu_wheel_discrepancy_rms"))
      .toBe(kmh(metricsFixture.imu_wheel_discrepancy_rms));
    expect(cell("max_lateral_deviation"))
      .toBe(metricsFixture.max_lateral_deviation.toFixed(2));
    expect(cell("max_heading_error"))
      .toBe(metricsFixture.max_heading_error.toFixed(4));
    expect(cell("jerk_rms")).toBe(metricsFixture.jerk_rms.toFixed(2));
    expect(cell("stopping_distance")).toBe("n/a");  // cruise run
    expect(cell("attack_success")).toBe(metricsFixture.attack_success);
    expect(cell("attack_success")).toBe("effective");
  });

  it("chart buffers hold exactly the streamed fixture values", () => {
    const fresh = makeApp();
    for (const frame of telemetry.frames) {
      fresh.onFrame(frame as never);
    }
    const ticks = telemetry.frames.filter(f => f.event === "tick");
    expect(fresh.buffers.vTrue.length).toBe(ticks.length);
    ticks.forEach((frame, i) => {
      expect(fresh.buffers.vTrue.vs[i]).toBe(frame.payload.v_true);
      expect(fresh.buffers.vEst.vs[i]).toBe(frame.payload.v_est);
      expect(fresh.buffers.vTrue.ts[i]).toBe(frame.payload.t);
    });
  });
});
