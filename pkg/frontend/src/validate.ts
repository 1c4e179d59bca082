// Client-side form validation mirroring the engine's config bounds, so a
// bad value is flagged before it ever reaches the gateway (which checks
// everything again anyway).

import type { AttackConfigWire } from "./types";

export interface FieldError {
  field: string;
  message: string;
}

export interface ScenarioForm {
  speedKmh: number;
  headingDeg: number;
  durationS: number;
  seed: number;
  dt: number;
  sampleRate: number;
  fusionEnabled: boolean;
  scenarioKind: "cruise" | "brake_test";
  ticksPerRev: number;
}

export const SPL_MIN = 40;
export const SPL_MAX = 140;
export const MIN_DISTANCE = 0.1;

export function validateScenario(form: ScenarioForm): FieldError[] {
  const errors: FieldError[] = [];
  if (!Number.isFinite(form.speedKmh) || form.speedKmh < 0) {
    errors.push({ field: "speed", message: "speed must be >= 0 km/h" });
  }
  if (!Number.isFinite(form.headingDeg)) {
    errors.push({ field: "heading", message: "heading must be a number" });
  }
  if (!Number.isFinite(form.durationS) || form.durationS <= 0) {
    errors.push({ field: "duration", message: "duration must be > 0 s" });
  }
  if (!Number.isInteger(form.seed) || form.seed < 0) {
    errors.push({ field: "seed", message: "seed must be a non-negative integer" });
  }
  if (!Number.isFinite(form.dt) || form.dt <= 0) {
    errors.push({ field: "dt", message: "dt must be > 0" });
  } else if (Math.abs(form.dt * form.sampleRate - 1) > 1e-9) {
    errors.push({ field: "dt", message: "dt must equal 1/sample_rate" });
  }
  if (!Number.isInteger(form.ticksPerRev) || form.ticksPerRev < 0) {
    errors.push({ field: "ticks_per_rev", message: "ticks/rev must be >= 0" });
  }
  return errors;
}

export function validateAttack(cfg: AttackConfigWire): FieldError[] {
  const errors: FieldError[] = [];
  if (cfg.attacker_type !== "internal" && cfg.attacker_type !== "external") {
    errors.push({ field: "attacker_type", message: "internal or external" });
  }
  if (!Number.isFinite(cfg.carrier_freq) || cfg.carrier_freq <= 0) {
    errors.push({ field: "carrier_freq", message: "carrier must be > 0 Hz" });
  }
  if (!Number.isFinite(cfg.spl_at_source) ||
      cfg.spl_at_source < SPL_MIN || cfg.spl_at_source > SPL_MAX) {
    errors.push({
      field: "spl_at_source",
      message: `SPL must be within [${SPL_MIN}, ${SPL_MAX}] dB`,
    });
  }
  if (cfg.attacker_type === "external" &&
      (cfg.distance === undefined || cfg.distance < MIN_DISTANCE)) {
    errors.push({ field: "distance", message: `distance must be >= ${MIN_DISTANCE} m` });
  }
  if (!Number.isFinite(cfg.trigger_rate) || cfg.trigger_rate < 0) {
    errors.push({ field: "trigger_rate", message: "trigger rate must be >= 0" });
  }
  if (!Number.isFinite(cfg.duty) || cfg.duty <= 0 || cfg.duty > 1) {
    errors.push({ field: "duty", message: "duty must be in (0, 1]" });
  }
  if (cfg.start_t !== undefined && cfg.start_t < 0) {
    errors.push({ field: "start_t", message: "start must be >= 0 s" });
  }
  return errors;
}
