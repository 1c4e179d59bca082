// Humans read km/h; the wire speaks m/s. One conversion factor, used
// everywhere, so the contract tests can assert displayed text exactly.

export const KMH_PER_MS = 3.6;

/** km/h form input -> m/s for the API, rounded to 2 decimals (50 -> 13.89). */
export function kmhToMs(kmh: number): number {
  return Math.round((kmh / KMH_PER_MS) * 100) / 100;
}

export function msToKmh(ms: number): number {
  return ms * KMH_PER_MS;
}

// Display formatting rules. Every numeric readout in the dashboard goes
// through one of these, so "byte-for-byte after unit conversion" is a
// testable statement.

export function formatSpeed(ms: number): string {
  return msToKmh(ms).toFixed(2);
}

export function formatMeters(m: number): string {
  return m.toFixed(2);
}

export function formatRadians(rad: number): string {
  return rad.toFixed(4);
}

export function formatJerk(jerk: number): string {
  return jerk.toFixed(2);
}

export function formatSeconds(s: number): string {
  return s.toFixed(2);
}

export function formatPressure(pa: number): string {
  return pa.toFixed(3);
}

export function formatAccel(a: number): string {
  return a.toFixed(3);
}

export function formatHz(f: number): string {
  return f.toFixed(0);
}
