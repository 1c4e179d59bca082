// "Design for me" helper: pick the carrier that folds to the alias the
// operator wants while sitting closest to the sensor resonance. Mirrors
// the engine's arithmetic (candidates n*Fs +/- alias, ties toward the
// smaller carrier); this fills a form field, the simulation itself always
// runs server-side.

export function aliasFrequency(f: number, sampleRate: number): number {
  if (f < 0 || sampleRate <= 0) {
    throw new Error("aliasFrequency requires f >= 0 and sampleRate > 0");
  }
  return Math.abs(f - sampleRate * Math.round(f / sampleRate));
}

export function designAttackFrequency(
  sampleRate: number,
  fRes: number,
  desiredAlias: number,
): number {
  if (sampleRate <= 0 || fRes <= 0) {
    throw new Error("sampleRate and fRes must be > 0");
  }
  if (desiredAlias < 0 || desiredAlias > sampleRate / 2) {
    throw new Error("desiredAlias must be within [0, sampleRate/2]");
  }
  const nMax = Math.max(2, Math.ceil(fRes / sampleRate) + 2);
  const candidates = new Set<number>();
  for (let n = 1; n <= nMax; n++) {
    candidates.add(n * sampleRate + desiredAlias);
    if (n * sampleRate - desiredAlias > 0) {
      candidates.add(n * sampleRate - desiredAlias);
    }
  }
  let best = Number.POSITIVE_INFINITY;
  let bestDist = Number.POSITIVE_INFINITY;
  for (const f of candidates) {
    const dist = Math.abs(f - fRes);
    if (dist < bestDist || (dist === bestDist && f < best)) {
      best = f;
      bestDist = dist;
    }
  }
  return best;
}
