// Chart buffers. Frames may drop under backpressure; ordering may not:
// a tick whose t does not advance the series is discarded, so charts stay
// monotone in time no matter what the network did. Beyond a point budget
// the series thins itself by dropping every other sample.

export const MAX_POINTS = 10_000;

export class Series {
  ts: number[] = [];
  vs: number[] = [];

  constructor(readonly maxPoints: number = MAX_POINTS) {}

  /** Append one sample; returns false when rejected (non-increasing t). */
  push(t: number, v: number): boolean {
    const last = this.ts[this.ts.length - 1];
    if (last !== undefined && t <= last) {
      return false;
    }
    this.ts.push(t);
    this.vs.push(v);
    if (this.ts.length > this.maxPoints) {
      this.decimate();
    }
    return true;
  }

  private decimate(): void {
    const ts: number[] = [];
    const vs: number[] = [];
    for (let i = 0; i < this.ts.length; i += 2) {
      ts.push(this.ts[i]!);
      vs.push(this.vs[i]!);
    }
    // always keep the newest sample
    const lastIndex = this.ts.length - 1;
    if (lastIndex % 2 !== 0) {
      ts.push(this.ts[lastIndex]!);
      vs.push(this.vs[lastIndex]!);
    }
    this.ts = ts;
    this.vs = vs;
  }

  get length(): number {
    return this.ts.length;
  }

  last(): number | undefined {
    return this.vs[this.vs.length - 1];
  }

  range(): [number, number] {
    let lo = Number.POSITIVE_INFINITY;
    let hi = Number.NEGATIVE_INFINITY;
    for (const v of this.vs) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
    return [lo, hi];
  }
}

export class Path2DBuffer {
  xs: number[] = [];
  ys: number[] = [];

  push(x: number, y: number): void {
    this.xs.push(x);
    this.ys.push(y);
    if (this.xs.length > MAX_POINTS) {
      this.xs = this.xs.filter((_, i) => i % 2 === 0);
      this.ys = this.ys.filter((_, i) => i % 2 === 0);
    }
  }
}
