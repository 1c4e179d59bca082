// Hand-rolled canvas plotting: a strip chart for time series and a 2D
// trajectory plot. Headless test environments have no 2D context; all
// draw calls no-op there while the data buffers stay fully testable.

import type { Series } from "./series";

export interface TraceStyle {
  label: string;
  color: string;
  series: Series;
}

const AXIS_COLOR = "#4a5568";
const GRID_COLOR = "#2d3748";
const TEXT_COLOR = "#a0aec0";

function context2d(canvas: HTMLCanvasElement): CanvasRenderingContext2D | null {
  try {
    return canvas.getContext("2d");
  } catch {
    return null;  // headless DOM without canvas support
  }
}

export function drawStripChart(canvas: HTMLCanvasElement, traces: TraceStyle[],
                               title: string): void {
  const ctx = context2d(canvas);
  if (!ctx) return;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = TEXT_COLOR;
  ctx.font = "11px sans-serif";
  ctx.fillText(title, 6, 12);

  let tLo = Number.POSITIVE_INFINITY;
  let tHi = Number.NEGATIVE_INFINITY;
  let vLo = Number.POSITIVE_INFINITY;
  let vHi = Number.NEGATIVE_INFINITY;
  for (const trace of traces) {
    if (trace.series.length === 0) continue;
    tLo = Math.min(tLo, trace.series.ts[0]!);
    tHi = Math.max(tHi, trace.series.ts[trace.series.length - 1]!);
    const [lo, hi] = trace.series.range();
    vLo = Math.min(vLo, lo);
    vHi = Math.max(vHi, hi);
  }
  if (!Number.isFinite(tLo) || tHi <= tLo) return;
  if (vHi - vLo < 1e-9) {
    vHi += 0.5;
    vLo -= 0.5;
  }

  const left = 8;
  const top = 18;
  const plotW = width - left - 8;
  const plotH = height - top - 8;
  const px = (t: number) => left + ((t - tLo) / (tHi - tLo)) * plotW;
  const py = (v: number) => top + (1 - (v - vLo) / (vHi - vLo)) * plotH;

  ctx.strokeStyle = GRID_COLOR;
  ctx.strokeRect(left, top, plotW, plotH);

  let legendX = left + 4;
  for (const trace of traces) {
    ctx.strokeStyle = trace.color;
    ctx.beginPath();
    const s = trace.series;
    for (let i = 0; i < s.length; i++) {
      const x = px(s.ts[i]!);
      const y = py(s.vs[i]!);
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    }
    ctx.stroke();
    ctx.fillStyle = trace.color;
    ctx.fillText(trace.label, legendX, top + plotH - 4);
    legendX += ctx.measureText(trace.label).width + 12;
  }
  ctx.fillStyle = TEXT_COLOR;
  ctx.fillText(vHi.toPrecision(3), left + 2, top + 10);
  ctx.fillText(vLo.toPrecision(3), left + 2, top + plotH - 14);
}

export interface TrajectoryTrace {
  label: string;
  color: string;
  xs: number[];
  ys: number[];
}

export function drawTrajectory(canvas: HTMLCanvasElement,
                               traces: TrajectoryTrace[]): void {
  const ctx = context2d(canvas);
  if (!ctx) return;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);

  let lo = Number.POSITIVE_INFINITY;
  let hi = Number.NEGATIVE_INFINITY;
  for (const trace of traces) {
    for (const v of trace.xs) { lo = Math.min(lo, v); hi = Math.max(hi, v); }
    for (const v of trace.ys) { lo = Math.min(lo, v); hi = Math.max(hi, v); }
  }
  if (!Number.isFinite(lo)) return;
  if (hi - lo < 1e-9) hi = lo + 1;
  const pad = 12;
  const scale = Math.min(width - 2 * pad, height - 2 * pad) / (hi - lo);
  const px = (x: number) => pad + (x - lo) * scale;
  const py = (y: number) => height - pad - (y - lo) * scale;

  ctx.strokeStyle = AXIS_COLOR;
  ctx.strokeRect(0.5, 0.5, width - 1, height - 1);
  for (const trace of traces) {
    ctx.strokeStyle = trace.color;
    ctx.beginPath();
    for (let i = 0; i < trace.xs.length; i++) {
      const x = px(trace.xs[i]!);
      const y = py(trace.ys[i]!);
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    }
    ctx.stroke();
  }
}
