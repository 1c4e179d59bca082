// The operator dashboard: a scenario form, live charts fed only by the
// telemetry stream, and an attack console with quantified feedback, so a
// human can retune the attack between runs.

import { Gateway, GatewayError } from "./api";
import { drawStripChart, drawTrajectory } from "./charts";
import { designAttackFrequency } from "./designer";
import { deltaRows, liveReadouts, metricsRows } from "./panels";
import { Path2DBuffer, Series } from "./series";
import type {
  AttackConfigWire,
  ScenarioConfigWire,
  SessionView,
  TelemetryFrame,
  TelemetryTick,
} from "./types";
import { kmhToMs } from "./units";
import { validateAttack, validateScenario } from "./validate";

const LAYOUT = `
<div class="pane" id="scenario-pane">
  <h2>Scenario</h2>
  <label>Desired speed (km/h) <input id="speed-input" type="number" value="50" step="1"></label>
  <label>Heading (deg) <input id="heading-input" type="number" value="0" step="1"></label>
  <label>Duration (s) <input id="duration-input" type="number" value="30" step="1"></label>
  <label>Seed <input id="seed-input" type="number" value="42" step="1"></label>
  <label>Sample rate (Hz) <input id="rate-input" type="number" value="1000" step="1"></label>
  <label>dt (s) <input id="dt-input" type="number" value="0.001" step="0.001"></label>
  <label>Encoder ticks/rev <input id="ticks-input" type="number" value="4096" step="1"></label>
  <label>Kind
    <select id="kind-select">
      <option value="cruise" selected>cruise</option>
      <option value="brake_test">brake_test</option>
    </select>
  </label>
  <label><input id="fusion-checkbox" type="checkbox" checked> wheel-speed fusion</label>
  <label>Pace
    <select id="pace-select">
      <option value="1" selected>real time</option>
      <option value="4">4x</option>
      <option value="0">max</option>
    </select>
  </label>
  <div class="row">
    <button id="create-btn">Create session</button>
    <button id="start-btn" disabled>Start</button>
    <button id="pause-btn" disabled>Pause</button>
    <button id="reset-btn" disabled>Reset</button>
  </div>
  <div id="scenario-errors" class="errors"></div>
  <div id="session-label"></div>
</div>
<div class="pane" id="live-pane">
  <h2>Live telemetry <span id="state-badge" class="badge">idle</span></h2>
  <div class="readouts">
    <span>t <b data-readout="sim_time">-</b> s</span>
    <span>v_true <b data-readout="v_true">-</b> km/h</span>
    <span>v_est <b data-readout="v_est">-</b> km/h</span>
    <span>v_wheel <b data-readout="v_wheel">-</b> km/h</span>
    <span>a_imu <b data-readout="ax_imu">-</b> m/s²</span>
    <span>pressure <b data-readout="pressure">-</b> Pa</span>
  </div>
  <canvas id="speed-chart" width="560" height="170"></canvas>
  <canvas id="sensor-chart" width="560" height="150"></canvas>
  <canvas id="trajectory-chart" width="280" height="220"></canvas>
  <div id="event-list" class="events"></div>
</div>
<div class="pane" id="attack-pane">
  <h2>Attack console</h2>
  <label>Attacker
    <select id="attack-type">
      <option value="internal" selected>internal (cabin speaker)</option>
      <option value="external">external</option>
    </select>
  </label>
  <label>Carrier (Hz) <input id="attack-carrier" type="number" value="5000" step="10"></label>
  <label>SPL (dB) <input id="attack-spl" type="number" value="110" step="1"></label>
  <label>Distance (m) <input id="attack-distance" type="number" value="1" step="0.1"></label>
  <label>Trigger rate (bursts/s, 0 = continuous)
    <input id="attack-trigger" type="number" value="0" step="1"></label>
  <label>Duty <input id="attack-duty" type="number" value="0.5" step="0.05"></label>
  <label>Desired alias (Hz) <input id="design-alias" type="number" value="0" step="1"></label>
  <div class="row">
    <button id="design-btn">Design for me</button>
    <button id="attack-btn" disabled>Launch attack</button>
  </div>
  <div id="attack-banner" class="banner"></div>
  <div id="attack-errors" class="errors"></div>
  <h2>Metrics</h2>
  <table id="metrics-table"><tbody></tbody></table>
  <h2>Compare runs</h2>
  <div class="row">
    <select id="compare-a"></select>
    <select id="compare-b"></select>
    <button id="compare-btn">Compare</button>
  </div>
  <div id="compare-errors" class="errors"></div>
  <table id="delta-table"><tbody></tbody></table>
  <canvas id="compare-chart" width="280" height="220"></canvas>
</div>
`;

interface LiveBuffers {
  vTrue: Series;
  vEst: Series;
  vWheel: Series;
  axImu: Series;
  pressure: Series;
  path: Path2DBuffer;
}

function newBuffers(): LiveBuffers {
  return {
    vTrue: new Series(),
    vEst: new Series(),
    vWheel: new Series(),
    axImu: new Series(),
    pressure: new Series(),
    path: new Path2DBuffer(),
  };
}

export class App {
  readonly root: HTMLElement;
  readonly gateway: Gateway;
  sessionId: number | null = null;
  sensorParams = { sample_rate: 1000, f_res_accel: 5200 };
  buffers: LiveBuffers = newBuffers();
  completed: number[] = [];
  private streamHandle: { done: Promise<void>; abort: () => void } | null = null;
  private framesSinceDraw = 0;
  /** resolves when the active session's stream delivers its end event */
  streamEnded: Promise<void> = Promise.resolve();
  private markStreamEnd: () => void = () => undefined;

  constructor(root: HTMLElement, gateway: Gateway) {
    this.root = root;
    this.gateway = gateway;
    root.innerHTML = LAYOUT;
    this.el("create-btn").addEventListener("click", () => void this.createSession());
    this.el<HTMLInputElement>("speed-input").addEventListener("input", () => {
      this.el<HTMLButtonElement>("create-btn").disabled =
        this.input("speed-input").value.trim() === "";
    });
    this.el("start-btn").addEventListener("click", () => void this.start());
    this.el("pause-btn").addEventListener("click", () => void this.pause());
    this.el("reset-btn").addEventListener("click", () => void this.reset());
    this.el("design-btn").addEventListener("click", () => this.designCarrier());
    this.el("attack-btn").addEventListener("click", () => void this.launchAttack());
    this.el("compare-btn").addEventListener("click", () => void this.compare());
  }

  el<T extends HTMLElement = HTMLElement>(id: string): T {
    const found = this.root.querySelector(`#${id}`);
    if (!found) throw new Error(`missing element #${id}`);
    return found as T;
  }

  private input(id: string): HTMLInputElement {
    return this.el<HTMLInputElement>(id);
  }

  private number(id: string): number {
    return Number(this.input(id).value);
  }

  scenarioFromForm(): ScenarioConfigWire | null {
    const form = {
      speedKmh: this.number("speed-input"),
      headingDeg: this.number("heading-input"),
      durationS: this.number("duration-input"),
      seed: this.number("seed-input"),
      dt: this.number("dt-input"),
      sampleRate: this.number("rate-input"),
      fusionEnabled: this.input("fusion-checkbox").checked,
      scenarioKind: this.el<HTMLSelectElement>("kind-select").value as
        "cruise" | "brake_test",
      ticksPerRev: this.number("ticks-input"),
    };
    const errors = validateScenario(form);
    this.showErrors("scenario-errors", errors.map(e => `${e.field}: ${e.message}`));
    if (errors.length > 0) return null;
    return {
      seed: form.seed,
      dt: form.dt,
      duration: form.durationS,
      scenario_kind: form.scenarioKind,
      sensors: { sample_rate: form.sampleRate, ticks_per_rev: form.ticksPerRev },
      controller: { fusion: { fusion_enabled: form.fusionEnabled } },
      setpoints: {
        v_set: kmhToMs(form.speedKmh),
        heading_set: (form.headingDeg * Math.PI) / 180,
      },
    };
  }

  async createSession(): Promise<number | null> {
    const cfg = this.scenarioFromForm();
    if (cfg === null) return null;
    try {
      const created = await this.gateway.createSession(cfg);
      this.sessionId = created.id;
      const sensors = created.config.sensors ?? {};
      this.sensorParams = {
        sample_rate: sensors.sample_rate ?? 1000,
        f_res_accel: sensors.f_res_accel ?? 5200,
      };
      this.buffers = newBuffers();
      this.el("session-label").textContent =
        `session #${created.id} (seed ${created.config.seed})`;
      this.setBadge("created");
      this.el<HTMLButtonElement>("start-btn").disabled = false;
      this.el<HTMLButtonElement>("pause-btn").disabled = false;
      this.el<HTMLButtonElement>("reset-btn").disabled = false;
      this.el<HTMLButtonElement>("attack-btn").disabled = false;
      this.subscribe(created.id);
      return created.id;
    } catch (err) {
      this.surfaceGatewayError("scenario-errors", err);
      return null;
    }
  }

  private subscribe(id: number): void {
    this.streamHandle?.abort();
    this.streamEnded = new Promise(resolve => { this.markStreamEnd = resolve; });
    this.streamHandle = this.gateway.streamTelemetry(
      id, frame => this.onFrame(frame));
  }

  onFrame(frame: TelemetryFrame): void {
    if (frame.event === "snapshot") {
      this.setBadge((frame.payload as SessionView).state);
    } else if (frame.event === "tick") {
      this.onTick(frame.payload);
    } else if (frame.event === "event") {
      const item = document.createElement("div");
      const tick = frame.payload.detail["tick"];
      const suffix = tick === undefined ? "" : ` (tick ${tick})`;
      item.textContent = `t=${frame.payload.t.toFixed(3)} ${frame.payload.kind}${suffix}`;
      this.el("event-list").appendChild(item);
    } else if (frame.event === "end") {
      this.setBadge(frame.payload.state);
      if (frame.payload.state === "completed" && this.sessionId !== null) {
        if (!this.completed.includes(this.sessionId)) {
          this.completed.push(this.sessionId);
        }
        this.refreshCompareChoices();
        void this.showMetrics(this.sessionId);
      }
      this.draw();
      this.markStreamEnd();
    }
  }

  private onTick(tick: TelemetryTick): void {
    const b = this.buffers;
    // monotone-t enforcement lives in Series.push: late or duplicate
    // frames are dropped, never reordered
    if (b.vTrue.push(tick.t, tick.v_true)) {
      b.vEst.push(tick.t, tick.v_est);
      b.vWheel.push(tick.t, tick.v_wheel);
      b.axImu.push(tick.t, tick.ax_imu);
      b.pressure.push(tick.t, tick.pressure);
      b.path.push(tick.x, tick.y);
      this.updateReadouts(tick);
    }
    if (++this.framesSinceDraw >= 10) {
      this.framesSinceDraw = 0;
      this.draw();
    }
  }

  updateReadouts(tick: TelemetryTick): void {
    const values = liveReadouts(tick);
    for (const [key, value] of Object.entries(values)) {
      const cell = this.root.querySelector(`[data-readout="${key}"]`);
      if (cell) cell.textContent = value;
    }
  }

  draw(): void {
    drawStripChart(this.el<HTMLCanvasElement>("speed-chart"), [
      { label: "v_true", color: "#63b3ed", series: this.buffers.vTrue },
      { label: "v_est", color: "#f6ad55", series: this.buffers.vEst },
      { label: "v_wheel", color: "#68d391", series: this.buffers.vWheel },
    ], "speed (m/s)");
    drawStripChart(this.el<HTMLCanvasElement>("sensor-chart"), [
      { label: "a_imu", color: "#fc8181", series: this.buffers.axImu },
      { label: "pressure", color: "#b794f4", series: this.buffers.pressure },
    ], "IMU accel (m/s²) / attack pressure (Pa)");
    drawTrajectory(this.el<HTMLCanvasElement>("trajectory-chart"), [
      { label: "path", color: "#63b3ed",
        xs: this.buffers.path.xs, ys: this.buffers.path.ys },
    ]);
  }

  async start(): Promise<void> {
    if (this.sessionId === null) return;
    const pace = Number(this.el<HTMLSelectElement>("pace-select").value);
    try {
      await this.gateway.command(this.sessionId, "start", pace);
      await this.refreshBadge();
    } catch (err) {
      this.surfaceGatewayError("scenario-errors", err);
    }
  }

  async pause(): Promise<void> {
    if (this.sessionId === null) return;
    try {
      await this.gateway.command(this.sessionId, "pause");
      await this.refreshBadge();
    } catch (err) {
      this.surfaceGatewayError("scenario-errors", err);
    }
  }

  /** The badge always reflects the gateway's view, never a guess. */
  private async refreshBadge(): Promise<void> {
    if (this.sessionId === null) return;
    this.setBadge((await this.gateway.getSession(this.sessionId)).state);
  }

  async reset(): Promise<void> {
    if (this.sessionId === null) return;
    try {
      await this.gateway.command(this.sessionId, "reset");
      this.buffers = newBuffers();
      this.el("event-list").textContent = "";
      this.setBadge("created");
      this.subscribe(this.sessionId);
    } catch (err) {
      this.surfaceGatewayError("scenario-errors", err);
    }
  }

  attackFromForm(): AttackConfigWire | null {
    const cfg: AttackConfigWire = {
      attacker_type: this.el<HTMLSelectElement>("attack-type").value as
        "internal" | "external",
      carrier_freq: this.number("attack-carrier"),
      spl_at_source: this.number("attack-spl"),
      distance: this.number("attack-distance"),
      trigger_rate: this.number("attack-trigger"),
      duty: this.number("attack-duty"),
    };
    const errors = validateAttack(cfg);
    this.showErrors("attack-errors", errors.map(e => `${e.field}: ${e.message}`));
    return errors.length > 0 ? null : cfg;
  }

  designCarrier(): void {
    const alias = this.number("design-alias");
    try {
      const carrier = designAttackFrequency(
        this.sensorParams.sample_rate, this.sensorParams.f_res_accel, alias);
      this.input("attack-carrier").value = String(carrier);
      this.showErrors("attack-errors", []);
    } catch (err) {
      this.showErrors("attack-errors", [(err as Error).message]);
    }
  }

  async launchAttack(): Promise<void> {
    if (this.sessionId === null) return;
    const cfg = this.attackFromForm();
    if (cfg === null) return;
    try {
      const ack = await this.gateway.attack(this.sessionId, cfg);
      const state = (await this.gateway.getSession(this.sessionId)).state;
      const note = state === "paused" ? " (takes effect on resume)" : "";
      this.el("attack-banner").textContent =
        `attack live from t=${ack.start_t.toFixed(3)} s${note}`;
    } catch (err) {
      this.surfaceGatewayError("attack-errors", err);
    }
  }

  async showMetrics(id: number, reference?: number): Promise<void> {
    try {
      const report = await this.gateway.metrics(id, reference);
      const body = this.el("metrics-table").querySelector("tbody")!;
      body.textContent = "";
      for (const row of metricsRows(report)) {
        const tr = document.createElement("tr");
        const name = document.createElement("td");
        name.textContent = row.label;
        const value = document.createElement("td");
        value.setAttribute("data-metric", row.key);
        value.textContent = row.value;
        tr.append(name, value);
        body.appendChild(tr);
      }
    } catch (err) {
      this.surfaceGatewayError("attack-errors", err);
    }
  }

  refreshCompareChoices(): void {
    for (const selectId of ["compare-a", "compare-b"]) {
      const select = this.el<HTMLSelectElement>(selectId);
      const current = select.value;
      select.textContent = "";
      for (const id of this.completed) {
        const option = document.createElement("option");
        option.value = String(id);
        option.textContent = `session #${id}`;
        select.appendChild(option);
      }
      if (current) select.value = current;
    }
  }

  async compare(): Promise<void> {
    const a = Number(this.el<HTMLSelectElement>("compare-a").value);
    const b = Number(this.el<HTMLSelectElement>("compare-b").value);
    if (!a || !b) {
      this.showErrors("compare-errors", ["pick two completed sessions"]);
      return;
    }
    try {
      const [report, reference] = await Promise.all([
        this.gateway.metrics(a, b),
        this.gateway.metrics(b),
      ]);
      const body = this.el("delta-table").querySelector("tbody")!;
      body.textContent = "";
      for (const row of deltaRows(report, reference)) {
        const tr = document.createElement("tr");
        const name = document.createElement("td");
        name.textContent = row.label;
        const value = document.createElement("td");
        value.setAttribute("data-delta", row.key);
        value.textContent = row.value;
        tr.append(name, value);
        body.appendChild(tr);
      }
      const [logA, logB] = await Promise.all([
        this.gateway.logJson(a), this.gateway.logJson(b)]);
      drawTrajectory(this.el<HTMLCanvasElement>("compare-chart"), [
        { label: `#${a}`, color: "#63b3ed",
          xs: logA.records.map(r => r.x as number),
          ys: logA.records.map(r => r.y as number) },
        { label: `#${b}`, color: "#fc8181",
          xs: logB.records.map(r => r.x as number),
          ys: logB.records.map(r => r.y as number) },
      ]);
      this.showErrors("compare-errors", []);
    } catch (err) {
      this.surfaceGatewayError("compare-errors", err);
    }
  }

  private setBadge(state: string): void {
    this.el("state-badge").textContent = state;
  }

  private showErrors(id: string, messages: string[]): void {
    const box = this.el(id);
    box.textContent = "";
    for (const message of messages) {
      const line = document.createElement("div");
      line.textContent = message;
      box.appendChild(line);
    }
  }

  private surfaceGatewayError(id: string, err: unknown): void {
    if (err instanceof GatewayError) {
      const lines = err.violations.length > 0
        ? err.violations.map(v => `${v.field}: ${v.message}`)
        : [err.message];
      this.showErrors(id, lines);
    } else {
      this.showErrors(id, [String(err)]);
    }
  }
}

export function mount(root: HTMLElement, base = ""): App {
  return new App(root, new Gateway(base));
}
