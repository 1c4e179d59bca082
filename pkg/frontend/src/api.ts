// Typed gateway client. Every dashboard number originates from one of
// these responses or from the telemetry stream; the client performs no
// simulation math.

import { SseParser } from "./sse";
import type {
  AttackConfigWire,
  LogExport,
  MetricsReport,
  ScenarioConfigWire,
  SessionView,
  TelemetryFrame,
  Violation,
} from "./types";

export class GatewayError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly violations: Violation[] = [],
  ) {
    super(message);
  }
}

async function parseError(resp: Response): Promise<GatewayError> {
  let message = `${resp.status}`;
  let violations: Violation[] = [];
  try {
    const body = await resp.json();
    message = body.error ?? message;
    violations = body.violations ?? [];
  } catch {
    // non-JSON error body; keep the status text
  }
  return new GatewayError(resp.status, message, violations);
}

export class Gateway {
  constructor(readonly base: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await fetch(this.base + path, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!resp.ok) {
      throw await parseError(resp);
    }
    return (await resp.json()) as T;
  }

  createSession(cfg: ScenarioConfigWire): Promise<{ id: number; config: ScenarioConfigWire }> {
    return this.request("POST", "/sessions", cfg);
  }

  listSessions(): Promise<SessionView[]> {
    return this.request("GET", "/sessions");
  }

  getSession(id: number): Promise<SessionView> {
    return this.request("GET", `/sessions/${id}`);
  }

  command(id: number, command: "start" | "pause" | "reset", pace?: number): Promise<unknown> {
    const body: Record<string, unknown> = { command };
    if (pace !== undefined) body.pace = pace;
    return this.request("POST", `/sessions/${id}/command`, body);
  }

  attack(id: number, cfg: AttackConfigWire): Promise<{ applied: boolean; start_t: number }> {
    return this.request("POST", `/sessions/${id}/attack`, cfg);
  }

  metrics(id: number, reference?: number): Promise<MetricsReport> {
    const query = reference === undefined ? "" : `?reference=${reference}`;
    return this.request("GET", `/sessions/${id}/metrics${query}`);
  }

  logJson(id: number): Promise<LogExport> {
    return this.request("GET", `/sessions/${id}/log?format=json`);
  }

  /**
   * Subscribe to the telemetry stream. Frames are delivered in order to
   * onFrame; the returned function aborts the subscription. Resolves when
   * the stream ends (terminal event or abort).
   */
  streamTelemetry(
    id: number,
    onFrame: (frame: TelemetryFrame) => void,
    decimation = 20,
  ): { done: Promise<void>; abort: () => void } {
    const controller = new AbortController();
    const done = (async () => {
      const resp = await fetch(
        `${this.base}/sessions/${id}/telemetry?decimation=${decimation}`,
        { signal: controller.signal },
      );
      if (!resp.ok || resp.body === null) {
        throw await parseError(resp);
      }
      const reader = resp.body.getReader();
      const decoder = new TextDecoder();
      const parser = new SseParser();
      for (;;) {
        const { done: finished, value } = await reader.read();
        if (finished) break;
        for (const frame of parser.push(decoder.decode(value, { stream: true }))) {
          onFrame({ event: frame.event, payload: frame.data } as TelemetryFrame);
          if (frame.event === "end") {
            controller.abort();
            return;
          }
        }
      }
    })().catch((err) => {
      if (!controller.signal.aborted) throw err;
    });
    return { done, abort: () => controller.abort() };
  }
}
