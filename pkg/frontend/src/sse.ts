// Incremental server-sent-events parser over fetch streaming. Browsers'
// EventSource cannot POST custom frames or run under the test harness, so
// the dashboard parses the text protocol itself: an `event:` name line, a
// `data:` JSON line, dispatch on the blank line.

export interface SseFrame {
  event: string;
  data: unknown;
}

export class SseParser {
  private buffer = "";
  private eventName = "message";
  private dataLines: string[] = [];

  /** Feed a chunk of stream text; returns the frames completed by it. */
  push(chunk: string): SseFrame[] {
    this.buffer += chunk;
    const frames: SseFrame[] = [];
    let newline: number;
    while ((newline = this.buffer.indexOf("\n")) >= 0) {
      const line = this.buffer.slice(0, newline).replace(/\r$/, "");
      this.buffer = this.buffer.slice(newline + 1);
      if (line === "") {
        const frame = this.flush();
        if (frame) frames.push(frame);
      } else if (line.startsWith("event:")) {
        this.eventName = line.slice(6).trim();
      } else if (line.startsWith("data:")) {
        this.dataLines.push(line.slice(5).trim());
      }
      // comments (":") and unknown fields are ignored per the protocol
    }
    return frames;
  }

  private flush(): SseFrame | null {
    if (this.dataLines.length === 0) {
      this.eventName = "message";
      return null;
    }
    const raw = this.dataLines.join("\n");
    this.dataLines = [];
    const name = this.eventName;
    this.eventName = "message";
    return { event: name, data: JSON.parse(raw) };
  }
}
