import { SseParser } from "./sse.js";
import type { EnvUpdate, KeyName, Snapshot, WeightsDoc } from "./types.js";

/** Error carrying the HTTP status so callers can tell 400s from outages. */
export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

async function checkOk(resp: Response): Promise<Response> {
  if (!resp.ok) {
    let detail = "";
    try {
      const body = await resp.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // non-JSON error body, status alone will have to do
    }
    throw new ApiError(resp.status, detail || `HTTP ${resp.status}`);
  }
  return resp;
}

/**
 * Typed client for the smartfan controller service.
 *
 * `base` is the service origin, e.g. "http://127.0.0.1:8737". An empty
 * base means same-origin, which is the normal case when the console is
 * served by the service itself via --console.
 */
export class ApiClient {
  constructor(readonly base: string = "") {}

  private url(path: string): string {
    return this.base + path;
  }

  async getState(): Promise<Snapshot> {
    const resp = await checkOk(await fetch(this.url("/state")));
    return (await resp.json()) as Snapshot;
  }

  async getWeights(): Promise<WeightsDoc> {
    const resp = await checkOk(await fetch(this.url("/weights")));
    return (await resp.json()) as WeightsDoc;
  }

  async pressKey(key: KeyName): Promise<void> {
    await checkOk(
      await fetch(this.url("/keypad"), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ key }),
      }),
    );
  }

  async setEnv(update: EnvUpdate): Promise<void> {
    await checkOk(
      await fetch(this.url("/env"), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(update),
      }),
    );
  }

  async resetWeights(to: "reference" | "zero"): Promise<void> {
    await checkOk(
      await fetch(this.url("/reset"), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ weights: to }),
      }),
    );
  }

  /**
   * Consume the SSE stream, invoking `onSnapshot` per event. Resolves
   * when the server closes the stream, rejects on network failure or
   * abort. Uses fetch + ReadableStream so the same code runs in the
   * browser and under node for tests.
   */
  async events(onSnapshot: (snap: Snapshot) => void, signal?: AbortSignal): Promise<void> {
    const resp = await checkOk(
      await fetch(this.url("/events"), {
        signal,
        headers: { Accept: "text/event-stream" },
      }),
    );
    if (!resp.body) throw new Error("event stream has no body");
    const reader = resp.body.getReader();
    const parser = new SseParser();
    const decoder = new TextDecoder();
    for (;;) {
      const { done, value } = await reader.read();
      if (done) break;
      for (const payload of parser.feed(decoder.decode(value, { stream: true }))) {
        onSnapshot(JSON.parse(payload) as Snapshot);
      }
    }
  }
}

/**
 * Resolve the API base for the page: same-origin by default, overridable
 * with ?api=http://host:port for development against a separate server.
 */
export function apiBaseFromLocation(loc: { search: string }): string {
  const params = new URLSearchParams(loc.search);
  const api = params.get("api");
  return api ? api.replace(/\/+$/, "") : "";
}
