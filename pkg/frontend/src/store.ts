import type { ApiClient } from "./api.js";
import type { ConnectionStatus, Snapshot, WeightsDoc } from "./types.js";

export interface StoreOptions {
  /** Initial delay before a reconnect attempt, doubled per failure. */
  reconnectDelayMs?: number;
  maxReconnectDelayMs?: number;
  /** How many recent snapshots the event log keeps. */
  logSize?: number;
  /** Injectable for tests; defaults to a real setTimeout sleep. */
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((r) => setTimeout(r, ms));

/**
 * Client-side state for the console: the latest snapshot, the current
 * weight matrix, a short tick history, and the connection status.
 *
 * The store owns the SSE connection. Weights are only refetched when a
 * snapshot announces a new weights_version, so steady-state traffic is
 * one small JSON event per controller tick.
 */
export class ConsoleStore {
  snapshot: Snapshot | null = null;
  weights: WeightsDoc | null = null;
  log: Snapshot[] = [];
  status: ConnectionStatus = "connecting";

  private listeners = new Set<() => void>();
  private stopped = false;
  private abort: AbortController | null = null;
  private readonly reconnectDelayMs: number;
  private readonly maxReconnectDelayMs: number;
  private readonly logSize: number;
  private readonly sleep: (ms: number) => Promise<void>;

  constructor(
    private readonly client: ApiClient,
    opts: StoreOptions = {},
  ) {
    this.reconnectDelayMs = opts.reconnectDelayMs ?? 1000;
    this.maxReconnectDelayMs = opts.maxReconnectDelayMs ?? 10000;
    this.logSize = opts.logSize ?? 60;
    this.sleep = opts.sleep ?? defaultSleep;
  }

  subscribe(fn: () => void): () => void {
    this.listeners.add(fn);
    return () => this.listeners.delete(fn);
  }

  private emit(): void {
    for (const fn of this.listeners) fn();
  }

  private setStatus(status: ConnectionStatus): void {
    if (this.status !== status) {
      this.status = status;
      this.emit();
    }
  }

  /** Run the connect/stream/reconnect loop until stop() is called. */
  async start(): Promise<void> {
    let delay = this.reconnectDelayMs;
    while (!this.stopped) {
      this.setStatus("connecting");
      try {
        this.abort = new AbortController();
        const snap = await this.client.getState();
        await this.applySnapshot(snap);
        this.setStatus("live");
        delay = this.reconnectDelayMs;
        await this.client.events((s) => {
          void this.applySnapshot(s);
        }, this.abort.signal);
      } catch {
        // fall through to reconnect
      }
      if (this.stopped) break;
      this.setStatus("disconnected");
      await this.sleep(delay);
      delay = Math.min(delay * 2, this.maxReconnectDelayMs);
    }
    this.setStatus("stopped");
  }

  stop(): void {
    this.stopped = true;
    this.abort?.abort();
  }

  /** Apply one snapshot, refetching weights if the version moved. */
  async applySnapshot(snap: Snapshot): Promise<void> {
    this.snapshot = snap;
    this.log.push(snap);
    if (this.log.length > this.logSize) {
      this.log.splice(0, this.log.length - this.logSize);
    }
    if (snap.weights_version !== this.weights?.weights_version) {
      try {
        this.weights = await this.client.getWeights();
      } catch {
        // keep the stale matrix; the next version bump retries
      }
    }
    this.emit();
  }
}
