/** Shapes returned by the smartfan service endpoints. */

export interface ReadingState {
  temperature_c: number;
  duration_min: number;
  humidity_pct: number;
}

export interface RoomState {
  air_temp: number;
  humidity: number;
}

/** One controller snapshot, as served by GET /state and each SSE event. */
export interface Snapshot {
  tick: number;
  mode: "free_running" | "regulating";
  speed: number;
  learn_armed: boolean;
  reading: ReadingState;
  room: RoomState;
  weights_version: number;
}

/** GET /weights payload: rows x cols signed integer matrix. */
export interface WeightsDoc {
  rows: number;
  cols: number;
  data: number[][];
  weights_version: number;
}

export type KeyName = "0" | "1" | "2" | "3" | "4" | "5" | "learn";

export interface EnvUpdate {
  outside_temp?: number;
  humidity_target?: number;
}

export type ConnectionStatus = "connecting" | "live" | "disconnected" | "stopped";
