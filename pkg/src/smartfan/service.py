"""Local HTTP interface to one live controller + simulated room.

Endpoints (JSON bodies, plain JSON numbers):

* ``GET /state``    -- current snapshot
* ``GET /weights``  -- the 21x6 matrix plus its version counter
* ``GET /events``   -- server-sent events, one snapshot per controller tick
* ``POST /keypad``  -- ``{"key": "0".."5" | "learn"}``
* ``POST /env``     -- ``{"outside_temp": x, "humidity_target": y}``
* ``POST /reset``   -- ``{"weights": "reference" | "zero" | [[...21x6...]]}``

Reads never mutate state; every mutation goes through the session lock and
lands on the next tick, so concurrent commands apply in one total order.
Slow event consumers are disconnected rather than shown a gappy stream.
"""

from __future__ import annotations

import json
import queue
import random
import threading
from dataclasses import replace
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .controller import ControllerConfig, KeyEvent, LEARN_KEY, effective_duration, init, tick
from .datafiles import append_training_csv, load_reference_matrix
from .memory import MAX_SPEED, N_CLASSES, as_weight_matrix, zero_matrix
from .simulator import PlantParams, RoomState, SensorModel, sense, step_plant

DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 8737

_DIGIT_KEYS = {str(k): k for k in range(MAX_SPEED + 1)}
_EVENT_QUEUE_SIZE = 256


class Session:
    """One controller + room, with every mutation serialized through a lock."""

    def __init__(self, config: ControllerConfig | None = None, weights=None,
                 plant: PlantParams | None = None, sensor: SensorModel | None = None,
                 initial_air_temp: float = 25.0, initial_humidity: float = 85.0,
                 seed: int = 0, training_log_path=None):
        self.config = config or ControllerConfig()
        self._plant = plant or PlantParams()
        self._sensor = sensor or SensorModel()
        self._rng = random.Random(seed)
        self._lock = threading.Lock()
        self._room = RoomState(initial_air_temp, initial_humidity, 0.0)
        self._state = init(self.config, zero_matrix() if weights is None else weights, 0.0)
        self._weights_version = 1
        self._reading = sense(self._room, self._sensor, rng=self._rng)
        self._pending_keys: list[KeyEvent] = []
        self._subscribers: list[queue.Queue] = []
        self._training_log_path = Path(training_log_path) if training_log_path else None
        self._logged_pairs = 0

    # -- telemetry ---------------------------------------------------------

    def snapshot(self) -> dict:
        with self._lock:
            return self._snapshot_locked()

    def _snapshot_locked(self) -> dict:
        return {
            "tick": self._state.tick_count,
            "mode": self._state.mode.value,
            "speed": self._state.speed,
            "learn_armed": self._state.learn_armed,
            "reading": {
                "temperature_c": self._reading.temperature_c,
                "duration_min": self._reading.duration_min,
                "humidity_pct": self._reading.humidity_pct,
            },
            "room": {
                "air_temp": self._room.air_temp,
                "humidity": self._room.humidity,
            },
            "weights_version": self._weights_version,
        }

    def weights_payload(self) -> dict:
        with self._lock:
            return {
                "rows": self._state.weights.shape[0],
                "cols": self._state.weights.shape[1],
                "data": self._state.weights.tolist(),
                "weights_version": self._weights_version,
            }

    def subscribe(self) -> queue.Queue:
        q = queue.Queue(maxsize=_EVENT_QUEUE_SIZE)
        with self._lock:
            self._subscribers.append(q)
        return q

    def unsubscribe(self, q) -> None:
        with self._lock:
            if q in self._subscribers:
                self._subscribers.remove(q)

    def _publish(self, snap: dict) -> None:
        with self._lock:
            subscribers = list(self._subscribers)
        for q in subscribers:
            try:
                q.put_nowait(snap)
            except queue.Full:
                # Too slow to keep up: drop the consumer, never skip events.
                self.unsubscribe(q)
                try:
                    q.get_nowait()
                except queue.Empty:
                    pass
                q.put_nowait(None)

    def close_subscribers(self) -> None:
        with self._lock:
            subscribers = list(self._subscribers)
            self._subscribers.clear()
        for q in subscribers:
            try:
                q.put_nowait(None)
            except queue.Full:
                pass

    # -- commands ----------------------------------------------------------

    def press_key(self, key) -> tuple[bool, str]:
        if key == "learn":
            event = LEARN_KEY
        elif isinstance(key, str) and key in _DIGIT_KEYS:
            event = KeyEvent(_DIGIT_KEYS[key])
        else:
            return False, f"key must be one of 0..{MAX_SPEED} or 'learn', got {key!r}"
        with self._lock:
            self._pending_keys.append(event)
        return True, f"queued key {key}"

    def steer(self, outside_temp=None, humidity_target=None) -> tuple[bool, str]:
        if outside_temp is None and humidity_target is None:
            return False, "need outside_temp and/or humidity_target"
        with self._lock:
            plant = self._plant
            try:
                if outside_temp is not None:
                    plant = replace(plant, outside_temp=float(outside_temp))
                if humidity_target is not None:
                    plant = replace(plant, humidity_target=float(humidity_target))
            except (TypeError, ValueError) as exc:
                return False, str(exc)
            self._plant = plant
        return True, "environment updated"

    def reset_weights(self, spec) -> tuple[bool, str]:
        try:
            if spec == "reference":
                w = load_reference_matrix()
            elif spec == "zero":
                w = zero_matrix()
            else:
                w = as_weight_matrix(spec)
        except (TypeError, ValueError) as exc:
            return False, str(exc)
        with self._lock:
            self._state = replace(self._state, weights=w)
            self._weights_version += 1
        return True, f"weights reset to {spec if isinstance(spec, str) else 'inline matrix'}"

    # -- the loop ----------------------------------------------------------

    def tick_once(self) -> dict:
        """Advance plant and controller by one tick and publish the snapshot."""
        with self._lock:
            keys = self._pending_keys
            self._pending_keys = []
            old_weights = self._state.weights
            self._room = step_plant(self._room, self._state.speed, self._plant,
                                    self.config.tick_interval)
            raw = sense(self._room, self._sensor, rng=self._rng)
            self._state, _ = tick(self.config, self._state, raw, keys,
                                  clock=self._room.sim_time)
            self._reading = replace(
                raw, duration_min=effective_duration(self.config, self._state,
                                                     self._room.sim_time))
            if self._state.weights is not old_weights:
                self._weights_version += 1
            new_pairs = self._state.training_log[self._logged_pairs:]
            self._logged_pairs = len(self._state.training_log)
            snap = self._snapshot_locked()
        if new_pairs and self._training_log_path is not None:
            append_training_csv(self._training_log_path, new_pairs)
        self._publish(snap)
        return snap


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    @property
    def session(self) -> Session:
        return self.server.session

    def log_message(self, fmt, *args):  # keep test output quiet
        pass

    def _send_json(self, payload, status=200):
        body = json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _read_body(self):
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            raise ValueError("empty request body")
        return json.loads(raw)

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        if self.path == "/state":
            self._send_json(self.session.snapshot())
        elif self.path == "/weights":
            self._send_json(self.session.weights_payload())
        elif self.path == "/events":
            self._stream_events()
        else:
            self._serve_static()

    def do_POST(self):
        try:
            body = self._read_body()
            if not isinstance(body, dict):
                raise ValueError("request body must be a JSON object")
        except (ValueError, json.JSONDecodeError) as exc:
            self._send_json({"accepted": False, "detail": f"bad request: {exc}"}, status=400)
            return
        if self.path == "/keypad":
            accepted, detail = self.session.press_key(body.get("key"))
        elif self.path == "/env":
            accepted, detail = self.session.steer(body.get("outside_temp"),
                                                  body.get("humidity_target"))
        elif self.path == "/reset":
            accepted, detail = self.session.reset_weights(body.get("weights"))
        else:
            self._send_json({"accepted": False, "detail": "unknown endpoint"}, status=404)
            return
        self._send_json({"accepted": accepted, "detail": detail},
                        status=200 if accepted else 400)

    def _stream_events(self):
        self.close_connection = True
        q = self.session.subscribe()
        try:
            self.send_response(200)
            self.send_header("Content-Type", "text/event-stream")
            self.send_header("Cache-Control", "no-cache")
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            while True:
                try:
                    snap = q.get(timeout=0.5)
                except queue.Empty:
                    if getattr(self.server, "stopping", False):
                        break
                    continue
                if snap is None:
                    break
                self.wfile.write(f"data: {json.dumps(snap)}\n\n".encode())
                self.wfile.flush()
        except (BrokenPipeError, ConnectionResetError):
            pass
        finally:
            self.session.unsubscribe(q)

    def _serve_static(self):
        root = getattr(self.server, "static_dir", None)
        if root is None:
            self._send_json({"accepted": False, "detail": "not found"}, status=404)
            return
        # drop any query/fragment: /?api=... still serves the index page
        name = self.path.split("?", 1)[0].split("#", 1)[0].lstrip("/") or "index.html"
        target = (root / name).resolve()
        if not (target.is_file() and target.is_relative_to(root.resolve())):
            self._send_json({"accepted": False, "detail": "not found"}, status=404)
            return
        ctype = {
            ".html": "text/html", ".js": "text/javascript",
            ".css": "text/css", ".json": "application/json",
        }.get(target.suffix, "application/octet-stream")
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)


class Service:
    """HTTP server plus the tick driver thread around one session."""

    def __init__(self, session: Session, host: str = DEFAULT_HOST, port: int = DEFAULT_PORT,
                 static_dir=None, real_tick_interval: float | None = None):
        self.session = session
        self._server = ThreadingHTTPServer((host, port), _Handler)
        self._server.daemon_threads = True
        self._server.session = session
        self._server.static_dir = Path(static_dir) if static_dir else None
        self._server.stopping = False
        if real_tick_interval is None:
            real_tick_interval = session.config.tick_interval
        self._real_tick_interval = real_tick_interval
        self._stop = threading.Event()
        self._threads: list[threading.Thread] = []

    @property
    def address(self) -> tuple[str, int]:
        return self._server.server_address[:2]

    @property
    def base_url(self) -> str:
        host, port = self.address
        return f"http://{host}:{port}"

    def _tick_loop(self):
        while not self._stop.wait(self._real_tick_interval):
            self.session.tick_once()

    def _serve_loop(self):
        self._server.serve_forever(poll_interval=0.05)

    def start(self):
        """Run server and ticker in background threads (returns immediately)."""
        for target in (self._serve_loop, self._tick_loop):
            t = threading.Thread(target=target, daemon=True)
            t.start()
            self._threads.append(t)
        return self

    def stop(self):
        self._stop.set()
        self._server.stopping = True
        self.session.close_subscribers()
        self._server.shutdown()
        self._server.server_close()
        for t in self._threads:
            t.join(timeout=5)

    def run_forever(self):
        """Blocking variant for the command line; Ctrl-C stops cleanly."""
        ticker = threading.Thread(target=self._tick_loop, daemon=True)
        ticker.start()
        self._threads.append(ticker)
        try:
            self._server.serve_forever(poll_interval=0.05)
        except KeyboardInterrupt:
            pass
        finally:
            self.stop()


def serve(host=DEFAULT_HOST, port=DEFAULT_PORT, session: Session | None = None,
          static_dir=None, real_tick_interval=None) -> Service:
    """Create and start a service; the caller owns stop()."""
    if session is None:
        session = Session(weights=load_reference_matrix())
    service = Service(session, host=host, port=port, static_dir=static_dir,
                      real_tick_interval=real_tick_interval)
    return service.start()
