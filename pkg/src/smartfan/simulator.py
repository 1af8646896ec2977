"""Deterministic room model and quantized sensing for closed-loop runs.

The plant is first order: room air couples to the outside temperature and
each fan speed removes heat at a constant rate.  Sensing mimics a free
running ADC: the air temperature is floored onto the converter's count grid,
then onto whole degrees.  ``run_scenario`` steps plant and controller in
lockstep, one controller tick per plant step, and returns the full trace.

Scenario files are CSV with header ``time_s,outside_temp_c,humidity_pct``
(breakpoints, strictly increasing in time; values hold until the next
breakpoint).  Trace files are CSV with header
``time_s,air_temp_c,humidity_pct,sensed_temp_c,duration_min,speed``.
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass, replace
from pathlib import Path

from .controller import ControllerConfig, effective_duration, init, tick
from .encoding import FIELD_MAX, SensorReading
from .memory import N_CLASSES

AIR_TEMP_MIN = -20.0
AIR_TEMP_MAX = 80.0

SCENARIO_CSV_FIELDS = ("time_s", "outside_temp_c", "humidity_pct")
TRACE_CSV_FIELDS = ("time_s", "air_temp_c", "humidity_pct",
                    "sensed_temp_c", "duration_min", "speed")


@dataclass(frozen=True)
class RoomState:
    air_temp: float
    humidity: float
    sim_time: float = 0.0

    def __post_init__(self):
        if not (AIR_TEMP_MIN <= self.air_temp <= AIR_TEMP_MAX):
            raise ValueError(f"air_temp must be in [{AIR_TEMP_MIN}, {AIR_TEMP_MAX}], "
                             f"got {self.air_temp}")
        if not (0.0 <= self.humidity <= 100.0):
            raise ValueError(f"humidity must be in [0, 100], got {self.humidity}")


@dataclass(frozen=True)
class PlantParams:
    outside_temp: float = 30.0
    humidity_target: float = 85.0
    k_env: float = 0.01                 # per-second coupling to outside air
    cool_rate: tuple = (0.0, 0.001, 0.002, 0.003, 0.004, 0.005)  # degC/s per speed
    humidity_drift: float = 0.05        # per-second pull toward humidity_target

    def __post_init__(self):
        values = (self.outside_temp, self.humidity_target, self.k_env,
                  self.humidity_drift, *self.cool_rate)
        if not all(math.isfinite(v) for v in values):
            raise ValueError("plant parameters must be finite")
        if self.k_env < 0:
            raise ValueError(f"k_env must be >= 0, got {self.k_env}")
        if self.humidity_drift < 0:
            raise ValueError(f"humidity_drift must be >= 0, got {self.humidity_drift}")
        if len(self.cool_rate) != N_CLASSES:
            raise ValueError(f"cool_rate needs {N_CLASSES} entries, got {len(self.cool_rate)}")
        if self.cool_rate[0] != 0.0:
            raise ValueError("cool_rate[0] must be 0 (speed 0 removes no heat)")
        if any(b < a for a, b in zip(self.cool_rate, self.cool_rate[1:])):
            raise ValueError("cool_rate must be non-decreasing in speed")
        object.__setattr__(self, "cool_rate", tuple(float(c) for c in self.cool_rate))


@dataclass(frozen=True)
class SensorModel:
    adc_bits: int = 8
    degrees_per_count: float = 0.5
    noise_amplitude: float = 0.0        # uniform +/- amplitude on the analog value

    def __post_init__(self):
        if not 1 <= self.adc_bits <= 16:
            raise ValueError(f"adc_bits must be in [1, 16], got {self.adc_bits}")
        if not self.degrees_per_count > 0:
            raise ValueError(f"degrees_per_count must be > 0, got {self.degrees_per_count}")
        if self.noise_amplitude < 0:
            raise ValueError(f"noise_amplitude must be >= 0, got {self.noise_amplitude}")


def _clamp(value, lo, hi):
    return max(lo, min(hi, value))


def step_plant(room: RoomState, speed: int, params: PlantParams, dt: float) -> RoomState:
    """Advance the room by `dt` seconds with the fan at `speed`."""
    if not (isinstance(dt, (int, float)) and math.isfinite(dt) and dt > 0):
        raise ValueError(f"dt must be a positive finite number, got {dt!r}")
    if not 0 <= speed < N_CLASSES:
        raise ValueError(f"speed must be in [0, {N_CLASSES - 1}], got {speed}")
    air = room.air_temp + dt * (params.k_env * (params.outside_temp - room.air_temp)
                                - params.cool_rate[speed])
    humidity = room.humidity + dt * params.humidity_drift * (params.humidity_target
                                                             - room.humidity)
    return RoomState(
        air_temp=_clamp(air, AIR_TEMP_MIN, AIR_TEMP_MAX),
        humidity=_clamp(humidity, 0.0, 100.0),
        sim_time=room.sim_time + dt,
    )


def quantize_temperature(air_temp: float, model: SensorModel) -> int:
    """Floor the analog temperature onto the ADC count grid, then whole degC."""
    count = math.floor(air_temp / model.degrees_per_count)
    count = _clamp(count, 0, (1 << model.adc_bits) - 1)
    return int(_clamp(math.floor(count * model.degrees_per_count), 0, FIELD_MAX))


def sense(room: RoomState, model: SensorModel, duration_min: int = 0,
          rng: random.Random | None = None) -> SensorReading:
    """Sample the room through the sensor model.

    Duration is not a physical sensor; the controller derives it from its
    epoch clock, so callers normally leave it at 0.
    """
    air = room.air_temp
    humidity = room.humidity
    if model.noise_amplitude > 0:
        if rng is None:
            raise ValueError("noisy sensing needs an explicit rng for reproducibility")
        air += rng.uniform(-model.noise_amplitude, model.noise_amplitude)
        humidity += rng.uniform(-model.noise_amplitude, model.noise_amplitude)
    return SensorReading(
        temperature_c=quantize_temperature(air, model),
        duration_min=duration_min,
        humidity_pct=int(_clamp(round(humidity), 0, FIELD_MAX)),
    )


@dataclass(frozen=True)
class ScenarioPoint:
    time_s: float
    outside_temp_c: float
    humidity_pct: float


@dataclass(frozen=True)
class TraceRow:
    time_s: float
    room: RoomState
    reading: SensorReading   # the effective reading the controller decided on
    speed: int


@dataclass(frozen=True)
class SimulationConfig:
    controller: ControllerConfig = ControllerConfig()
    plant: PlantParams = PlantParams()
    sensor: SensorModel = SensorModel()
    initial_air_temp: float = 25.0
    initial_humidity: float = 85.0
    seed: int = 0


def check_scenario(points) -> list[ScenarioPoint]:
    points = [p if isinstance(p, ScenarioPoint) else ScenarioPoint(*p) for p in points]
    for prev, cur in zip(points, points[1:]):
        if cur.time_s <= prev.time_s:
            raise ValueError(f"scenario breakpoints must be strictly increasing in time: "
                             f"{prev.time_s} then {cur.time_s}")
    return points


def run_scenario(points, config: SimulationConfig, weights) -> list[TraceRow]:
    """Run the closed loop over a scenario and return one trace row per tick.

    The scenario's last breakpoint sets the end of the run; an empty scenario
    runs zero ticks.  Plant parameters step to each breakpoint's values at its
    time.  Fully deterministic for a given (points, config, weights).
    """
    points = check_scenario(points)
    if not points:
        return []
    end_time = points[-1].time_s
    dt = config.controller.tick_interval
    n_ticks = math.floor(end_time / dt + 1e-9)

    room = RoomState(config.initial_air_temp, config.initial_humidity, 0.0)
    state = init(config.controller, weights, clock=0.0)
    rng = random.Random(config.seed)
    trace: list[TraceRow] = []

    seg = 0
    for k in range(1, n_ticks + 1):
        t_prev = (k - 1) * dt
        while seg + 1 < len(points) and points[seg + 1].time_s <= t_prev:
            seg += 1
        params = replace(config.plant,
                         outside_temp=points[seg].outside_temp_c,
                         humidity_target=points[seg].humidity_pct)
        room = step_plant(room, state.speed, params, dt)
        raw = sense(room, config.sensor, rng=rng)
        state, _ = tick(config.controller, state, raw, (), clock=room.sim_time)
        effective = SensorReading(
            raw.temperature_c,
            effective_duration(config.controller, state, room.sim_time),
            raw.humidity_pct,
        )
        trace.append(TraceRow(room.sim_time, room, effective, state.speed))
    return trace


def read_scenario_csv(path) -> list[ScenarioPoint]:
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected header "
                             f"{','.join(SCENARIO_CSV_FIELDS)}") from None
        if tuple(h.strip() for h in header) != SCENARIO_CSV_FIELDS:
            raise ValueError(f"{path}: line 1: bad header {header!r}, "
                             f"expected {','.join(SCENARIO_CSV_FIELDS)}")
        points = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(SCENARIO_CSV_FIELDS):
                raise ValueError(f"{path}: line {lineno}: expected "
                                 f"{len(SCENARIO_CSV_FIELDS)} cells, got {len(row)}")
            try:
                points.append(ScenarioPoint(*(float(cell) for cell in row)))
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
    return check_scenario(points)


def write_scenario_csv(path, points) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SCENARIO_CSV_FIELDS)
        for p in check_scenario(points):
            writer.writerow((_fmt(p.time_s), _fmt(p.outside_temp_c), _fmt(p.humidity_pct)))


def write_trace_csv(path, trace) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_CSV_FIELDS)
        for row in trace:
            writer.writerow((
                _fmt(row.time_s),
                _fmt(row.room.air_temp),
                _fmt(row.room.humidity),
                row.reading.temperature_c,
                row.reading.duration_min,
                row.speed,
            ))


def _fmt(value: float) -> str:
    """Stable decimal formatting so traces are byte-reproducible."""
    return f"{value:.4f}"
