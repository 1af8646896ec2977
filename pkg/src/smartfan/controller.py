"""Fan controller state machine: startup, keypad teaching, periodic decisions.

The controller starts in free-running mode with the fan at full speed, and
after a configurable grace period switches to regulating mode where every
tick re-decides the speed from the current reading.  The keypad carries six
digit keys plus one LEARN key: LEARN arms a one-shot training mode, and the
next digit both sets the speed and stores (current reading -> that speed)
into the weight matrix.  A digit without LEARN overrides the speed for the
current tick only.

All functions are pure: they take a state and return a new one, so a tick
that raises leaves the caller's state untouched (the previous speed keeps
driving the fan).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .encoding import FIELD_MAX, SensorReading
from .memory import MAX_SPEED, TrainingPair, _check_speed, as_weight_matrix, decide, update

SECONDS_PER_MINUTE = 60.0


class Mode(Enum):
    FREE_RUNNING = "free_running"
    REGULATING = "regulating"


@dataclass(frozen=True)
class KeyEvent:
    """A keypad press: digit 0-5, or the LEARN key (digit is None)."""

    digit: int | None = None

    def __post_init__(self):
        if self.digit is not None:
            object.__setattr__(self, "digit", _check_speed(self.digit))

    @property
    def is_learn(self) -> bool:
        return self.digit is None


LEARN_KEY = KeyEvent()


@dataclass(frozen=True)
class ControllerConfig:
    tick_interval: float = 5.0            # seconds between ticks
    startup_grace_ticks: int = 12         # free-running ticks before regulating
    temperature_band_deg: int = 1         # sensed-temperature move that restarts the duration epoch
    duration_cap_min: int = 60            # ceiling for the duration input, minutes

    def __post_init__(self):
        if not self.tick_interval > 0:
            raise ValueError(f"tick_interval must be > 0, got {self.tick_interval}")
        if self.startup_grace_ticks < 0:
            raise ValueError(f"startup_grace_ticks must be >= 0, got {self.startup_grace_ticks}")
        if self.temperature_band_deg < 1:
            raise ValueError(f"temperature_band_deg must be >= 1, got {self.temperature_band_deg}")
        if not 1 <= self.duration_cap_min <= FIELD_MAX:
            raise ValueError(f"duration_cap_min must be in [1, {FIELD_MAX}], "
                             f"got {self.duration_cap_min}")


@dataclass(frozen=True)
class ActuationCommand:
    """The relay-bank setting for a tick: speed index plus its tap label."""

    speed: int
    relay_tap: str

    @classmethod
    def for_speed(cls, speed: int) -> "ActuationCommand":
        return cls(speed=speed, relay_tap=f"R{speed}")


@dataclass(frozen=True)
class ControllerState:
    mode: Mode
    speed: int
    weights: np.ndarray
    learn_armed: bool
    epoch_start: float        # clock at the last duration-epoch restart
    epoch_temperature: int    # sensed temperature anchoring the epoch
    tick_count: int
    training_log: tuple[TrainingPair, ...] = ()  # pairs taught at runtime, oldest first


def init(config: ControllerConfig, weights, clock: float) -> ControllerState:
    """Fresh controller: free-running at full speed, epoch anchored at `clock`.

    The weight matrix is carried but unused until the first regulated tick.
    The epoch temperature starts at 0 degC, so the first real reading restarts
    the epoch unless the room actually is at 0.
    """
    return ControllerState(
        mode=Mode.FREE_RUNNING,
        speed=MAX_SPEED,
        weights=as_weight_matrix(weights),
        learn_armed=False,
        epoch_start=float(clock),
        epoch_temperature=0,
        tick_count=0,
    )


def effective_duration(config: ControllerConfig, state: ControllerState, clock: float) -> int:
    """Whole minutes since the epoch started, capped at duration_cap_min."""
    return _duration_from(config, state.epoch_start, clock)


def _duration_from(config: ControllerConfig, epoch_start: float, clock: float) -> int:
    if clock < epoch_start:
        raise ValueError(f"clock {clock} precedes epoch start {epoch_start}")
    minutes = math.floor((clock - epoch_start) / SECONDS_PER_MINUTE)
    return min(minutes, config.duration_cap_min)


def _check_reading(reading) -> SensorReading:
    if not isinstance(reading, SensorReading):
        raise ValueError(f"expected a SensorReading, got {reading!r}")
    # Re-validate defensively: a tick must fail before touching any state.
    return SensorReading(*reading.as_tuple())


def tick(config: ControllerConfig, state: ControllerState, reading: SensorReading,
         keys: Sequence[KeyEvent] = (), clock: float = 0.0,
         ) -> tuple[ControllerState, ActuationCommand]:
    """Advance the controller by one tick.

    Processing order: mode promotion, keypad, duration epoch, decision.  The
    keypad is live only in regulating mode; during the startup grace the fan
    stays at full speed regardless of keys or readings.  The reading's own
    duration_min field is ignored; duration always comes from the epoch clock.
    """
    reading = _check_reading(reading)
    keys = list(keys)
    for key in keys:
        if not isinstance(key, KeyEvent):
            raise ValueError(f"expected a KeyEvent, got {key!r}")

    mode = state.mode
    speed = state.speed
    weights = state.weights
    learn_armed = state.learn_armed
    epoch_start = state.epoch_start
    epoch_temperature = state.epoch_temperature
    training_log = state.training_log

    if mode is Mode.FREE_RUNNING and state.tick_count >= config.startup_grace_ticks:
        mode = Mode.REGULATING

    manual_override = False
    if mode is Mode.REGULATING:
        for key in keys:
            if key.is_learn:
                learn_armed = not learn_armed
                continue
            if learn_armed:
                taught = SensorReading(
                    reading.temperature_c,
                    _duration_from(config, epoch_start, clock),
                    reading.humidity_pct,
                )
                pair = TrainingPair(taught, key.digit)
                weights = update(weights, [pair])
                training_log = training_log + (pair,)
                learn_armed = False
            speed = key.digit
            manual_override = True

    if abs(reading.temperature_c - epoch_temperature) >= config.temperature_band_deg:
        epoch_start = float(clock)
        epoch_temperature = reading.temperature_c

    if mode is Mode.REGULATING and not manual_override:
        effective = SensorReading(
            reading.temperature_c,
            _duration_from(config, epoch_start, clock),
            reading.humidity_pct,
        )
        speed = decide(weights, effective)

    new_state = ControllerState(
        mode=mode,
        speed=speed,
        weights=weights,
        learn_armed=learn_armed,
        epoch_start=epoch_start,
        epoch_temperature=epoch_temperature,
        tick_count=state.tick_count + 1,
        training_log=training_log,
    )
    return new_state, ActuationCommand.for_speed(speed)
