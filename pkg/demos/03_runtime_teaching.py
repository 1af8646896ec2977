"""Teach the controller new preferences at runtime with the LEARN key.

The controller keypad has digits 0-5 plus LEARN.  A digit alone overrides
the fan speed for one tick; LEARN followed by a digit stores the current
(temperature, epoch duration, humidity) -> digit association for good.

Run from the repo root:  python3 demos/03_runtime_teaching.py
"""

import numpy as np

from smartfan.controller import ControllerConfig, KeyEvent, LEARN_KEY, init, tick
from smartfan.datafiles import load_reference_matrix
from smartfan.encoding import SensorReading

config = ControllerConfig(tick_interval=5.0, startup_grace_ticks=0)
state = init(config, load_reference_matrix(), clock=0.0)
room = SensorReading(30, 0, 85)  # 30 degC, 85 % RH; duration comes from the clock

# Anchor the duration epoch, then let 20 simulated minutes pass per step.
state, cmd = tick(config, state, room, clock=0.0)
print(f"t=0    controller decides speed {cmd.speed} for 30 degC")

for minutes, wanted in [(20, 4), (40, 3), (60, 2)]:
    clock = minutes * 60.0
    state, _ = tick(config, state, room, keys=[LEARN_KEY], clock=clock)
    print(f"t={minutes}m  LEARN pressed (armed={state.learn_armed})")
    state, cmd = tick(config, state, room, keys=[KeyEvent(digit=wanted)], clock=clock)
    taught = state.training_log[-1]
    print(f"       digit {wanted}: stored {taught.reading.as_tuple()} -> {taught.speed}, "
          f"fan now {cmd.speed}")

print(f"\ntraining log: {[(p.reading.as_tuple(), p.speed) for p in state.training_log]}")

# The taught pairs recall correctly from then on.
from smartfan.memory import decide
for minutes, wanted in [(20, 4), (40, 3), (60, 2)]:
    got = decide(state.weights, SensorReading(30, minutes, 85))
    print(f"recall 30 degC @ {minutes} min -> speed {got} (taught {wanted})")

# Without LEARN a digit is only a one-tick override; the matrix is untouched.
w_before = state.weights
state, cmd = tick(config, state, room, keys=[KeyEvent(digit=5)], clock=3600.0)
print(f"\nmanual 5: fan {cmd.speed} this tick, weights unchanged: "
      f"{np.array_equal(state.weights, w_before)}")
state, cmd = tick(config, state, room, clock=3605.0)
print(f"next tick the memory is back in charge: speed {cmd.speed}")
