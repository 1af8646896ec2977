"""Adaptive fan-speed control with a trainable hetero-associative memory.

The package splits into: bit-exact reading codecs (`encoding`), the integer
associative memory (`memory`), the keypad-teachable control loop
(`controller`), a deterministic room model (`simulator`), bundled datasets
and file formats (`datafiles`), a local HTTP/SSE session (`service`) and the
command line (`cli`).
"""

__version__ = "0.1.0"

from .controller import (
    ActuationCommand,
    ControllerConfig,
    ControllerState,
    KeyEvent,
    LEARN_KEY,
    Mode,
    effective_duration,
    init,
    tick,
)
from .datafiles import (
    REFERENCE_RECALL_RATE,
    load_reference_matrix,
    load_table1,
    load_table2,
    read_training_csv,
    read_weights_json,
    write_training_csv,
    write_weights_json,
)
from .encoding import (
    SensorReading,
    decode_vector,
    encode_reading,
    to_bipolar,
)
from .memory import (
    TrainingPair,
    activate,
    decide,
    net_input,
    one_hot,
    recall_rate,
    train_batch,
    update,
    zero_matrix,
)
from .simulator import (
    PlantParams,
    RoomState,
    ScenarioPoint,
    SensorModel,
    SimulationConfig,
    run_scenario,
    sense,
    step_plant,
)

__all__ = [name for name in dir() if not name.startswith("_")]
