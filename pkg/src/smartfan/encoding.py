"""Codecs between sensor readings and the memory's 21-element bit vectors.

A reading is three small integers: temperature (deg C), duration (minutes
spent under the current thermal condition) and relative humidity (percent).
The associative memory consumes a reading as a single vector of 21 binary
digits: three 7-bit blocks in that field order, least-significant bit first
within each block.  Training uses the bipolar (-1/+1) form of the same
vector; recall uses the plain binary form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FIELD_BITS = 7
FIELD_MAX = (1 << FIELD_BITS) - 1
FIELD_NAMES = ("temperature_c", "duration_min", "humidity_pct")
VECTOR_LEN = FIELD_BITS * len(FIELD_NAMES)

_BIT_WEIGHTS = 1 << np.arange(FIELD_BITS)


@dataclass(frozen=True)
class SensorReading:
    """One sensed sample; every field must fit in 7 bits."""

    temperature_c: int
    duration_min: int
    humidity_pct: int

    def __post_init__(self):
        for name in FIELD_NAMES:
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise ValueError(f"{name} must be an integer, got {value!r}")
            if not 0 <= value <= FIELD_MAX:
                raise ValueError(f"{name} must be in [0, {FIELD_MAX}], got {value}")
            object.__setattr__(self, name, int(value))

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.temperature_c, self.duration_min, self.humidity_pct)


def as_input_vector(bits) -> np.ndarray:
    """Validate and return `bits` as a read-only binary vector of length 21."""
    v = np.asarray(bits, dtype=np.int64)
    if v.shape != (VECTOR_LEN,):
        raise ValueError(f"input vector must have shape ({VECTOR_LEN},), got {v.shape}")
    if not np.isin(v, (0, 1)).all():
        raise ValueError("input vector elements must be 0 or 1")
    v = v.copy()
    v.setflags(write=False)
    return v


def as_bipolar_vector(values) -> np.ndarray:
    """Validate and return `values` as a read-only -1/+1 vector of length 21."""
    v = np.asarray(values, dtype=np.int64)
    if v.shape != (VECTOR_LEN,):
        raise ValueError(f"bipolar vector must have shape ({VECTOR_LEN},), got {v.shape}")
    if not np.isin(v, (-1, 1)).all():
        raise ValueError("bipolar vector elements must be -1 or +1")
    v = v.copy()
    v.setflags(write=False)
    return v


def encode_reading(reading: SensorReading) -> np.ndarray:
    """Encode a reading as its 21-bit binary vector.

    Deterministic and injective over the full [0, 127]^3 domain: each field
    occupies its own 7-bit block, LSB first.
    """
    if not isinstance(reading, SensorReading):
        reading = SensorReading(*reading)
    blocks = [(value >> np.arange(FIELD_BITS)) & 1 for value in reading.as_tuple()]
    v = np.concatenate(blocks).astype(np.int64)
    v.setflags(write=False)
    return v


def decode_vector(vector) -> SensorReading:
    """Invert encode_reading: decode_vector(encode_reading(r)) == r."""
    v = as_input_vector(vector)
    fields = [int(v[i * FIELD_BITS:(i + 1) * FIELD_BITS] @ _BIT_WEIGHTS)
              for i in range(len(FIELD_NAMES))]
    return SensorReading(*fields)


def to_bipolar(vector) -> np.ndarray:
    """Map a binary vector to bipolar form, elementwise 0 -> -1 and 1 -> +1."""
    v = as_input_vector(vector)
    out = 2 * v - 1
    out.setflags(write=False)
    return out
