"""The hetero-associative memory behind the fan-speed decisions.

Training accumulates outer products of bipolar input vectors with one-hot
target vectors into a 21x6 signed integer matrix; recall multiplies the
binary input vector through the matrix and picks the class with the largest
net input.  Everything is exact integer arithmetic, so stored patterns and
decisions are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .encoding import SensorReading, VECTOR_LEN, as_input_vector, encode_reading, to_bipolar

N_CLASSES = 6
MAX_SPEED = N_CLASSES - 1


def _check_speed(speed) -> int:
    if isinstance(speed, bool) or not isinstance(speed, (int, np.integer)):
        raise ValueError(f"speed must be an integer, got {speed!r}")
    if not 0 <= speed <= MAX_SPEED:
        raise ValueError(f"speed must be in [0, {MAX_SPEED}], got {speed}")
    return int(speed)


@dataclass(frozen=True)
class TrainingPair:
    """One stored association: a reading and the fan speed it should recall."""

    reading: SensorReading
    speed: int

    def __post_init__(self):
        if not isinstance(self.reading, SensorReading):
            raise ValueError(f"reading must be a SensorReading, got {self.reading!r}")
        object.__setattr__(self, "speed", _check_speed(self.speed))


def one_hot(speed: int) -> np.ndarray:
    """The 6-element target vector with a single 1 at the speed's index."""
    t = np.zeros(N_CLASSES, dtype=np.int64)
    t[_check_speed(speed)] = 1
    t.setflags(write=False)
    return t


def as_weight_matrix(w) -> np.ndarray:
    """Validate and return `w` as a read-only 21x6 signed integer matrix."""
    m = np.asarray(w)
    if m.shape != (VECTOR_LEN, N_CLASSES):
        raise ValueError(f"weight matrix must have shape ({VECTOR_LEN}, {N_CLASSES}), got {m.shape}")
    if not np.issubdtype(m.dtype, np.integer):
        if not np.equal(np.asarray(m, dtype=np.float64), np.round(np.asarray(m, dtype=np.float64))).all():
            raise ValueError("weight matrix entries must be integers")
    m = m.astype(np.int64)
    m.setflags(write=False)
    return m


def zero_matrix() -> np.ndarray:
    """The empty memory: all 126 weights at zero."""
    w = np.zeros((VECTOR_LEN, N_CLASSES), dtype=np.int64)
    w.setflags(write=False)
    return w


def update(w, pairs: Iterable[TrainingPair]) -> np.ndarray:
    """Store `pairs` on top of an existing matrix and return the new matrix.

    Each pair adds the outer product of its bipolar input vector and one-hot
    target to the weights.  Pairs are applied by summation, so the result is
    independent of their order, and invalid input raises before anything is
    accumulated (no partial application).  The input matrix is not modified.
    """
    w = as_weight_matrix(w)
    pairs = list(pairs)
    for pair in pairs:
        if not isinstance(pair, TrainingPair):
            raise ValueError(f"expected a TrainingPair, got {pair!r}")
    delta = np.zeros_like(w)
    for pair in pairs:
        x = to_bipolar(encode_reading(pair.reading))
        delta += np.outer(x, one_hot(pair.speed))
    out = w + delta
    out.setflags(write=False)
    return out


def train_batch(pairs: Iterable[TrainingPair]) -> np.ndarray:
    """Build a matrix from scratch: update(zero_matrix(), pairs)."""
    return update(zero_matrix(), pairs)


def net_input(w, x) -> np.ndarray:
    """Net input per output class: the binary vector `x` selects rows of `w`."""
    w = as_weight_matrix(w)
    x = as_input_vector(x)
    y = x @ w
    y.setflags(write=False)
    return y


def activate(y) -> np.ndarray:
    """Winner-take-all: one-hot vector marking the largest net input.

    Ties go to the lowest class index, i.e. the slowest fan speed among the
    winners, so the result is always exactly one-hot.
    """
    y = np.asarray(y)
    if y.shape != (N_CLASSES,):
        raise ValueError(f"net input must have shape ({N_CLASSES},), got {y.shape}")
    return one_hot(int(np.argmax(y)))


def decide(w, reading: SensorReading) -> int:
    """Recall the fan speed for a reading: encode, propagate, take the winner."""
    return int(np.argmax(net_input(w, encode_reading(reading))))


def recall_rate(w, pairs: Sequence[TrainingPair]) -> float:
    """Fraction of pairs whose stored reading recalls its stored speed."""
    pairs = list(pairs)
    if not pairs:
        raise ValueError("recall_rate needs at least one training pair")
    hits = sum(1 for pair in pairs if decide(w, pair.reading) == pair.speed)
    return hits / len(pairs)
