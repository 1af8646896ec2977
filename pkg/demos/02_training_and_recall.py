"""Train the associative memory on the bundled preference data and recall from it.

Run from the repo root:  python3 demos/02_training_and_recall.py
"""

import numpy as np

from smartfan.datafiles import load_table1, load_table2
from smartfan.encoding import SensorReading, encode_reading
from smartfan.memory import decide, net_input, recall_rate, train_batch, update

pairs = load_table1()
print(f"base preference set: {len(pairs)} (reading -> speed) pairs, e.g.")
for p in pairs[:3]:
    print(f"  {p.reading.as_tuple()} -> speed {p.speed}")

# One matrix stores all of them: +1/-1 outer products summed per pair.
w = train_batch(pairs)
print(f"\nweight matrix: {w.shape[0]} rows (input bits) x {w.shape[1]} cols (speeds)")
print("first rows:", w[0].tolist(), w[1].tolist(), "...")

# Recall is a single matrix product followed by winner-take-all.
for fields in [(28, 60, 85), (40, 10, 85), (17, 40, 85)]:
    reading = SensorReading(*fields)
    y = net_input(w, encode_reading(reading))
    print(f"net inputs for {fields}: {y.tolist()}  ->  speed {decide(w, reading)}")

print(f"\ntraining-set recall: {recall_rate(w, pairs):.2%} "
      f"({round(recall_rate(w, pairs) * len(pairs))}/{len(pairs)})")

# New preferences stack on top without retraining from scratch.
extra = load_table2()
w2 = update(w, extra)
print(f"\nafter storing {len(extra)} more pairs (same matrix, just summed in):")
for p in extra:
    print(f"  {p.reading.as_tuple()} now recalls speed {decide(w2, p.reading)} "
          f"(stored {p.speed})")
assert np.array_equal(w2, train_batch(pairs + extra)), "incremental == batch"
print("update(train_batch(a), b) == train_batch(a + b)")
