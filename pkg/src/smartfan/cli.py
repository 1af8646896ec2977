"""Command line entry points.

Subcommands: ``train`` (build or extend a weight matrix from a training CSV),
``decide`` (one-shot recall), ``reproduce`` (self-check of the bundled data
against the known-good reference values), ``surface`` (export the decision
grid behind the temperature/duration plot), ``simulate`` (closed-loop run
over a scenario file) and ``serve`` (live HTTP/SSE session).

Exit codes: 0 success, 1 check or verification failure, 2 usage/parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .controller import ControllerConfig
from .datafiles import (
    REFERENCE_ANCHOR_ROWS,
    REFERENCE_DECISIONS,
    REFERENCE_RECALL_RATE,
    TABLE2_HUMIDITY_BIT1_ROW,
    load_reference_matrix,
    load_table1,
    load_table2,
    read_training_csv,
    read_weights_json,
    write_weights_json,
)
from .encoding import SensorReading, encode_reading
from .memory import decide, net_input, recall_rate, train_batch, update, zero_matrix
from .service import DEFAULT_HOST, DEFAULT_PORT, Service, Session
from .simulator import (
    PlantParams,
    SensorModel,
    SimulationConfig,
    read_scenario_csv,
    run_scenario,
    write_trace_csv,
)

SURFACE_TEMP_RANGE = range(15, 42)
SURFACE_DURATION_RANGE = range(0, 71)


def _load_weights(spec: str):
    """A --weights argument: 'reference', 'zero', or a path to a weights JSON."""
    if spec == "reference":
        return load_reference_matrix()
    if spec == "zero":
        return zero_matrix()
    return read_weights_json(spec)


def _write_weights_atomic(path, w):
    # No partial output on failure: build the file next to the target, then move.
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    write_weights_json(tmp, w)
    os.replace(tmp, path)


def cmd_train(args) -> int:
    pairs = read_training_csv(args.data)
    base = zero_matrix() if args.base == "none" else _load_weights(args.base)
    w = update(base, pairs)
    _write_weights_atomic(args.out, w)
    print(f"stored {len(pairs)} pairs from {args.data} -> {args.out}")
    return 0


def cmd_decide(args) -> int:
    w = _load_weights(args.weights)
    reading = SensorReading(args.temp, args.duration, args.humidity)
    if args.show_net:
        y = net_input(w, encode_reading(reading))
        print(" ".join(str(int(v)) for v in y))
    print(decide(w, reading))
    return 0


def cmd_reproduce(args) -> int:
    failures = 0

    def check(name: str, ok: bool, detail: str = ""):
        nonlocal failures
        if ok:
            print(f"ok   {name}")
        else:
            failures += 1
            print(f"FAIL {name}" + (f": {detail}" if detail else ""))

    data_root = args.data_dir
    try:
        table1 = load_table1(data_root)
        table2 = load_table2(data_root)
        shipped = load_reference_matrix(data_root)
    except (OSError, ValueError) as exc:
        print(f"FAIL loading bundled data: {exc}")
        return 1

    check("table1 has 48 rows", len(table1) == 48, f"got {len(table1)}")
    check("table2 has 3 rows", len(table2) == 3, f"got {len(table2)}")

    rebuilt = train_batch(table1)
    for idx, expected in sorted(REFERENCE_ANCHOR_ROWS.items()):
        got = tuple(int(v) for v in rebuilt[idx])
        check(f"anchor row {idx + 1}", got == expected,
              f"expected {expected} got {got}")
    check("rebuilt matrix equals shipped reference",
          np.array_equal(rebuilt, shipped),
          "train_batch(table1) differs from reference_weights.json")

    for (fields, expected_net, expected_speed) in REFERENCE_DECISIONS:
        reading = SensorReading(*fields)
        got_net = tuple(int(v) for v in net_input(rebuilt, encode_reading(reading)))
        check(f"net input {fields}", got_net == expected_net,
              f"expected {expected_net} got {got_net}")
        got_speed = decide(rebuilt, reading)
        check(f"decision {fields} -> {expected_speed}", got_speed == expected_speed,
              f"got {got_speed}")

    incremental = update(rebuilt, table2)
    check("incremental update equals batch over both tables",
          np.array_equal(incremental, train_batch(table1 + table2)))
    got_row = tuple(int(v) for v in incremental[14])
    check("humidity bit 1 row after runtime pairs",
          got_row == TABLE2_HUMIDITY_BIT1_ROW,
          f"expected {TABLE2_HUMIDITY_BIT1_ROW} got {got_row}")

    rate = recall_rate(rebuilt, table1)
    hits = round(rate * len(table1))
    check(f"training-set recall {hits}/{len(table1)}", rate == REFERENCE_RECALL_RATE,
          f"expected {REFERENCE_RECALL_RATE} got {rate}")

    print("all checks passed" if failures == 0 else f"{failures} check(s) failed")
    return 0 if failures == 0 else 1


def cmd_surface(args) -> int:
    import csv as _csv

    w = _load_weights(args.weights)
    if not 0 <= args.humidity <= 127:
        raise ValueError(f"humidity must be in [0, 127], got {args.humidity}")
    with Path(args.out).open("w", newline="") as fh:
        writer = _csv.writer(fh)
        writer.writerow(("temperature_c", "duration_min", "speed"))
        for t in SURFACE_TEMP_RANGE:
            for d in SURFACE_DURATION_RANGE:
                writer.writerow((t, d, decide(w, SensorReading(t, d, args.humidity))))
    n = len(SURFACE_TEMP_RANGE) * len(SURFACE_DURATION_RANGE)
    print(f"wrote {n} grid points at humidity {args.humidity} -> {args.out}")
    return 0


def _sim_config_from_file(path) -> SimulationConfig:
    if path is None:
        return SimulationConfig()
    doc = json.loads(Path(path).read_text())
    controller_keys = ("tick_interval", "startup_grace_ticks",
                       "temperature_band_deg", "duration_cap_min")
    plant_keys = ("k_env", "cool_rate", "humidity_drift")
    sensor_keys = ("adc_bits", "degrees_per_count", "noise_amplitude")
    top_keys = ("initial_air_temp", "initial_humidity", "seed")
    unknown = set(doc) - set(controller_keys + plant_keys + sensor_keys + top_keys)
    if unknown:
        raise ValueError(f"{path}: unknown config keys {sorted(unknown)}")
    controller = ControllerConfig(**{k: doc[k] for k in controller_keys if k in doc})
    plant = PlantParams(**{k: tuple(doc[k]) if k == "cool_rate" else doc[k]
                           for k in plant_keys if k in doc})
    sensor = SensorModel(**{k: doc[k] for k in sensor_keys if k in doc})
    return SimulationConfig(controller=controller, plant=plant, sensor=sensor,
                            **{k: doc[k] for k in top_keys if k in doc})


def cmd_simulate(args) -> int:
    points = read_scenario_csv(args.scenario)
    config = _sim_config_from_file(args.config)
    w = _load_weights(args.weights)
    trace = run_scenario(points, config, w)
    write_trace_csv(args.out, trace)
    print(f"simulated {len(trace)} ticks -> {args.out}")
    return 0


def cmd_serve(args) -> int:
    session = Session(
        config=ControllerConfig(tick_interval=args.tick_interval),
        weights=_load_weights(args.weights),
        training_log_path=args.training_log,
    )
    service = Service(session, host=args.host, port=args.port,
                      static_dir=args.console, real_tick_interval=args.real_interval)
    host, port = service.address
    # flush so wrappers reading a pipe see the address before the loop blocks
    print(f"serving on http://{host}:{port} (Ctrl-C to stop)", flush=True)
    service.run_forever()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smartfan",
        description="Adaptive fan-speed controller with a trainable associative memory.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="build or extend a weight matrix from a training CSV")
    p.add_argument("--data", required=True, help="training CSV path")
    p.add_argument("--base", default="none",
                   help="starting matrix: none, reference, zero, or a weights JSON path")
    p.add_argument("--out", required=True, help="output weights JSON path")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("decide", help="recall the fan speed for one reading")
    p.add_argument("--weights", required=True,
                   help="weights JSON path, or 'reference' / 'zero'")
    p.add_argument("--temp", type=int, required=True, help="temperature, deg C")
    p.add_argument("--duration", type=int, required=True, help="duration, minutes")
    p.add_argument("--humidity", type=int, required=True, help="relative humidity, percent")
    p.add_argument("--show-net", action="store_true",
                   help="also print the six net-input integers")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("reproduce",
                       help="verify the bundled dataset and reference matrix end to end")
    p.add_argument("--data-dir", default=None,
                   help="override the bundled data directory (for fault testing)")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("surface", help="export the decision grid at a fixed humidity")
    p.add_argument("--weights", required=True)
    p.add_argument("--humidity", type=int, required=True)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("simulate", help="run the closed loop over a scenario CSV")
    p.add_argument("--scenario", required=True, help="scenario CSV path")
    p.add_argument("--weights", required=True)
    p.add_argument("--config", default=None, help="simulation config JSON path")
    p.add_argument("--out", required=True, help="output trace CSV path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("serve", help="run the live HTTP/SSE control session")
    p.add_argument("--host", default=DEFAULT_HOST)
    p.add_argument("--port", type=int, default=DEFAULT_PORT)
    p.add_argument("--weights", default="reference")
    p.add_argument("--tick-interval", type=float, default=5.0,
                   help="simulated seconds per tick")
    p.add_argument("--real-interval", type=float, default=None,
                   help="wall-clock seconds between ticks (default: tick interval)")
    p.add_argument("--console", default=None,
                   help="directory of console static files to serve at /")
    p.add_argument("--training-log", default=None,
                   help="CSV file to append runtime-taught pairs to")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
