import math
import random
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from smartfan.controller import ControllerConfig
from smartfan.simulator import (
    AIR_TEMP_MAX,
    AIR_TEMP_MIN,
    PlantParams,
    RoomState,
    ScenarioPoint,
    SensorModel,
    SimulationConfig,
    check_scenario,
    quantize_temperature,
    read_scenario_csv,
    run_scenario,
    sense,
    step_plant,
    write_scenario_csv,
    write_trace_csv,
)

DATA = Path(__file__).parent / "data"


class TestRoomState:
    def test_bounds_enforced(self):
        with pytest.raises(ValueError):
            RoomState(air_temp=AIR_TEMP_MAX + 1, humidity=50.0)
        with pytest.raises(ValueError):
            RoomState(air_temp=25.0, humidity=101.0)


class TestPlantParams:
    def test_defaults_valid(self):
        PlantParams()

    @pytest.mark.parametrize("kwargs", [
        {"k_env": -0.1},
        {"cool_rate": (0.0, 0.1)},
        {"cool_rate": (0.1, 0.2, 0.3, 0.4, 0.5, 0.6)},
        {"cool_rate": (0.0, 0.3, 0.2, 0.4, 0.5, 0.6)},
        {"outside_temp": float("nan")},
    ])
    def test_rejects_bad_params(self, kwargs):
        with pytest.raises(ValueError):
            PlantParams(**kwargs)


class TestStepPlant:
    def test_equilibrium_is_a_fixed_point(self):
        params = PlantParams(outside_temp=30.0)
        room = RoomState(air_temp=30.0, humidity=85.0)
        after = step_plant(room, 0, params, dt=5.0)
        assert after.air_temp == 30.0
        assert after.humidity == 85.0
        assert after.sim_time == 5.0

    def test_cooling_term_alone(self):
        # With no outside coupling the fan removes heat linearly.
        params = PlantParams(outside_temp=30.0, k_env=0.0,
                             cool_rate=(0.0, 0.001, 0.002, 0.003, 0.004, 0.01))
        room = RoomState(air_temp=30.0, humidity=85.0)
        after = step_plant(room, 5, params, dt=10.0)
        assert after.air_temp == pytest.approx(29.9)

    def test_warms_toward_hotter_outside(self):
        params = PlantParams(outside_temp=39.0)
        room = RoomState(air_temp=25.0, humidity=85.0)
        after = step_plant(room, 0, params, dt=5.0)
        assert 25.0 < after.air_temp < 39.0

    def test_faster_fan_cools_more(self):
        params = PlantParams(outside_temp=39.0)
        room = RoomState(air_temp=30.0, humidity=85.0)
        temps = [step_plant(room, s, params, dt=5.0).air_temp for s in range(6)]
        assert temps == sorted(temps, reverse=True)
        assert temps[0] > temps[5]

    def test_humidity_drifts_toward_target(self):
        params = PlantParams(humidity_target=60.0, humidity_drift=0.05)
        room = RoomState(air_temp=25.0, humidity=85.0)
        after = step_plant(room, 0, params, dt=5.0)
        assert 60.0 <= after.humidity < 85.0

    def test_rejects_bad_dt_and_speed(self):
        room = RoomState(air_temp=25.0, humidity=85.0)
        with pytest.raises(ValueError):
            step_plant(room, 0, PlantParams(), dt=0.0)
        with pytest.raises(ValueError):
            step_plant(room, 6, PlantParams(), dt=5.0)

    @given(
        air=st.floats(AIR_TEMP_MIN, AIR_TEMP_MAX),
        outside=st.floats(-50.0, 120.0),
        speed=st.integers(0, 5),
        dt=st.floats(0.1, 60.0),
    )
    def test_air_temp_stays_clamped(self, air, outside, speed, dt):
        params = PlantParams(outside_temp=outside, k_env=0.02)
        after = step_plant(RoomState(air, 85.0), speed, params, dt)
        assert AIR_TEMP_MIN <= after.air_temp <= AIR_TEMP_MAX


class TestSensing:
    @pytest.mark.parametrize("air, expected", [
        (28.0, 28),     # on-grid value passes through
        (28.49, 28),    # floors to the half-degree grid, then whole degrees
        (28.5, 28),
        (28.99, 28),
        (29.0, 29),
        (38.5, 38),
        (-3.0, 0),      # counts clamp at zero
    ])
    def test_quantize(self, air, expected):
        assert quantize_temperature(air, SensorModel()) == expected

    def test_quantize_respects_adc_range(self):
        # 4-bit converter at 0.5 degC/count tops out at count 15 -> 7 degC.
        model = SensorModel(adc_bits=4, degrees_per_count=0.5)
        assert quantize_temperature(50.0, model) == 7

    def test_sense_rounds_humidity(self):
        room = RoomState(air_temp=25.0, humidity=85.4)
        assert sense(room, SensorModel()).humidity_pct == 85
        room = RoomState(air_temp=25.0, humidity=85.6)
        assert sense(room, SensorModel()).humidity_pct == 86

    def test_sense_is_quiet_by_default(self):
        room = RoomState(air_temp=25.3, humidity=85.0)
        a = sense(room, SensorModel())
        b = sense(room, SensorModel())
        assert a == b
        assert a.temperature_c == 25
        assert a.duration_min == 0

    def test_noise_requires_explicit_rng(self):
        room = RoomState(air_temp=25.0, humidity=85.0)
        noisy = SensorModel(noise_amplitude=0.2)
        with pytest.raises(ValueError):
            sense(room, noisy)
        a = sense(room, noisy, rng=random.Random(7))
        b = sense(room, noisy, rng=random.Random(7))
        assert a == b


class TestScenarioChecks:
    def test_orders_must_increase(self):
        with pytest.raises(ValueError):
            check_scenario([(0.0, 30.0, 85.0), (0.0, 31.0, 85.0)])
        with pytest.raises(ValueError):
            check_scenario([(10.0, 30.0, 85.0), (5.0, 31.0, 85.0)])

    def test_accepts_tuples(self):
        pts = check_scenario([(0.0, 30.0, 85.0), (10.0, 31.0, 85.0)])
        assert all(isinstance(p, ScenarioPoint) for p in pts)


class TestRunScenario:
    def test_empty_scenario_runs_zero_ticks(self, reference_matrix):
        assert run_scenario([], SimulationConfig(), reference_matrix) == []

    def test_tick_count_comes_from_last_breakpoint(self, reference_matrix):
        config = SimulationConfig(controller=ControllerConfig(tick_interval=5.0))
        trace = run_scenario([(0.0, 25.0, 85.0), (60.0, 25.0, 85.0)],
                             config, reference_matrix)
        assert len(trace) == 12
        assert trace[-1].time_s == 60.0

    def test_constant_room_with_inert_plant(self, reference_matrix):
        # No coupling and no cooling: the trace is flat regardless of speed.
        config = SimulationConfig(
            controller=ControllerConfig(tick_interval=5.0, startup_grace_ticks=0),
            plant=PlantParams(k_env=0.0, cool_rate=(0.0,) * 6, humidity_drift=0.0),
            initial_air_temp=28.0,
            initial_humidity=85.0,
        )
        trace = run_scenario([(0.0, 28.0, 85.0), (100.0, 28.0, 85.0)],
                             config, reference_matrix)
        assert {row.room.air_temp for row in trace} == {28.0}
        assert {row.reading.temperature_c for row in trace} == {28}

    def test_deterministic(self, reference_matrix):
        points = [(0.0, 39.0, 85.0), (300.0, 39.0, 85.0)]
        a = run_scenario(points, SimulationConfig(), reference_matrix)
        b = run_scenario(points, SimulationConfig(), reference_matrix)
        assert a == b

    def test_breakpoint_switches_outside_temp(self, reference_matrix):
        config = SimulationConfig(
            plant=PlantParams(k_env=0.05, cool_rate=(0.0,) * 6),
            initial_air_temp=25.0,
        )
        trace = run_scenario(
            [(0.0, 25.0, 85.0), (100.0, 39.0, 85.0), (200.0, 39.0, 85.0)],
            config, reference_matrix)
        first_half = trace[:20]
        second_half = trace[20:]
        assert all(row.room.air_temp == 25.0 for row in first_half)
        assert second_half[-1].room.air_temp > 26.0


class TestGoldenTraces:
    """Frozen end-to-end runs; regenerate only for deliberate model changes."""

    def check_frozen(self, name, tmp_path, reference_matrix):
        import json

        points = read_scenario_csv(DATA / f"{name}_scenario.csv")
        raw = json.loads((DATA / f"{name}_config.json").read_text())
        config = SimulationConfig(
            initial_air_temp=raw["initial_air_temp"],
            initial_humidity=raw["initial_humidity"],
        )
        trace = run_scenario(points, config, reference_matrix)
        out = tmp_path / "trace.csv"
        write_trace_csv(out, trace)
        assert out.read_bytes() == (DATA / f"{name}_trace.csv").read_bytes()
        return trace

    def test_hot_day_holds_full_speed(self, tmp_path, reference_matrix):
        trace = self.check_frozen("hot_day", tmp_path, reference_matrix)
        grace = ControllerConfig().startup_grace_ticks
        settled = [row.speed for row in trace[grace + 2:]]
        assert settled and set(settled) == {5}

    def test_cool_evening_reaches_zero(self, tmp_path, reference_matrix):
        trace = self.check_frozen("cool_evening", tmp_path, reference_matrix)
        final = trace[-1]
        assert final.reading.temperature_c == 17
        assert final.reading.duration_min == 60
        assert final.speed == 0
        # Once the duration input saturates the speed stays at zero.
        tail = [row.speed for row in trace if row.reading.duration_min >= 55]
        assert tail and set(tail) == {0}


class TestScenarioFiles:
    def test_round_trip(self, tmp_path):
        points = [ScenarioPoint(0.0, 39.0, 85.0), ScenarioPoint(900.0, 17.2, 80.0)]
        path = tmp_path / "scenario.csv"
        write_scenario_csv(path, points)
        got = read_scenario_csv(path)
        assert [(p.time_s, p.outside_temp_c, p.humidity_pct) for p in got] == \
               [(0.0, 39.0, 85.0), (900.0, 17.2, 80.0)]

    def test_read_rejects_bad_header(self, tmp_path):
        path = tmp_path / "scenario.csv"
        path.write_text("time,outside,humidity\n0,30,85\n")
        with pytest.raises(ValueError, match="line 1"):
            read_scenario_csv(path)

    def test_read_rejects_bad_cell_with_line_number(self, tmp_path):
        path = tmp_path / "scenario.csv"
        path.write_text("time_s,outside_temp_c,humidity_pct\n0,30,85\n10,oops,85\n")
        with pytest.raises(ValueError, match="line 3"):
            read_scenario_csv(path)

    def test_read_rejects_short_row(self, tmp_path):
        path = tmp_path / "scenario.csv"
        path.write_text("time_s,outside_temp_c,humidity_pct\n0,30\n")
        with pytest.raises(ValueError, match="line 2"):
            read_scenario_csv(path)

    def test_trace_format_is_stable(self, tmp_path):
        room = RoomState(air_temp=28.125, humidity=85.0, sim_time=5.0)
        from smartfan.encoding import SensorReading
        from smartfan.simulator import TraceRow
        row = TraceRow(5.0, room, SensorReading(28, 0, 85), 2)
        path = tmp_path / "trace.csv"
        write_trace_csv(path, [row])
        assert path.read_bytes() == (
            b"time_s,air_temp_c,humidity_pct,sensed_temp_c,duration_min,speed\r\n"
            b"5.0000,28.1250,85.0000,28,0,2\r\n"
        )
