"""Close the loop: simulated room -> quantized sensing -> controller -> fan.

A hot afternoon (39 degC outside) is followed by a cool evening (17.2 degC).
Watch the fan pin itself at full speed while it is hot, then wind down to
off as the cool reading persists and the duration input saturates.

Run from the repo root:  python3 demos/04_closed_loop.py
"""

from smartfan.datafiles import load_reference_matrix
from smartfan.simulator import SimulationConfig, run_scenario

# Breakpoints: (time_s, outside_temp_c, humidity_pct); values hold until the next one.
scenario = [
    (0.0, 39.0, 85.0),       # hot afternoon
    (900.0, 17.2, 85.0),     # evening: outside drops
    (5400.0, 17.2, 85.0),    # ...and stays cool for 75 minutes
]

config = SimulationConfig(initial_air_temp=25.0, initial_humidity=85.0)
trace = run_scenario(scenario, config, load_reference_matrix())
print(f"{len(trace)} ticks of {config.controller.tick_interval:.0f} s "
      f"({trace[-1].time_s / 60:.0f} simulated minutes)\n")

print("  time   air degC  sensed  dur_min  speed")
marks = " .:-=*#"
last_speed = None
for row in trace:
    if row.speed != last_speed or row is trace[-1]:
        bar = marks[row.speed + 1] * (row.speed * 4 or 1)
        print(f"{row.time_s:6.0f}  {row.room.air_temp:8.2f}  {row.reading.temperature_c:6d}"
              f"  {row.reading.duration_min:7d}  {row.speed:5d}  {bar}")
        last_speed = row.speed

final = trace[-1]
print(f"\nfinal: air {final.room.air_temp:.2f} degC sensed {final.reading.temperature_c}, "
      f"{final.reading.duration_min} min into the cool epoch, fan speed {final.speed}")
