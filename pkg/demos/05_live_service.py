"""Drive the live HTTP service the way the browser console does.

Starts a service on an ephemeral port, ticking 20x real time, then uses
nothing but HTTP: read state, subscribe to the event stream, press keypad
keys (including a LEARN + digit teaching sequence) and fetch the weights.

Run from the repo root:  python3 demos/05_live_service.py
"""

import json
import time
import urllib.request

from smartfan.controller import ControllerConfig
from smartfan.service import Service, Session

session = Session(config=ControllerConfig(tick_interval=5.0, startup_grace_ticks=2))
session.reset_weights("reference")
service = Service(session, port=0, real_tick_interval=0.05).start()
base = service.base_url
print(f"service on {base} (simulated 5 s per tick, 0.05 s wall clock)")


def get(path):
    with urllib.request.urlopen(base + path, timeout=5) as r:
        return json.loads(r.read())


def post(path, payload):
    req = urllib.request.Request(base + path, data=json.dumps(payload).encode(),
                                 headers={"Content-Type": "application/json"})
    with urllib.request.urlopen(req, timeout=5) as r:
        return json.loads(r.read())


try:
    time.sleep(0.3)  # let the startup grace pass
    snap = get("/state")
    print(f"tick {snap['tick']}: mode={snap['mode']} speed={snap['speed']} "
          f"room={snap['room']['air_temp']:.2f} degC")

    print("\npressing LEARN then 1 ...")
    post("/keypad", {"key": "learn"})
    time.sleep(0.1)
    post("/keypad", {"key": "1"})
    time.sleep(0.1)
    snap = get("/state")
    w = get("/weights")
    print(f"speed now {snap['speed']}, weights_version {w['weights_version']} "
          f"(bumped by the taught pair)")

    print("\nmaking it hot outside ...")
    post("/env", {"outside_temp": 45.0})

    print("four ticks from the event stream:")
    with urllib.request.urlopen(base + "/events", timeout=5) as stream:
        seen = 0
        for raw in stream:
            line = raw.decode().strip()
            if line.startswith("data: "):
                e = json.loads(line[6:])
                print(f"  tick {e['tick']}: {e['reading']['temperature_c']} degC "
                      f"sensed -> speed {e['speed']}")
                seen += 1
                if seen == 4:
                    break
finally:
    service.stop()
print("\nservice stopped")
