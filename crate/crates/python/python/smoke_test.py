"""Smoke test for the leonav Python module.

Uses an installed ``leonav`` when there is one. Otherwise it loads the shared
library from the workspace ``target`` directory (run ``cargo build --release
-p leonav-py`` first).
"""

import glob
import importlib.util
import json
import os
import sys


def load():
    try:
        import leonav

        return leonav
    except ImportError:
        pass
    root = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "..", ".."))
    for profile in ("release", "debug"):
        for path in glob.glob(os.path.join(root, "target", profile, "libleonav_py.*")):
            if path.endswith((".so", ".dylib", ".pyd")):
                spec = importlib.util.spec_from_file_location("leonav", path)
                module = importlib.util.module_from_spec(spec)
                spec.loader.exec_module(module)
                return module
    sys.exit("leonav module not found; build it with `cargo build --release -p leonav-py`")


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    lv = load()
    print("leonav", lv.__version__)

    walker = lv.WalkerSpec(300, 900.0, 90.0)
    assert (walker.planes, walker.phasing) == (15, 1), walker
    positions = walker.positions_ecef(600.0)
    assert len(positions) == 300
    radius = (positions[0][0] ** 2 + positions[0][1] ** 2 + positions[0][2] ** 2) ** 0.5
    assert close(radius, 6378.137 + 900.0, 1e-6), radius
    print(walker)

    site = lv.site_to_ecef(0.0, 0.0)
    look = lv.az_el_range(site, (7378.137, 0.0, 0.0))
    assert close(look["elevation_deg"], 90.0, 1e-9)

    d = lv.dop([(0, 0, 1), (1, 0, 0), (0, 1, 0), (-1, 0, 0), (0, -1, 0)])
    assert close(d["pdop"] ** 2, d["hdop"] ** 2 + d["vdop"] ** 2, 1e-12)

    delta = lv.fspl_db(504.5) - lv.fspl_db(lv.GPS_ALTITUDE_KM)
    assert close(delta, -32.0, 0.1), delta
    gain = lv.footprint_gain_db(600.0, 30.0)
    assert 15.0 <= gain <= 17.0, gain
    print(f"path-loss delta {delta:.2f} dB, 600 km spot-beam gain {gain:.2f} dB")

    scenario = lv.Scenario.from_json(json.dumps({"grid": {"sites": 200}}))
    rows = scenario.table2()
    assert [r["canopy"] for r in rows] == ["Limited", "Deciduous", "Redwoods", "Most", "Most"]
    budget = scenario.power_budget()
    assert close(budget["per_signal_bus_w"][1], 53.0, 1.0)

    baseline = scenario.gps_baseline()["pdop"]
    leo = scenario.pdop()["pdop"]
    assert 1.5 <= baseline <= 2.6, baseline
    print(f"GPS-like baseline PDOP {baseline:.3f}, 300/900 PDOP {leo:.3f}")

    csv = scenario.report("jammer")
    assert len(csv.strip().splitlines()) == 6

    try:
        lv.WalkerSpec(300, 900.0, 90.0, planes=7)
    except ValueError:
        pass
    else:
        raise AssertionError("invalid Walker pattern accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
