#!/usr/bin/env python3
"""Regenerate data/demo/detectors.csv.

One week of hourly observations for a 6x4 grid of loop detectors covering
the demo bounding box. Detectors alternate between a freeway and an
arterial flow regime so the demo data clusters into two signature groups.
Hours overlapping a record in data/demo/accidents.csv at a nearby detector
get congested readings (occupancy up, flow well below the usual curve).

Deterministic: fixed RNG seed, fixed iteration order.
"""

import csv
import math
import random
from datetime import datetime, timezone
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "data" / "demo" / "detectors.csv"
ACCIDENTS = ROOT / "data" / "demo" / "accidents.csv"

T0 = 1391990400  # 2014-02-10T00:00:00Z
HOURS = 7 * 24

LATS = [38.8167, 38.8500, 38.8833, 38.9167, 38.9500, 38.9833]
LONS = [-77.2750, -77.2250, -77.1750, -77.1250]

FREEWAY = {"cap": 1880.0, "crit": 0.22}
ARTERIAL = {"cap": 760.0, "crit": 0.28}


def tri_flow(occ, regime):
    cap, crit = regime["cap"], regime["crit"]
    if occ <= crit:
        return cap * occ / crit
    return cap * max(0.0, (1.0 - occ) / (1.0 - crit))


def bump(h, center, width):
    return math.exp(-0.5 * ((h - center) / width) ** 2)


def base_occupancy(hour_of_day):
    return 0.05 + 0.38 * bump(hour_of_day, 8, 1.6) + 0.42 * bump(hour_of_day, 17, 1.8)


def parse_utc(s):
    return int(datetime.strptime(s, "%Y-%m-%dT%H:%M:%S").replace(tzinfo=timezone.utc).timestamp())


def load_accidents():
    rows = []
    with open(ACCIDENTS, newline="") as f:
        for r in csv.DictReader(f):
            rows.append((float(r["lat"]), float(r["lon"]), parse_utc(r["start"]), parse_utc(r["end"])))
    return rows


def miles(lat1, lon1, lat2, lon2):
    rad = math.radians
    dlat, dlon = rad(lat2 - lat1), rad(lon2 - lon1)
    a = math.sin(dlat / 2) ** 2 + math.cos(rad(lat1)) * math.cos(rad(lat2)) * math.sin(dlon / 2) ** 2
    return 2 * 3958.8 * math.asin(math.sqrt(a))


def main():
    rng = random.Random(20140210)
    accidents = load_accidents()

    detectors = []
    for i, lat in enumerate(LATS):
        for j, lon in enumerate(LONS):
            base = FREEWAY if (i + j) % 2 == 0 else ARTERIAL
            # per-detector spread so cluster bin sigmas are not degenerate
            regime = {
                "cap": base["cap"] * (1.0 + rng.uniform(-0.12, 0.12)),
                "crit": base["crit"] * (1.0 + rng.uniform(-0.10, 0.10)),
            }
            detectors.append((f"det{i * len(LONS) + j:02d}", lat, lon, regime))

    OUT.parent.mkdir(parents=True, exist_ok=True)
    with open(OUT, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["detector_id", "period", "occupancy", "flow", "lat", "lon"])
        for det_id, lat, lon, regime in detectors:
            for h in range(HOURS):
                period = T0 + 3600 * h
                occ = base_occupancy(h % 24) + rng.gauss(0.0, 0.012)
                occ = min(0.90, max(0.02, occ))
                flow = tri_flow(occ, regime) * (1.0 + rng.gauss(0.0, 0.04))

                incident = any(
                    start - 3600 < period < end and miles(lat, lon, alat, alon) <= 1.2
                    for alat, alon, start, end in accidents
                )
                if incident:
                    occ = min(0.90, max(occ * 1.8, 0.55))
                    flow = tri_flow(occ, regime) * 0.30

                flow = max(0.0, flow)
                stamp = datetime.fromtimestamp(period, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%S")
                w.writerow([det_id, stamp, f"{occ:.4f}", f"{flow:.1f}", f"{lat:.4f}", f"{lon:.4f}"])


if __name__ == "__main__":
    main()
