"""Generates the bundled 20-region, 4-variable, 33-year synthetic panel.

Regions form four geographic groups; each group shares a trend shape per
variable, so both the series and the coordinates carry the group structure.
Values are totals; dividing by the area column gives per-km2 intensities.
"""

import csv
import math
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
YEARS = list(range(1990, 2023))
VARIABLES = ["CH4", "CO2", "N2O", "F-gases"]
CENTRES = [(60.0, 20.0), (48.0, 8.0), (40.0, -4.0), (44.0, 24.0)]


def level(group, var, t):
    x = t / (len(YEARS) - 1)
    base = [6.0, 50.0, 2.5, 0.4][var]
    shape = [
        lambda x: 1.6 - 0.9 * x,
        lambda x: 1.0 + 0.6 * math.sin(2.0 * math.pi * x),
        lambda x: 0.6 + 0.9 * x,
        lambda x: 1.0 - 0.6 * math.sin(2.0 * math.pi * x),
    ][(group + var) % 4]
    return base * shape(x)


def main():
    rng = random.Random(20240501)
    regions = []
    for g, (lat, lon) in enumerate(CENTRES):
        for j in range(5):
            regions.append((f"R{g}{j}", g, lat + rng.uniform(-2.5, 2.5), lon + rng.uniform(-3.0, 3.0),
                            round(rng.uniform(5000.0, 40000.0), 1)))
    with open(HERE / "synthetic_panel.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["unit_id", "variable", "year", "value", "area"])
        for rid, g, _, _, area in regions:
            scale = rng.uniform(0.85, 1.15)
            for v, name in enumerate(VARIABLES):
                for t, year in enumerate(YEARS):
                    value = level(g, v, t) * scale * (1.0 + rng.gauss(0.0, 0.03)) * area / 1000.0
                    w.writerow([rid, name, year, f"{value:.6f}", area])
    with open(HERE / "synthetic_coords.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["unit_id", "lat", "lon"])
        for rid, _, lat, lon, _ in regions:
            w.writerow([rid, f"{lat:.4f}", f"{lon:.4f}"])
    with open(HERE / "synthetic_groups.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["unit_id", "group"])
        for rid, g, _, _, _ in regions:
            w.writerow([rid, g + 1])


if __name__ == "__main__":
    main()
