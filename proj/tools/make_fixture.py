#!/usr/bin/env python3
"""Regenerates the bundled synthetic panel in data/.

Three archetypes of four countries each, 2000-2022, 17 goal scores, plus one
country with a gap in 2011 that the completeness filter must drop.
"""
import csv
import pathlib

import numpy as np

YEARS = range(2000, 2023)
GOALS = 17
OUT = pathlib.Path(__file__).resolve().parent.parent / "data"

rng = np.random.RandomState(20230)
archetypes = [
    # (base level, yearly gain, GDP per capita)
    (rng.uniform(25, 45, GOALS), rng.uniform(0.6, 1.2, GOALS), 1500.0),
    (rng.uniform(50, 65, GOALS), rng.uniform(0.3, 0.7, GOALS), 9000.0),
    (rng.uniform(70, 85, GOALS), rng.uniform(0.05, 0.3, GOALS), 42000.0),
]
# Consumption and climate goals run opposite to income.
for i, (base, gain, _) in enumerate(archetypes):
    base[11] = 90 - 20 * i
    base[12] = 88 - 22 * i
    gain[11] = gain[12] = -0.05 * i

names = [f"{p}{k}" for p in ("Aland", "Borvia", "Custra") for k in range(1, 5)]
rows, gdp = [], []
for idx, name in enumerate(names):
    base, gain, income = archetypes[idx // 4]
    offset = rng.normal(0, 2.0, GOALS)
    for year in YEARS:
        t = year - 2000
        s = np.clip(base + offset + gain * t + rng.normal(0, 0.6, GOALS), 0, 100)
        rows.append([name, year] + [f"{v:.2f}" for v in s])
    gdp.append([name, f"{income * rng.uniform(0.8, 1.25):.2f}"])

base, gain, _ = archetypes[1]
for year in YEARS:
    s = np.clip(base + gain * (year - 2000), 0, 100)
    cells = [f"{v:.2f}" for v in s]
    if year == 2011:
        cells[5] = ""
    rows.append(["Dunmark", year] + cells)
gdp.append(["Dunmark", "8000.00"])

OUT.mkdir(exist_ok=True)
header = ["country", "year"] + [f"goal{g:02d}" for g in range(1, GOALS + 1)]
with open(OUT / "fixture_panel.csv", "w", newline="") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
with open(OUT / "fixture_gdp.csv", "w", newline="") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["country", "gdp_per_capita"])
    w.writerows(gdp)
