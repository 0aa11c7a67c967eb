"""Regenerate the CSV fixtures under tests/data.

faithful.csv is the Old Faithful eruption-duration series (272 values,
public domain). The remaining files are seeded synthetic stand-ins shaped like
the datasets they replace (same size, covariate range and count scale); the
originals ship with R packages whose redistribution terms are not checked here.

    python scripts/make_fixtures.py [--faithful-source path/to/faithful.csv]
"""

import argparse
import csv
from pathlib import Path

import numpy as np

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"


def write(name, header, rows):
    with open(DATA / name, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def faithful(source):
    with open(source) as f:
        rows = list(csv.DictReader(f))
    write("faithful.csv", ["x"], [[r["eruptions"]] for r in rows])


def trypanosome(rng):
    dose = np.round(np.arange(4.7, 5.45, 0.1), 1)
    m = rng.integers(40, 60, size=dose.size)
    # Complementary log-log dose response: nonlinear on the logit scale.
    p = 1.0 - np.exp(-np.exp(7.0 * (dose - 5.05)))
    y = rng.binomial(m, p)
    write("trypanosome.csv", ["x", "y", "m"], zip(dose, y, m))


def hepatitis_b(rng):
    age = np.arange(1, 87)
    m = rng.integers(8, 60, size=age.size)
    # Prevalence rising through childhood and levelling off in adulthood.
    p = 0.03 + 0.9 * (1.0 - np.exp(-age / 20.0))
    y = rng.binomial(m, p)
    write("hepatitis_b.csv", ["x", "y", "m"], zip(age, y, m))


def hidalgo(rng):
    centres = np.array([72.0, 79.0, 90.0, 100.0, 110.0, 120.0, 130.0])
    weights = np.array([0.36, 0.28, 0.12, 0.10, 0.07, 0.04, 0.03])
    k = rng.choice(centres.size, size=485, p=weights)
    x = np.clip(rng.normal(centres[k], 2.5), 60.0, 131.0)
    write("hidalgo.csv", ["x"], [[f"{v:.1f}"] for v in x])


def zika(rng):
    day = np.arange(1, 97)
    mu = 0.5 + 40.0 * np.exp(-(((day - 45.0) / 14.0) ** 2))
    rho = 5.0
    y = rng.negative_binomial(rho, rho / (rho + mu))
    write("zika.csv", ["x", "y"], zip(day, y))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--faithful-source", help="CSV with an 'eruptions' column")
    args = ap.parse_args()
    DATA.mkdir(parents=True, exist_ok=True)
    if args.faithful_source:
        faithful(args.faithful_source)
    for i, make in enumerate((trypanosome, hepatitis_b, hidalgo, zika)):
        make(np.random.default_rng([20240611, i]))


if __name__ == "__main__":
    main()
