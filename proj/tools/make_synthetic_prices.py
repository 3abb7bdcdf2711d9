#!/usr/bin/env python3
"""Regenerate data/prices_fixture.csv.

Synthetic monthly index levels for three asset classes (two equity series and
one bond series) with realistic monthly vols and cross-correlations. The CSV
is committed; rerun this only if the fixture needs to change, and update the
frozen covariance values in the tests afterwards.
"""

import numpy as np

RNG_SEED = 20240612
MONTHS = 240
ASSETS = ["us_equity", "intl_equity", "global_bond"]
START_LEVELS = np.array([100.0, 50.0, 200.0])

VOLS = np.array([0.045, 0.045, 0.015])
CORR = np.array([
    [1.00, 0.85, 0.20],
    [0.85, 1.00, 0.20],
    [0.20, 0.20, 1.00],
])
MU_MONTHLY = np.log1p(np.array([0.10, 0.10, 0.06])) / 12.0


def month_labels(n):
    labels = []
    year, month = 2004, 1
    for _ in range(n):
        labels.append(f"{year:04d}-{month:02d}")
        month += 1
        if month == 13:
            month = 1
            year += 1
    return labels


def main():
    rng = np.random.default_rng(RNG_SEED)
    sigma = np.outer(VOLS, VOLS) * CORR
    chol = np.linalg.cholesky(sigma)
    shocks = rng.standard_normal((MONTHS - 1, len(ASSETS)))
    returns = MU_MONTHLY + shocks @ chol.T

    levels = np.empty((MONTHS, len(ASSETS)))
    levels[0] = START_LEVELS
    for t in range(1, MONTHS):
        levels[t] = levels[t - 1] * np.exp(returns[t - 1])

    with open("data/prices_fixture.csv", "w") as f:
        f.write("date," + ",".join(ASSETS) + "\n")
        for label, row in zip(month_labels(MONTHS), levels):
            f.write(label + "," + ",".join(f"{v:.10f}" for v in row) + "\n")

    # Independent oracle values for the tests: parse the file back so the
    # numbers reflect the CSV text, not the pre-rounding arrays.
    parsed = np.loadtxt("data/prices_fixture.csv", delimiter=",", skiprows=1,
                        usecols=(1, 2, 3))
    log_ret = np.log(parsed[1:] / parsed[:-1])
    cov = np.cov(log_ret, rowvar=False, ddof=1)
    print("rows:", parsed.shape[0])
    print("sample covariance (row-major, %.17g):")
    for row in cov:
        print("  " + ", ".join(f"{v:.17g}" for v in row))
    print("first return row:", ", ".join(f"{v:.17g}" for v in log_ret[0]))
    print("last return row :", ", ".join(f"{v:.17g}" for v in log_ret[-1]))
    print("monthly vols    :", np.sqrt(np.diag(cov)))
    print("correlations    :")
    d = np.sqrt(np.diag(cov))
    print(cov / np.outer(d, d))


if __name__ == "__main__":
    main()
