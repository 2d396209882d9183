#!/usr/bin/env python3
"""Regenerate the bundled air-quality-style benchmark fixture.

The fixture is fully synthetic. It mimics the shape of a classic
ozone-regression study (330 daily records, seven meteorological
predictors, positive skewed response) and is generated from a fixed
counter-based stream so the file is reproducible bit-for-bit. The mean
structure is driven by two latent predictor combinations with a mild
third-direction signal and non-normal predictors, which makes the two
reference distributions genuinely disagree about the dimension at the
5 percent level - the behavior the CLI examples demonstrate.

Usage: python scripts/make_fixture.py [--seed N] [--out PATH]
"""

import argparse
import hashlib
import os

import numpy as np

FIXTURE_SEED = 237
N_ROWS = 330

COLUMNS = ("ozone", "vdht", "wdsp", "hmdt", "sbtp", "ibtp", "dgpg", "vsty")


def make_table(seed=FIXTURE_SEED, n=N_ROWS):
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, 0], dtype=np.uint64)))
    # Correlated latent weather factors.
    f = rng.standard_normal((n, 3))
    season = rng.uniform(-1.0, 1.0, size=n)

    sbtp = 58.0 + 16.0 * (0.8 * f[:, 0] + 0.3 * season) + 2.0 * rng.standard_normal(n)
    sbtp = np.clip(sbtp, 25.0, None)
    ibtp = np.exp(4.9 + 0.45 * (0.7 * f[:, 0] + 0.4 * f[:, 1]) + 0.18 * rng.standard_normal(n))
    ibtp = np.clip(ibtp, 20.0, 600.0)
    vdht = 5750.0 + 45.0 * f[:, 0] + 55.0 * f[:, 2] + 18.0 * rng.standard_normal(n)
    hmdt = np.clip(55.0 + 22.0 * (0.5 * f[:, 1] - 0.4 * f[:, 2]) + 8.0 * rng.standard_normal(n), 5.0, 98.0)
    wdsp = np.clip(5.5 + 1.9 * f[:, 2] + 1.3 * rng.standard_normal(n), 0.2, None)
    dgpg = 12.0 + 32.0 * (0.6 * f[:, 1] + 0.3 * f[:, 0]) + 14.0 * rng.standard_normal(n)
    vsty = np.clip(np.exp(4.6 - 0.5 * f[:, 1] + 0.55 * rng.standard_normal(n)), 3.0, 350.0)

    X = np.column_stack([vdht, wdsp, hmdt, np.log(sbtp), np.log(ibtp), dgpg, vsty])
    Xs = (X - X.mean(axis=0)) / X.std(axis=0)

    w1 = np.array([0.55, -0.20, 0.30, 0.60, 0.40, 0.25, -0.35])
    w2 = np.array([-0.25, 0.45, 0.55, -0.30, 0.35, -0.50, 0.20])
    w3 = np.array([0.10, 0.60, -0.45, 0.25, -0.40, 0.35, 0.45])
    u1, u2, u3 = Xs @ w1, Xs @ w2, Xs @ w3

    g = rng.standard_normal((n, 2))
    skew_noise = 0.5 * ((g**2).sum(axis=1) - 2.0)
    signal = (
        1.1 * u1
        + 0.42 * u1**2
        + 0.33 * u1 * u2
        + 0.18 * u2**2
        + 0.16 * u3**2
        + 0.10 * u3
    )
    y = signal + (0.55 + 0.22 * np.abs(u1)) * rng.standard_normal(n) + 0.35 * skew_noise
    ozone = 11.0 + 5.2 * (y - y.mean()) / y.std()
    ozone = np.clip(ozone, 0.3, None)

    cols = {
        "ozone": ozone,
        "vdht": vdht,
        "wdsp": wdsp,
        "hmdt": hmdt,
        "sbtp": sbtp,
        "ibtp": ibtp,
        "dgpg": dgpg,
        "vsty": vsty,
    }
    return cols


def render_csv(cols) -> str:
    lines = [",".join(COLUMNS)]
    n = len(next(iter(cols.values())))
    for i in range(n):
        lines.append(",".join(f"{cols[c][i]:.4f}" for c in COLUMNS))
    return "\n".join(lines) + "\n"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    default_out = os.path.join(
        os.path.dirname(__file__), "..", "src", "iht", "data", "ozone330.csv"
    )
    ap.add_argument("--seed", type=int, default=FIXTURE_SEED)
    ap.add_argument("--out", default=os.path.normpath(default_out))
    args = ap.parse_args()

    text = render_csv(make_table(seed=args.seed))
    os.makedirs(os.path.dirname(args.out), exist_ok=True)
    with open(args.out, "w") as fh:
        fh.write(text)
    digest = hashlib.sha256(text.encode()).hexdigest()
    with open(args.out.replace(".csv", ".sha256"), "w") as fh:
        fh.write(f"{digest}  {os.path.basename(args.out)}\n")
    print(f"wrote {args.out} (sha256 {digest[:16]}...)")


if __name__ == "__main__":
    main()
