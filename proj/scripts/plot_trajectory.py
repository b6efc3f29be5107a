#!/usr/bin/env python3
"""Render the standard diagnostic panels from a trajectory.csv."""
import argparse
import csv
import sys


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv_path")
    ap.add_argument("-o", "--output", help="image path (default: <csv>.png)")
    args = ap.parse_args()

    with open(args.csv_path, newline="") as f:
        rows = list(csv.DictReader(f))
    if not rows:
        sys.exit("empty trajectory")
    col = {k: [float(r[k]) for r in rows] for k in rows[0]}

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    t = col["t"]
    fig, ax = plt.subplots(2, 2, figsize=(11, 7), constrained_layout=True)

    ax[0][0].plot(t, col["min_u"], label="min u")
    ax[0][0].plot(t, col["max_u"], label="max u")
    ax[0][0].plot(t, col["v_env"], "--", label="V(t)")
    ax[0][0].plot(t, col["lambda_env"], "--", label="Lambda(t)")
    ax[0][0].set_title("positivity sandwich")
    ax[0][0].legend()

    ax[0][1].plot(t, col["energy"], label="energy J")
    ax[0][1].plot(t, col["dissipation"], label="dissipation")
    ax[0][1].set_yscale("log")
    ax[0][1].set_title("energy and dissipation")
    ax[0][1].legend()

    ax[1][0].plot(t, col["deviation_hs"])
    ax[1][0].set_xscale("log")
    ax[1][0].set_yscale("log")
    ax[1][0].set_title("H^s deviation from the forced mean")

    err = [abs(m - p) for m, p in zip(col["mass"], col["mass_predicted"])]
    ax[1][1].plot(t, err)
    ax[1][1].set_yscale("log")
    ax[1][1].set_title("|mass - predicted mass|")

    for row in ax:
        for a in row:
            a.set_xlabel("t")

    out = args.output or args.csv_path + ".png"
    fig.savefig(out, dpi=130)
    print(out)


if __name__ == "__main__":
    main()
