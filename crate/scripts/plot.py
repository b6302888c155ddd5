#!/usr/bin/env python3
"""Render figures from the CSV files written by `gmedian experiment`.

usage: scripts/plot.py RESULT.csv [RESULT.csv ...] [--out DIR]

Each CSV starts with a `#schema=<name>/v<version>:...` line; the figure
drawn depends on that schema. Figures are written next to the CSV unless
--out is given.
"""

import argparse
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

BOUNDS = ["bound_thm1", "bound_thm2", "bound_thm3", "bound_thm4", "bound_thm5", "bound_thm6"]


def read(path):
    with open(path) as f:
        first = f.readline()
    if not first.startswith("#schema="):
        raise SystemExit(f"{path}: missing schema line")
    name = first[len("#schema="):].split("/", 1)[0]
    df = pd.read_csv(path, skiprows=1, na_values=["inapplicable"])
    return name, df


def plot_trials(df, title):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    styles = [":", "-.", (0, (1, 3)), (0, (5, 2, 1, 2)), (0, (3, 1)), (0, (1, 1))]
    for i, ((mode, dist), g) in enumerate(df.groupby(["mode", "outlier_distance"])):
        color = f"C{i % 10}"
        by_k = g.groupby("k")
        label = f"{mode}, D={dist:g}" if df["outlier_distance"].nunique() > 1 else mode
        ax.plot(by_k["observed_displacement"].mean(), "o-", color=color, label=f"median, {label}")
        ax.plot(by_k["mean_displacement"].mean(), "x--", color=color, label=f"mean, {label}")
        for b, ls in zip(BOUNDS, styles):
            vals = by_k[b].mean()
            if vals.notna().any():
                ax.plot(vals, linestyle=ls, color=color, label=f"{b.removeprefix('bound_')}, {label}")
    ax.set_yscale("symlog")
    ax.set_xlabel("k")
    ax.set_ylabel("displacement (mean over trials)")
    ax.set_title(title)
    ax.legend(fontsize="x-small", loc="best")
    return fig


def plot_tightness(df, title):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(df["n2"], df["ratio"], ".-")
    ax.axhline(1.0, color="grey", lw=0.8)
    ax.set_xlabel("n2")
    ax.set_ylabel("bound / actual")
    ax.set_title(title)
    return fig


def plot_pull(df, title):
    fig, ax = plt.subplots(figsize=(6, 4))
    for (space, p, n), g in df.groupby(["space", "p", "n"]):
        ax.loglog(g["d"], g["empirical"], "o", label=f"{space}, p={p}, n={n}")
        ax.loglog(g["d"], g["predicted"], "k:", lw=0.8)
    ax.set_xlabel("outlier distance d")
    ax.set_ylabel("pull of the median")
    ax.set_title(title)
    ax.legend(fontsize="x-small", ncol=2)
    return fig


PLOTTERS = {"trials": plot_trials, "tightness": plot_tightness, "nonmetric_pull": plot_pull}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("csv", nargs="+", type=pathlib.Path)
    ap.add_argument("--out", type=pathlib.Path)
    args = ap.parse_args()
    for path in args.csv:
        name, df = read(path)
        plotter = PLOTTERS.get(name)
        if plotter is None:
            print(f"{path}: no figure for schema {name!r}, skipped")
            continue
        fig = plotter(df, path.stem)
        out_dir = args.out or path.parent
        out_dir.mkdir(parents=True, exist_ok=True)
        target = out_dir / f"{path.stem}.png"
        fig.tight_layout()
        fig.savefig(target, dpi=120)
        plt.close(fig)
        print(target)


if __name__ == "__main__":
    main()
