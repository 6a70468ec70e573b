#!/usr/bin/env python3
"""Relevance functions: explicit control points vs boxplot extremes.

The relevance function maps target values to [0, 1].  Everything at or
above the threshold is treated as rare.  This script plots the curve as
ASCII, then shows how bumps fall out of a threshold sweep.
"""

import numpy as np

from rebalance import (
    build_relevance_extremes,
    build_relevance_range,
    find_bumps,
    Column,
    ColumnKind,
    Dataset,
)

WIDTH = 61
HEIGHT = 12


def ascii_plot(fn, lo, hi):
    ys = np.linspace(lo, hi, WIDTH)
    phi = fn(ys)
    rows = []
    for level in range(HEIGHT, -1, -1):
        thr = level / HEIGHT
        line = "".join("*" if v >= thr - 1e-9 else " " for v in phi)
        rows.append(f"{thr:4.2f} |{line}")
    rows.append("     +" + "-" * WIDTH)
    rows.append(f"      {lo:<.4g}" + " " * (WIDTH - 12) + f"{hi:>.4g}")
    return "\n".join(rows)


def main():
    # both target tails matter here, the middle does not
    fn = build_relevance_range([(0, 1, 0), (5, 0, 0), (10, 1, 0)])
    print("relevance through (0,1) (5,0) (10,1):\n")
    print(ascii_plot(fn, -1, 11))
    print()

    # the interpolation is monotone between control points: no bump of
    # fake relevance can appear between (0,1) and (5,0)
    grid = np.linspace(0, 5, 2001)
    assert np.all(np.diff(fn(grid)) <= 1e-12)

    # boxplot-driven variant on a right-skewed sample
    rng = np.random.default_rng(0)
    y = np.concatenate([rng.normal(10, 2, 950), rng.gamma(1, 1, 50) + 20])
    auto = build_relevance_extremes(y, "both")
    print("boxplot control points on a skewed sample:")
    for p in auto.points:
        print(f"   y = {p.y:8.3f}   phi = {p.phi}")
    print()

    ds = Dataset(
        [
            Column("x", ColumnKind.NUMERIC, y),
            Column("y", ColumnKind.NUMERIC, y),
        ],
        target="y",
    )
    for thr in (0.3, 0.5, 0.8):
        part = find_bumps(ds, auto, thr)
        sizes = [("R" if b.rare else "N", b.count) for b in part.bumps]
        print(f"thr_rel = {thr}: bumps {sizes}")


if __name__ == "__main__":
    main()
