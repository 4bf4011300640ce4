#!/usr/bin/env python3
"""Run the hard-rod series reversion once and archive the coefficients as JSON.

The file records exact fractions, floats and the lattice estimates of the
volume-averaged coefficients at the requested L, so later runs can be
diffed against it.
"""
import argparse
import json
import platform
from pathlib import Path

import numpy as np

from mayerbc.geometry import Box
from mayerbc.mayer import Sampler, estimate_c_n_volume_avg
from mayerbc.oracle import tonks_series
from mayerbc.potential import hard_rod


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--order", type=int, default=6)
    ap.add_argument("--a", type=float, default=1.0)
    ap.add_argument("--L", type=float, default=50.0)
    ap.add_argument("--grid-points", type=int, default=100)
    ap.add_argument("--out", default="results/tonks_oracle.json")
    args = ap.parse_args()

    exact = tonks_series(args.order, args.a)
    lattice = []
    box = Box(1, args.L)
    for n in (1, 2, 3):
        est = estimate_c_n_volume_avg(n - 1, None, hard_rod(args.a), box, 1.0, Sampler(method="grid", grid_points=args.grid_points))
        lattice.append({"order": n, "value": est.value})
    manifest = {
        "inputs": vars(args),
        "coefficients": [
            {"order": n, "fraction": f"{c.numerator}/{c.denominator}", "value": float(c)}
            for n, c in enumerate(exact, start=1)
        ],
        "lattice_volume_average": lattice,
        "numpy": np.__version__,
        "python": platform.python_version(),
    }
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(manifest, indent=2) + "\n")
    for row in manifest["coefficients"]:
        print(f"b_{row['order']} = {row['fraction']:>10} = {row['value']:+.12f}")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
