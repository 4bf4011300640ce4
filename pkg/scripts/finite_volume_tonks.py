#!/usr/bin/env python3
"""How the volume-averaged hard-rod coefficients approach the infinite-volume ones.

Lattice quadrature at several L, then a two-point Richardson step in 1/L.
This is the boundary term that keeps the fourth-order check at L = 50 from
landing within Monte Carlo error of -8/3.
"""
import argparse
import csv
import sys

from mayerbc.geometry import Box
from mayerbc.mayer import Sampler, estimate_c_n_volume_avg
from mayerbc.oracle import tonks_pressure_coefficients
from mayerbc.potential import hard_rod


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--Ls", default="10,20,50,100")
    ap.add_argument("--grid-points", type=int, default=40)
    ap.add_argument("--max-order", type=int, default=3, help="highest power of lambda (<= 4)")
    args = ap.parse_args()
    Ls = [float(x) for x in args.Ls.split(",")]
    pot = hard_rod()
    writer = csv.writer(sys.stdout)
    writer.writerow(["order", "L", "value", "oracle", "richardson"])
    for n in range(1, args.max_order + 1):
        prev = None
        for L in Ls:
            v = estimate_c_n_volume_avg(n - 1, None, pot, Box(1, L), 1.0, Sampler(method="grid", grid_points=args.grid_points)).value
            rich = "" if prev is None else format((L * v - prev[0] * prev[1]) / (L - prev[0]), ".10g")
            writer.writerow([n, L, format(v, ".10g"), tonks_pressure_coefficients(n), rich])
            prev = (L, v)


if __name__ == "__main__":
    main()
