#!/usr/bin/env python3
"""Tabulate g(Lambda), n_cut and the xi bound over a range of box sizes."""
import argparse
import csv
import math
import sys

from mayerbc.geometry import Box, ShellSpec, n_cut
from mayerbc.mayer import g_lambda
from mayerbc.potential import kappa, radius_boundary, square_well


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--exponent", type=float, default=0.5, help="h(L) = L**exponent")
    ap.add_argument("--rho", type=float, default=0.0, help="boundary density")
    ap.add_argument("--beta", type=float, default=1.0)
    ap.add_argument("--points", type=int, default=12, help="L = 25 * 2**k, k < points")
    args = ap.parse_args()
    pot = square_well()
    shell = ShellSpec(args.exponent)
    lam = 0.5 * radius_boundary(pot, args.beta, args.rho)
    writer = csv.writer(sys.stdout)
    writer.writerow(["L", "h", "n_cut", "g_lambda", "xi_bound_half_radius"])
    for k in range(args.points):
        L = 25.0 * 2**k
        g = g_lambda(Box(1, L), shell, pot.R)
        xi = lam * math.exp(args.beta * kappa(pot) * args.rho) * math.exp(args.beta * pot.C_decl + 1) * g
        writer.writerow([L, format(shell.h(L), ".6g"), n_cut(shell, L, pot.R), format(g, ".10g"), format(xi, ".10g")])


if __name__ == "__main__":
    main()
