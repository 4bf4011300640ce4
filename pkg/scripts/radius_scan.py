#!/usr/bin/env python3
"""Free and boundary convergence radii against beta for the built-in presets."""
import argparse
import csv
import sys

import numpy as np

from mayerbc.mayer import MajorantSeries
from mayerbc.potential import c_v_integral, hard_rod, hard_sphere, radius_boundary, radius_free, square_well

PRESETS = {
    "hard_rod": hard_rod(),
    "hard_sphere_3d": hard_sphere(1.0, 3),
    "square_well_1d": square_well(),
    "square_well_2d": square_well(d=2),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--betas", default="0.25,0.5,1,2,4")
    ap.add_argument("--rho", type=float, default=0.5)
    args = ap.parse_args()
    writer = csv.writer(sys.stdout)
    writer.writerow(["preset", "beta", "C_v", "radius_free", "radius_boundary", "theta_at_r_star"])
    for name, pot in PRESETS.items():
        for beta in np.array(args.betas.split(","), dtype=float):
            theta = MajorantSeries.for_potential(pot, beta).theta(radius_free(pot, beta))
            writer.writerow(
                [name, beta, format(c_v_integral(pot, beta), ".10g"), format(radius_free(pot, beta), ".10g"),
                 format(radius_boundary(pot, beta, args.rho), ".10g"), format(theta.value, ".10g")]
            )


if __name__ == "__main__":
    main()
