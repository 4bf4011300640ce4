"""Mayer expansion of the finite-volume pressure with fixed exterior particles."""
from .geometry import Box, ShellSpec
from .mayer import Sampler, decompose_pressure, estimate_c_n, estimate_c_n_volume_avg
from .potential import PairPotential, hard_rod, hard_sphere, square_well

__version__ = "0.1.0"

__all__ = [
    "Box",
    "PairPotential",
    "Sampler",
    "ShellSpec",
    "decompose_pressure",
    "estimate_c_n",
    "estimate_c_n_volume_avg",
    "hard_rod",
    "hard_sphere",
    "square_well",
]
