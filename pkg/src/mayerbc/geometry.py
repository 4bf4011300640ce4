"""The cubic box, the cell partition of space, and the bulk/shell regions."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .potential import ball_volume


@dataclass(frozen=True)
class Box:
    """Cube of side 2L centred at the origin."""

    d: int
    L: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.d}")
        if not self.L > 0:
            raise ValueError(f"half side L must be > 0, got {self.L}")

    @property
    def volume(self) -> float:
        return (2.0 * self.L) ** self.d

    def contains(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.all(np.abs(x) <= self.L, axis=-1)

    def distance_outside(self, y) -> np.ndarray:
        """Euclidean distance from points to the (closed) cube; 0 inside."""
        y = np.asarray(y, dtype=float)
        excess = np.maximum(np.abs(y) - self.L, 0.0)
        return np.sqrt(np.sum(excess**2, axis=-1))


def dist_to_boundary(box: Box, x):
    """Distance from x in the box to its boundary, L - max_i |x_i|."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != box.d:
        raise ValueError(f"expected points of dimension {box.d}, got shape {x.shape}")
    if not np.all(box.contains(x)):
        raise ValueError("point lies outside the box")
    out = box.L - np.max(np.abs(x), axis=-1)
    if np.ndim(out) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class CubeGrid:
    """Origin-anchored partition of R^d into half-open cubes of side delta."""

    delta: float
    d: int

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"cell size must be > 0, got {self.delta}")

    @property
    def cell_volume(self) -> float:
        return self.delta**self.d

    def aligned_with(self, box: Box, tol: float = 1e-9) -> bool:
        ratio = box.L / self.delta
        return abs(ratio - round(ratio)) <= tol * max(1.0, ratio)


def cell_of(grid: CubeGrid, x) -> np.ndarray:
    """Integer cell index of each point; cells are [k delta, (k+1) delta)."""
    x = np.asarray(x, dtype=float)
    return np.floor(x / grid.delta).astype(np.int64)


def default_grid(box: Box, R: float) -> CubeGrid:
    """Largest cell size <= R (2^{1/d} - 1)/sqrt(d) dividing L.

    With this size every cell within distance R of a point sits inside the
    ball of radius R + delta sqrt(d), whose volume is at most 2 V_d(R).
    """
    d = box.d
    delta0 = R * (2.0 ** (1.0 / d) - 1.0) / math.sqrt(d)
    cells = math.ceil(box.L / delta0 - 1e-12)
    return CubeGrid(delta=box.L / cells, d=d)


def make_grid(box: Box, R: float, delta: Optional[float] = None) -> CubeGrid:
    if delta is None:
        return default_grid(box, R)
    grid = CubeGrid(delta=delta, d=box.d)
    if not grid.aligned_with(box):
        raise ValueError(f"L={box.L} must be an integer multiple of delta={delta}")
    return grid


@dataclass(frozen=True)
class TusfReport:
    passed: bool
    worst_ratio: float
    worst_point: tuple


def cells_within(grid: CubeGrid, x, R: float) -> int:
    """Number of cells whose closure lies within distance R of x."""
    x = np.asarray(x, dtype=float)
    d = grid.d
    lo = np.floor((x - R) / grid.delta).astype(int) - 1
    hi = np.floor((x + R) / grid.delta).astype(int) + 1
    axes = [np.arange(lo[i], hi[i] + 1) for i in range(d)]
    mesh = np.meshgrid(*axes, indexing="ij")
    k = np.stack([m.ravel() for m in mesh], axis=-1)
    cell_lo = k * grid.delta
    gap = np.maximum(np.maximum(cell_lo - x, x - (cell_lo + grid.delta)), 0.0)
    dist = np.sqrt(np.sum(gap**2, axis=-1))
    return int(np.count_nonzero(dist <= R))


def check_tusf(grid: CubeGrid, R: float, sample_points) -> TusfReport:
    """Check delta^d * #{cells within R of x} <= 2 V_d(R) at each sample point."""
    pts = np.atleast_2d(np.asarray(sample_points, dtype=float))
    limit = 2.0 * ball_volume(grid.d, R)
    worst, worst_x = -1.0, None
    for x in pts:
        ratio = grid.cell_volume * cells_within(grid, x, R) / limit
        if ratio > worst:
            worst, worst_x = ratio, tuple(float(c) for c in x)
    return TusfReport(passed=worst <= 1.0, worst_ratio=worst, worst_point=worst_x)


@dataclass(frozen=True)
class ShellSpec:
    """Shell thickness h(L) = L**exponent, exponent in (0, 1)."""

    exponent: float = 0.5

    def __post_init__(self):
        if not 0 < self.exponent < 1:
            raise ValueError(f"exponent must lie in (0, 1), got {self.exponent}")

    def h(self, L: float) -> float:
        return L**self.exponent


@dataclass(frozen=True)
class Regions:
    h: float
    inner_half_side: float
    volume_box: float
    volume_bulk: float
    volume_shell: float


def regions(box: Box, shell: ShellSpec) -> Regions:
    """Bulk cube {d_x > h(L)} and its complement in the box."""
    h = shell.h(box.L)
    if h >= box.L:
        raise ValueError(f"shell thickness h={h} must be smaller than L={box.L}")
    inner = box.L - h
    vol_bulk = (2.0 * inner) ** box.d
    return Regions(
        h=h,
        inner_half_side=inner,
        volume_box=box.volume,
        volume_bulk=vol_bulk,
        volume_shell=box.volume - vol_bulk,
    )


def in_bulk(box: Box, shell: ShellSpec, x) -> np.ndarray:
    return np.max(np.abs(np.asarray(x, dtype=float)), axis=-1) < box.L - shell.h(box.L)


class BoxTooSmall(ValueError):
    pass


def n_cut_from_h(h: float, R: float) -> int:
    """floor(h/R - 1): the largest order untouched by the boundary."""
    if h <= R:
        raise BoxTooSmall(f"h={h} <= R={R}: box too small for the bulk/boundary split")
    return math.floor(h / R - 1)


def n_cut(shell: ShellSpec, L: float, R: float) -> int:
    return n_cut_from_h(shell.h(L), R)


def midpoint_nodes(box: Box, spacing: float) -> np.ndarray:
    """Midpoints of the 1-d cells of width ``spacing`` tiling [-L, L]."""
    if box.d != 1:
        raise ValueError("midpoint lattice quadrature is one-dimensional")
    count = 2.0 * box.L / spacing
    K = round(count)
    if abs(count - K) > 1e-9 * count:
        raise ValueError(f"2L={2 * box.L} is not a multiple of the spacing {spacing}")
    return -box.L + spacing * (np.arange(K) + 0.5)
