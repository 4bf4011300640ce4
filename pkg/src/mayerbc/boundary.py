"""Fixed exterior particle configurations and the one-body weight they induce.

Only the collar of exterior points within distance R of the box is stored:
farther points never reach a particle inside the box.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .geometry import Box, CubeGrid, cell_of, dist_to_boundary
from .potential import PairPotential, evaluate, kappa


@dataclass(frozen=True)
class BoundaryConfig:
    points: np.ndarray
    rho_omega: float
    grid: CubeGrid
    spec: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).reshape(-1, self.grid.d)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def is_empty(self) -> bool:
        return len(self.points) == 0

    def __len__(self):
        return len(self.points)


def collar_filter(points, box: Box, R: float) -> np.ndarray:
    """Keep exterior points at distance < R from the box."""
    pts = np.asarray(points, dtype=float).reshape(-1, box.d)
    if len(pts) == 0:
        return pts
    outside = ~box.contains(pts)
    near = box.distance_outside(pts) < R
    return pts[outside & near]


def cell_counts(points, grid: CubeGrid) -> dict:
    """Occupation number of each occupied cell."""
    pts = np.asarray(points, dtype=float).reshape(-1, grid.d)
    if len(pts) == 0:
        return {}
    cells, counts = np.unique(cell_of(grid, pts), axis=0, return_counts=True)
    return {tuple(int(c) for c in cell): int(n) for cell, n in zip(cells, counts)}


def certify_density(points, grid: CubeGrid) -> float:
    """Exact max over cells of count / |cell|."""
    counts = cell_counts(points, grid)
    if not counts:
        return 0.0
    return max(counts.values()) / grid.cell_volume


def make_config(points, box: Box, grid: CubeGrid, R: float, spec: Optional[dict] = None) -> BoundaryConfig:
    pts = collar_filter(points, box, R)
    return BoundaryConfig(points=pts, rho_omega=certify_density(pts, grid), grid=grid, spec=spec or {})


def free(box: Box, grid: CubeGrid) -> BoundaryConfig:
    return BoundaryConfig(points=np.zeros((0, box.d)), rho_omega=0.0, grid=grid, spec={"kind": "free"})


# -- generators -----------------------------------------------------------------


def grid_shell(box: Box, R: float, spacing: float) -> np.ndarray:
    """Lattice points spacing*(k + 1/2) lying in the collar."""
    kmax = math.ceil((box.L + R) / spacing)
    axis = spacing * (np.arange(-kmax, kmax) + 0.5)
    mesh = np.meshgrid(*([axis] * box.d), indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    return collar_filter(pts, box, R)


def grid_shell_target(grid: CubeGrid, spacing: float) -> float:
    """Density the grid-shell generator can never exceed on this cell grid."""
    per_axis = math.ceil(grid.delta / spacing - 1e-12)
    return per_axis**grid.d / grid.cell_volume


def poisson_shell(box: Box, R: float, intensity: float, rng: np.random.Generator) -> np.ndarray:
    """Poisson points of the given intensity restricted to the collar."""
    if intensity < 0:
        raise ValueError("intensity must be >= 0")
    outer = box.L + R
    shell_volume = (2 * outer) ** box.d - box.volume
    count = rng.poisson(intensity * shell_volume)
    pts = np.empty((0, box.d))
    while len(pts) < count:
        cand = rng.uniform(-outer, outer, size=(2 * (count - len(pts)) + 8, box.d))
        cand = cand[~box.contains(cand)]
        pts = np.concatenate([pts, cand])
    return collar_filter(pts[:count], box, R)


def generate(spec: dict, box: Box, grid: CubeGrid, potential: PairPotential) -> BoundaryConfig:
    """Build a certified boundary configuration from a generator spec.

    ``spec["kind"]`` is one of ``free``, ``explicit`` (``points``), ``grid``
    (``spacing``) or ``poisson`` (``intensity``, ``seed``).
    """
    kind = spec.get("kind", "free")
    R = potential.R
    if kind in ("free", "none"):
        return free(box, grid)
    if kind == "explicit":
        pts = np.asarray(spec.get("points", []), dtype=float).reshape(-1, box.d)
    elif kind == "grid":
        pts = grid_shell(box, R, float(spec["spacing"]))
    elif kind == "poisson":
        rng = np.random.default_rng(np.random.SeedSequence(int(spec.get("seed", 0)), spawn_key=(3,)))
        pts = poisson_shell(box, R, float(spec["intensity"]), rng)
    else:
        raise ValueError(f"unknown boundary kind {kind!r}")
    return make_config(pts, box, grid, R, spec=dict(spec))


def load_points_csv(path, d: int) -> np.ndarray:
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            if len(row) != d:
                raise ValueError(f"{path}: expected {d} columns, got {len(row)}")
            rows.append([float(c) for c in row])
    return np.array(rows, dtype=float).reshape(-1, d)


# -- boundary potential and weight ----------------------------------------------


def _as_points(box: Box, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != box.d:
        raise ValueError(f"expected points of dimension {box.d}, got shape {x.shape}")
    if not np.all(box.contains(x)):
        raise ValueError("point lies outside the box")
    return x


def w_omega(config: BoundaryConfig, potential: PairPotential, box: Box, x, chunk: int = 8192):
    """Energy sum_y v(x - y) felt at x from the stored exterior points.

    Exactly 0 at distance >= R from the boundary; ``+inf`` on a hard-core
    overlap.  Accepts one point or an array of points of shape (..., d).
    """
    x = _as_points(box, x)
    flat = x.reshape(-1, box.d)
    out = np.zeros(len(flat))
    if not config.is_empty:
        near = np.flatnonzero(dist_to_boundary(box, flat) < potential.R)
        y = config.points
        for start in range(0, len(near), chunk):
            idx = near[start : start + chunk]
            r = np.sqrt(np.sum((flat[idx, None, :] - y[None, :, :]) ** 2, axis=-1))
            inside = r < potential.R
            v = np.zeros_like(r)
            v[inside] = evaluate(potential, r[inside])
            out[idx] = np.sum(v, axis=1)
    out = out.reshape(x.shape[:-1])
    if out.ndim == 0:
        return float(out)
    return out


def f_omega(config: BoundaryConfig, potential: PairPotential, box: Box, beta: float, x):
    """One-body weight exp(-beta w(x)); 1 in the bulk, 0 on hard-core overlap."""
    w = np.asarray(w_omega(config, potential, box, x))
    out = np.exp(-beta * w)
    if out.ndim == 0:
        return float(out)
    return out


@dataclass
class PropPaReport:
    passed: bool
    samples: int
    bulk_violations: int
    frame_violations: int
    min_margin: float
    bound: float


def sample_frame_and_bulk(box: Box, R: float, count: int, rng: np.random.Generator) -> np.ndarray:
    """Half uniform in the box, half uniform in the frame {d_x < R}."""
    half = count // 2
    uniform = rng.uniform(-box.L, box.L, size=(count - half, box.d))
    frame = rng.uniform(-box.L, box.L, size=(half, box.d))
    axis = rng.integers(0, box.d, size=half)
    sign = rng.choice([-1.0, 1.0], size=half)
    depth = rng.uniform(0, min(R, box.L), size=half)
    frame[np.arange(half), axis] = sign * (box.L - depth)
    return np.concatenate([uniform, frame])


def check_prop_pa(config: BoundaryConfig, potential: PairPotential, box: Box, sample_xs) -> PropPaReport:
    """w = 0 exactly where d_x >= R, w >= -kappa rho_omega elsewhere."""
    xs = np.atleast_2d(np.asarray(sample_xs, dtype=float))
    w = w_omega(config, potential, box, xs)
    d = dist_to_boundary(box, xs)
    bound = -kappa(potential) * config.rho_omega
    bulk = d >= potential.R
    bulk_bad = int(np.count_nonzero(w[bulk] != 0.0))
    frame_w = w[~bulk]
    frame_bad = int(np.count_nonzero(frame_w < bound))
    finite = frame_w[np.isfinite(frame_w)]
    margin = float(np.min(finite - bound)) if len(finite) else math.inf
    return PropPaReport(
        passed=bulk_bad == 0 and frame_bad == 0,
        samples=len(xs),
        bulk_violations=bulk_bad,
        frame_violations=frame_bad,
        min_margin=margin,
        bound=bound,
    )
