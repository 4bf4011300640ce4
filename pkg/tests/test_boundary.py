import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mayerbc import boundary as bnd
from mayerbc.geometry import Box, CubeGrid, make_grid
from mayerbc.potential import hard_rod, kappa, square_well


@pytest.fixture
def setup():
    pot = square_well()
    box = Box(1, 4.0)
    return pot, box, make_grid(box, pot.R)


def test_collar_keeps_only_close_exterior_points(setup):
    pot, box, _ = setup
    kept = bnd.collar_filter([[0.0], [4.5], [4.99], [5.0], [-4.2], [7.0]], box, pot.R)
    assert sorted(kept.ravel().tolist()) == [-4.2, 4.5, 4.99]


def test_density_certificate_counts_per_cell():
    grid = CubeGrid(1.0, 1)
    assert bnd.certify_density([[4.1], [4.2], [4.9], [5.5]], grid) == 3.0
    assert bnd.certify_density(np.zeros((0, 1)), grid) == 0.0


def test_grid_generator_density_below_target(setup):
    pot, box, grid = setup
    omega = bnd.generate({"kind": "grid", "spacing": 0.5}, box, grid, pot)
    assert omega.rho_omega <= bnd.grid_shell_target(grid, 0.5)
    assert len(omega) == 4


def test_poisson_generator_is_seeded(setup):
    pot, box, grid = setup
    a = bnd.generate({"kind": "poisson", "intensity": 3.0, "seed": 4}, box, grid, pot)
    b = bnd.generate({"kind": "poisson", "intensity": 3.0, "seed": 4}, box, grid, pot)
    assert np.array_equal(a.points, b.points)


def test_points_are_read_only(setup):
    pot, box, grid = setup
    omega = bnd.generate({"kind": "grid", "spacing": 0.5}, box, grid, pot)
    with pytest.raises(ValueError):
        omega.points[0, 0] = 0.0


def test_weight_values(setup):
    pot, box, grid = setup
    omega = bnd.make_config([[4.25]], box, grid, pot.R)
    assert bnd.w_omega(omega, pot, box, [3.0]) == 0.0
    assert bnd.w_omega(omega, pot, box, [3.5]) == -1.0
    assert math.isinf(bnd.w_omega(omega, pot, box, [3.9]))
    assert bnd.f_omega(omega, pot, box, 1.0, [3.9]) == 0.0
    assert bnd.f_omega(omega, pot, box, 1.0, [3.5]) == pytest.approx(math.e)


def test_explicit_csv_points(tmp_path, setup):
    pot, box, grid = setup
    path = tmp_path / "pts.csv"
    path.write_text("# exterior points\n4.5\n-4.25\n9.0\n")
    pts = bnd.load_points_csv(path, 1)
    omega = bnd.generate({"kind": "explicit", "points": pts.tolist()}, box, grid, pot)
    assert len(omega) == 2


@given(st.floats(0.0, 8.0), st.integers(0, 10_000))
def test_weight_zero_deep_and_bounded_in_frame(intensity, seed):
    pot = square_well()
    box = Box(1, 3.0)
    grid = make_grid(box, pot.R)
    omega = bnd.generate({"kind": "poisson", "intensity": intensity, "seed": seed}, box, grid, pot)
    rng = np.random.default_rng(seed)
    xs = bnd.sample_frame_and_bulk(box, pot.R, 200, rng)
    rep = bnd.check_prop_pa(omega, pot, box, xs)
    assert rep.passed
    assert rep.bound == -kappa(pot) * omega.rho_omega


def test_hard_rod_weight_never_negative():
    pot = hard_rod()
    box = Box(1, 3.0)
    omega = bnd.generate({"kind": "grid", "spacing": 0.5}, box, make_grid(box, pot.R), pot)
    xs = np.linspace(-3, 3, 601)[:, None]
    w = bnd.w_omega(omega, pot, box, xs)
    assert np.all(w >= 0)
