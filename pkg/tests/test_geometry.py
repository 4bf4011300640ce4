import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mayerbc.geometry import (
    Box,
    BoxTooSmall,
    CubeGrid,
    ShellSpec,
    cell_of,
    check_tusf,
    default_grid,
    dist_to_boundary,
    make_grid,
    midpoint_nodes,
    n_cut,
    regions,
)


def test_distance_to_boundary():
    box = Box(2, 3.0)
    assert dist_to_boundary(box, [0.0, 0.0]) == 3.0
    assert dist_to_boundary(box, [2.5, -1.0]) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        dist_to_boundary(box, [3.5, 0.0])


def test_regions_and_n_cut():
    box = Box(1, 100.0)
    reg = regions(box, ShellSpec(0.5))
    assert reg.h == 10.0
    assert reg.volume_bulk == pytest.approx(180.0)
    assert reg.volume_shell == pytest.approx(20.0)
    assert n_cut(ShellSpec(0.5), 100.0, 1.0) == 9
    with pytest.raises(BoxTooSmall):
        n_cut(ShellSpec(0.5), 1.0, 1.0)


def test_grid_alignment():
    box = Box(1, 5.0)
    assert make_grid(box, 1.0, 0.5).aligned_with(box)
    with pytest.raises(ValueError):
        make_grid(box, 1.0, 0.3)


def test_cell_of_is_half_open():
    grid = CubeGrid(0.5, 1)
    assert cell_of(grid, np.array([[0.0], [0.49], [0.5], [-0.01]])).ravel().tolist() == [0, 0, 1, -1]


@pytest.mark.parametrize("d", [1, 2, 3])
def test_default_grid_satisfies_tusf(d):
    box = Box(d, 3.0)
    grid = default_grid(box, 1.0)
    assert grid.aligned_with(box)
    rng = np.random.default_rng(0)
    report = check_tusf(grid, 1.0, rng.uniform(-3, 3, size=(40, d)))
    assert report.passed, report


def test_coarse_grid_fails_tusf():
    grid = CubeGrid(1.0, 2)
    assert not check_tusf(grid, 1.0, [[0.5, 0.5]]).passed


def test_midpoint_nodes():
    nodes = midpoint_nodes(Box(1, 1.0), 0.5)
    assert nodes.tolist() == [-0.75, -0.25, 0.25, 0.75]
    with pytest.raises(ValueError):
        midpoint_nodes(Box(1, 1.0), 0.3)


@given(st.floats(5.0, 1e4), st.floats(0.1, 0.9))
def test_shell_volumes_partition_box(L, exponent):
    box = Box(1, L)
    shell = ShellSpec(exponent)
    if shell.h(L) >= L:
        return
    reg = regions(box, shell)
    assert reg.volume_bulk + reg.volume_shell == pytest.approx(reg.volume_box)
    assert 0 < reg.volume_bulk < reg.volume_box


@given(st.lists(st.floats(-2.0, 2.0), min_size=3, max_size=3))
def test_distance_is_one_lipschitz_box_margin(x):
    box = Box(3, 2.0)
    d = dist_to_boundary(box, x)
    assert 0.0 <= d <= 2.0
    assert math.isclose(d, 2.0 - max(abs(c) for c in x))
