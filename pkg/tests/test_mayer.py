import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mayerbc import boundary as bnd
from mayerbc.geometry import Box, BoxTooSmall, ShellSpec, make_grid
from mayerbc.mayer import (
    MajorantSeries,
    Sampler,
    c0n_bound,
    check_inside_identity,
    cogen_bound,
    decompose_pressure,
    estimate_c_n,
    estimate_c_n_volume_avg,
    g_lambda,
    majorant_theta,
    pi_series,
    pressure_free_partial,
    q_bound,
    split_P_Q,
)
from mayerbc.potential import hard_rod, square_well
from mayerbc.ursell import CapabilityError

ROD = hard_rod()
WELL = square_well()
GRID = Sampler(method="grid", grid_points=50)

# Exact hard-rod coefficients of beta p on a segment of length ell = 2L, free
# boundary, obtained by symbolic integration of the finite-volume cluster
# integrals (independent of this package):
#   lambda^2: -(2 ell - 1)/(2 ell),  lambda^3: (9 ell - 8)/(6 ell),
#   lambda^4: -(32 ell - 39)/(12 ell).
def rod_exact(order, ell):
    return {
        1: 1.0,
        2: -(2 * ell - 1) / (2 * ell),
        3: (9 * ell - 8) / (6 * ell),
        4: -(32 * ell - 39) / (12 * ell),
    }[order]


def test_order_zero_is_one():
    est = estimate_c_n([0.3], 0, None, WELL, Box(1, 5.0), 1.0)
    assert est.value == 1.0 and est.std_error == 0.0


def test_hard_rod_first_order_in_bulk():
    box = Box(1, 20.0)
    assert estimate_c_n([0.0], 1, None, ROD, box, 1.0, GRID).value == pytest.approx(-1.0, abs=1e-6)
    mc = estimate_c_n([0.0], 1, None, ROD, box, 1.0, Sampler(samples=10_000))
    # f = -1 on the whole sampling window of half width R = a: zero variance
    assert mc.value == pytest.approx(-1.0, abs=1e-12)


def test_hard_rod_second_order_in_bulk():
    box = Box(1, 20.0)
    assert estimate_c_n([0.0], 2, None, ROD, box, 1.0, Sampler(method="grid", grid_points=100)).value == pytest.approx(1.5, abs=1e-3)
    mc = estimate_c_n([0.0], 2, None, ROD, box, 1.0, Sampler(samples=200_000, seed=2))
    assert abs(mc.value - 1.5) <= 4 * mc.std_error


@pytest.mark.parametrize("order", [1, 2, 3])
def test_grid_volume_average_against_exact_finite_volume(order):
    box = Box(1, 50.0)
    est = estimate_c_n_volume_avg(order - 1, None, ROD, box, 1.0, GRID)
    assert est.value == pytest.approx(rod_exact(order, 100.0), rel=5e-5)


def test_mc_volume_average_against_exact_finite_volume():
    box = Box(1, 10.0)
    est = estimate_c_n_volume_avg(3, None, ROD, box, 1.0, Sampler(samples=400_000, seed=1))
    assert abs(est.value - rod_exact(4, 20.0)) <= 4 * est.std_error


def test_far_boundary_matches_free_exactly():
    box = Box(1, 6.0)
    grid = make_grid(box, WELL.R)
    far = bnd.make_config([[7.5], [-7.2]], box, grid, WELL.R)
    assert far.is_empty
    s = Sampler(samples=5000, seed=3)
    assert estimate_c_n([5.5], 2, far, WELL, box, 1.0, s) == estimate_c_n([5.5], 2, None, WELL, box, 1.0, s)


def test_boundary_changes_edge_coefficients():
    box = Box(1, 6.0)
    omega = bnd.generate({"kind": "grid", "spacing": 0.5}, box, make_grid(box, WELL.R), WELL)
    s = Sampler(samples=5000, seed=3)
    assert estimate_c_n([5.5], 1, omega, WELL, box, 1.0, s).value != estimate_c_n([5.5], 1, None, WELL, box, 1.0, s).value


def test_determinism_and_worker_independence():
    box = Box(1, 6.0)
    a = estimate_c_n([1.0], 3, None, WELL, box, 1.0, Sampler(samples=20_000, chunk=3000, seed=9))
    b = estimate_c_n([1.0], 3, None, WELL, box, 1.0, Sampler(samples=20_000, chunk=3000, seed=9, workers=3))
    c = estimate_c_n([1.0], 3, None, WELL, box, 1.0, Sampler(samples=20_000, chunk=3000, seed=10))
    assert a == b
    assert a.value != c.value


def test_caps_and_preconditions():
    box = Box(1, 6.0)
    with pytest.raises(CapabilityError):
        estimate_c_n([0.0], 20, None, WELL, box, 1.0)
    with pytest.raises(CapabilityError):
        estimate_c_n([0.0], 4, None, WELL, box, 1.0, GRID)
    with pytest.raises(ValueError):
        estimate_c_n([7.0], 1, None, WELL, box, 1.0)
    with pytest.raises(CapabilityError):
        estimate_c_n([0.0, 0.0], 1, None, square_well(d=2), Box(2, 3.0), 1.0, GRID)


def test_pi_series():
    box = Box(1, 20.0)
    series = pi_series([0.0], 2, None, ROD, box, 1.0, Sampler(method="grid", grid_points=100))
    assert series(0.0) == 1.0
    assert series.coefficients[0] == 1.0
    assert series.coefficients[1] == pytest.approx(-1.0, abs=1e-12)
    assert series.coefficients[2] == pytest.approx(1.5, abs=1e-3)
    assert pi_series([0.0], 0, None, ROD, box, 1.0)(0.4) == 1.0


def test_pressure_partial_sum():
    box = Box(1, 20.0)
    value, err = pressure_free_partial(0.1, 1, ROD, box, 1.0, GRID)
    assert err == 0.0
    assert value == pytest.approx(0.1 + rod_exact(2, 40.0) * 0.01, rel=1e-4)
    assert pressure_free_partial(0.0, 2, ROD, box, 1.0, GRID)[0] == 0.0
    assert pressure_free_partial(0.02, 2, WELL, box, 1.0, Sampler(samples=2000))[0] > 0


def test_split_p_q():
    box = Box(1, 25.0)
    omega = bnd.generate({"kind": "grid", "spacing": 0.5}, box, make_grid(box, WELL.R), WELL)
    s = Sampler(samples=2000)
    split = split_P_Q([0.0], 4, 3, omega, WELL, box, 1.0, ShellSpec(0.5), s)
    assert split.Q == ()
    assert split.q_bound == pytest.approx(math.exp(2) / 4**1.5)
    assert split.p_value(0.0) == 1.0 and split.q_value(0.0) == 0
    edge = split_P_Q([24.8], 1, 2, omega, WELL, box, 1.0, ShellSpec(0.5), s)
    assert not edge.anchor_in_bulk and len(edge.Q) == 1


def test_inside_identity_and_preconditions():
    box = Box(1, 36.0)
    shell = ShellSpec(0.5)
    omega = bnd.generate({"kind": "poisson", "intensity": 4.0, "seed": 1}, box, make_grid(box, WELL.R), WELL)
    s = Sampler(samples=3000)
    assert check_inside_identity([29.9], 5, omega, WELL, box, 1.0, shell, s).passed
    with pytest.raises(ValueError):
        check_inside_identity([31.0], 1, omega, WELL, box, 1.0, shell, s)
    with pytest.raises(ValueError):
        check_inside_identity([0.0], 6, omega, WELL, box, 1.0, shell, s)


def test_bounds_closed_forms():
    assert cogen_bound(2, 0.0, ROD, 1.0) == pytest.approx(2.0)
    assert c0n_bound(0, WELL, 1.0) == pytest.approx(math.e)
    assert cogen_bound(3, 0.0, WELL, 0.7) == c0n_bound(3, WELL, 0.7)
    assert cogen_bound(3, 1.0, WELL, 0.7) > c0n_bound(3, WELL, 0.7)
    assert q_bound(WELL, 1.0, 4) == pytest.approx(math.exp(2) / 8)


def test_majorant_examples():
    ms = MajorantSeries.for_potential(WELL, 1.0)
    assert ms.theta(0.0).value == math.exp(1.0)
    assert ms.theta(2 * ms.r_star).diverges
    at_star = ms.theta(ms.r_star)
    # sum_k k^{k-2} x^k / k! at x = 1/e equals 1/2, so Theta(r*) = e^{beta C + 1}/2
    assert at_star.value == pytest.approx(math.exp(2) / 2, rel=1e-5)
    assert at_star.value < 8 / 7 * math.exp(2)
    assert majorant_theta(1.0, ROD, 0.0).value == 1.0


@given(st.floats(0.0, 1.0, exclude_max=True), st.floats(0.1, 3.0))
@settings(max_examples=30)
def test_majorant_brackets(frac, beta):
    ms = MajorantSeries.for_potential(WELL, beta, terms=2000)
    r = frac * ms.r_star
    th = ms.theta(r)
    lo, hi = ms.brackets(r)
    assert lo <= th.value * (1 + 1e-12)
    assert th.value + th.tail_bound <= hi


def test_printed_lower_bracket_overshoots():
    # e^{beta C + 1}(1 + sum/e) exceeds Theta near r = 0
    ms = MajorantSeries.for_potential(WELL, 1.0)
    r = 0.1 * ms.r_star
    assert ms.printed_lower_bracket(r) > ms.theta(r).value
    assert ms.brackets(r)[0] <= ms.theta(r).value


def test_g_lambda_decreasing():
    shell = ShellSpec(0.5)
    gs = [g_lambda(Box(1, L), shell, 1.0) for L in (25.0, 100.0, 400.0, 1600.0)]
    assert all(b < a for a, b in zip(gs, gs[1:]))
    assert 0 < gs[0] <= 16 / 7
    # L = 100: h = 10, n_cut = 9, bulk fraction 0.9
    assert gs[1] == pytest.approx(8 / 7 * (0.9 / 27 + 0.1))


def test_decompose_pressure():
    box = Box(1, 25.0)
    omega = bnd.generate({"kind": "grid", "spacing": 0.5}, box, make_grid(box, WELL.R), WELL)
    dec = decompose_pressure(omega, WELL, box, 1.0, ShellSpec(0.5), Sampler(samples=3000))
    assert dec.n_cut == 4
    assert len(dec.eta_coefficients) == dec.n_cut + 2
    assert dec.eta(0.0) == 0.0 and dec.xi_bound(0.0) == 0.0
    assert dec.radius_boundary < dec.radius_free
    lam = dec.radius_boundary
    expected = lam * math.exp(dec.kappa_rho) * math.exp(2) * dec.g_lambda
    assert dec.xi_bound(lam) == pytest.approx(expected)
    assert dec.in_boundary_disc(lam) and not dec.in_boundary_disc(1.01 * lam)
    with pytest.raises(BoxTooSmall):
        decompose_pressure(None, WELL, Box(1, 1.0), 1.0, ShellSpec(0.5))


def test_eta_matches_free_pressure_at_low_order():
    # eta's lambda coefficient is the bulk fraction; lambda^2 matches the bulk c_1 = -1 for rods
    box = Box(1, 25.0)
    dec = decompose_pressure(None, ROD, box, 1.0, ShellSpec(0.5), Sampler(samples=4000))
    assert dec.eta_coefficients[1] == pytest.approx(0.8)
    assert dec.eta_coefficients[2] == pytest.approx(-0.8, abs=1e-12)
