import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mayerbc import boundary as bnd
from mayerbc.geometry import Box, make_grid
from mayerbc.mayer import Sampler
from mayerbc.oracle import (
    FormalSeries,
    consistency_check,
    hard_rod_z_closed_form,
    series_exp,
    series_log,
    tonks_pressure_coefficients,
    tonks_series,
    xi_coefficients,
)
from mayerbc.potential import hard_rod, square_well

ROD = hard_rod()


def test_tonks_series_matches_lagrange_closed_form():
    # Lagrange inversion of lambda = p e^{a p} gives b_n = (-n a)^{n-1} / n!
    a = Fraction(3, 2)
    for n, b in enumerate(tonks_series(7, a), start=1):
        assert b == Fraction((-n) ** (n - 1), math.factorial(n)) * a ** (n - 1)


def test_tonks_values():
    assert [tonks_pressure_coefficients(n) for n in (1, 2, 3)] == [1.0, -1.0, 1.5]
    assert tonks_pressure_coefficients(4) == pytest.approx(-8 / 3, rel=1e-15)


def test_log_examples():
    logs = series_log(FormalSeries((1.0, 1.0, 0.0, 0.0, 0.0)))
    assert logs.coefficients[1:] == pytest.approx([1, -1 / 2, 1 / 3, -1 / 4], rel=1e-15)
    c = 0.7
    expo = FormalSeries(tuple(c**n / math.factorial(n) for n in range(6)))
    assert series_log(expo).coefficients[1:] == pytest.approx([c, 0, 0, 0, 0], abs=1e-15)
    with pytest.raises(ValueError):
        series_log(FormalSeries((2.0, 1.0)))


def test_log_error_propagation_first_order():
    # d log/d s_1 = 1 for the first coefficient; second is s2 - s1^2/2
    s = FormalSeries((1.0, 2.0, 3.0), (0.0, 0.1, 0.2))
    out = series_log(s)
    assert out.errors[1] == pytest.approx(0.1)
    assert out.errors[2] == pytest.approx(math.hypot(0.2, 2.0 * 0.1))


@given(st.lists(st.floats(-1.0, 1.0), min_size=7, max_size=7))
def test_exp_log_round_trip(tail):
    s = FormalSeries((1.0, *tail))
    back = series_exp(series_log(s))
    assert np.allclose(back.coefficients, s.coefficients, rtol=0, atol=1e-12)


def test_grid_z_matches_nonoverlap_volumes():
    box = Box(1, 5.0)
    xi = xi_coefficients(3, None, ROD, box, 1.0, Sampler(method="grid", grid_points=40))
    assert xi.coefficients[0] == 1.0
    assert xi.coefficients[1] == pytest.approx(10.0, rel=1e-14)
    assert xi.coefficients[2] == pytest.approx(40.5, rel=1e-5)
    for n in (2, 3):
        assert xi.coefficients[n] == pytest.approx(hard_rod_z_closed_form(n, 10.0, 1.0), rel=2e-3)


def test_mc_z_first_order_exact_for_free_boundary():
    box = Box(1, 3.0)
    xi = xi_coefficients(2, None, ROD, box, 1.0, Sampler(samples=5000))
    assert xi.coefficients[1] == 6.0 and xi.errors[1] == 0.0
    assert abs(xi.coefficients[2] - hard_rod_z_closed_form(2, 6.0, 1.0)) <= 4 * xi.errors[2]


def test_consistency_deterministic():
    rep = consistency_check(None, ROD, Box(1, 5.0), 1.0, 3, Sampler(method="grid", grid_points=20))
    assert rep.passed
    for row in rep.rows:
        assert abs(row.log_coefficient - row.mayer) <= 1e-8 * abs(row.mayer)


def test_consistency_trivial_first_order():
    pot = square_well()
    box = Box(1, 2.0)
    omega = bnd.generate({"kind": "grid", "spacing": 0.5}, box, make_grid(box, pot.R), pot)
    rep = consistency_check(omega, pot, box, 1.0, 1, Sampler(method="grid", grid_points=30))
    assert rep.passed and len(rep.rows) == 1


@pytest.mark.parametrize("kind", ["grid", "poisson"])
def test_consistency_monte_carlo_with_boundary(kind):
    pot = square_well()
    box = Box(1, 2.0)
    spec = {"kind": kind, "spacing": 0.5, "intensity": 2.0, "seed": 3}
    omega = bnd.generate(spec, box, make_grid(box, pot.R), pot)
    rep = consistency_check(omega, pot, box, 1.0, 3, Sampler(samples=100_000, seed=4))
    assert rep.passed, rep.rows


def test_order_caps():
    with pytest.raises(ValueError):
        xi_coefficients(5, None, ROD, Box(1, 2.0), 1.0, Sampler(method="grid"))
    with pytest.raises(ValueError):
        xi_coefficients(7, None, ROD, Box(1, 2.0), 1.0)
