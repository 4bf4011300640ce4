"""Invariant suites shared by ``mayerbc verify`` and the acceptance tests.

Every check returns a :class:`CheckResult` with its measured numbers in
``rows`` so that reruns can be diffed byte for byte.
"""
from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import boundary as bnd
from . import ursell
from .geometry import Box, ShellSpec, make_grid, n_cut, regions
from .mayer import (
    MajorantSeries,
    Sampler,
    c0n_bound,
    check_inside_identity,
    cogen_bound,
    decompose_pressure,
    estimate_c_n,
    estimate_c_n_volume_avg,
    g_lambda,
)
from .oracle import consistency_check, tonks_pressure_coefficients
from .potential import hard_rod, hard_sphere, radius_boundary, radius_free, square_well, zero_potential


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    rows: list = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def rows_to_csv(rows: list) -> str:
    """17-significant-digit CSV of a list of flat dicts (keys of the first row)."""
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: format_value(v) for k, v in row.items()})
    return buf.getvalue()


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if isinstance(v, (tuple, list)):
        return " ".join(format_value(x) for x in v)
    return str(v)


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        result = fn(*args, **kwargs)
        result.seconds = time.perf_counter() - start
        return result

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# -- graphs ------------------------------------------------------------------------------------

CONNECTED_COUNTS = {1: 1, 2: 1, 3: 4, 4: 38, 5: 728, 6: 26704}


@_timed
def check_graph_counts(max_vertices: int = 6, cayley_max: int = 8) -> CheckResult:
    rows = []
    ok = True
    for m in range(1, max_vertices + 1):
        got = len(ursell.connected_graph_masks(m))
        rows.append({"kind": "connected", "m": m, "count": got, "expected": CONNECTED_COUNTS[m]})
        ok &= got == CONNECTED_COUNTS[m]
    for m in range(2, cayley_max + 1):
        got = len(ursell.tree_edge_index(m))
        rows.append({"kind": "trees", "m": m, "count": got, "expected": m ** (m - 2)})
        ok &= got == m ** (m - 2)
    return CheckResult("graph_counts", ok, f"connected up to {max_vertices}, Cayley up to {cayley_max}", rows)


def _random_configs(rng, count: int, m: int, spread: float, d: int) -> np.ndarray:
    return rng.uniform(0.0, spread, size=(count, m, d))


@_timed
def check_dual_route(configs: int = 100, sizes=(3, 4, 5, 6), seed: int = 0, rel_tol: float = 1e-10) -> CheckResult:
    """Graph sum against subset recursion on random square-well configurations."""
    pot = square_well()
    rows, worst, ok = [], 0.0, True
    for m in sizes:
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(11, m)))
        pts = _random_configs(rng, configs, m, 0.6 * m * pot.R, pot.d)
        F = ursell.bond_matrices(pts, pot, 1.0)
        rec = ursell.ursell_from_bonds(F)
        for k in range(configs):
            direct = ursell.ursell_graph_sum_from_bonds(F[k])
            scale = max(abs(direct), abs(rec[k]))
            diff = abs(direct - rec[k])
            good = diff <= rel_tol * scale if scale > 0 else diff == 0
            ok &= good
            if scale > 0:
                worst = max(worst, diff / scale)
            rows.append({"m": m, "config": k, "graph_sum": direct, "recursion": float(rec[k]), "ok": good})
    return CheckResult("ursell_dual_route", ok, f"worst relative difference {worst:.3g}", rows)


@_timed
def check_tree_bound(configs: int = 10_000, max_vertices: int = 6, seed: int = 0) -> CheckResult:
    rows, violations = [], 0
    for pot in (square_well(), hard_rod()):
        for m in range(2, max_vertices + 1):
            rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(12, m)))
            pts = _random_configs(rng, configs, m, 0.6 * m * pot.R, pot.d)
            phi = ursell.ursell_from_bonds(ursell.bond_matrices(pts, pot, 1.0))
            bound = ursell.tree_bound_batch(pts, pot, 1.0)
            bad = int(np.count_nonzero(np.abs(phi) > bound * (1 + 1e-12)))
            violations += bad
            rows.append({"potential": pot.name, "m": m, "violations": bad, "max_ratio": float(np.max(np.abs(phi)[bound > 0] / bound[bound > 0], initial=0.0))})
    return CheckResult("tree_graph_bound", violations == 0, f"{violations} violations", rows)


# -- boundary and bounds -----------------------------------------------------------------------------


def boundary_cases():
    """(preset, box, omega) combinations used by the boundary checks."""
    out = []
    for pot, L in ((square_well(), 6.0), (hard_rod(), 6.0), (square_well(d=2, a=0.5, R=1.0), 4.0)):
        box = Box(pot.d, L)
        grid = make_grid(box, pot.R)
        out.append((pot, box, bnd.generate({"kind": "grid", "spacing": 0.5}, box, grid, pot)))
        out.append((pot, box, bnd.generate({"kind": "poisson", "intensity": 2.0, "seed": 5}, box, grid, pot)))
    return out


@_timed
def check_prop_pa(samples: int = 100_000, seed: int = 0) -> CheckResult:
    rows, ok = [], True
    for i, (pot, box, omega) in enumerate(boundary_cases()):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(13, i)))
        xs = bnd.sample_frame_and_bulk(box, pot.R, samples, rng)
        rep = bnd.check_prop_pa(omega, pot, box, xs)
        ok &= rep.passed
        rows.append(
            {
                "case": i,
                "potential": pot.name,
                "d": pot.d,
                "generator": omega.spec.get("kind"),
                "rho_omega": omega.rho_omega,
                "bulk_violations": rep.bulk_violations,
                "frame_violations": rep.frame_violations,
                "min_margin": rep.min_margin,
            }
        )
    return CheckResult("boundary_potential", ok, f"{len(rows)} cases x {samples} points", rows)


def _bound_cases():
    cases = []
    for pot, L in ((hard_rod(), 5.0), (square_well(), 5.0), (hard_sphere(1.0, 2), 3.0), (zero_potential(), 5.0)):
        box = Box(pot.d, L)
        grid = make_grid(box, pot.R)
        cases.append((pot, box, None))
        cases.append((pot, box, bnd.generate({"kind": "grid", "spacing": 0.5}, box, grid, pot)))
    return cases


@_timed
def check_coefficient_bounds(max_order: int = 4, samples: int = 20_000, seed: int = 0, beta: float = 1.0) -> CheckResult:
    rows, ok = [], True
    for pot, box, omega in _bound_cases():
        rho = 0.0 if omega is None else omega.rho_omega
        for x0 in (np.zeros(pot.d), np.full(pot.d, box.L - 0.25 * pot.R)):
            for n in range(max_order + 1):
                est = estimate_c_n(x0, n, omega, pot, box, beta, Sampler(samples=samples, seed=seed))
                bound = c0n_bound(n, pot, beta) if omega is None else cogen_bound(n, rho, pot, beta)
                good = abs(est.value) - 3 * est.std_error <= bound
                ok &= good
                rows.append(
                    {
                        "potential": pot.name,
                        "omega": "free" if omega is None else "grid",
                        "x0": x0[0],
                        "n": n,
                        "value": est.value,
                        "std_error": est.std_error,
                        "bound": bound,
                        "ok": good,
                    }
                )
    return CheckResult("coefficient_bounds", ok, f"{len(rows)} estimates up to n = {max_order}", rows)


@_timed
def check_inside_identity_grid(
    L: float = 100.0, samples: int = 2_000, anchors: int = 9, seed: int = 0, beta: float = 1.0
) -> CheckResult:
    """Bitwise equality of c_n with omega and without, anchors across the bulk, n <= n_cut."""
    rows, ok = [], True
    shell = ShellSpec(0.5)
    for pot in (hard_rod(), square_well()):
        box = Box(1, L)
        grid = make_grid(box, pot.R)
        inner = regions(box, shell).inner_half_side
        omegas = (
            bnd.generate({"kind": "grid", "spacing": 0.5}, box, grid, pot),
            bnd.generate({"kind": "poisson", "intensity": 3.0, "seed": seed}, box, grid, pot),
        )
        nc = n_cut(shell, L, pot.R)
        xs = np.linspace(-inner, inner, anchors + 2)[1:-1]
        for omega in omegas:
            for x0 in xs:
                for n in range(nc + 1):
                    rep = check_inside_identity([x0], n, omega, pot, box, beta, shell, Sampler(samples=samples, seed=seed))
                    ok &= rep.passed
                    rows.append({"potential": pot.name, "generator": omega.spec["kind"], "x0": x0, "n": n, "value": rep.value_omega, "equal": rep.passed})
    return CheckResult("inside_identity", ok, f"{len(rows)} (x0, n) pairs, bitwise", rows)


@_timed
def check_eta_bound(L: float = 100.0, points: int = 50, samples: int = 20_000, seed: int = 0, beta: float = 1.0) -> CheckResult:
    rows, ok = [], True
    for pot in (hard_rod(), square_well()):
        box = Box(1, L)
        dec = decompose_pressure(None, pot, box, beta, ShellSpec(0.5), Sampler(samples=samples, seed=seed))
        for k in range(points):
            lam = dec.radius_free * complex(math.cos(2 * math.pi * k / points), math.sin(2 * math.pi * k / points))
            eta = abs(dec.eta(lam))
            bound = dec.eta_bound(lam)
            ok &= eta <= bound
            rows.append({"potential": pot.name, "k": k, "abs_eta": eta, "eta_error": dec.eta_error(lam), "bound": bound})
    return CheckResult("eta_bound", ok, f"{len(rows)} points on |lambda| = D0", rows)


@_timed
def check_g_sweep(Ls=(25.0, 100.0, 400.0, 1600.0), R: float = 1.0, beta: float = 1.0) -> CheckResult:
    shell = ShellSpec(0.5)
    pot = square_well(R=R)
    rho = 2.0
    lam = 0.5 * radius_boundary(pot, beta, rho)
    rows = []
    for L in Ls:
        g = g_lambda(Box(1, L), shell, R)
        xi = abs(lam) * math.exp(beta * 4 * pot.C_decl * 2 * R * rho) * math.exp(beta * pot.C_decl + 1) * g
        rows.append({"L": L, "n_cut": n_cut(shell, L, R), "g_lambda": g, "xi_bound": xi})
    gs = [r["g_lambda"] for r in rows]
    xis = [r["xi_bound"] for r in rows]
    dec = all(b < a for a, b in zip(gs, gs[1:])) and all(b < a for a, b in zip(xis, xis[1:]))
    ratio = gs[-1] / gs[0]
    ok = dec and ratio < 0.15
    return CheckResult("g_sweep", ok, f"g ratio last/first {ratio:.4f}", rows)


@_timed
def check_majorant(radii: int = 20, beta: float = 1.0) -> CheckResult:
    rows, ok = [], True
    for pot in (hard_rod(), square_well(), hard_sphere(1.0, 2)):
        ms = MajorantSeries.for_potential(pot, beta)
        for k in range(1, radii + 1):
            r = ms.r_star * k / (radii + 1)
            th = ms.theta(r)
            lo, hi = ms.brackets(r)
            good = (not th.diverges) and lo <= th.value and th.value + th.tail_bound <= hi
            ok &= good
            rows.append({"potential": pot.name, "r": r, "theta": th.value, "lower": lo, "upper": hi, "ok": good})
        at_star = ms.theta(ms.r_star)
        limit = (8.0 / 7.0) * math.exp(beta * pot.C_decl + 1)
        good = (not at_star.diverges) and at_star.value + at_star.tail_bound < limit
        ok &= good
        rows.append({"potential": pot.name, "r": ms.r_star, "theta": at_star.value, "lower": math.nan, "upper": limit, "ok": good})
    return CheckResult("majorant", ok, "brackets at sampled radii and value at r*", rows)


# -- oracle ------------------------------------------------------------------------------------------


def check_tonks(
    L: float = 50.0,
    grid_points: int = 100,
    mc_samples: int = 10_000_000,
    seed: int = 0,
    rel_tol: float = 0.02,
    n_sigma: float = 3.0,
) -> list:
    """Volume-averaged hard-rod coefficients of beta p against the infinite-volume series.

    Orders 1..3 on the deterministic lattice, order 4 by Monte Carlo.
    """
    pot = hard_rod(1.0)
    box = Box(1, L)
    out = []
    for n in (1, 2, 3):
        start = time.perf_counter()
        est = estimate_c_n_volume_avg(n - 1, None, pot, box, 1.0, Sampler(method="grid", grid_points=grid_points))
        target = tonks_pressure_coefficients(n, 1.0)
        rel = abs(est.value - target) / abs(target)
        row = {"n": n, "method": "grid", "value": est.value, "std_error": 0.0, "oracle": target, "rel_dev": rel}
        out.append(CheckResult(f"tonks_n{n}", rel <= rel_tol, f"{est.value:.6g} vs {target:.6g} (rel {rel:.3g})", [row], time.perf_counter() - start))
    start = time.perf_counter()
    est = estimate_c_n_volume_avg(3, None, pot, box, 1.0, Sampler(samples=mc_samples, seed=seed))
    target = tonks_pressure_coefficients(4, 1.0)
    dev = abs(est.value - target)
    row = {"n": 4, "method": "mc", "value": est.value, "std_error": est.std_error, "oracle": target, "rel_dev": dev / abs(target)}
    out.append(
        CheckResult(
            "tonks_n4",
            dev <= n_sigma * est.std_error,
            f"{est.value:.6g} +- {est.std_error:.2g} vs {target:.6g} ({dev / est.std_error:.1f} sigma)",
            [row],
            time.perf_counter() - start,
        )
    )
    return out


@_timed
def check_consistency(mc_samples: int = 200_000, seed: int = 0) -> CheckResult:
    rows, ok = [], True
    det_box = Box(1, 5.0)
    pot = hard_rod()
    rep = consistency_check(None, pot, det_box, 1.0, 3, Sampler(method="grid", grid_points=20))
    ok &= rep.passed
    rows += [{"case": "hard_rod free grid", "n": r.order, "log": r.log_coefficient, "mayer": r.mayer, "tol": r.tolerance, "ok": r.passed} for r in rep.rows]
    for i, (pot, box, omega) in enumerate(c for c in boundary_cases() if c[0].d == 1):
        small = Box(1, 2.0)
        omega = bnd.generate(omega.spec, small, make_grid(small, pot.R), pot)
        rep = consistency_check(omega, pot, small, 1.0, 3, Sampler(samples=mc_samples, seed=seed))
        ok &= rep.passed
        label = f"{pot.name} {omega.spec['kind']} mc"
        rows += [{"case": label, "n": r.order, "log": r.log_coefficient, "mayer": r.mayer, "tol": r.tolerance, "ok": r.passed} for r in rep.rows]
    return CheckResult("series_consistency", ok, f"{len(rows)} order comparisons", rows)


SUITES = {
    "graphs": ("check_graph_counts", "check_dual_route", "check_tree_bound"),
    "bounds": ("check_prop_pa", "check_coefficient_bounds", "check_eta_bound", "check_g_sweep", "check_majorant"),
    "identity": ("check_inside_identity_grid",),
    "oracle": ("check_consistency", "check_tonks"),
}


def run_suite(name: str, **overrides) -> list:
    """Run one suite (or ``all``) and return a flat list of results."""
    names = [n for key in SUITES for n in SUITES[key]] if name == "all" else list(SUITES[name])
    results = []
    for fn_name in names:
        out = globals()[fn_name](**overrides.get(fn_name, {}))
        results.extend(out if isinstance(out, list) else [out])
    return results
