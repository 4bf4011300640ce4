"""Cross-checks that avoid the graph machinery entirely.

Z_n are integrals of plain Boltzmann weights, logs are taken as formal
power series, and the 1-d hard-rod pressure comes from exact series
reversion of lambda = p exp(a p).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from string import ascii_lowercase
from typing import Optional

import numpy as np

from . import boundary as bnd
from .geometry import Box, midpoint_nodes
from .mayer import Sampler, estimate_c_n_volume_avg, grid_spacing
from .potential import PairPotential, evaluate

TAG_XI = 5
MC_MAX_ORDER = 6
GRID_MAX_ORDER = 4


@dataclass(frozen=True)
class FormalSeries:
    coefficients: tuple
    errors: tuple = ()

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        errs = tuple(float(e) for e in self.errors) or (0.0,) * len(coeffs)
        if len(errs) != len(coeffs):
            raise ValueError("coefficients and errors differ in length")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "errors", errs)

    def __len__(self):
        return len(self.coefficients)


@dataclass(frozen=True)
class TruncatedXi(FormalSeries):
    """Z_0..Z_N of the grand partition function, Z_0 = 1."""

    method: str = "mc"
    samples: int = 0


def series_log(s: FormalSeries) -> FormalSeries:
    """log of a series with unit constant term, errors propagated to first order.

    Uses l_n = s_n - (1/n) sum_{k<n} k l_k s_{n-k}; the Jacobian dl/ds is
    carried along the same recurrence.
    """
    a = s.coefficients
    if not a or a[0] != 1.0:
        raise ValueError("series_log needs constant term exactly 1")
    N = len(a)
    logs = [0.0] * N
    jac = np.zeros((N, N))
    for n in range(1, N):
        acc = [a[n]]
        row = np.zeros(N)
        row[n] = 1.0
        for k in range(1, n):
            acc.append(-k * logs[k] * a[n - k] / n)
            row -= (k / n) * (jac[k] * a[n - k])
            row[n - k] -= (k / n) * logs[k]
        logs[n] = math.fsum(acc)
        jac[n] = row
    var = (jac**2) @ (np.asarray(s.errors) ** 2)
    return FormalSeries(tuple(logs), tuple(np.sqrt(var)))


def series_exp(s: FormalSeries) -> FormalSeries:
    """exp of a series; e_n = (1/n) sum_{k=1}^n k s_k e_{n-k} times exp(s_0)."""
    a = s.coefficients
    N = len(a)
    e = [1.0] + [0.0] * (N - 1)
    for n in range(1, N):
        e[n] = math.fsum(k * a[k] * e[n - k] for k in range(1, n + 1)) / n
    scale = math.exp(a[0]) if N else 1.0
    return FormalSeries(tuple(scale * c for c in e))


# -- Z_n -------------------------------------------------------------------------------------


def _boltzmann(potential: PairPotential, beta: float, r: np.ndarray) -> np.ndarray:
    v = evaluate(potential, r)
    with np.errstate(over="ignore"):
        return np.exp(-beta * np.asarray(v, dtype=float))


def _node_f(omega, potential, box, beta, nodes):
    if omega is None or omega.is_empty:
        return np.ones(len(nodes))
    return np.asarray(bnd.f_omega(omega, potential, box, beta, nodes[:, None]), dtype=float)


def _grid_xi(N_max, omega, potential, box, beta, sampler) -> TruncatedXi:
    if box.d != 1:
        raise ValueError("grid partition functions are one-dimensional")
    if N_max > GRID_MAX_ORDER:
        raise ValueError(f"grid Z_n capped at n = {GRID_MAX_ORDER}")
    m = sampler.grid_points
    h = grid_spacing(potential.R, m)
    nodes = midpoint_nodes(box, h)
    k = np.arange(len(nodes))
    r = (np.abs(k[:, None] - k[None, :]) / (m + 0.5)) * potential.R
    E = _boltzmann(potential, beta, r)
    g = _node_f(omega, potential, box, beta, nodes)
    Z = [1.0]
    for n in range(1, N_max + 1):
        idx = ascii_lowercase[:n]
        pairs = [idx[i] + idx[j] for i in range(n) for j in range(i + 1, n)]
        spec = ",".join(list(idx) + pairs) + "->"
        total = np.einsum(spec, *([g] * n + [E] * len(pairs)), optimize="greedy")
        Z.append(float(total) * h**n / math.factorial(n))
    return TruncatedXi(tuple(Z), (0.0,) * len(Z), method="grid", samples=len(nodes))


def _mc_xi(N_max, omega, potential, box, beta, sampler) -> TruncatedXi:
    if N_max > MC_MAX_ORDER:
        raise ValueError(f"Monte Carlo Z_n capped at n = {MC_MAX_ORDER}")
    Z, errs = [1.0], [0.0]
    for n in range(1, N_max + 1):
        sums, sq = [], []
        done, chunk_id = 0, 0
        while done < sampler.samples:
            size = min(sampler.chunk, sampler.samples - done)
            rng = np.random.default_rng(np.random.SeedSequence(sampler.seed, spawn_key=(TAG_XI, n, chunk_id)))
            x = rng.uniform(-box.L, box.L, size=(size, n, box.d))
            weight = np.ones(size)
            if n > 1:
                iu = np.triu_indices(n, k=1)
                r = np.sqrt(np.sum((x[:, iu[0], :] - x[:, iu[1], :]) ** 2, axis=-1))
                weight = np.prod(_boltzmann(potential, beta, r), axis=1)
            if omega is not None and not omega.is_empty:
                f = bnd.f_omega(omega, potential, box, beta, x.reshape(-1, box.d)).reshape(size, n)
                weight = weight * np.prod(f, axis=1)
            sums.append(math.fsum(weight))
            sq.append(math.fsum(weight * weight))
            done += size
            chunk_id += 1
        N = sampler.samples
        mean = math.fsum(sums) / N
        var = max(math.fsum(sq) / N - mean * mean, 0.0) * N / (N - 1)
        scale = box.volume**n / math.factorial(n)
        Z.append(scale * mean)
        errs.append(scale * math.sqrt(var / N))
    return TruncatedXi(tuple(Z), tuple(errs), method="mc", samples=sampler.samples)


def xi_coefficients(
    N_max: int,
    omega: Optional[bnd.BoundaryConfig],
    potential: PairPotential,
    box: Box,
    beta: float,
    sampler: Sampler = Sampler(),
) -> TruncatedXi:
    """Z_n = (1/n!) int_{Lambda^n} exp(-beta U) prod f, n = 0..N_max."""
    if N_max < 0:
        raise ValueError("N_max must be >= 0")
    if sampler.method == "grid":
        return _grid_xi(N_max, omega, potential, box, beta, sampler)
    return _mc_xi(N_max, omega, potential, box, beta, sampler)


def hard_rod_z_closed_form(n: int, length: float, a: float) -> float:
    """Free hard-rod configuration integral (length - (n-1) a)^n / n!."""
    free_length = length - (n - 1) * a
    if n == 0:
        return 1.0
    return max(free_length, 0.0) ** n / math.factorial(n)


# -- Tonks gas -------------------------------------------------------------------------------


def _fraction_exp(series: list, order: int) -> list:
    """exp of a Fraction series with zero constant term, truncated at ``order``."""
    out = [Fraction(0)] * (order + 1)
    out[0] = Fraction(1)
    for n in range(1, order + 1):
        out[n] = sum((k * series[k] * out[n - k] for k in range(1, n + 1)), Fraction(0)) / n
    return out


def tonks_series(order: int, a) -> list:
    """Exact coefficients b_1..b_order of beta p(lambda) for 1-d hard rods of length a.

    Solves lambda = p exp(a p) for p as a formal series by the fixed point
    p = lambda exp(-a p); each pass fixes one more coefficient.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    a = Fraction(a)
    p = [Fraction(0)] * (order + 1)
    for _ in range(order):
        e = _fraction_exp([-a * c for c in p], order)
        p = [Fraction(0)] + e[:order]
    return p[1:]


def tonks_pressure_coefficients(n: int, a: float = 1.0) -> float:
    """Coefficient of lambda^n in the infinite-volume hard-rod beta p."""
    return float(tonks_series(n, a)[n - 1])


# -- joint check -----------------------------------------------------------------------------


@dataclass(frozen=True)
class ConsistencyRow:
    order: int
    log_coefficient: float
    log_error: float
    mayer: float
    mayer_error: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class ConsistencyReport:
    rows: tuple
    method: str

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)


def consistency_check(
    omega,
    potential: PairPotential,
    box: Box,
    beta: float,
    N_max: int = 3,
    sampler: Sampler = Sampler(),
    rel_tol: float = 1e-8,
    n_sigma: float = 3.0,
    widen: float = 2.0,
) -> ConsistencyReport:
    """log Xi coefficient n against |Lambda| times the volume-averaged c_{n-1}.

    Deterministic runs compare at ``rel_tol``; Monte Carlo runs at
    ``widen * n_sigma`` combined standard errors.
    """
    xi = xi_coefficients(N_max, omega, potential, box, beta, sampler)
    logs = series_log(xi)
    rows = []
    for n in range(1, N_max + 1):
        est = estimate_c_n_volume_avg(n - 1, omega, potential, box, beta, sampler)
        mayer = box.volume * est.value
        mayer_err = box.volume * est.std_error
        diff = abs(logs.coefficients[n] - mayer)
        if sampler.method == "grid":
            tol = rel_tol * max(abs(mayer), abs(logs.coefficients[n]), 1e-300)
        else:
            tol = widen * n_sigma * math.hypot(logs.errors[n], mayer_err)
        rows.append(ConsistencyRow(n, logs.coefficients[n], logs.errors[n], mayer, mayer_err, tol, diff <= tol))
    return ConsistencyReport(tuple(rows), sampler.method)
