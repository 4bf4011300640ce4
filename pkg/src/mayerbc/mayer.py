"""Mayer coefficients with boundary weights, and the bulk/boundary split of the pressure.

Conventions.  ``c_n(x0)`` is the anchored coefficient

    c_n(x0) = 1/(n+1)! int_{Lambda^n} Phi^T(x0, x1..xn) prod_i f(x_i) dx_1..dx_n,

with c_0 = 1, and the pressure is beta p = (lambda/|Lambda|) int f(x0) Pi_{x0}(lambda) dx0,
Pi_{x0} = sum_n c_n(x0) lambda^n.  So the volume average of f(x0) c_n(x0) is the
coefficient of lambda^{n+1} in beta p.

Phi^T vanishes unless every x_i is within n R of x0, so integrals run over
the axis-aligned box of half side n R around x0, clipped to Lambda (points
outside the ball contribute an exact zero).

Monte Carlo streams are derived from (master seed, estimator tag, order,
chunk index), so results depend only on inputs, seed and chunk size.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence

import numpy as np

from . import boundary as bnd
from .geometry import Box, ShellSpec, dist_to_boundary, midpoint_nodes, n_cut as _n_cut, regions
from .potential import PairPotential, c_v_integral, evaluate, kappa, radius_boundary, radius_free
from .ursell import RECURSION_CAP, CapabilityError, bonds_from_distances, ursell_from_bonds

TAG_ANCHORED = 1
TAG_VOLUME = 2
TAG_BULK = 3

GRID_MAX_POINTS = 200
GRID_MAX_ORDER = 3


@dataclass(frozen=True)
class Sampler:
    """How integrals are evaluated.

    ``method`` is ``"mc"`` or ``"grid"``.  The grid is the midpoint lattice of
    the box with spacing R / (grid_points + 1/2) (d = 1 only).  The half-step
    keeps every lattice separation off R, so a hard core of diameter R is
    integrated exactly.
    """

    method: str = "mc"
    samples: int = 100_000
    seed: int = 0
    chunk: int = 1 << 15
    grid_points: int = 50
    workers: int = 1

    def __post_init__(self):
        if self.method not in ("mc", "grid"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.samples < 2:
            raise ValueError("need at least 2 samples")
        if self.chunk < 1 or self.workers < 1:
            raise ValueError("chunk and workers must be positive")
        if not 1 <= self.grid_points <= GRID_MAX_POINTS:
            raise ValueError(f"grid_points must lie in [1, {GRID_MAX_POINTS}]")


@dataclass(frozen=True)
class MayerEstimate:
    order: int
    x0: Optional[tuple]
    value: float
    std_error: float
    samples: int
    method: str


def grid_spacing(R: float, m: int) -> float:
    return R / (m + 0.5)


def _lattice_reach(n: int, m: int) -> int:
    """Largest k with k R/(m + 1/2) < n R."""
    return (n * (2 * m + 1) - 1) // 2


def _exact_one(order: int, x0, method: str) -> MayerEstimate:
    return MayerEstimate(order, x0, 1.0, 0.0, 0, method)


# -- Monte Carlo machinery ------------------------------------------------------------


@dataclass
class _Moments:
    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    @classmethod
    def of(cls, values: np.ndarray) -> "_Moments":
        mean = float(np.mean(values))
        return cls(len(values), mean, float(np.sum((values - mean) ** 2)))

    def merge(self, other: "_Moments") -> "_Moments":
        if self.count == 0:
            return other
        n = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / n
        m2 = self.m2 + other.m2 + delta * delta * self.count * other.count / n
        return _Moments(n, mean, m2)

    @property
    def std_error(self) -> float:
        if self.count < 2:
            return 0.0
        return math.sqrt(self.m2 / (self.count - 1) / self.count)


def _chunk_sizes(total: int, chunk: int) -> list:
    sizes = [chunk] * (total // chunk)
    if total % chunk:
        sizes.append(total % chunk)
    return sizes


def _effective_chunk(sampler: Sampler, n_points: int) -> int:
    # two (2^m, chunk) float tables live at once in the subset recursion
    return max(1, min(sampler.chunk, (1 << 22) >> n_points))


def _run_chunks(sampler: Sampler, tag: int, order: int, n_points: int, body) -> _Moments:
    chunk = _effective_chunk(sampler, n_points)
    sizes = _chunk_sizes(sampler.samples, chunk)

    def task(k):
        rng = np.random.default_rng(np.random.SeedSequence(sampler.seed, spawn_key=(tag, order, k)))
        return _Moments.of(body(rng, sizes[k]))

    if sampler.workers > 1:
        with ThreadPoolExecutor(sampler.workers) as pool:
            parts = list(pool.map(task, range(len(sizes))))
    else:
        parts = [task(k) for k in range(len(sizes))]
    total = _Moments()
    for part in parts:
        total = total.merge(part)
    return total


def _anchor_domain(rng, x0: np.ndarray, n: int, R: float, box: Box):
    """Uniform points in the box of half side nR around each anchor, clipped to Lambda."""
    lo = np.maximum(x0 - n * R, -box.L)
    hi = np.minimum(x0 + n * R, box.L)
    width = hi - lo
    xs = lo[:, None, :] + rng.random((x0.shape[0], n, x0.shape[1])) * width[:, None, :]
    return xs, np.prod(width, axis=1)


def _weights(omega, potential, box, beta, pts: np.ndarray) -> np.ndarray:
    """Product over the points of each sample of the boundary weight f."""
    if omega is None or omega.is_empty:
        return np.ones(pts.shape[0])
    f = bnd.f_omega(omega, potential, box, beta, pts.reshape(-1, box.d))
    return np.prod(f.reshape(pts.shape[:-1]), axis=1)


def _ursell_batch(x0: np.ndarray, xs: np.ndarray, potential: PairPotential, beta: float) -> np.ndarray:
    pts = np.concatenate([x0[:, None, :], xs], axis=1)
    diff = pts[:, :, None, :] - pts[:, None, :, :]
    r = np.sqrt(np.sum(diff**2, axis=-1))
    return ursell_from_bonds(bonds_from_distances(r, potential, beta))


def _check_order(n: int):
    if n < 0:
        raise ValueError("order must be >= 0")
    if n + 1 > RECURSION_CAP:
        raise CapabilityError(f"order {n} exceeds the Ursell cap of {RECURSION_CAP} points")


# -- anchored coefficient ---------------------------------------------------------------


def estimate_c_n(
    x0,
    n: int,
    omega: Optional[bnd.BoundaryConfig],
    potential: PairPotential,
    box: Box,
    beta: float,
    sampler: Sampler = Sampler(),
) -> MayerEstimate:
    """Estimate the anchored coefficient c_n(x0) for the boundary condition ``omega``."""
    _check_order(n)
    x0 = np.asarray(x0, dtype=float).reshape(box.d)
    if not box.contains(x0):
        raise ValueError("anchor lies outside the box")
    key = tuple(float(c) for c in x0)
    if n == 0:
        return _exact_one(0, key, sampler.method)
    if sampler.method == "grid":
        return _grid_anchored(x0, n, omega, potential, box, beta, sampler)
    scale = 1.0 / math.factorial(n + 1)

    def body(rng, size):
        anchors = np.broadcast_to(x0, (size, box.d))
        xs, vol = _anchor_domain(rng, anchors, n, potential.R, box)
        phi = _ursell_batch(anchors, xs, potential, beta)
        return phi * _weights(omega, potential, box, beta, xs) * (vol**n * scale)

    mom = _run_chunks(sampler, TAG_ANCHORED, n, n + 1, body)
    return MayerEstimate(n, key, mom.mean, mom.std_error, mom.count, "mc")


def _check_grid(box: Box, n: int):
    if box.d != 1:
        raise CapabilityError("deterministic grid quadrature is available in d = 1 only")
    if n > GRID_MAX_ORDER:
        raise CapabilityError(f"grid quadrature capped at order {GRID_MAX_ORDER}")


def _grid_anchored(x0, n, omega, potential, box, beta, sampler) -> MayerEstimate:
    """Lattice x0 + k h anchored at x0; each node weighted by the part of its cell inside Lambda."""
    _check_grid(box, n)
    m = sampler.grid_points
    h = grid_spacing(potential.R, m)
    reach = _lattice_reach(n, m)
    k = np.arange(-reach, reach + 1)
    centre = x0[0] + k * h
    cover = (np.minimum(centre + h / 2, box.L) - np.maximum(centre - h / 2, -box.L)) / h
    keep = cover > 0
    k, centre, cover = k[keep], centre[keep], np.clip(cover[keep], 0.0, 1.0)
    inside = np.clip(centre, -box.L, box.L)
    g = cover * _node_weights(omega, potential, box, beta, inside)
    idx = np.array(list(product(range(len(k)), repeat=n)), dtype=np.int64).reshape(-1, n)
    total = []
    for start in range(0, len(idx), 1 << 16):
        block = idx[start : start + (1 << 16)]
        lat = np.concatenate([np.zeros((len(block), 1), dtype=np.int64), k[block]], axis=1)
        r = (np.abs(lat[:, :, None] - lat[:, None, :]) / (m + 0.5)) * potential.R
        phi = ursell_from_bonds(bonds_from_distances(r, potential, beta))
        total.append(phi * np.prod(g[block], axis=1))
    value = math.fsum(np.concatenate(total)) * h**n / math.factorial(n + 1)
    return MayerEstimate(n, (float(x0[0]),), value, 0.0, len(idx), "grid")


def _node_weights(omega, potential, box, beta, nodes: np.ndarray) -> np.ndarray:
    if omega is None or omega.is_empty:
        return np.ones(len(nodes))
    return np.asarray(bnd.f_omega(omega, potential, box, beta, nodes[:, None]), dtype=float)


# -- volume averages -------------------------------------------------------------------------


def estimate_c_n_volume_avg(
    n: int,
    omega: Optional[bnd.BoundaryConfig],
    potential: PairPotential,
    box: Box,
    beta: float,
    sampler: Sampler = Sampler(),
) -> MayerEstimate:
    """(1/|Lambda|) int f(x0) c_n(x0) dx0: the coefficient of lambda^{n+1} in beta p."""
    _check_order(n)
    if sampler.method == "grid":
        return _grid_volume_avg(n, omega, potential, box, beta, sampler)
    scale = 1.0 / math.factorial(n + 1)

    def body(rng, size):
        x0 = rng.uniform(-box.L, box.L, size=(size, box.d))
        w0 = _weights(omega, potential, box, beta, x0[:, None, :])
        if n == 0:
            return w0
        xs, vol = _anchor_domain(rng, x0, n, potential.R, box)
        phi = _ursell_batch(x0, xs, potential, beta)
        return w0 * phi * _weights(omega, potential, box, beta, xs) * (vol**n * scale)

    if n == 0 and (omega is None or omega.is_empty):
        return MayerEstimate(0, None, 1.0, 0.0, 0, "mc")
    mom = _run_chunks(sampler, TAG_VOLUME, n, n + 1, body)
    return MayerEstimate(n, None, mom.mean, mom.std_error, mom.count, "mc")


def lattice_ursell_table(n: int, m: int, potential: PairPotential, beta: float) -> np.ndarray:
    """Phi^T(0, o_1..o_n) on lattice offsets of spacing R/(m + 1/2).

    Offsets run over |o| <= reach (beyond it Phi^T vanishes); the table has
    shape (A,)*n with A = 2 reach + 1 and offset = index - reach.
    """
    reach = _lattice_reach(n, m)
    A = 2 * reach + 1
    table = np.empty(A**n)
    block = max(1, (1 << 22) >> (n + 1))
    for start in range(0, A**n, block):
        flat = np.arange(start, min(A**n, start + block))
        o = np.stack(np.unravel_index(flat, (A,) * n), axis=1) - reach
        lat = np.concatenate([np.zeros((len(o), 1), dtype=np.int64), o], axis=1)
        dk = np.abs(lat[:, :, None] - lat[:, None, :])
        r = (dk / (m + 0.5)) * potential.R
        table[start : start + len(flat)] = ursell_from_bonds(bonds_from_distances(r, potential, beta))
    return table.reshape((A,) * n)


def _contract(table: np.ndarray, g: np.ndarray) -> float:
    out = table
    while out.ndim > 0:
        out = np.tensordot(out, g, axes=([out.ndim - 1], [0]))
    return float(out)


def _grid_volume_avg(n, omega, potential, box, beta, sampler) -> MayerEstimate:
    _check_grid(box, n)
    m = sampler.grid_points
    h = grid_spacing(potential.R, m)
    nodes = midpoint_nodes(box, h)
    K = len(nodes)
    f = _node_weights(omega, potential, box, beta, nodes)
    if n == 0:
        return MayerEstimate(0, None, math.fsum(f) / K, 0.0, K, "grid")
    table = lattice_ursell_table(n, m, potential, beta)
    reach = _lattice_reach(n, m)
    padded = np.concatenate([np.zeros(reach), f, np.zeros(reach)])
    ones = np.ones(2 * reach + 1)
    bulk_value = _contract(table, ones)
    per_node = np.empty(K)
    for k in range(K):
        g = padded[k : k + 2 * reach + 1]
        per_node[k] = bulk_value if np.array_equal(g, ones) else _contract(table, g)
    c = per_node * h**n / math.factorial(n + 1)
    value = math.fsum(f * c) / K
    return MayerEstimate(n, None, value, 0.0, K, "grid")


# -- series in the activity ------------------------------------------------------------------


@dataclass(frozen=True)
class PiSeries:
    estimates: tuple

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([e.value for e in self.estimates])

    @property
    def errors(self) -> np.ndarray:
        return np.array([e.std_error for e in self.estimates])

    def __call__(self, lam):
        return sum(c * lam**k for k, c in enumerate(self.coefficients))


def pi_series(x0, N: int, omega, potential, box, beta, sampler: Sampler = Sampler()) -> PiSeries:
    """Truncated Pi_{x0}(lambda) = sum_{n <= N} c_n(x0) lambda^n."""
    return PiSeries(tuple(estimate_c_n(x0, n, omega, potential, box, beta, sampler) for n in range(N + 1)))


def pressure_free_partial(lam: float, N: int, potential, box, beta, sampler: Sampler = Sampler()):
    """lambda * sum_{n <= N} cbar_n lambda^n with free boundary; returns (value, error)."""
    terms, variances = [], []
    for n in range(N + 1):
        est = estimate_c_n_volume_avg(n, None, potential, box, beta, sampler)
        terms.append(est.value * lam ** (n + 1))
        variances.append((est.std_error * abs(lam) ** (n + 1)) ** 2)
    return math.fsum(terms), math.sqrt(math.fsum(variances))


@dataclass(frozen=True)
class PQSplit:
    n_cut: int
    P: tuple
    Q: tuple
    q_bound: float
    anchor_in_bulk: bool

    def p_value(self, lam):
        return sum(e.value * lam**e.order for e in self.P)

    def q_value(self, lam):
        return sum(e.value * lam**e.order for e in self.Q)


def split_P_Q(
    x0, n_cut: int, N_tail: int, omega, potential, box, beta, shell: ShellSpec, sampler: Sampler = Sampler()
) -> PQSplit:
    """P = free coefficients up to n_cut, Q = omega coefficients n_cut+1..N_tail.

    ``q_bound`` bounds |Q| over the whole tail on the relevant activity disc.
    """
    x0 = np.asarray(x0, dtype=float).reshape(box.d)
    inside = bool(dist_to_boundary(box, x0) > shell.h(box.L))
    P = tuple(estimate_c_n(x0, n, None, potential, box, beta, sampler) for n in range(n_cut + 1))
    Q = tuple(
        estimate_c_n(x0, n, omega, potential, box, beta, sampler) for n in range(n_cut + 1, N_tail + 1)
    )
    return PQSplit(n_cut, P, Q, q_bound(potential, beta, n_cut), inside)


@dataclass(frozen=True)
class IdentityReport:
    passed: bool
    order: int
    x0: tuple
    value_omega: float
    value_free: float
    err_omega: float
    err_free: float


def check_inside_identity(
    x0, n: int, omega, potential, box, beta, shell: ShellSpec, sampler: Sampler = Sampler()
) -> IdentityReport:
    """Shared-seed estimates of c_n with omega and with free boundary must coincide bitwise."""
    x0 = np.asarray(x0, dtype=float).reshape(box.d)
    if not dist_to_boundary(box, x0) > shell.h(box.L):
        raise ValueError("anchor must lie in the bulk region")
    if n > _n_cut(shell, box.L, potential.R):
        raise ValueError("order exceeds n_cut")
    a = estimate_c_n(x0, n, omega, potential, box, beta, sampler)
    b = estimate_c_n(x0, n, None, potential, box, beta, sampler)
    same = a.value == b.value and a.std_error == b.std_error
    return IdentityReport(same, n, a.x0, a.value, b.value, a.std_error, b.std_error)


# -- bounds ------------------------------------------------------------------------------------


def _log_tree_factor(n: int) -> float:
    # log((n+1)^{n-1} / (n+1)!)
    return (n - 1) * math.log(n + 1) - math.lgamma(n + 2)


def cogen_bound(n: int, rho_omega: float, potential: PairPotential, beta: float) -> float:
    """e^{beta kappa rho n} (n+1)^{n-1}/(n+1)! e^{beta C (n+1)} C_v^n."""
    if n < 0:
        raise ValueError("order must be >= 0")
    cv = c_v_integral(potential, beta)
    if n > 0 and cv == 0.0:
        return 0.0
    log_b = beta * kappa(potential) * rho_omega * n + _log_tree_factor(n) + beta * potential.C_decl * (n + 1)
    if n > 0:
        log_b += n * math.log(cv)
    return math.exp(log_b)


def c0n_bound(n: int, potential: PairPotential, beta: float) -> float:
    return cogen_bound(n, 0.0, potential, beta)


def q_bound(potential: PairPotential, beta: float, n_cut: int) -> float:
    """Bound e^{beta C + 1} / n_cut^{3/2} on the tail beyond n_cut."""
    if n_cut < 1:
        raise ValueError("n_cut must be >= 1")
    return math.exp(beta * potential.C_decl + 1) / n_cut**1.5


@dataclass(frozen=True)
class ThetaValue:
    value: float
    tail_bound: float
    diverges: bool


def _power_tail(u: float, start: int) -> float:
    """Upper bound on sum_{n >= start} u^n / (n+1)^{5/2} for 0 <= u <= 1."""
    integral = (2.0 / 3.0) * start**-1.5
    if u < 1:
        geometric = u**start / ((start + 1) ** 2.5 * (1 - u))
        return min(integral, geometric)
    return integral


@dataclass(frozen=True)
class MajorantSeries:
    """Theta(beta, r) = e^{beta C} sum_n (n+1)^{n-1}/(n+1)! (e^{beta C} r C_v)^n."""

    beta: float
    C_decl: float
    C_v: float
    terms: int = 10_000

    @classmethod
    def for_potential(cls, potential: PairPotential, beta: float, terms: int = 10_000):
        return cls(beta, potential.C_decl, c_v_integral(potential, beta), terms)

    @property
    def r_star(self) -> float:
        return 1.0 / (math.exp(self.beta * self.C_decl + 1) * self.C_v)

    def u(self, r: float) -> float:
        u = math.exp(self.beta * self.C_decl + 1) * r * self.C_v
        return 1.0 if abs(u - 1.0) <= 1e-12 else u

    def theta(self, r: float) -> ThetaValue:
        if r < 0:
            raise ValueError("r must be >= 0")
        u = self.u(r)
        pref = math.exp(self.beta * self.C_decl)
        if u > 1:
            return ThetaValue(math.inf, math.inf, True)
        if u == 0:
            return ThetaValue(pref, 0.0, False)
        n = np.arange(self.terms, dtype=float)
        t = u / math.e
        from scipy.special import gammaln

        log_terms = (n - 1) * np.log(n + 1) - gammaln(n + 2) + n * math.log(t)
        value = pref * math.fsum(np.exp(log_terms))
        tail = pref * math.e / math.sqrt(2 * math.pi) * _power_tail(u, self.terms)
        return ThetaValue(value, tail, False)

    def _power_sum(self, u: float) -> tuple:
        """(lower, upper) bounds on sum_{n >= 1} u^n / (n+1)^{5/2}."""
        n = np.arange(1, self.terms, dtype=float)
        partial = math.fsum(np.exp(n * math.log(u) - 2.5 * np.log(n + 1))) if u > 0 else 0.0
        return partial, partial + (_power_tail(u, self.terms) if u > 0 else 0.0)

    def brackets(self, r: float) -> tuple:
        """Lower and upper Stirling brackets on Theta(beta, r), valid for u <= 1.

        The lower one applies n! <= e sqrt(n) n^n e^{-n} term by term,
        giving e^{beta C}[1 + sum]; the upper one is e^{beta C + 1}[1 + sum / sqrt(2 pi)].
        """
        u = self.u(r)
        if u > 1:
            return math.inf, math.inf
        low, high = self._power_sum(u)
        lower = math.exp(self.beta * self.C_decl) * (1 + low)
        upper = math.exp(self.beta * self.C_decl + 1) * (1 + high / math.sqrt(2 * math.pi))
        return lower, upper

    def printed_lower_bracket(self, r: float) -> float:
        """e^{beta C + 1}[1 + sum / e], the lower expression as usually written."""
        u = self.u(r)
        low, _ = self._power_sum(min(u, 1.0))
        return math.exp(self.beta * self.C_decl + 1) * (1 + low / math.e)


def majorant_theta(beta: float, potential: PairPotential, r: float) -> ThetaValue:
    return MajorantSeries.for_potential(potential, beta).theta(r)


def g_lambda(box: Box, shell: ShellSpec, R: float) -> float:
    """(8/7)[|bulk| / (|Lambda| n_cut^{3/2}) + |shell| / |Lambda|]."""
    reg = regions(box, shell)
    nc = _n_cut(shell, box.L, R)
    return (8.0 / 7.0) * (reg.volume_bulk / (reg.volume_box * nc**1.5) + reg.volume_shell / reg.volume_box)


@dataclass(frozen=True)
class PressureDecomposition:
    n_cut: int
    eta_coefficients: tuple
    eta_errors: tuple
    g_lambda: float
    radius_free: float
    radius_boundary: float
    C_decl: float
    beta: float
    kappa_rho: float
    bulk_fraction: float
    samples: int = 0
    extra: dict = field(default_factory=dict, compare=False)

    def eta(self, lam):
        return sum(c * lam**k for k, c in enumerate(self.eta_coefficients))

    def eta_error(self, lam) -> float:
        return math.sqrt(math.fsum((e * abs(lam) ** k) ** 2 for k, e in enumerate(self.eta_errors)))

    def eta_bound(self, lam) -> float:
        return (8.0 / 7.0) * math.exp(self.beta * self.C_decl + 1) * abs(lam)

    def xi_bound(self, lam) -> float:
        return abs(lam) * math.exp(self.beta * self.kappa_rho) * math.exp(self.beta * self.C_decl + 1) * self.g_lambda

    def in_free_disc(self, lam) -> bool:
        return abs(lam) <= self.radius_free * (1 + 1e-12)

    def in_boundary_disc(self, lam) -> bool:
        return abs(lam) <= self.radius_boundary * (1 + 1e-12)


def decompose_pressure(
    omega: Optional[bnd.BoundaryConfig],
    potential: PairPotential,
    box: Box,
    beta: float,
    shell: ShellSpec = ShellSpec(),
    sampler: Sampler = Sampler(),
) -> PressureDecomposition:
    """eta as a polynomial in lambda (Monte Carlo over the bulk), xi through its bound.

    The coefficient of lambda^{k+1} in eta is (|bulk|/|Lambda|) times the bulk
    average of the free coefficient c_k(x), k = 0..n_cut.
    """
    nc = _n_cut(shell, box.L, potential.R)
    reg = regions(box, shell)
    frac = reg.volume_bulk / reg.volume_box
    inner = Box(box.d, reg.inner_half_side)
    coeffs, errs = [0.0, frac], [0.0, 0.0]
    scale_cache = {}
    for k in range(1, nc + 1):
        scale_cache[k] = 1.0 / math.factorial(k + 1)

        def body(rng, size, k=k):
            x0 = rng.uniform(-inner.L, inner.L, size=(size, box.d))
            xs, vol = _anchor_domain(rng, x0, k, potential.R, box)
            return _ursell_batch(x0, xs, potential, beta) * (vol**k * scale_cache[k])

        if sampler.method == "grid":
            raise CapabilityError("the bulk average of eta is Monte Carlo only")
        mom = _run_chunks(sampler, TAG_BULK, k, k + 1, body)
        coeffs.append(frac * mom.mean)
        errs.append(frac * mom.std_error)
    rho = 0.0 if omega is None else omega.rho_omega
    return PressureDecomposition(
        n_cut=nc,
        eta_coefficients=tuple(coeffs),
        eta_errors=tuple(errs),
        g_lambda=g_lambda(box, shell, potential.R),
        radius_free=radius_free(potential, beta),
        radius_boundary=radius_boundary(potential, beta, rho),
        C_decl=potential.C_decl,
        beta=beta,
        kappa_rho=kappa(potential) * rho,
        bulk_fraction=frac,
        samples=sampler.samples,
    )


__all__: Sequence[str] = [
    "MajorantSeries",
    "MayerEstimate",
    "PressureDecomposition",
    "Sampler",
    "c0n_bound",
    "check_inside_identity",
    "cogen_bound",
    "decompose_pressure",
    "estimate_c_n",
    "estimate_c_n_volume_avg",
    "g_lambda",
    "majorant_theta",
    "pi_series",
    "pressure_free_partial",
    "q_bound",
    "split_P_Q",
]
