"""Ursell functions, connected-graph and labeled-tree enumeration, tree bound.

Two routes to the truncated function Phi^T of m points:

* the literal sum over connected labeled graphs of products of f-bonds
  (exhaustive over edge bitmasks, m <= 7);
* a subset recursion: with W(S) = prod_{i<j in S} (1 + f_ij),
  Phi(S) = W(S) - sum_{T < S, min S in T} Phi(T) W(S \\ T),
  which costs O(3^m) and is vectorised over batches of configurations.

Edges of the complete graph on m vertices are ordered lexicographically,
(0,1), (0,2), ..., (m-2,m-1); bit k of an edge mask is the k-th pair.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterator

import numpy as np

from .potential import PairPotential, evaluate

GRAPH_CAP = 7
RECURSION_CAP = 20
TREE_CAP = 9


class CapabilityError(ValueError):
    """Requested size exceeds what an exhaustive route can handle."""


@dataclass(frozen=True)
class LabeledGraph:
    n_vertices: int
    mask: int

    @property
    def edges(self) -> list:
        pairs = edge_pairs(self.n_vertices)
        return [pairs[k] for k in range(len(pairs)) if self.mask >> k & 1]

    def is_connected(self) -> bool:
        return _connected(self.n_vertices, self.mask)


@lru_cache(maxsize=None)
def edge_pairs(m: int) -> tuple:
    return tuple(combinations(range(m), 2))


def _connected(m: int, mask: int) -> bool:
    if m <= 1:
        return True
    adj = [0] * m
    for k, (i, j) in enumerate(edge_pairs(m)):
        if mask >> k & 1:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    seen, frontier = 1, 1
    while frontier:
        nxt = 0
        v = frontier
        while v:
            low = v & -v
            nxt |= adj[low.bit_length() - 1]
            v ^= low
        frontier = nxt & ~seen
        seen |= nxt
    return seen == (1 << m) - 1


@lru_cache(maxsize=None)
def connected_graph_masks(m: int) -> np.ndarray:
    """Edge masks of all connected labeled graphs on m vertices, ascending."""
    if m < 1:
        raise ValueError("need at least one vertex")
    if m > GRAPH_CAP:
        raise CapabilityError(
            f"graph enumeration capped at {GRAPH_CAP} vertices; use the subset recursion"
        )
    if m == 1:
        return np.array([0], dtype=np.int64)
    pairs = edge_pairs(m)
    masks = np.arange(1 << len(pairs), dtype=np.int64)
    # reachability from vertex 0, propagated along present edges to a fixed point
    reach = np.ones_like(masks)
    for _ in range(m - 1):
        new = reach.copy()
        for k, (i, j) in enumerate(pairs):
            present = (masks >> k) & 1
            new |= present * (((reach >> i) & 1) << j)
            new |= present * (((reach >> j) & 1) << i)
        if np.array_equal(new, reach):
            break
        reach = new
    out = masks[reach == (1 << m) - 1]
    out.setflags(write=False)
    return out


def enumerate_connected_graphs(m: int) -> Iterator[LabeledGraph]:
    for mask in connected_graph_masks(m):
        yield LabeledGraph(m, int(mask))


@lru_cache(maxsize=None)
def _graph_bits(m: int) -> np.ndarray:
    masks = connected_graph_masks(m)
    E = len(edge_pairs(m))
    return ((masks[:, None] >> np.arange(E)) & 1).astype(bool)


# -- labeled trees ---------------------------------------------------------------


def prufer_decode(seq, m: int) -> list:
    """Edges of the labeled tree on m vertices with Prufer sequence ``seq``."""
    edges = prufer_decode_batch(np.asarray([seq], dtype=np.int64).reshape(1, m - 2), m)[0]
    return [tuple(int(v) for v in e) for e in edges]


def prufer_decode_batch(seqs: np.ndarray, m: int) -> np.ndarray:
    """Decode many Prufer sequences at once; returns (T, m-1, 2) edge arrays."""
    seqs = np.asarray(seqs, dtype=np.int64)
    T = seqs.shape[0]
    rows = np.arange(T)
    degree = np.ones((T, m), dtype=np.int64)
    for k in range(m - 2):
        np.add.at(degree, (rows, seqs[:, k]), 1)
    edges = np.empty((T, m - 1, 2), dtype=np.int64)
    for k in range(m - 2):
        leaf = np.argmax(degree == 1, axis=1)
        edges[:, k, 0] = np.minimum(leaf, seqs[:, k])
        edges[:, k, 1] = np.maximum(leaf, seqs[:, k])
        degree[rows, leaf] -= 1
        degree[rows, seqs[:, k]] -= 1
    last = np.argsort(degree != 1, axis=1, kind="stable")[:, :2]
    edges[:, m - 2, 0] = np.min(last, axis=1)
    edges[:, m - 2, 1] = np.max(last, axis=1)
    return edges


@lru_cache(maxsize=None)
def tree_edge_index(m: int) -> np.ndarray:
    """Every labeled tree on m vertices as a row of m-1 pair indices."""
    if m < 2:
        raise ValueError("trees need at least two vertices")
    if m > TREE_CAP:
        raise CapabilityError(f"tree enumeration capped at {TREE_CAP} vertices")
    count = m ** (m - 2)
    lut = np.full((m, m), -1, dtype=np.int8)
    for k, (i, j) in enumerate(edge_pairs(m)):
        lut[i, j] = k
    if m == 2:
        return np.zeros((1, 1), dtype=np.int8)
    out = np.empty((count, m - 1), dtype=np.int8)
    block = 1 << 18
    for start in range(0, count, block):
        ids = np.arange(start, min(count, start + block))
        seqs = np.stack(np.unravel_index(ids, (m,) * (m - 2)), axis=1)
        edges = prufer_decode_batch(seqs, m)
        out[start : start + len(ids)] = lut[edges[..., 0], edges[..., 1]]
    out.setflags(write=False)
    return out


def enumerate_trees(m: int) -> Iterator[tuple]:
    pairs = edge_pairs(m)
    for row in tree_edge_index(m):
        yield tuple(pairs[k] for k in row)


# -- bonds ---------------------------------------------------------------------


def _distances(points: np.ndarray) -> np.ndarray:
    diff = points[..., :, None, :] - points[..., None, :, :]
    return np.sqrt(np.sum(diff**2, axis=-1))


def f_bond(potential: PairPotential, beta: float, xi, xj) -> float:
    """exp(-beta v(xi - xj)) - 1: exactly -1 on overlap, 0 out of range."""
    r = float(np.linalg.norm(np.asarray(xi, dtype=float) - np.asarray(xj, dtype=float)))
    return math.expm1(-beta * evaluate(potential, r))


def bond_matrices(points, potential: PairPotential, beta: float) -> np.ndarray:
    """f-bond matrices for a batch of configurations of shape (N, m, d)."""
    pts = np.asarray(points, dtype=float)
    v = evaluate(potential, _distances(pts))
    F = np.expm1(-beta * v)
    m = pts.shape[-2]
    F[..., np.arange(m), np.arange(m)] = 0.0
    return F


def bonds_from_distances(r: np.ndarray, potential: PairPotential, beta: float) -> np.ndarray:
    F = np.expm1(-beta * evaluate(potential, r))
    m = r.shape[-1]
    F[..., np.arange(m), np.arange(m)] = 0.0
    return F


# -- subset recursion -------------------------------------------------------------


@lru_cache(maxsize=None)
def _recursion_plan(m: int):
    full = (1 << m) - 1
    tops, rests, members = [], [], []
    for S in range(1, full + 1):
        top = S.bit_length() - 1
        rest = S ^ (1 << top)
        tops.append(top)
        rests.append(rest)
        members.append(np.array([i for i in range(m) if rest >> i & 1], dtype=np.int64))
    splits = {}
    for S in range(1, full + 1, 2):  # subsets containing vertex 0
        others = S ^ 1
        Ts = []
        sub = others
        while True:
            T = sub | 1
            if T != S:
                Ts.append(T)
            if sub == 0:
                break
            sub = (sub - 1) & others
        Ts = np.array(sorted(Ts), dtype=np.int64)
        splits[S] = (Ts, S ^ Ts)
    return tops, rests, members, splits


def ursell_from_bonds(F: np.ndarray) -> np.ndarray:
    """Phi^T of every configuration in a batch of f-bond matrices (N, m, m)."""
    F = np.asarray(F, dtype=float)
    single = F.ndim == 2
    if single:
        F = F[None]
    N, m, _ = F.shape
    if m > RECURSION_CAP:
        raise CapabilityError(f"subset recursion capped at {RECURSION_CAP} points")
    if m == 1:
        out = np.ones(N)
        return out[0] if single else out
    E = F + 1.0
    tops, rests, members, splits = _recursion_plan(m)
    W = np.empty((1 << m, N))
    W[0] = 1.0
    for S in range(1, 1 << m):
        rest = rests[S - 1]
        idx = members[S - 1]
        if len(idx) == 0:
            W[S] = 1.0
        else:
            W[S] = W[rest] * np.prod(E[:, tops[S - 1], idx], axis=1)
    Phi = np.zeros((1 << m, N))
    Phi[1] = 1.0
    for S in range(3, 1 << m, 2):
        Ts, comps = splits[S]
        Phi[S] = W[S] - np.einsum("kn,kn->n", Phi[Ts], W[comps])
    out = Phi[(1 << m) - 1]
    # a disconnected bond graph gives exactly zero; the recursion would leave rounding residue
    out = np.where(_bond_graph_connected(F), out, 0.0)
    return out[0] if single else out


def _bond_graph_connected(F: np.ndarray) -> np.ndarray:
    """Whether the graph of nonzero bonds spans all m points, batch (N, m, m) -> (N,)."""
    N, m, _ = F.shape
    adj = (F != 0.0).astype(np.float64)
    reach = np.zeros((N, m))
    reach[:, 0] = 1.0
    for _ in range(m - 1):
        reach = np.minimum(reach + np.einsum("nij,nj->ni", adj, reach), 1.0)
    return np.all(reach > 0, axis=1)


def ursell_subset_recursion(config, potential: PairPotential, beta: float) -> float:
    pts = np.asarray(config, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    return float(ursell_from_bonds(bond_matrices(pts[None], potential, beta))[0])


# -- graph sum -----------------------------------------------------------------------


def graph_terms(F: np.ndarray) -> np.ndarray:
    """Per-graph products of f-bonds for one configuration."""
    m = F.shape[0]
    iu = np.triu_indices(m, k=1)
    f = F[iu]
    bits = _graph_bits(m)
    return np.where(bits, f[None, :], 1.0).prod(axis=1)


def ursell_graph_sum_from_bonds(F: np.ndarray) -> float:
    F = np.asarray(F, dtype=float)
    m = F.shape[0]
    if m == 1:
        return 1.0
    return math.fsum(graph_terms(F))


def ursell_graph_sum(config, potential: PairPotential, beta: float) -> float:
    """Sum over connected labeled graphs of products of f-bonds."""
    pts = np.asarray(config, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if len(pts) > GRAPH_CAP:
        raise CapabilityError(
            f"graph sum capped at {GRAPH_CAP} points; use ursell_subset_recursion"
        )
    return ursell_graph_sum_from_bonds(bond_matrices(pts[None], potential, beta)[0])


# -- tree-graph bound ------------------------------------------------------------------


def tree_weights(points, potential: PairPotential, beta: float) -> np.ndarray:
    """1 - exp(-beta |v|) on every pair, shape (N, E)."""
    pts = np.asarray(points, dtype=float)
    m = pts.shape[-2]
    iu = np.triu_indices(m, k=1)
    r = _distances(pts)[..., iu[0], iu[1]]
    v = evaluate(potential, r)
    return -np.expm1(-beta * np.abs(v))


def tree_sum(weights: np.ndarray, m: int) -> np.ndarray:
    """Sum over labeled trees of products of pair weights, batch (N, E) -> (N,)."""
    weights = np.atleast_2d(weights)
    if m == 1:
        return np.ones(len(weights))
    idx = tree_edge_index(m)
    out = np.empty(len(weights))
    for n, w in enumerate(weights):
        out[n] = math.fsum(np.prod(w[idx], axis=1))
    return out


def tree_bound_batch(points, potential: PairPotential, beta: float) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    m = pts.shape[-2]
    prefactor = math.exp(beta * potential.C_decl * m)
    if m == 1:
        return np.full(len(pts), prefactor)
    return prefactor * tree_sum(tree_weights(pts, potential, beta), m)


def tree_bound(config, potential: PairPotential, beta: float) -> float:
    """e^{beta C (n+1)} sum over trees of prod (1 - e^{-beta |v|}), bounding |Phi^T|."""
    pts = np.asarray(config, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    return float(tree_bound_batch(pts[None], potential, beta)[0])
