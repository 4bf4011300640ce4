"""Finite-range stable pair potentials and the constants derived from them.

A potential is radial: ``v(r)`` is ``+inf`` below the hard-core radius ``a``,
piecewise constant (or given by a smooth callable) on ``[a, R)`` and zero
from ``R`` on.  ``C_decl`` is a declared stability constant; any valid
constant (one for which ``sum_{i<j} v(x_i - x_j) >= -C n``) can stand in for
the optimal one in every bound computed here.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate

INF = math.inf


def ball_volume(d: int, R: float) -> float:
    """Volume of the d-dimensional Euclidean ball of radius R."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if R < 0:
        raise ValueError(f"radius must be >= 0, got {R}")
    return math.pi ** (d / 2) * R**d / math.gamma(d / 2 + 1)


@dataclass(frozen=True)
class PairPotential:
    d: int
    R: float
    C_decl: float
    a: float = 0.0
    pieces: tuple = ()
    profile: Optional[Callable] = field(default=None, compare=False)
    name: str = "custom"

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.d}")
        if not self.R > 0:
            raise ValueError(f"range R must be > 0, got {self.R}")
        if not 0 <= self.a <= self.R:
            raise ValueError(f"hard core a must lie in [0, R], got a={self.a}, R={self.R}")
        if self.C_decl < 0:
            raise ValueError(f"stability constant must be >= 0, got {self.C_decl}")
        if self.pieces and self.profile is not None:
            raise ValueError("give either piecewise-constant pieces or a profile, not both")
        pieces = tuple((float(lo), float(hi), float(val)) for lo, hi, val in self.pieces)
        object.__setattr__(self, "pieces", pieces)
        prev = self.a
        for lo, hi, val in pieces:
            if lo < prev or hi <= lo or hi > self.R:
                raise ValueError(f"pieces must be sorted, disjoint and inside [a, R]: {pieces}")
            if not math.isfinite(val):
                raise ValueError("piece values must be finite; use the hard core for +inf")
            if val < -2 * self.C_decl:
                # two particles alone already violate stability with this constant
                raise ValueError(
                    f"piece value {val} < -2*C_decl = {-2 * self.C_decl}: declared constant invalid"
                )
            prev = hi

    def __call__(self, r):
        return evaluate(self, r)

    @property
    def is_nonnegative(self) -> bool:
        if self.profile is not None:
            r = np.linspace(self.a, self.R, 2001)[:-1]
            return bool(np.all(np.asarray(self.profile(r)) >= 0))
        return all(val >= 0 for _, _, val in self.pieces)

    def to_dict(self) -> dict:
        if self.profile is not None:
            raise ValueError("potentials with a callable profile are not serializable")
        return {
            "name": self.name,
            "d": self.d,
            "R": self.R,
            "a": self.a,
            "C_decl": self.C_decl,
            "pieces": [list(p) for p in self.pieces],
        }


@dataclass(frozen=True)
class ThermoParams:
    beta: float
    lam: complex = 0.0

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")


# -- presets -----------------------------------------------------------------


def hard_sphere(a: float = 1.0, d: int = 1) -> PairPotential:
    return PairPotential(d=d, R=a, C_decl=0.0, a=a, name="hard_rod" if d == 1 else "hard_sphere")


def hard_rod(a: float = 1.0) -> PairPotential:
    return hard_sphere(a, d=1)


def square_well_constant(a: float, epsilon: float, R: float, d: int) -> float:
    """A valid stability constant for a hard-core square well.

    In one dimension each particle has at most ceil(R/a) - 1 right neighbours
    in the well; in higher dimension a packing count of the R-ball is used.
    """
    if a <= 0:
        raise ValueError("square well needs a hard core a > 0 for a finite constant")
    if d == 1:
        return epsilon * (math.ceil(R / a - 1e-12) - 1)
    neighbours = (2 * R / a + 1) ** d - 1
    return epsilon * neighbours / 2


def square_well(
    a: float = 0.5, epsilon: float = 1.0, R: float = 1.0, d: int = 1, C_decl: Optional[float] = None
) -> PairPotential:
    """Hard core below ``a``, well of depth ``epsilon`` on ``[a, R)``."""
    if C_decl is None:
        C_decl = square_well_constant(a, epsilon, R, d)
    return PairPotential(
        d=d, R=R, C_decl=C_decl, a=a, pieces=((a, R, -epsilon),), name="square_well"
    )


def zero_potential(R: float = 1.0, d: int = 1) -> PairPotential:
    return PairPotential(d=d, R=R, C_decl=0.0, name="zero")


PRESETS = {
    "hard_rod": hard_rod,
    "hard_sphere": hard_sphere,
    "square_well": square_well,
    "zero": zero_potential,
}


# -- evaluation ----------------------------------------------------------------


def evaluate(p: PairPotential, r):
    """v(r); ``+inf`` inside the hard core and 0 from the range on."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise ValueError("separation must be >= 0")
    out = np.zeros_like(r_arr)
    if p.profile is not None:
        body = (r_arr >= p.a) & (r_arr < p.R)
        if np.any(body):
            out[body] = np.asarray(p.profile(r_arr[body]), dtype=float)
    else:
        for lo, hi, val in p.pieces:
            out[(r_arr >= lo) & (r_arr < hi)] = val
    out[r_arr < p.a] = INF
    if out.ndim == 0:
        return float(out)
    return out


def negative_part(p: PairPotential, r):
    v = np.asarray(evaluate(p, r), dtype=float)
    out = np.where(np.isinf(v), 0.0, np.maximum(0.0, -v))
    if out.ndim == 0:
        return float(out)
    return out


def kappa(p: PairPotential) -> float:
    return 4.0 * p.C_decl * ball_volume(p.d, p.R)


def _shell_volume(d: int, lo: float, hi: float) -> float:
    return ball_volume(d, hi) - ball_volume(d, lo)


def c_v_integral(p: PairPotential, beta: float, rtol: float = 1e-8) -> float:
    """C_v(beta) = int (1 - exp(-beta |v(x)|)) dx over R^d.

    Exact (a finite sum over shells) for piecewise-constant profiles; adaptive
    quadrature for a smooth profile.
    """
    if not beta > 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    total = ball_volume(p.d, p.a) if p.a > 0 else 0.0
    if p.profile is None:
        for lo, hi, val in p.pieces:
            total += _shell_volume(p.d, lo, hi) * -math.expm1(-beta * abs(val))
        return total
    surface = p.d * ball_volume(p.d, 1.0)

    def integrand(r):
        v = float(np.asarray(p.profile(np.array([r])))[0])
        return -math.expm1(-beta * abs(v)) * surface * r ** (p.d - 1)

    value, err = integrate.quad(integrand, p.a, p.R, epsrel=rtol, limit=200)
    if not math.isfinite(value):
        raise ValueError("profile integral diverges; only a hard core may be infinite")
    return total + value


def radius_free(p: PairPotential, beta: float) -> float:
    """Activity radius 1 / (e^{beta C + 1} C_v(beta)) of the free-boundary expansion."""
    return 1.0 / (math.exp(beta * p.C_decl + 1.0) * c_v_integral(p, beta))


def radius_boundary(p: PairPotential, beta: float, rho_omega: float) -> float:
    if rho_omega < 0:
        raise ValueError("rho_omega must be >= 0")
    return radius_free(p, beta) * math.exp(-beta * kappa(p) * rho_omega)


def pair_energy(p: PairPotential, points: np.ndarray) -> np.ndarray:
    """Total pair energy of each configuration in a batch of shape (N, n, d)."""
    pts = np.asarray(points, dtype=float)
    diff = pts[:, :, None, :] - pts[:, None, :, :]
    r = np.sqrt(np.sum(diff**2, axis=-1))
    iu = np.triu_indices(pts.shape[1], k=1)
    v = evaluate(p, r[:, iu[0], iu[1]])
    return np.sum(np.atleast_2d(v), axis=1)


def stability_lower_bound(
    p: PairPotential, n: int, trials: int = 10_000, seed: int = 0, chunk: int = 4096
) -> float:
    """Best value of -(1/n) sum_{i<j} v(x_i - x_j) over random configurations.

    Any configuration's value is a lower bound on the optimal stability
    constant; configurations with hard-core overlap are skipped.  Starts from
    0, which a widely separated configuration always attains.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(7, n)))
    scales = p.R * n ** (1.0 / p.d) * np.array([0.25, 0.5, 1.0, 2.0])
    best = 0.0
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        side = scales[(np.arange(done, done + m)) % len(scales)]
        pts = rng.random((m, n, p.d)) * side[:, None, None]
        energy = pair_energy(p, pts)
        finite = np.isfinite(energy)
        if np.any(finite):
            best = max(best, float(np.max(-energy[finite] / n)))
        done += m
    if best > p.C_decl * (1 + 1e-12) + 1e-15:
        warnings.warn(
            f"found configuration with -(1/n)U = {best} > declared C_decl = {p.C_decl}",
            RuntimeWarning,
            stacklevel=2,
        )
    return best


def sample_profile_check(p: PairPotential, samples: int = 2001) -> bool:
    """Sampled invariants: zero beyond R, +inf below a, never below -2 C_decl."""
    r_out = np.linspace(p.R, 2 * p.R, samples)
    if np.any(evaluate(p, r_out) != 0):
        return False
    if p.a > 0:
        r_core = np.linspace(0, p.a, samples, endpoint=False)
        if not np.all(np.isinf(evaluate(p, r_core))):
            return False
    r_body = np.linspace(p.a, p.R, samples, endpoint=False)
    v = evaluate(p, r_body)
    return bool(np.all(v >= -2 * p.C_decl))


__all__: Sequence[str] = [
    "INF",
    "PairPotential",
    "ThermoParams",
    "ball_volume",
    "c_v_integral",
    "evaluate",
    "hard_rod",
    "hard_sphere",
    "kappa",
    "negative_part",
    "radius_boundary",
    "radius_free",
    "square_well",
    "stability_lower_bound",
    "zero_potential",
]
