"""Run configuration: a TOML file with one table per concern.

Unknown tables or keys are rejected.  ``RunConfig.to_dict`` is the exact
inverse of ``RunConfig.from_dict`` so a config survives a write/read cycle.
"""
from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

import tomli_w

from . import boundary as bnd
from .geometry import Box, ShellSpec, make_grid
from .mayer import Sampler
from .potential import PRESETS, PairPotential, square_well


class ConfigError(ValueError):
    pass


@dataclass
class PotentialSpec:
    preset: str = "square_well"
    d: int = 1
    R: float = 1.0
    a: float = 0.5
    epsilon: float = 1.0
    C_decl: Optional[float] = None
    pieces: list = field(default_factory=list)


@dataclass
class BoxSpec:
    L: float = 25.0
    shell_exponent: float = 0.5
    delta: Optional[float] = None
    sweep_L: list = field(default_factory=lambda: [25.0, 100.0, 400.0, 1600.0])


@dataclass
class BoundarySpec:
    kind: str = "free"
    spacing: Optional[float] = None
    intensity: Optional[float] = None
    seed: int = 0
    points: list = field(default_factory=list)
    points_csv: Optional[str] = None


@dataclass
class ThermoSpec:
    beta: float = 1.0
    lambdas: list = field(default_factory=lambda: [0.0, 0.05, 0.1])


@dataclass
class EstimatorSpec:
    method: str = "mc"
    samples: int = 100_000
    seed: int = 0
    chunk: int = 1 << 15
    grid_points: int = 50
    workers: int = 1
    order: int = 2
    x0: list = field(default_factory=list)


@dataclass
class OutputSpec:
    path: Optional[str] = None
    format: str = "csv"


SECTIONS = {
    "potential": PotentialSpec,
    "box": BoxSpec,
    "boundary": BoundarySpec,
    "thermo": ThermoSpec,
    "estimator": EstimatorSpec,
    "output": OutputSpec,
}


def _strip_none(d: dict) -> dict:
    return {k: v for k, v in d.items() if v is not None}


@dataclass
class RunConfig:
    potential: PotentialSpec = field(default_factory=PotentialSpec)
    box: BoxSpec = field(default_factory=BoxSpec)
    boundary: BoundarySpec = field(default_factory=BoundarySpec)
    thermo: ThermoSpec = field(default_factory=ThermoSpec)
    estimator: EstimatorSpec = field(default_factory=EstimatorSpec)
    output: OutputSpec = field(default_factory=OutputSpec)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        unknown = set(data) - set(SECTIONS)
        if unknown:
            raise ConfigError(f"unknown table(s): {sorted(unknown)}")
        parts = {}
        for name, spec_cls in SECTIONS.items():
            table = data.get(name, {})
            if not isinstance(table, dict):
                raise ConfigError(f"[{name}] must be a table")
            allowed = {f.name for f in fields(spec_cls)}
            bad = set(table) - allowed
            if bad:
                raise ConfigError(f"unknown key(s) in [{name}]: {sorted(bad)}")
            try:
                parts[name] = spec_cls(**table)
            except TypeError as exc:
                raise ConfigError(f"[{name}]: {exc}") from exc
        return cls(**parts)

    def to_dict(self) -> dict:
        return {name: _strip_none(asdict(getattr(self, name))) for name in SECTIONS}

    def dumps(self) -> str:
        return tomli_w.dumps(self.to_dict())

    def hash(self) -> str:
        """Short digest of the canonical JSON form, independent of key order."""
        canon = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()[:16]


def load(path) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return RunConfig.from_dict(data)


def loads(text: str) -> RunConfig:
    try:
        return RunConfig.from_dict(tomllib.loads(text))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class System:
    """Validated model objects built from a config."""

    potential: PairPotential
    box: Box
    shell: ShellSpec
    omega: bnd.BoundaryConfig
    beta: float
    sampler: Sampler


def build_potential(spec: PotentialSpec) -> PairPotential:
    if spec.preset == "custom":
        if spec.C_decl is None:
            raise ConfigError("a custom potential needs C_decl")
        return PairPotential(d=spec.d, R=spec.R, C_decl=spec.C_decl, a=spec.a, pieces=tuple(map(tuple, spec.pieces)))
    if spec.pieces:
        raise ConfigError("pieces are only used with preset = 'custom'")
    if spec.preset == "square_well":
        return square_well(a=spec.a, epsilon=spec.epsilon, R=spec.R, d=spec.d, C_decl=spec.C_decl)
    if spec.preset == "hard_rod":
        return PRESETS["hard_rod"](spec.a)
    if spec.preset == "hard_sphere":
        return PRESETS["hard_sphere"](spec.a, spec.d)
    if spec.preset == "zero":
        return PRESETS["zero"](spec.R, spec.d)
    raise ConfigError(f"unknown preset {spec.preset!r}")


def build(cfg: RunConfig, base_dir: Optional[Path] = None) -> System:
    """Validate every precondition up front and return the model objects."""
    try:
        pot = build_potential(cfg.potential)
        box = Box(pot.d, float(cfg.box.L))
        shell = ShellSpec(cfg.box.shell_exponent)
        grid = make_grid(box, pot.R, cfg.box.delta)
        b = cfg.boundary
        spec = {"kind": b.kind, "seed": b.seed}
        if b.kind == "grid":
            if b.spacing is None:
                raise ConfigError("[boundary] kind = 'grid' needs spacing")
            spec["spacing"] = b.spacing
        elif b.kind == "poisson":
            if b.intensity is None:
                raise ConfigError("[boundary] kind = 'poisson' needs intensity")
            spec["intensity"] = b.intensity
        elif b.kind == "explicit":
            points = b.points
            if b.points_csv:
                path = Path(b.points_csv)
                if base_dir is not None and not path.is_absolute():
                    path = base_dir / path
                points = bnd.load_points_csv(path, pot.d).tolist()
            spec["points"] = points
        elif b.kind not in ("free", "none"):
            raise ConfigError(f"unknown boundary kind {b.kind!r}")
        omega = bnd.generate(spec, box, grid, pot)
        if not cfg.thermo.beta > 0:
            raise ConfigError("beta must be > 0")
        e = cfg.estimator
        sampler = Sampler(e.method, e.samples, e.seed, e.chunk, e.grid_points, e.workers)
        if e.x0 and len(e.x0) != pot.d:
            raise ConfigError(f"x0 needs {pot.d} coordinates")
        if e.x0 and not box.contains(e.x0):
            raise ConfigError("x0 lies outside the box")
        if cfg.output.format not in ("csv", "json"):
            raise ConfigError("output format must be csv or json")
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    return System(pot, box, shell, omega, float(cfg.thermo.beta), sampler)
