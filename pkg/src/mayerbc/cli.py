"""``mayerbc`` command line: radius | cn | decompose | sweep | verify.

Exit codes: 0 ok, 1 verification failure, 2 config error, 3 capability exceeded.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from xml.etree import ElementTree as ET

import numpy as np

from . import checks, ursell
from .config import ConfigError, RunConfig, System, build, load
from .geometry import Box, BoxTooSmall, n_cut, regions
from .mayer import (
    Sampler,
    c0n_bound,
    cogen_bound,
    decompose_pressure,
    estimate_c_n,
    g_lambda,
)
from .potential import c_v_integral, kappa, radius_boundary, radius_free
from .ursell import CapabilityError

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_CAPABILITY = 0, 1, 2, 3


def _emit(rows: list, cfg: RunConfig, fmt: str, out) -> None:
    digest = cfg.hash()
    rows = [{"config_hash": digest, **row} for row in rows]
    if fmt == "json":
        doc = {"config_hash": digest, "config": cfg.to_dict(), "rows": rows}
        out.write(json.dumps(doc, indent=2, default=checks.format_value) + "\n")
    else:
        out.write(checks.rows_to_csv(rows))


def cmd_radius(cfg: RunConfig, system: System, args) -> list:
    pot, beta, rho = system.potential, system.beta, system.omega.rho_omega
    return [
        {
            "C_decl": pot.C_decl,
            "C_v": c_v_integral(pot, beta),
            "kappa": kappa(pot),
            "rho_omega": rho,
            "radius_free": radius_free(pot, beta),
            "radius_boundary": radius_boundary(pot, beta, rho),
        }
    ]


def cmd_cn(cfg: RunConfig, system: System, args) -> list:
    pot, box, beta = system.potential, system.box, system.beta
    order = cfg.estimator.order if args.n is None else args.n
    x0 = np.asarray(cfg.estimator.x0 or [0.0] * pot.d, dtype=float)
    if args.x0 is not None:
        x0 = np.array([float(c) for c in args.x0.split(",")])
        if len(x0) != pot.d or not box.contains(x0):
            raise ConfigError("--x0 must be a point of the box")
    if order + 1 > ursell.RECURSION_CAP:
        raise CapabilityError(f"order {order} exceeds the Ursell cap of {ursell.RECURSION_CAP} points")
    omega = None if system.omega.is_empty else system.omega
    rows = []
    for n in range(order + 1):
        est = estimate_c_n(x0, n, omega, pot, box, beta, system.sampler)
        bound = c0n_bound(n, pot, beta) if omega is None else cogen_bound(n, omega.rho_omega, pot, beta)
        rows.append(
            {
                "L": box.L,
                "n": n,
                "x0": tuple(x0),
                "value": est.value,
                "std_error": est.std_error,
                "samples": est.samples,
                "method": est.method,
                "bound": bound,
            }
        )
    if args.debug_graphs:
        _dump_graph_terms(Path(args.debug_graphs), order, x0, omega, system)
    return rows


def _dump_graph_terms(path: Path, order: int, x0, omega, system: System, configs: int = 8) -> None:
    """Per-graph f-bond products on a few sampled configurations (n + 1 <= 4 only)."""
    m = order + 1
    if m > 4:
        raise CapabilityError("per-graph dump is limited to n + 1 <= 4")
    pot, box = system.potential, system.box
    rng = np.random.default_rng(np.random.SeedSequence(system.sampler.seed, spawn_key=(9, order)))
    lo = np.maximum(x0 - order * pot.R, -box.L)
    hi = np.minimum(x0 + order * pot.R, box.L)
    rows = []
    masks = ursell.connected_graph_masks(m)
    pairs = ursell.edge_pairs(m)
    for k in range(configs):
        pts = np.vstack([x0, lo + rng.random((order, pot.d)) * (hi - lo)])
        F = ursell.bond_matrices(pts[None], pot, system.beta)[0]
        terms = ursell.graph_terms(F) if m > 1 else np.ones(1)
        for mask, term in zip(masks, terms):
            edges = ";".join(f"{i}-{j}" for b, (i, j) in enumerate(pairs) if int(mask) >> b & 1)
            rows.append({"sample": k, "graph_mask": int(mask), "edges": edges, "term": float(term)})
    path.write_text(checks.rows_to_csv(rows))


def _lambdas(cfg: RunConfig, args) -> list:
    if args.lambdas is not None:
        return [float(v) for v in args.lambdas.split(",")]
    return [float(v) for v in cfg.thermo.lambdas]


def cmd_decompose(cfg: RunConfig, system: System, args) -> list:
    pot, box, beta = system.potential, system.box, system.beta
    omega = None if system.omega.is_empty else system.omega
    dec = decompose_pressure(omega, pot, box, beta, system.shell, system.sampler)
    rows = []
    for lam in _lambdas(cfg, args):
        rows.append(
            {
                "L": box.L,
                "lambda": lam,
                "n_cut": dec.n_cut,
                "eta": dec.eta(lam),
                "eta_error": dec.eta_error(lam),
                "xi_bound": dec.xi_bound(lam),
                "g_lambda": dec.g_lambda,
                "radius_free": dec.radius_free,
                "radius_boundary": dec.radius_boundary,
                "in_boundary_disc": dec.in_boundary_disc(lam),
            }
        )
    return rows


def cmd_sweep(cfg: RunConfig, system: System, args) -> list:
    """Closed-form g and xi bound along L; eta as well when --with-eta is given."""
    pot, beta, rho = system.potential, system.beta, system.omega.rho_omega
    Ls = [float(v) for v in args.Ls.split(",")] if args.Ls else [float(v) for v in cfg.box.sweep_L]
    lams = _lambdas(cfg, args)
    rows = []
    for L in Ls:
        box = Box(pot.d, L)
        nc = n_cut(system.shell, L, pot.R)
        g = g_lambda(box, system.shell, pot.R)
        dec = None
        if args.with_eta:
            dec = decompose_pressure(None, pot, box, beta, system.shell, system.sampler)
        for lam in lams:
            xi = abs(lam) * math.exp(beta * kappa(pot) * rho) * math.exp(beta * pot.C_decl + 1) * g
            rows.append(
                {
                    "L": L,
                    "lambda": lam,
                    "n_cut": nc,
                    "bulk_fraction": regions(box, system.shell).volume_bulk / box.volume,
                    "g_lambda": g,
                    "xi_bound": xi,
                    "eta": dec.eta(lam) if dec else math.nan,
                    "eta_error": dec.eta_error(lam) if dec else math.nan,
                    "radius_free": radius_free(pot, beta),
                    "radius_boundary": radius_boundary(pot, beta, rho),
                }
            )
    return rows


def junit_xml(results: list, suite: str) -> str:
    root = ET.Element(
        "testsuite",
        name=f"mayerbc.{suite}",
        tests=str(len(results)),
        failures=str(sum(not r.passed for r in results)),
    )
    for r in results:
        case = ET.SubElement(root, "testcase", classname=f"mayerbc.{suite}", name=r.name, time=f"{r.seconds:.3f}")
        if not r.passed:
            ET.SubElement(case, "failure", message=r.detail)
    return ET.tostring(root, encoding="unicode") + "\n"


def cmd_verify(cfg: RunConfig, system: System, args) -> list:
    results = checks.run_suite(args.suite)
    for r in results:
        print(r.line(), file=sys.stderr)
    if args.junit:
        Path(args.junit).write_text(junit_xml(results, args.suite))
    args._failed = [r.name for r in results if not r.passed]
    return [{"check": r.name, "passed": r.passed, "detail": r.detail} for r in results]


COMMANDS = {
    "radius": cmd_radius,
    "cn": cmd_cn,
    "decompose": cmd_decompose,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML run configuration (defaults apply when omitted)")
    common.add_argument("--seed", type=int, help="master seed, overrides [estimator] seed")
    common.add_argument("--samples", type=int, help="Monte Carlo samples, overrides [estimator] samples")
    common.add_argument("--out", help="output file (default: stdout or [output] path)")
    common.add_argument("--format", choices=("csv", "json"), help="output format")

    parser = argparse.ArgumentParser(prog="mayerbc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("radius", parents=[common], help="convergence radii and constants")
    p_cn = sub.add_parser("cn", parents=[common], help="anchored coefficients c_0..c_n")
    p_cn.add_argument("--n", type=int, help="highest order")
    p_cn.add_argument("--x0", help="anchor, comma separated")
    p_cn.add_argument("--debug-graphs", metavar="PATH", help="write per-graph terms (n + 1 <= 4)")
    p_dec = sub.add_parser("decompose", parents=[common], help="eta and the xi bound per activity")
    p_dec.add_argument("--lambdas", help="comma separated activities")
    p_sw = sub.add_parser("sweep", parents=[common], help="g and the xi bound along a list of L")
    p_sw.add_argument("--Ls", help="comma separated half sides")
    p_sw.add_argument("--lambdas", help="comma separated activities")
    p_sw.add_argument("--with-eta", action="store_true", help="also estimate eta at each L")
    p_ver = sub.add_parser("verify", parents=[common], help="run invariant suites")
    p_ver.add_argument("--suite", choices=("graphs", "bounds", "identity", "oracle", "all"), default="all")
    p_ver.add_argument("--junit", metavar="PATH", help="write a JUnit XML summary")
    return parser


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    if args.seed is not None:
        cfg.estimator.seed = args.seed
    if args.samples is not None:
        cfg.estimator.samples = args.samples
    if args.format is not None:
        cfg.output.format = args.format
    return cfg


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = load(args.config) if args.config else RunConfig()
        cfg = _apply_overrides(cfg, args)
        base = Path(args.config).parent if args.config else None
        system = build(cfg, base)
        rows = COMMANDS[args.command](cfg, system, args)
    except CapabilityError as exc:
        print(f"capability exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (ConfigError, BoxTooSmall) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out_path = args.out or cfg.output.path
    if out_path:
        with open(out_path, "w", newline="") as fh:
            _emit(rows, cfg, cfg.output.format, fh)
    else:
        _emit(rows, cfg, cfg.output.format, sys.stdout)
    if args.command == "verify" and args._failed:
        print(f"verification failed: {', '.join(args._failed)}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
