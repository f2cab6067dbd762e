"""Command-line driver: ``iso-cmc <subcommand> --config job.yaml``.

Exit status is 0 on success, 1 when a verification or construction check
fails, and 2 for usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback

import numpy as np

from .config import MODES, JobConfig, load_config
from .errors import ConfigError, IsoCMCError
from .gauss import gauss_closed_form, gauss_nu, mean_curvature
from .holomorphic import verify_holomorphic
from .meshio import atomic_write, curvature_table, export_obj, read_obj
from .surfaces import generate, parallel_data, parallel_surface, weierstrass_data
from .verify import seeded_gauss, verify_net
from .weierstrass import SurfaceNet, cmc_oneform

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def _net(cfg: JobConfig) -> SurfaceNet:
    if cfg.input is not None:
        return read_obj(cfg.input)
    return generate(cfg.spec, tol=cfg.tolerances["closure"])


def _complex_rows(domain, values):
    return [[float(z.real), float(z.imag)] for z in domain.to_rows(values)]


def _weierstrass(cfg: JobConfig) -> int:
    spec = cfg.spec
    g, h = weierstrass_data(spec)
    form = cmc_oneform(g, h, spec.H)
    d = spec.domain
    doc = {
        "family": spec.family,
        "H": spec.H,
        "grid": {"m": [d.m_min, d.m_max], "n": [d.n_min, d.n_max]},
        "labels": {"h": g.labels.h_labels.tolist(), "v": g.labels.v_labels.tolist()},
        "g": _complex_rows(d, g.values),
        "h": _complex_rows(d, h.values),
        "holomorphic_residual": {
            "g": verify_holomorphic(g).max_residual,
            "h": verify_holomorphic(h).max_residual,
        },
        "closure_residual": float(np.max(form.closure_residuals(), initial=0.0)),
    }
    atomic_write(cfg.output("json"), json.dumps(doc, indent=2) + "\n")
    if cfg.output("obj") is not None:
        export_obj(generate(spec, tol=cfg.tolerances["closure"]), cfg.output("obj"))
    return EXIT_OK


def _verify(cfg: JobConfig) -> int:
    report = verify_net(cfg.spec, _net(cfg), cfg.tolerances)
    text = report.to_json()
    if cfg.output("report") is not None:
        atomic_write(cfg.output("report"), text)
    else:
        sys.stdout.write(text)
    if not report.passed:
        print(f"verification failed: {', '.join(report.failed)}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def _curvature(cfg: JobConfig) -> int:
    net = _net(cfg)
    _, gauss = seeded_gauss(cfg.spec, net)
    curvature_table(net, gauss, cfg.output("csv"))
    return EXIT_OK


def _parallel(cfg: JobConfig) -> int:
    spec = cfg.spec
    Y = _net(cfg)
    g, h = weierstrass_data(spec)
    N = gauss_closed_form(g, h)
    YP = parallel_surface(Y, gauss_nu(N), spec.H)
    gP, hP = parallel_data(g, h)
    field = mean_curvature(YP, gauss_closed_form(gP, hP), tol=cfg.tolerances["parallel"])
    dev = float(np.max(np.abs(field.H + spec.H), initial=0.0)) / max(1.0, abs(spec.H))
    export_obj(YP, cfg.output("obj"))
    if dev > cfg.tolerances["curvature"]:
        print(f"parallel surface mean curvature deviates from {-spec.H} by {dev:.3e}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def run(cfg: JobConfig) -> int:
    mode = cfg.mode
    if mode == "generate":
        export_obj(generate(cfg.spec, tol=cfg.tolerances["closure"]), cfg.output("obj"))
        return EXIT_OK
    if mode == "weierstrass":
        return _weierstrass(cfg)
    if mode == "verify":
        return _verify(cfg)
    if mode == "curvature":
        return _curvature(cfg)
    if mode == "export":
        export_obj(_net(cfg), cfg.output("obj"))
        return EXIT_OK
    if mode == "parallel":
        return _parallel(cfg)
    raise ConfigError(f"unknown mode {mode!r}", "mode")


def _origin(exc: BaseException) -> str:
    """Module of the innermost package frame that raised ``exc``."""
    name = "isocmc"
    for frame, _ in traceback.walk_tb(exc.__traceback__):
        mod = frame.f_globals.get("__name__", "")
        if mod.startswith("isocmc"):
            name = mod
    return name


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iso-cmc", description="Discrete cmc surfaces in isotropic 3-space."
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    helps = {
        "generate": "integrate the Weierstrass 1-form of a surface family and write an OBJ",
        "weierstrass": "write the Weierstrass data (g, h, labels) as JSON",
        "verify": "check circularity, Gauss map, beta-parallelism and mean curvature",
        "curvature": "write the per-quad curvature table as CSV",
        "export": "write a net (stored or generated) as OBJ",
        "parallel": "write the parallel surface Y + nu/H as OBJ",
    }
    for mode in MODES:
        p = sub.add_parser(mode, help=helps[mode])
        p.add_argument("--config", required=True, help="YAML job file")
        p.add_argument("--out", help="override the mode's output path")
        p.add_argument("--tol", type=float, help="override every verification tolerance")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config).with_overrides(args.mode, args.out, args.tol)
    except ConfigError as exc:
        print(f"iso-cmc: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return run(cfg)
    except ConfigError as exc:
        print(f"iso-cmc: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IsoCMCError, ValueError, OSError) as exc:
        print(f"iso-cmc: {_origin(exc)}: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
