"""Job configuration files.

A job is a single YAML document::

    mode: verify               # optional; the CLI subcommand overrides it
    H: 1.0
    surface:
      family: doubly-channel   # doubly-channel | cylinder | delaunay
      M: 6
      N: 2                     # label normalization: m = +-MN/H
    grid:
      m: [-10, 10]
      n: [-10, 10]
    input: net.obj             # optional: operate on a stored net
    output:
      obj: net.obj
      csv: curvature.csv
      report: report.json
      json: data.json
    tolerances:
      coplanarity: 1.0e-9    # see DEFAULT_TOLERANCES for every key

Relative paths resolve against the directory holding the config file.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import ConfigError
from .grid import GridDomain
from .surfaces import FAMILIES, ExampleSpec

MODES = ("generate", "weierstrass", "verify", "curvature", "export", "parallel")

DEFAULT_TOLERANCES = {
    "holomorphic": 1e-9,
    "closure": 1e-9,
    "coplanarity": 1e-9,
    "concircularity": 1e-9,
    "loop": 1e-12,
    "gauss": 1e-9,
    "beta": 1e-10,
    "curvature": 1e-9,
    "closed_form": 1e-9,
    "parallel": 1e-8,
}

OUTPUT_KEYS = ("obj", "csv", "report", "json")

# Which output each mode writes when --out is given.
PRIMARY_OUTPUT = {
    "generate": "obj",
    "weierstrass": "json",
    "verify": "report",
    "curvature": "csv",
    "export": "obj",
    "parallel": "obj",
}


@dataclass
class JobConfig:
    mode: str | None
    spec: ExampleSpec | None
    input: Path | None = None
    outputs: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    @property
    def H(self) -> float | None:
        return self.spec.H if self.spec else None

    def output(self, key: str) -> Path | None:
        return self.outputs.get(key)

    def with_overrides(self, mode=None, out=None, tol=None) -> "JobConfig":
        mode = mode or self.mode
        if mode not in MODES:
            raise ConfigError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}", "mode")
        outputs = dict(self.outputs)
        if out is not None:
            outputs[PRIMARY_OUTPUT[mode]] = Path(out)
        tolerances = dict(self.tolerances)
        if tol is not None:
            if not tol > 0:
                raise ConfigError("must be positive", "--tol")
            tolerances = {k: float(tol) for k in tolerances}
        cfg = JobConfig(mode, self.spec, self.input, outputs, tolerances)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.mode is None:
            return
        if self.mode in ("generate", "weierstrass", "parallel") and self.spec is None:
            raise ConfigError(f"mode {self.mode!r} needs a surface description", "surface")
        if self.mode in ("verify", "curvature", "export") and self.spec is None:
            # the Gauss map seed and Weierstrass data come from the surface description
            raise ConfigError(f"mode {self.mode!r} needs a surface description", "surface")
        key = PRIMARY_OUTPUT[self.mode]
        if self.mode != "verify" and self.outputs.get(key) is None:
            raise ConfigError(f"mode {self.mode!r} needs an output path", f"output.{key}")


def _number(raw, path, integer=False):
    if isinstance(raw, str):
        # PyYAML reads exponent forms like 1e-9 as strings
        try:
            raw = float(raw)
        except ValueError:
            raise ConfigError(f"expected a number, got {raw!r}", path) from None
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ConfigError(f"expected a number, got {raw!r}", path)
    if integer and int(raw) != raw:
        raise ConfigError(f"expected an integer, got {raw!r}", path)
    return int(raw) if integer else float(raw)


def _range(raw, path):
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        raise ConfigError("expected [min, max]", path)
    lo, hi = (_number(v, f"{path}[{i}]", integer=True) for i, v in enumerate(raw))
    if hi < lo:
        raise ConfigError(f"empty range [{lo}, {hi}]", path)
    return lo, hi


def parse_config(doc: dict, base_dir: Path | None = None) -> JobConfig:
    if not isinstance(doc, dict):
        raise ConfigError("top level must be a mapping")
    base_dir = Path(base_dir) if base_dir is not None else Path(".")
    known = {"mode", "H", "surface", "grid", "input", "output", "tolerances"}
    for key in doc:
        if key not in known:
            raise ConfigError("unknown key", str(key))

    mode = doc.get("mode")
    if mode is not None and mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}", "mode")

    spec = None
    surface = doc.get("surface")
    if surface is not None:
        if not isinstance(surface, dict):
            raise ConfigError("expected a mapping", "surface")
        family = surface.get("family")
        if family is None:
            raise ConfigError("missing", "surface.family")
        if family not in FAMILIES:
            raise ConfigError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}", "surface.family")
        for key in surface:
            if key not in ("family", "M", "N", "c"):
                raise ConfigError("unknown key", f"surface.{key}")
        if "H" not in doc:
            raise ConfigError("missing; cmc surfaces need a mean curvature", "H")
        H = _number(doc["H"], "H")
        if H == 0:
            raise ConfigError("must be nonzero", "H")
        grid = doc.get("grid")
        if not isinstance(grid, dict):
            raise ConfigError("missing or not a mapping", "grid")
        m_rng = _range(grid.get("m"), "grid.m")
        n_rng = _range(grid.get("n"), "grid.n")
        params = {}
        for key, integer in (("M", True), ("N", True), ("c", False)):
            if key in surface:
                params[key] = _number(surface[key], f"surface.{key}", integer)
        try:
            spec = ExampleSpec(family, H, GridDomain(*m_rng, *n_rng), **params)
        except ValueError as exc:
            raise ConfigError(str(exc), "surface") from exc

    inp = doc.get("input")
    input_path = (base_dir / inp) if inp is not None else None

    outputs = {}
    out = doc.get("output") or {}
    if not isinstance(out, dict):
        raise ConfigError("expected a mapping", "output")
    for key, val in out.items():
        if key not in OUTPUT_KEYS:
            raise ConfigError("unknown output kind", f"output.{key}")
        outputs[key] = base_dir / str(val)

    tolerances = dict(DEFAULT_TOLERANCES)
    for key, val in (doc.get("tolerances") or {}).items():
        if key not in DEFAULT_TOLERANCES:
            raise ConfigError("unknown tolerance", f"tolerances.{key}")
        val = _number(val, f"tolerances.{key}")
        if not val > 0:
            raise ConfigError("must be positive", f"tolerances.{key}")
        tolerances[key] = val

    cfg = JobConfig(mode, spec, input_path, outputs, tolerances)
    cfg.validate()
    return cfg


def load_config(path) -> JobConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path} is not valid YAML: {exc}") from exc
    return parse_config(doc, path.parent)
