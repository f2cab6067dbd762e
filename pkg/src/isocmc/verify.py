"""Aggregate verification of a surface net against its Weierstrass data."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import IsoCMCError
from .gauss import (
    LightconeNet,
    beta_check,
    circularity_residuals,
    gauss_closed_form,
    loop_residuals,
    mean_curvature,
    propagate_gauss,
)
from .holomorphic import verify_holomorphic
from .surfaces import ExampleSpec, closed_form, weierstrass_data
from .weierstrass import SurfaceNet, cmc_oneform


@dataclass
class Check:
    passed: bool
    max_residual: float
    tol: float
    note: str = ""

    def as_dict(self) -> dict:
        out = {"passed": self.passed, "max_residual": _finite(self.max_residual), "tol": self.tol}
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class VerifyReport:
    checks: dict[str, Check] = field(default_factory=dict)
    curvature: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    @property
    def failed(self) -> list[str]:
        return [name for name, c in self.checks.items() if not c.passed]

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "failed": self.failed,
            "checks": {k: v.as_dict() for k, v in self.checks.items()},
            "curvature": self.curvature,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"


def _finite(x):
    x = float(x)
    return x if np.isfinite(x) else str(x)


def _check(residual, tol, note="") -> Check:
    residual = float(residual)
    return Check(bool(residual <= tol), residual, tol, note)


def seeded_gauss(spec: ExampleSpec, net: SurfaceNet) -> tuple[LightconeNet, LightconeNet]:
    """Closed-form Gauss map of the surface family and the map propagated over ``net`` from its base value."""
    g, h = weierstrass_data(spec)
    closed = gauss_closed_form(g, h)
    seed = closed(*spec.domain.base)
    propagated = propagate_gauss(net, spec.domain.base, seed, strict=False, check=False)
    return closed, propagated


def verify_net(spec: ExampleSpec, net: SurfaceNet, tolerances: dict) -> VerifyReport:
    """Run every net-level invariant and collect pass/fail with worst residuals.

    Nothing raises on a failed invariant; failures are recorded in the report.
    """
    if net.domain != spec.domain:
        raise ValueError(f"net domain {net.domain} does not match the surface grid {spec.domain}")
    tol = tolerances
    report = VerifyReport()
    checks = report.checks
    g, h = weierstrass_data(spec)

    hol = max(verify_holomorphic(g, tol["holomorphic"]).max_residual,
              verify_holomorphic(h, tol["holomorphic"]).max_residual)
    checks["holomorphicity"] = _check(hol, tol["holomorphic"])

    form = cmc_oneform(g, h, spec.H)
    closure = float(np.max(form.closure_residuals(), initial=0.0))
    checks["closure"] = _check(closure, tol["closure"])

    cop, conc = circularity_residuals(net)
    checks["circularity.coplanarity"] = _check(np.max(cop, initial=0.0), tol["coplanarity"])
    checks["circularity.concircularity"] = _check(np.max(conc, initial=0.0), tol["concircularity"])

    target = closed_form(spec).points
    scale = max(1.0, float(np.max(np.linalg.norm(target, axis=-1))))
    checks["closed_form"] = _check(np.max(np.abs(net.points - target)) / scale, tol["closed_form"])

    try:
        closed, propagated = seeded_gauss(spec, net)
    except IsoCMCError as exc:
        for name, key in (("gauss.loop", "loop"), ("gauss.agreement", "gauss"), ("beta", "beta"), ("curvature", "curvature")):
            checks[name] = Check(False, float("inf"), tol[key], str(exc))
        return report

    loops = loop_residuals(net, propagated)
    checks["gauss.loop"] = _check(np.nanmax(loops, initial=0.0), tol["loop"])
    agree = np.max(np.abs(propagated.N - closed.N))
    checks["gauss.agreement"] = _check(agree, tol["gauss"])

    checks["beta"] = _check(beta_check(g, spec.H, net, propagated).max_residual, tol["beta"])

    # edge-parallelism of the propagated map is already covered by the loop check
    field_ = mean_curvature(net, propagated, allow_degenerate=True, check_parallel=False)
    Hq = field_.H
    dev = np.abs(Hq - spec.H) / max(1.0, abs(spec.H))
    worst = float(np.max(np.where(np.isnan(dev), np.inf, dev), initial=0.0))
    checks["curvature"] = _check(worst, tol["curvature"])
    report.curvature = {
        "min": _finite(np.nanmin(Hq)) if Hq.size else None,
        "max": _finite(np.nanmax(Hq)) if Hq.size else None,
        "mean": _finite(np.nanmean(Hq)) if Hq.size else None,
        "target": spec.H,
        "degenerate_quads": int(np.sum(field_.degenerate)),
    }
    return report
