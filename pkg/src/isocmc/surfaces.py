"""Closed-form discrete cmc surfaces and their Weierstrass data.

Three families are available, each with an exact vertex formula that the
integrated Weierstrass 1-form must reproduce:

* ``doubly-channel``: ``g = H (m + i n) / M``, ``h = H (m + i n) / N``,
  labels ``+-MN/H``; every grid line is a parabola with vertical axis.
* ``cylinder``: the channel family with ``M = N``; n-lines are straight.
* ``delaunay``: ``g = c exp(-alpha m + i beta n)`` with ``beta = pi/N``,
  ``h(m, n) = (H/c) g(-m, -n)``; a surface of revolution of period ``2N``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError
from .gauss import LightconeNet, gauss_closed_form, gauss_nu
from .grid import GridDomain
from .holomorphic import (
    HolomorphicGrid,
    christoffel_dual,
    discrete_exponential,
    exponential_rates,
    identity_scaling,
)
from .minkowski import IsoSphere, sphere_height
from .weierstrass import SurfaceNet, cmc_oneform, integrate_oneform

FAMILIES = ("doubly-channel", "cylinder", "delaunay")


@dataclass(frozen=True)
class ExampleSpec:
    family: str
    H: float
    domain: GridDomain
    M: int | None = None
    N: int | None = None
    c: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}")
        if self.H == 0:
            raise ValueError("H must be nonzero")
        if self.family == "delaunay":
            if self.N is None or int(self.N) != self.N or self.N < 2:
                raise ValueError("delaunay needs an integer N >= 2")
            if self.c is None or self.c == 0:
                raise ValueError("delaunay needs a nonzero c")
        else:
            M = self.M if self.M is not None else self.N
            N = self.N if self.N is not None else M
            if self.family == "cylinder" and self.M is not None and self.N is not None and self.M != self.N:
                raise ValueError("a cylinder has M = N")
            for name, val in (("M", M), ("N", N)):
                if val is None or int(val) != val or val < 1:
                    raise ValueError(f"{self.family} needs an integer {name} >= 1")
            object.__setattr__(self, "M", int(M))
            object.__setattr__(self, "N", int(N))


def _channel_points(H, M, N, m, n):
    return np.stack(
        [H / (2.0 * M) * ((M + N) * (m / N) ** 2 + (M - N) * (n / N) ** 2), m / N, n / N], axis=-1
    )


def doubly_channel(spec: ExampleSpec) -> SurfaceNet:
    if spec.family not in ("doubly-channel", "cylinder"):
        raise ValueError(f"doubly_channel cannot build family {spec.family!r}")
    m, n = spec.domain.mn()
    return SurfaceNet(spec.domain, _channel_points(spec.H, spec.M, spec.N, m, n))


def cmc_cylinder(spec: ExampleSpec) -> SurfaceNet:
    if spec.family != "cylinder":
        raise ValueError(f"cmc_cylinder cannot build family {spec.family!r}")
    M = spec.M
    m, n = spec.domain.mn()
    return SurfaceNet(spec.domain, np.stack([spec.H * (m / M) ** 2, m / M, n / M], axis=-1))


def delaunay(spec: ExampleSpec) -> SurfaceNet:
    if spec.family != "delaunay":
        raise ValueError(f"delaunay cannot build family {spec.family!r}")
    alpha, _ = exponential_rates(spec.N)
    m, n = spec.domain.mn()
    grow = np.exp(alpha * m)
    pts = np.stack(
        [
            0.5 * spec.H * grow**2 + spec.c * np.sinh(alpha) * m,
            grow * np.cos(np.pi * n / spec.N),
            -grow * np.sin(np.pi * n / spec.N),
        ],
        axis=-1,
    )
    return SurfaceNet(spec.domain, pts)


def closed_form(spec: ExampleSpec) -> SurfaceNet:
    if spec.family == "delaunay":
        return delaunay(spec)
    if spec.family == "cylinder":
        return cmc_cylinder(spec)
    return doubly_channel(spec)


def closed_form_h(spec: ExampleSpec) -> np.ndarray:
    """The Christoffel dual ``h`` in closed form on the example's domain."""
    m, n = spec.domain.mn()
    if spec.family == "delaunay":
        alpha, beta = exponential_rates(spec.N)
        return spec.H * np.exp(alpha * m - 1j * beta * n)
    return spec.H * (m + 1j * n) / spec.N


def holomorphic_g(spec: ExampleSpec) -> HolomorphicGrid:
    if spec.family == "delaunay":
        return discrete_exponential(spec.N, spec.c, spec.domain)
    return identity_scaling(spec.H, spec.M, spec.domain, spec.N)


def weierstrass_data(spec: ExampleSpec) -> tuple[HolomorphicGrid, HolomorphicGrid]:
    """``(g, h)`` with ``h`` integrated from ``dh = H/(m dg)`` and anchored at the base vertex."""
    g = holomorphic_g(spec)
    base = spec.domain.base
    h = christoffel_dual(g, spec.H, base, closed_form_h(spec)[spec.domain.index(base)])
    return g, h


def generate(spec: ExampleSpec, tol: float = 1e-9) -> SurfaceNet:
    """Integrate the cmc Weierstrass 1-form, anchored to the closed form at the base vertex."""
    g, h = weierstrass_data(spec)
    base = spec.domain.base
    anchor = closed_form(spec)(*base)
    return integrate_oneform(cmc_oneform(g, h, spec.H), base, anchor, tol)


def gauss_map(spec: ExampleSpec) -> LightconeNet:
    g, h = weierstrass_data(spec)
    return gauss_closed_form(g, h)


def parallel_surface(Y: SurfaceNet, nu: SurfaceNet, H: float) -> SurfaceNet:
    """``Y + nu / H``: the parallel surface, of constant mean curvature ``-H``."""
    if H == 0:
        raise DegenerateError("H must be nonzero")
    if Y.domain != nu.domain:
        raise ValueError(f"domain mismatch: {Y.domain} vs {nu.domain}")
    return SurfaceNet(Y.domain, Y.points + nu.points / H)


def parallel_data(g: HolomorphicGrid, h: HolomorphicGrid) -> tuple[HolomorphicGrid, HolomorphicGrid]:
    """Weierstrass data ``(g^P, h^P) = (conj h, conj g)`` of the parallel surface.

    With ``H^P = -H`` the dual relation ``dh^P = H^P / (m^P dg^P)`` holds for
    labels ``m^P = -m``.
    """
    labels = g.labels.scaled(-1.0)
    return h.conj().with_labels(labels), g.conj().with_labels(labels)


def parallel_of(spec: ExampleSpec, Y: SurfaceNet | None = None) -> SurfaceNet:
    Y = Y if Y is not None else generate(spec)
    return parallel_surface(Y, gauss_nu(gauss_map(spec)), spec.H)


# -- shape checks -------------------------------------------------------------


def collinearity_residual(points) -> float:
    """Largest distance of the points from the line through the first and last one."""
    p = np.asarray(points, dtype=float)
    d = p[-1] - p[0]
    length = np.linalg.norm(d)
    if length == 0:
        raise DegenerateError("endpoints coincide")
    rel = p - p[0]
    perp = rel - np.outer(rel @ d, d) / length**2
    return float(np.max(np.linalg.norm(perp, axis=-1)))


def parabola_residual(points) -> float:
    """Deviation of a curve from a parabola with vertical axis.

    The planar parts must be collinear, and the height must be a quadratic
    function of the position along that line.  The quadratic interpolates the
    first, middle and last point; the residual is the worst miss elsewhere
    (plus the planar collinearity defect).
    """
    p = np.asarray(points, dtype=float)
    if len(p) < 3:
        return 0.0
    planar = p[:, 1:]
    d = planar[-1] - planar[0]
    length = np.linalg.norm(d)
    if length == 0:
        raise DegenerateError("endpoints coincide")
    s = (planar - planar[0]) @ d / length
    off_line = collinearity_residual(planar)
    idx = (0, len(p) // 2, len(p) - 1)
    quad = np.zeros_like(s)
    for a in idx:
        basis = np.ones_like(s)
        for b in idx:
            if b != a:
                basis *= (s - s[b]) / (s[a] - s[b])
        quad += p[a, 0] * basis
    miss = float(np.max(np.abs(quad - p[:, 0])))
    return max(off_line, miss)


def curvature_line_residuals(net: SurfaceNet) -> tuple[float, float]:
    """Worst parabola residual over all m-curves (fixed n) and all n-curves (fixed m)."""
    pts = net.points
    m_curves = max((parabola_residual(pts[:, b]) for b in range(pts.shape[1])), default=0.0)
    n_curves = max((parabola_residual(pts[a, :]) for a in range(pts.shape[0])), default=0.0)
    return m_curves, n_curves


def sampled_sphere(sphere: IsoSphere, planar: np.ndarray, domain: GridDomain) -> SurfaceNet:
    """Lift planar grid points ``(W, H, 2)`` onto the sphere's graph."""
    planar = np.asarray(planar, dtype=float)
    l = sphere_height(sphere, planar[..., 0], planar[..., 1])
    return SurfaceNet(domain, np.concatenate([np.asarray(l)[..., None], planar], axis=-1))
