"""Weierstrass 1-forms for zero and constant mean curvature nets.

All edge increments are stored forward, as ``f_j - f_i`` along the oriented
edge ``i -> j`` (horizontal: ``(m,n) -> (m+1,n)``, vertical:
``(m,n) -> (m,n+1)``).  The classical edge formulas ``dh = H/(m dg)``,
``dX = Re((g, 1, -i)/dg)/m`` and ``dY = Re((conj h + g, 1, -i) dh)/H`` are
odd in the differences they contain, so they hold verbatim for forward
differences; increments in the opposite convention ``f_i - f_j`` are just
the negatives of what is stored here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ClosureError, ConsistencyError, DegenerateError
from .grid import GridDomain, forward_differences, integrate_increments, midpoints
from .holomorphic import HolomorphicGrid, relative_closure
from .minkowski import embed_iso


@dataclass(frozen=True)
class SurfaceNet:
    """Isotropic points ``(l, x, y)`` on the vertices of a grid, shape ``(W, H, 3)``."""

    domain: GridDomain
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.shape != self.domain.shape + (3,):
            raise ValueError(f"points have shape {pts.shape}, expected {self.domain.shape + (3,)}")
        object.__setattr__(self, "points", pts)

    def __call__(self, m: int, n: int) -> np.ndarray:
        return self.points[self.domain.index((m, n))].copy()

    @property
    def height(self) -> np.ndarray:
        return self.points[..., 0]

    @property
    def planar(self) -> np.ndarray:
        """Orthoprojection ``(x, y)`` of every vertex."""
        return self.points[..., 1:]

    def embedded(self) -> np.ndarray:
        return embed_iso(self.points)

    def differences(self) -> tuple[np.ndarray, np.ndarray]:
        return forward_differences(self.points)

    def __add__(self, other: "SurfaceNet") -> "SurfaceNet":
        _check_domains(self, other)
        return SurfaceNet(self.domain, self.points + other.points)


@dataclass(frozen=True)
class IsoOneForm:
    """Forward ``(l, x, y)`` increments on horizontal ``(W-1, H, 3)`` and vertical ``(W, H-1, 3)`` edges."""

    domain: GridDomain
    h: np.ndarray
    v: np.ndarray

    def closure_residuals(self) -> np.ndarray:
        """Per-quad closure defect relative to the largest increment."""
        return relative_closure(self.h, self.v)

    def __add__(self, other: "IsoOneForm") -> "IsoOneForm":
        if self.domain != other.domain:
            raise ValueError("1-forms live on different domains")
        return IsoOneForm(self.domain, self.h + other.h, self.v + other.v)

    @classmethod
    def of(cls, net: SurfaceNet) -> "IsoOneForm":
        """The exact 1-form ``dX`` of a net."""
        h, v = net.differences()
        return cls(net.domain, h, v)


def _check_domains(a, b):
    if a.domain != b.domain:
        raise ValueError(f"domain mismatch: {a.domain} vs {b.domain}")


def _triple(coeff: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """``Re((coeff, 1, -i) * omega)`` as a real ``(..., 3)`` array."""
    return np.stack([np.real(coeff * omega), np.real(omega), np.real(-1j * omega)], axis=-1)


def _nonzero_dg(g: HolomorphicGrid):
    dg_h, dg_v = g.differences()
    if np.any(dg_h == 0) or np.any(dg_v == 0):
        raise DegenerateError("zero edge difference dg; the Weierstrass 1-form is undefined")
    return dg_h, dg_v


def zmc_oneform(g: HolomorphicGrid) -> IsoOneForm:
    """``dX = Re((g_ij, 1, -i) / dg) / m`` for a zero mean curvature net."""
    dg_h, dg_v = _nonzero_dg(g)
    gm_h, gm_v = midpoints(g.values)
    h = _triple(gm_h, 1.0 / (g.labels.h_grid() * dg_h))
    v = _triple(gm_v, 1.0 / (g.labels.v_grid() * dg_v))
    return IsoOneForm(g.domain, h, v)


def check_dual_pair(g: HolomorphicGrid, h: HolomorphicGrid, H: float, tol: float = 1e-10) -> float:
    """Largest relative deviation of ``m dg dh`` from ``H`` over all edges."""
    _check_domains(g, h)
    dg_h, dg_v = _nonzero_dg(g)
    dh_h, dh_v = h.differences()
    dev = max(
        np.max(np.abs(g.labels.h_grid() * dg_h * dh_h - H), initial=0.0),
        np.max(np.abs(g.labels.v_grid() * dg_v * dh_v - H), initial=0.0),
    ) / abs(H)
    if dev > tol:
        raise ConsistencyError(
            f"h is not the Christoffel dual of g for H={H}: max |m dg dh - H|/|H| = {dev:.3e}",
            residual=dev,
        )
    return dev


def cmc_oneform(g: HolomorphicGrid, h: HolomorphicGrid, H: float, tol: float = 1e-10) -> IsoOneForm:
    """``dY = Re((conj(h_ij) + g_ij, 1, -i) omega)`` with ``omega = dh / H``."""
    if H == 0:
        raise DegenerateError("H must be nonzero")
    check_dual_pair(g, h, H, tol)
    dh_h, dh_v = h.differences()
    gm_h, gm_v = midpoints(g.values)
    hm_h, hm_v = midpoints(h.values)
    return IsoOneForm(
        g.domain,
        _triple(np.conj(hm_h) + gm_h, dh_h / H),
        _triple(np.conj(hm_v) + gm_v, dh_v / H),
    )


def sphere_term(h: HolomorphicGrid, H: float) -> SurfaceNet:
    """``S = (|h|^2 / 2H, Re h / H, Im h / H)``, on the sphere ``l = H (x^2 + y^2) / 2``."""
    if H == 0:
        raise DegenerateError("H must be nonzero")
    z = h.values
    pts = np.stack([np.abs(z) ** 2 / (2.0 * H), z.real / H, z.imag / H], axis=-1)
    return SurfaceNet(h.domain, pts)


def graph_sum(a: SurfaceNet, b: SurfaceNet, tol: float = 1e-10) -> SurfaceNet:
    """Add heights of two nets sharing the same planar projection."""
    _check_domains(a, b)
    scale = max(1.0, float(np.max(np.abs(a.planar), initial=0.0)))
    gap = float(np.max(np.abs(a.planar - b.planar), initial=0.0))
    if gap > tol * scale:
        raise ConsistencyError(f"planar parts differ by {gap:.3e}; graph sum undefined", residual=gap)
    pts = a.points.copy()
    pts[..., 0] += b.points[..., 0]
    return SurfaceNet(a.domain, pts)


def integrate_oneform(
    form: IsoOneForm, base_vertex=None, base_point=(0.0, 0.0, 0.0), tol: float = 1e-9
) -> SurfaceNet:
    """Integrate a closed 1-form into a net with ``net(base_vertex) = base_point``."""
    d = form.domain
    if d.has_quads:
        res = form.closure_residuals()
        worst = np.unravel_index(np.argmax(res), res.shape)
        if res[worst] > tol:
            quad = (int(worst[0]) + d.m_min, int(worst[1]) + d.n_min)
            raise ClosureError(
                f"1-form not closed at quad {quad}: relative residual {res[worst]:.3e} > {tol:.1e}",
                quad=quad,
                residual=float(res[worst]),
            )
    base = d.index(base_vertex if base_vertex is not None else d.base)
    pts = integrate_increments(form.h, form.v, base, np.asarray(base_point, dtype=float))
    return SurfaceNet(d, pts)
