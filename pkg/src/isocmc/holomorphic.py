"""Discrete holomorphic functions on rectangular grids.

A complex grid function ``g`` is discrete holomorphic when on every quad
``cr(g_i, g_j, g_k, g_l) = m_il / m_ij`` for real edge labels ``m`` with the
edge-labeling property (see :class:`~isocmc.grid.EdgeLabels`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ClosureError, DegenerateError
from .grid import EdgeLabels, GridDomain, forward_differences, integrate_increments, quad_closure


def cross_ratio(zi, zj, zk, zl):
    """``(zi - zj)/(zj - zk) * (zk - zl)/(zl - zi)``, broadcasting over arrays."""
    zi, zj, zk, zl = (np.asarray(z, dtype=complex) for z in (zi, zj, zk, zl))
    den1 = zj - zk
    den2 = zl - zi
    if np.any(den1 == 0) or np.any(den2 == 0):
        raise DegenerateError("cross-ratio undefined: coincident points in a denominator")
    out = (zi - zj) / den1 * (zk - zl) / den2
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class HolomorphicGrid:
    """Complex values on a grid together with their cross-ratio labels."""

    domain: GridDomain
    values: np.ndarray
    labels: EdgeLabels

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != self.domain.shape:
            raise ValueError(f"values have shape {values.shape}, domain is {self.domain.shape}")
        if self.labels.domain != self.domain:
            raise ValueError("labels live on a different domain")
        object.__setattr__(self, "values", values)

    def __call__(self, m: int, n: int) -> complex:
        return complex(self.values[self.domain.index((m, n))])

    def differences(self) -> tuple[np.ndarray, np.ndarray]:
        return forward_differences(self.values)

    def conj(self) -> "HolomorphicGrid":
        # cr(conj g) = conj cr(g), so real labels carry over unchanged
        return HolomorphicGrid(self.domain, np.conj(self.values), self.labels)

    def with_labels(self, labels: EdgeLabels) -> "HolomorphicGrid":
        return HolomorphicGrid(self.domain, self.values, labels)

    def quad_values(self):
        z = self.values
        return z[:-1, :-1], z[1:, :-1], z[1:, 1:], z[:-1, 1:]


@dataclass
class HolomorphicReport:
    residuals: np.ndarray
    max_residual: float
    passed: bool
    tol: float
    failures: list = field(default_factory=list)


def verify_holomorphic(f: HolomorphicGrid, tol: float = 1e-9) -> HolomorphicReport:
    """Compare every quad's cross-ratio against ``m_il / m_ij``.

    Residuals are relative to ``|m_il / m_ij|``.  Degenerate quads get an
    infinite residual and a reason in ``failures``.
    """
    d = f.domain
    if not d.has_quads:
        return HolomorphicReport(np.zeros((0, 0)), 0.0, True, tol)
    zi, zj, zk, zl = f.quad_values()
    target = f.labels.quad_ratio()
    den1 = zj - zk
    den2 = zl - zi
    bad = (den1 == 0) | (den2 == 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        cr = (zi - zj) / np.where(bad, 1, den1) * (zk - zl) / np.where(bad, 1, den2)
    residuals = np.abs(cr - target) / np.abs(target)
    residuals[bad] = np.inf
    failures = []
    mq, nq = d.quad_corners()
    for a, b in zip(*np.nonzero(bad | ~(residuals <= tol))):
        quad = (int(mq[a, b]), int(nq[a, b]))
        if bad[a, b]:
            failures.append((quad, "coincident vertices"))
        else:
            failures.append((quad, f"cross-ratio residual {residuals[a, b]:.3e}"))
    max_res = float(np.max(residuals))
    return HolomorphicReport(residuals, max_res, not failures, tol, failures)


def dual_increments(g: HolomorphicGrid, H: float) -> tuple[np.ndarray, np.ndarray]:
    """Edge increments ``H / (m dg)`` of the Christoffel dual."""
    if H == 0:
        raise DegenerateError("H must be nonzero")
    dg_h, dg_v = g.differences()
    if np.any(dg_h == 0) or np.any(dg_v == 0):
        raise DegenerateError("Christoffel dual undefined: zero edge difference dg")
    return H / (g.labels.h_grid() * dg_h), H / (g.labels.v_grid() * dg_v)


def relative_closure(h_inc, v_inc) -> np.ndarray:
    """Per-quad closure residual scaled by the largest increment magnitude."""
    h_inc = np.asarray(h_inc)
    v_inc = np.asarray(v_inc)
    closure = quad_closure(h_inc, v_inc)
    if closure.ndim > 2:
        closure = np.linalg.norm(closure.reshape(closure.shape[:2] + (-1,)), axis=-1)
    else:
        closure = np.abs(closure)
    scale = max(
        np.max(np.abs(h_inc), initial=0.0),
        np.max(np.abs(v_inc), initial=0.0),
    )
    return closure / scale if scale > 0 else closure


def christoffel_dual(
    g: HolomorphicGrid,
    H: float,
    base_vertex=None,
    base_value: complex = 0.0,
    tol: float = 1e-10,
) -> HolomorphicGrid:
    """Integrate ``dh = H / (m dg)`` into a grid function with ``h(base) = base_value``.

    The 1-form is checked for closure (relative to its largest increment)
    before integrating.  The returned grid carries the labels of ``g``: the
    dual has the same cross-ratios as ``g``, so ``m`` factorizes them too.
    """
    dh_h, dh_v = dual_increments(g, H)
    d = g.domain
    if d.has_quads:
        res = relative_closure(dh_h, dh_v)
        worst = np.unravel_index(np.argmax(res), res.shape)
        if res[worst] > tol:
            quad = (int(worst[0]) + d.m_min, int(worst[1]) + d.n_min)
            raise ClosureError(
                f"dual 1-form not closed at quad {quad} (residual {res[worst]:.3e}); "
                "g is not holomorphic for these labels",
                quad=quad,
                residual=float(res[worst]),
            )
    base = d.index(base_vertex if base_vertex is not None else d.base)
    values = integrate_increments(dh_h, dh_v, base, complex(base_value))
    return HolomorphicGrid(d, values, g.labels)


def identity_scaling(H: float, M: int, domain: GridDomain, N: int = 1) -> HolomorphicGrid:
    """``g(m, n) = H (m + i n) / M`` with labels ``+-MN/H`` (cross-ratio -1)."""
    if M < 1:
        raise ValueError("M must be a positive integer")
    if H == 0:
        raise DegenerateError("H must be nonzero")
    m, n = domain.mn()
    values = H * (m + 1j * n) / M
    lab = M * N / H
    return HolomorphicGrid(domain, values, EdgeLabels.constant(domain, lab, -lab))


def exponential_rates(N: int) -> tuple[float, float]:
    """``(alpha, beta)`` of the discrete exponential with angular period ``2N``."""
    beta = np.pi / N
    return float(np.arccosh(2.0 - np.cos(beta))), float(beta)


def discrete_exponential(N: int, c: float, domain: GridDomain) -> HolomorphicGrid:
    """``g(m, n) = c exp(-alpha m + i beta n)`` with cross-ratio -1.

    ``cosh(alpha) = 2 - cos(pi/N)`` is what makes every quad's cross-ratio -1.
    Labels are ``-csc^2(pi/2N) / (4c)`` on horizontal edges and the negative
    on vertical ones.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    if c == 0:
        raise DegenerateError("c must be nonzero")
    alpha, beta = exponential_rates(N)
    m, n = domain.mn()
    values = c * np.exp(-alpha * m + 1j * beta * n)
    lab = -1.0 / (4.0 * c * np.sin(np.pi / (2 * N)) ** 2)
    return HolomorphicGrid(domain, values, EdgeLabels.constant(domain, lab, -lab))


def from_boundary(labels: EdgeLabels, bottom, left) -> HolomorphicGrid:
    """Solve the cross-ratio system quad by quad from the row ``n_min`` and column ``m_min``.

    ``bottom`` holds the ``W`` values on row ``n_min`` and ``left`` the ``H``
    values on column ``m_min`` (their shared corner must agree).  Each ``g_k``
    follows from ``g_i, g_j, g_l`` since the cross-ratio is Moebius in ``g_k``.
    """
    d = labels.domain
    bottom = np.asarray(bottom, dtype=complex)
    left = np.asarray(left, dtype=complex)
    if bottom.shape != (d.width,) or left.shape != (d.height,):
        raise ValueError(f"boundary shapes {bottom.shape}, {left.shape} do not fit {d}")
    if bottom[0] != left[0]:
        raise ValueError("boundary rows disagree at the corner")
    z = np.empty(d.shape, dtype=complex)
    z[:, 0] = bottom
    z[0, :] = left
    q = labels.quad_ratio()
    for b in range(d.height - 1):
        for a in range(d.width - 1):
            zi, zj, zl = z[a, b], z[a + 1, b], z[a, b + 1]
            A, B = zi - zj, zl - zi
            den = A + q[a, b] * B
            if A == 0 or B == 0 or den == 0:
                raise DegenerateError(f"cross-ratio system degenerates at quad {(d.m_min + a, d.n_min + b)}")
            z[a + 1, b + 1] = (A * zl + q[a, b] * B * zj) / den
    return HolomorphicGrid(d, z, labels)
