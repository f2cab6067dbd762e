"""Lightlike Gauss maps, mixed areas and per-quad mean curvature.

A lightlike Gauss map of a circular net ``X`` is a vertex field ``N`` on
``L cap {(N, P) = 1}`` whose edge increments are parallel to those of ``X``.
Mean curvature on a quad is then the ratio of mixed areas
``H = -A(x, n) / A(x, x)`` of the planar projections of ``X`` and of the
Gauss map ``nu = N - PTILDE``.

Quadruples of vertex data are arrays with a vertex axis of length 4 in the
order ``(i, j, k, l)`` just before the component axis.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DegenerateError, NotIsotropicError
from .grid import GridDomain, forward_differences
from .holomorphic import HolomorphicGrid
from .minkowski import P, PTILDE, lightcone_point, mink_form, wedge, wedge2
from .weierstrass import SurfaceNet


@dataclass(frozen=True)
class LightconeNet:
    """Vectors of R^{3,1} on the vertices of a grid, shape ``(W, H, 4)``."""

    domain: GridDomain
    N: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.N, dtype=float)
        if arr.shape != self.domain.shape + (4,):
            raise ValueError(f"N has shape {arr.shape}, expected {self.domain.shape + (4,)}")
        object.__setattr__(self, "N", arr)

    def __call__(self, m: int, n: int) -> np.ndarray:
        return self.N[self.domain.index((m, n))].copy()

    def membership_residual(self) -> float:
        """Largest of ``|(N, N)|`` and ``|(N, P) - 1|`` over all vertices."""
        return float(
            max(
                np.max(np.abs(mink_form(self.N, self.N))),
                np.max(np.abs(mink_form(self.N, P) - 1.0)),
            )
        )


@dataclass(frozen=True)
class QuadCurvature:
    quad: tuple[int, int]
    H: float
    bivector_residual: float
    area_xn: float
    area_xx: float


@dataclass
class CurvatureField:
    """Per-quad curvature data on the ``(W-1, H-1)`` quad array."""

    domain: GridDomain
    H: np.ndarray
    area_xx: np.ndarray
    area_xn: np.ndarray
    bivector_residual: np.ndarray
    degenerate: np.ndarray

    def at(self, m: int, n: int) -> QuadCurvature:
        a, b = m - self.domain.m_min, n - self.domain.n_min
        return QuadCurvature(
            (m, n),
            float(self.H[a, b]),
            float(self.bivector_residual[a, b]),
            float(self.area_xn[a, b]),
            float(self.area_xx[a, b]),
        )


def quad_corners(values: np.ndarray) -> np.ndarray:
    """Stack grid data into ``(W-1, H-1, 4, ...)`` quadruples ordered ``i, j, k, l``."""
    values = np.asarray(values)
    return np.stack([values[:-1, :-1], values[1:, :-1], values[1:, 1:], values[:-1, 1:]], axis=2)


# -- propagation -------------------------------------------------------------


def edge_alpha(dX, N_i) -> np.ndarray:
    """``alpha = -2 (dX, N_i) / (dX, dX)``; insensitive to the orientation of ``dX``."""
    dX = np.asarray(dX, dtype=float)
    return -2.0 * mink_form(dX, N_i) / mink_form(dX, dX)


def propagate_edge(dX, N_i) -> np.ndarray:
    """Reflect ``N_i`` across the edge: the other null point of the line ``N_i + t dX`` in ``P``."""
    dX = np.asarray(dX, dtype=float)
    return np.asarray(edge_alpha(dX, N_i))[..., None] * dX + N_i


def _on_lightcone(seed, tol):
    seed = np.asarray(seed, dtype=float)
    scale = max(1.0, float(np.max(np.abs(seed))))
    if abs(mink_form(seed, seed)) > tol * scale**2 or abs(mink_form(seed, P) - 1.0) > tol * scale:
        raise NotIsotropicError("seed must satisfy (N, N) = 0 and (N, P) = 1")
    return seed


def propagate_gauss(
    X: SurfaceNet,
    seed_vertex=None,
    seed_N=None,
    tol: float = 1e-10,
    alpha_tol: float = 1e-12,
    strict: bool = True,
    check: bool = True,
) -> LightconeNet:
    """Spread a seed value of the lightlike Gauss map over the net.

    Vertices are visited breadth-first from the seed; neighbours are taken in
    the order ``m+1, m-1, n+1, n-1``.  Each step uses :func:`propagate_edge`.

    With ``strict`` an edge whose ``|alpha|`` falls below ``alpha_tol`` (N
    constant across the edge) is an error; otherwise the propagation simply
    keeps N.  With ``check`` every quad's loop residual (relative to the
    largest ``|N|``) must stay below ``tol``.
    """
    d = X.domain
    seed_vertex = seed_vertex if seed_vertex is not None else d.base
    if seed_N is None:
        raise ValueError("seed_N is required")
    seed_N = _on_lightcone(seed_N, tol)
    E = X.embedded()
    out = np.full(d.shape + (4,), np.nan)
    start = d.index(seed_vertex)
    out[start] = seed_N
    queue = deque([start])
    while queue:
        a, b = queue.popleft()
        for da, db in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            a2, b2 = a + da, b + db
            if not (0 <= a2 < d.width and 0 <= b2 < d.height) or not np.isnan(out[a2, b2, 0]):
                continue
            dX = E[a2, b2] - E[a, b]
            norm2 = mink_form(dX, dX)
            vertex = (a + d.m_min, b + d.n_min)
            if norm2 <= 0 or not np.isfinite(norm2):
                raise DegenerateError(
                    f"edge {vertex}->{(a2 + d.m_min, b2 + d.n_min)} has (dX, dX) = {norm2:.3e}; "
                    "propagation needs a spacelike edge"
                )
            alpha = edge_alpha(dX, out[a, b])
            if strict and abs(alpha) < alpha_tol:
                raise DegenerateError(
                    f"edge {vertex}->{(a2 + d.m_min, b2 + d.n_min)} has alpha = {alpha:.3e}; "
                    "the Gauss map does not move across it"
                )
            out[a2, b2] = alpha * dX + out[a, b]
            queue.append((a2, b2))
    net = LightconeNet(d, out)
    if check and d.has_quads:
        res = loop_residuals(X, net)
        worst = np.unravel_index(np.argmax(res), res.shape)
        if res[worst] > tol:
            quad = (int(worst[0]) + d.m_min, int(worst[1]) + d.n_min)
            raise ConsistencyError(
                f"Gauss map propagation inconsistent around quad {quad}: "
                f"loop residual {res[worst]:.3e} > {tol:.1e} (net not circular?)",
                where=quad,
                residual=float(res[worst]),
            )
    return net


def quad_loop_residual(corners, seed) -> np.ndarray:
    """Propagate ``seed`` around ``i -> j -> k -> l -> i`` and return ``|N~_i - N_i|``.

    ``corners`` holds embedded quadruples ``(..., 4, 4)``.  The residual is
    relative to ``max(1, largest |N| met along the loop)``, the size of the
    rounding error each step can introduce.
    """
    corners = np.asarray(corners, dtype=float)
    seed = np.asarray(seed, dtype=float)
    N = seed
    scale = np.maximum(1.0, np.max(np.abs(seed), axis=-1))
    for s in range(4):
        N = propagate_edge(corners[..., (s + 1) % 4, :] - corners[..., s, :], N)
        scale = np.maximum(scale, np.max(np.abs(N), axis=-1))
    return np.max(np.abs(N - seed), axis=-1) / scale


def loop_residuals(X: SurfaceNet, N: LightconeNet) -> np.ndarray:
    """Loop residual of every quad, seeding each loop with ``N`` at its vertex ``i``."""
    corners = quad_corners(X.embedded())
    return quad_loop_residual(corners, N.N[:-1, :-1])


def edge_alphas(X: SurfaceNet, N: LightconeNet) -> tuple[np.ndarray, np.ndarray]:
    """Propagation factors ``alpha`` on horizontal and vertical edges (from the lower vertex)."""
    dh, dv = forward_differences(X.embedded())
    return edge_alpha(dh, N.N[:-1, :]), edge_alpha(dv, N.N[:, :-1])


# -- closed forms ------------------------------------------------------------


def gauss_from_phi(domain: GridDomain, phi: np.ndarray) -> LightconeNet:
    """``N = -(1 + |phi|^2, 2 Re phi, -2 Im phi, -1 + |phi|^2) / 2``."""
    phi = np.asarray(phi, dtype=complex)
    a2 = np.abs(phi) ** 2
    N = -0.5 * np.stack([1.0 + a2, 2.0 * phi.real, -2.0 * phi.imag, a2 - 1.0], axis=-1)
    return LightconeNet(domain, N)


def gauss_closed_form(g: HolomorphicGrid | None, h: HolomorphicGrid | None) -> LightconeNet:
    """Lightlike Gauss map of the net with Weierstrass data ``(h, g)``; ``phi = conj(h) + g``.

    Either argument may be ``None`` (treated as zero): ``h=None`` gives the
    Gauss map of the zero mean curvature net of ``g``, ``g=None`` that of the
    sphere term of ``h``.
    """
    if g is None and h is None:
        raise ValueError("need at least one of g, h")
    domain = (g or h).domain
    if g is not None and h is not None and g.domain != h.domain:
        raise ValueError("g and h live on different domains")
    phi = np.zeros(domain.shape, dtype=complex)
    if g is not None:
        phi = phi + g.values
    if h is not None:
        phi = phi + np.conj(h.values)
    return gauss_from_phi(domain, phi)


def gauss_nu(N: LightconeNet, tol: float = 1e-10) -> SurfaceNet:
    """Gauss map ``nu = N - PTILDE`` as isotropic points on ``l = -(x^2 + y^2) / 2``."""
    off = np.abs(mink_form(N.N, P) - 1.0)
    scale = np.maximum(1.0, np.max(np.abs(N.N), axis=-1))
    if np.any(off > tol * scale):
        raise NotIsotropicError(f"(N, P) != 1 (max deviation {float(np.max(off)):.3e})")
    nu = N.N - PTILDE
    pts = np.stack([mink_form(nu, PTILDE), nu[..., 1], nu[..., 2]], axis=-1)
    return SurfaceNet(N.domain, pts)


def unit_sphere_residual(nu: SurfaceNet) -> float:
    """Largest ``|l + (x^2 + y^2) / 2|`` relative to ``max(1, |l|)``."""
    l = nu.points[..., 0]
    r2 = np.sum(nu.points[..., 1:] ** 2, axis=-1)
    return float(np.max(np.abs(l + 0.5 * r2) / np.maximum(1.0, np.abs(l))))


# -- mixed areas -------------------------------------------------------------


def _edge_parallel_residual(qa: np.ndarray, qb: np.ndarray, planar: bool) -> np.ndarray:
    """``|ea ^ eb|`` over corresponding edges, scaled by the longest edges of each quad.

    Scaling per quad rather than per edge keeps a vanishing edge (e.g. a Gauss
    map that does not move across an edge) from reading as non-parallel.
    """
    ea = np.roll(qa, -1, axis=-2) - qa
    eb = np.roll(qb, -1, axis=-2) - qb
    cross = np.abs(wedge2(ea, eb)) if planar else np.linalg.norm(wedge(ea, eb), axis=-1)
    scale = np.max(np.linalg.norm(ea, axis=-1), axis=-1) * np.max(np.linalg.norm(eb, axis=-1), axis=-1)
    worst = np.max(cross, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(scale > 0, worst / np.where(scale > 0, scale, 1.0), 0.0)


def edge_parallel_residuals(A: SurfaceNet, B: SurfaceNet) -> np.ndarray:
    """Per-quad ``|sin angle|`` between corresponding edges of two nets on one domain."""
    if A.domain != B.domain:
        raise ValueError(f"domain mismatch: {A.domain} vs {B.domain}")
    return _edge_parallel_residual(quad_corners(A.embedded()), quad_corners(B.embedded()), False)


def _require_edge_parallel(qa, qb, planar, tol):
    res = _edge_parallel_residual(qa, qb, planar)
    if np.any(res > tol):
        raise ConsistencyError(
            f"quads are not edge-parallel (max |sin angle| = {float(np.max(res)):.3e})",
            residual=float(np.max(res)),
        )


def mixed_area_bivector(Xa, Xb, tol: float = 1e-8, check: bool = True) -> np.ndarray:
    """``((Xa_i - Xa_k) ^ (Xb_j - Xb_l) - (Xa_j - Xa_l) ^ (Xb_i - Xb_k)) / 4`` for quadruples of Vec4."""
    qa = np.asarray(Xa, dtype=float)
    qb = np.asarray(Xb, dtype=float)
    if check:
        _require_edge_parallel(qa, qb, False, tol)
    d_ik_a = qa[..., 0, :] - qa[..., 2, :]
    d_jl_a = qa[..., 1, :] - qa[..., 3, :]
    d_ik_b = qb[..., 0, :] - qb[..., 2, :]
    d_jl_b = qb[..., 1, :] - qb[..., 3, :]
    return 0.25 * (wedge(d_ik_a, d_jl_b) - wedge(d_jl_a, d_ik_b))


def mixed_area_planar(xa, xb, tol: float = 1e-8, check: bool = True) -> np.ndarray | float:
    """Scalar mixed area of planar quadruples ``(..., 4, 2)``; ``A(x, x)`` is the signed area."""
    qa = np.asarray(xa, dtype=float)
    qb = np.asarray(xb, dtype=float)
    if check:
        _require_edge_parallel(qa, qb, True, tol)
    out = 0.25 * (
        wedge2(qa[..., 0, :] - qa[..., 2, :], qb[..., 1, :] - qb[..., 3, :])
        - wedge2(qa[..., 1, :] - qa[..., 3, :], qb[..., 0, :] - qb[..., 2, :])
    )
    return float(out) if np.ndim(out) == 0 else out


# -- mean curvature ----------------------------------------------------------


def mean_curvature(
    X: SurfaceNet,
    N: LightconeNet,
    tol: float = 1e-8,
    allow_degenerate: bool = False,
    check_parallel: bool = True,
) -> CurvatureField:
    """Per-quad mean curvature ``H = -A(x, n) / A(x, x)`` with bivector cross-check.

    ``bivector_residual`` is ``|A(X, N) + H A(X, X)|`` in Lambda^2 R^{3,1}.
    Degenerate quads (``A(x, x) = 0``) raise unless ``allow_degenerate``, in
    which case their H is NaN and they are flagged.
    """
    if X.domain != N.domain:
        raise ValueError("net and Gauss map live on different domains")
    x = quad_corners(X.planar)
    n = quad_corners(N.N[..., 1:3])
    Xq = quad_corners(X.embedded())
    Nq = quad_corners(N.N)
    if check_parallel:
        _require_edge_parallel(Xq, Nq, False, tol)
    a_xx = mixed_area_planar(x, x, check=False)
    a_xn = mixed_area_planar(x, n, check=False)
    a_xx = np.asarray(a_xx, dtype=float)
    a_xn = np.asarray(a_xn, dtype=float)
    longest = np.max(np.linalg.norm(np.roll(x, -1, axis=-2) - x, axis=-1), axis=-1, initial=0.0)
    degenerate = np.abs(a_xx) <= 1e-14 * longest**2
    if np.any(degenerate) and not allow_degenerate:
        a, b = np.argwhere(degenerate)[0]
        raise DegenerateError(
            f"quad {(int(a) + X.domain.m_min, int(b) + X.domain.n_min)} has zero area A(x, x)"
        )
    with np.errstate(divide="ignore", invalid="ignore"):
        H = np.where(degenerate, np.nan, -a_xn / np.where(degenerate, 1.0, a_xx))
    bv = mixed_area_bivector(Xq, Nq, check=False) + np.nan_to_num(H)[..., None] * mixed_area_bivector(
        Xq, Xq, check=False
    )
    bres = np.linalg.norm(bv, axis=-1)
    return CurvatureField(X.domain, H, a_xx, a_xn, bres, degenerate)


def mean_curvature_quad(X: SurfaceNet, N: LightconeNet, quad, tol: float = 1e-8) -> QuadCurvature:
    """Mean curvature on the single quad with lower-left corner ``quad = (m, n)``."""
    m, n = quad
    d = X.domain
    if not (d.m_min <= m < d.m_max and d.n_min <= n < d.n_max):
        raise KeyError(f"quad {quad} outside {d}")
    sub = GridDomain(m, m + 1, n, n + 1)
    a, b = d.index(quad)
    Xs = SurfaceNet(sub, X.points[a : a + 2, b : b + 2])
    Ns = LightconeNet(sub, N.N[a : a + 2, b : b + 2])
    return mean_curvature(Xs, Ns, tol).at(m, n)


# -- beta parallelism and circularity ---------------------------------------


@dataclass
class EdgeReport:
    h_residuals: np.ndarray
    v_residuals: np.ndarray
    max_residual: float
    passed: bool


def edge_betas(g: HolomorphicGrid, H: float) -> tuple[np.ndarray, np.ndarray]:
    """``beta = -m |dg|^2 - H`` on horizontal and vertical edges."""
    dg_h, dg_v = g.differences()
    return (
        -g.labels.h_grid() * np.abs(dg_h) ** 2 - H,
        -g.labels.v_grid() * np.abs(dg_v) ** 2 - H,
    )


def beta_check(g: HolomorphicGrid, H: float, Y: SurfaceNet, N: LightconeNet, tol: float = 1e-10) -> EdgeReport:
    """Edge residuals ``|dN - beta dY|`` (max over the four embedded components)."""
    bh, bv = edge_betas(g, H)
    dNh, dNv = forward_differences(N.N)
    dYh, dYv = forward_differences(Y.embedded())
    rh = np.max(np.abs(dNh - bh[..., None] * dYh), axis=-1)
    rv = np.max(np.abs(dNv - bv[..., None] * dYv), axis=-1)
    worst = float(max(np.max(rh, initial=0.0), np.max(rv, initial=0.0)))
    return EdgeReport(rh, rv, worst, worst <= tol)


def coplanarity_residual(corners) -> np.ndarray:
    """Tetrahedron volume of the four ``(l, x, y)`` points over the cubed mean edge length."""
    q = np.asarray(corners, dtype=float)
    e = q[..., 1:, :] - q[..., :1, :]
    vol = np.abs(np.linalg.det(e)) / 6.0
    edges = np.linalg.norm(np.roll(q, -1, axis=-2) - q, axis=-1)
    mean = np.mean(edges, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(mean > 0, vol / np.where(mean > 0, mean, 1.0) ** 3, 0.0)


def concircularity_residual(planar_corners) -> np.ndarray:
    """``|Im cr|`` of the four planar points read as complex numbers."""
    q = np.asarray(planar_corners, dtype=float)
    z = q[..., 0] + 1j * q[..., 1]
    zi, zj, zk, zl = z[..., 0], z[..., 1], z[..., 2], z[..., 3]
    den = (zj - zk) * (zl - zi)
    with np.errstate(divide="ignore", invalid="ignore"):
        cr = (zi - zj) * (zk - zl) / den
    return np.where(den != 0, np.abs(np.imag(cr)), np.inf)


def circularity_residuals(X: SurfaceNet) -> tuple[np.ndarray, np.ndarray]:
    """Coplanarity and concircularity residuals for every quad, shape ``(W-1, H-1)`` each."""
    return coplanarity_residual(quad_corners(X.points)), concircularity_residual(quad_corners(X.planar))


def circularity_check(X: SurfaceNet, quad, tol: float = 1e-9) -> tuple[float, float]:
    """``(coplanarity, concircularity)`` residuals of one quad."""
    a, b = X.domain.index(quad)
    q = X.points[a : a + 2, b : b + 2]
    corners = np.stack([q[0, 0], q[1, 0], q[1, 1], q[0, 1]])
    return float(coplanarity_residual(corners)), float(concircularity_residual(corners[:, 1:]))


def seed_from_frame(planar_corners, A: float, B: float) -> np.ndarray:
    """``A T + B Nrm - (A^2 + B^2) P / 2 + PTILDE`` at vertex ``i`` of a concircular quad.

    ``T`` and ``Nrm`` are the unit tangent and inward normal of the
    circumcircle at ``x_i``.
    """
    q = np.asarray(planar_corners, dtype=float)
    center = circumcenter(q[0], q[1], q[2])
    radial = q[0] - center
    radial = radial / np.linalg.norm(radial)
    tangent = np.array([-radial[1], radial[0]])
    return lightcone_point(A * tangent - B * radial)


def circumcenter(a, b, c) -> np.ndarray:
    a, b, c = (np.asarray(p, dtype=float) for p in (a, b, c))
    d = 2.0 * wedge2(b - a, c - a)
    if d == 0:
        raise DegenerateError("collinear points have no circumcircle")
    bb = np.dot(b - a, b - a)
    cc = np.dot(c - a, c - a)
    ux = ((c - a)[1] * bb - (b - a)[1] * cc) / d
    uy = ((b - a)[0] * cc - (c - a)[0] * bb) / d
    return a + np.array([ux, uy])
