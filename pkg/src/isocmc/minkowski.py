"""Minkowski space R^{3,1} and the lightcone model of isotropic 3-space.

Vectors of R^{3,1} are numpy arrays whose last axis holds ``(t, x, y, z)``;
the bilinear form has signature ``(-+++)``.  Points of isotropic space are
arrays with last axis ``(l, x, y)`` where ``l`` is the vertical (height)
coordinate.  Every function here broadcasts over leading axes.

Bivectors in Lambda^2 R^{3,1} are arrays with last axis of length 6, on the
basis ``t^x, t^y, t^z, x^y, x^z, y^z``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, NotIsotropicError

DEFAULT_TOL = 1e-10

P = np.array([1.0, 0.0, 0.0, 1.0])
PTILDE = np.array([-0.5, 0.0, 0.0, 0.5])

_METRIC = np.array([-1.0, 1.0, 1.0, 1.0])

BIVECTOR_BASIS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
_BV_U = np.array([u for u, _ in BIVECTOR_BASIS])
_BV_V = np.array([v for _, v in BIVECTOR_BASIS])


def vec4(t, x, y, z) -> np.ndarray:
    return np.array([t, x, y, z], dtype=float)


def mink_form(a, b) -> np.ndarray | float:
    """Minkowski inner product ``-a_t b_t + a_x b_x + a_y b_y + a_z b_z``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.sum(_METRIC * a * b, axis=-1)


def project_components(X):
    """Split ``X = plane + p_coeff * P + ptilde_coeff * PTILDE``.

    ``plane`` is orthogonal to both P and PTILDE; ``p_coeff = (X, PTILDE)``
    and ``ptilde_coeff = (X, P)``.
    """
    X = np.asarray(X, dtype=float)
    p_coeff = mink_form(X, PTILDE)
    ptilde_coeff = mink_form(X, P)
    plane = (
        X
        - np.asarray(p_coeff)[..., None] * P
        - np.asarray(ptilde_coeff)[..., None] * PTILDE
    )
    return plane, p_coeff, ptilde_coeff


def planar_part(X) -> np.ndarray:
    """Orthoprojection onto R^2 = <P, PTILDE>^perp, returned as ``(x, y)``."""
    X = np.asarray(X, dtype=float)
    # For the normalized P and PTILDE the projection only keeps x and y.
    return X[..., 1:3].copy()


def embed_iso(p) -> np.ndarray:
    """Chart ``(l, x, y) -> (l, x, y, l)`` of isotropic space inside R^{3,1}."""
    p = np.asarray(p, dtype=float)
    return np.concatenate([p, p[..., :1]], axis=-1)


def extract_iso(X, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Inverse of :func:`embed_iso`; rejects vectors off the hyperplane (X, P) = 0."""
    X = np.asarray(X, dtype=float)
    off = np.abs(mink_form(X, P))
    if np.any(off > tol):
        raise NotIsotropicError(
            f"vector is not isotropic: |(X, P)| = {float(np.max(off)):.3e} > {tol:.1e}"
        )
    # l is read through (X, PTILDE), which tolerates an off-plane residue in t - z.
    return np.stack([mink_form(X, PTILDE), X[..., 1], X[..., 2]], axis=-1)


def wedge(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a[..., _BV_U] * b[..., _BV_V] - a[..., _BV_V] * b[..., _BV_U]


def wedge2(a, b) -> np.ndarray:
    """Planar wedge ``a_x b_y - a_y b_x`` (the single component of Lambda^2 R^2)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def lightcone_point(v) -> np.ndarray:
    """The point of L cap {(X, P) = 1} with planar part ``v``.

    Every such point has the form ``v - |v|^2/2 P + PTILDE``.
    """
    v = np.asarray(v, dtype=float)
    s = -0.5 * np.sum(v * v, axis=-1)
    out = np.asarray(s)[..., None] * P + PTILDE
    out = np.broadcast_to(out, v.shape[:-1] + (4,)).copy()
    out[..., 1:3] += v
    return out


@dataclass(frozen=True)
class IsoSphere:
    """Isotropic sphere with center ``(c0, c1, c2)`` and radius ``r``.

    As a graph it is the paraboloid ``l = ((x - c1)^2 + (y - c2)^2) / (2r) + c0``
    and it has constant mean curvature ``1/r``.
    """

    c0: float
    c1: float
    c2: float
    r: float

    def __post_init__(self):
        if self.r == 0:
            raise DegenerateError("sphere radius must be nonzero")

    @property
    def mean_curvature(self) -> float:
        return 1.0 / self.r

    @property
    def center(self) -> np.ndarray:
        return embed_iso([self.c0, self.c1, self.c2])

    @property
    def lightcone_center(self) -> np.ndarray:
        """The vertex ``c + r PTILDE`` of the affine lightcone cutting out the sphere."""
        return self.center + self.r * PTILDE

    def height(self, x, y):
        return sphere_height(self, x, y)

    def lightlike_normal(self, X) -> np.ndarray:
        """``(S~ - X) / r``: null, (N, P) = 1, and moves by ``-dX/r`` along the sphere."""
        X = np.asarray(X, dtype=float)
        return (self.lightcone_center - X) / self.r


def sphere_height(s: IsoSphere, x, y):
    if s.r == 0:
        raise DegenerateError("sphere radius must be nonzero")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = ((x - s.c1) ** 2 + (y - s.c2) ** 2) / (2.0 * s.r) + s.c0
    return float(out) if out.ndim == 0 else out
