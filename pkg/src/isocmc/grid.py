"""Rectangular Z^2 domains, edge labels and edge-wise integration.

Grid functions are stored as arrays indexed ``[m - m_min, n - n_min, ...]``.
Horizontal edges ``((m, n), (m+1, n))`` live in arrays of shape ``(W-1, H)``
and vertical edges ``((m, n), (m, n+1))`` in arrays of shape ``(W, H-1)``.
The elementary quadrilateral with lower-left corner ``(m, n)`` has vertices
``i=(m,n), j=(m+1,n), k=(m+1,n+1), l=(m,n+1)``.

Enumeration order is row-major with ``n`` as the row: ``m`` varies fastest.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateError

Vertex = tuple[int, int]
Edge = tuple[Vertex, Vertex]


class Enumeration(NamedTuple):
    vertices: list[Vertex]
    h_edges: list[Edge]
    v_edges: list[Edge]
    quads: list[tuple[Vertex, Vertex, Vertex, Vertex]]


@dataclass(frozen=True)
class GridDomain:
    """Inclusive rectangle ``[m_min, m_max] x [n_min, n_max]`` in Z^2."""

    m_min: int
    m_max: int
    n_min: int
    n_max: int

    def __post_init__(self):
        for name in ("m_min", "m_max", "n_min", "n_max"):
            if int(getattr(self, name)) != getattr(self, name):
                raise ValueError(f"{name} must be an integer")
        if self.m_max < self.m_min or self.n_max < self.n_min:
            raise ValueError(
                f"empty grid: m in [{self.m_min}, {self.m_max}], n in [{self.n_min}, {self.n_max}]"
            )

    @classmethod
    def from_shape(cls, width: int, height: int, m_min: int = 0, n_min: int = 0):
        return cls(m_min, m_min + width - 1, n_min, n_min + height - 1)

    @property
    def width(self) -> int:
        return self.m_max - self.m_min + 1

    @property
    def height(self) -> int:
        return self.n_max - self.n_min + 1

    @property
    def shape(self) -> tuple[int, int]:
        return (self.width, self.height)

    @property
    def has_quads(self) -> bool:
        return self.width > 1 and self.height > 1

    @property
    def base(self) -> Vertex:
        return (self.m_min, self.n_min)

    def __contains__(self, v) -> bool:
        m, n = v
        return self.m_min <= m <= self.m_max and self.n_min <= n <= self.n_max

    def index(self, v: Vertex) -> tuple[int, int]:
        if v not in self:
            raise KeyError(f"vertex {v} outside {self}")
        return (v[0] - self.m_min, v[1] - self.n_min)

    def flat_index(self, v: Vertex) -> int:
        """0-based position of ``v`` in the row-major vertex order."""
        a, b = self.index(v)
        return b * self.width + a

    def mn(self) -> tuple[np.ndarray, np.ndarray]:
        """Integer coordinate arrays of shape ``(W, H)``."""
        m = np.arange(self.m_min, self.m_max + 1)
        n = np.arange(self.n_min, self.n_max + 1)
        return np.meshgrid(m, n, indexing="ij")

    def quad_corners(self) -> tuple[np.ndarray, np.ndarray]:
        """Lower-left corner coordinates of all quads, arrays of shape ``(W-1, H-1)``."""
        m, n = self.mn()
        return m[:-1, :-1], n[:-1, :-1]

    def enumerate(self) -> Enumeration:
        ms = range(self.m_min, self.m_max + 1)
        ns = range(self.n_min, self.n_max + 1)
        vertices = [(m, n) for n in ns for m in ms]
        h_edges = [((m, n), (m + 1, n)) for n in ns for m in ms if m < self.m_max]
        v_edges = [((m, n), (m, n + 1)) for n in ns if n < self.n_max for m in ms]
        quads = [
            ((m, n), (m + 1, n), (m + 1, n + 1), (m, n + 1))
            for n in ns
            if n < self.n_max
            for m in ms
            if m < self.m_max
        ]
        return Enumeration(vertices, h_edges, v_edges, quads)

    def to_rows(self, values: np.ndarray) -> np.ndarray:
        """Flatten a ``(W, H, ...)`` grid array into row-major vertex order."""
        values = np.asarray(values)
        return np.swapaxes(values, 0, 1).reshape((self.width * self.height,) + values.shape[2:])

    def from_rows(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows)
        return np.swapaxes(rows.reshape((self.height, self.width) + rows.shape[1:]), 0, 1)


@dataclass(frozen=True)
class EdgeLabels:
    """Real nonzero edge labels, constant along strips.

    ``h_labels[a]`` labels every horizontal edge ``((m_min+a, n), (m_min+a+1, n))``,
    ``v_labels[b]`` every vertical edge ``((m, n_min+b), (m, n_min+b+1))``.
    Opposite edges of a quad therefore always carry the same label.
    """

    domain: GridDomain
    h_labels: np.ndarray
    v_labels: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.h_labels, dtype=float).reshape(-1)
        v = np.asarray(self.v_labels, dtype=float).reshape(-1)
        if h.shape != (self.domain.width - 1,) or v.shape != (self.domain.height - 1,):
            raise ValueError(
                f"label strips have shapes {h.shape}, {v.shape}; "
                f"expected ({self.domain.width - 1},), ({self.domain.height - 1},)"
            )
        if np.any(h == 0) or np.any(v == 0) or not (np.all(np.isfinite(h)) and np.all(np.isfinite(v))):
            raise DegenerateError("edge labels must be finite and nonzero")
        object.__setattr__(self, "h_labels", h)
        object.__setattr__(self, "v_labels", v)

    @classmethod
    def constant(cls, domain: GridDomain, h_value: float, v_value: float) -> "EdgeLabels":
        return cls(
            domain,
            np.full(domain.width - 1, float(h_value)),
            np.full(domain.height - 1, float(v_value)),
        )

    def reciprocal(self) -> "EdgeLabels":
        return EdgeLabels(self.domain, 1.0 / self.h_labels, 1.0 / self.v_labels)

    def scaled(self, factor: float) -> "EdgeLabels":
        return EdgeLabels(self.domain, factor * self.h_labels, factor * self.v_labels)

    def h_grid(self) -> np.ndarray:
        """Labels broadcast onto the ``(W-1, H)`` horizontal edge array."""
        return np.repeat(self.h_labels[:, None], self.domain.height, axis=1)

    def v_grid(self) -> np.ndarray:
        return np.repeat(self.v_labels[None, :], self.domain.width, axis=0)

    def quad_ratio(self) -> np.ndarray:
        """``m_il / m_ij`` per quad, shape ``(W-1, H-1)``."""
        return self.v_labels[None, :] / self.h_labels[:, None]


def label_of(labels: EdgeLabels, edge: Edge) -> float:
    (m0, n0), (m1, n1) = sorted(edge)
    d = labels.domain
    if (m0, n0) not in d or (m1, n1) not in d:
        raise KeyError(f"edge {edge} outside {d}")
    if n0 == n1 and m1 == m0 + 1:
        return float(labels.h_labels[m0 - d.m_min])
    if m0 == m1 and n1 == n0 + 1:
        return float(labels.v_labels[n0 - d.n_min])
    raise KeyError(f"{edge} is not an edge of the grid")


def forward_differences(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Edge increments ``f_j - f_i`` along horizontal and vertical edges."""
    values = np.asarray(values)
    return values[1:, :] - values[:-1, :], values[:, 1:] - values[:, :-1]


def midpoints(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Edge averages ``(f_i + f_j) / 2`` along horizontal and vertical edges."""
    values = np.asarray(values)
    return 0.5 * (values[1:, :] + values[:-1, :]), 0.5 * (values[:, 1:] + values[:, :-1])


def quad_closure(h_inc: np.ndarray, v_inc: np.ndarray) -> np.ndarray:
    """Signed sum of forward increments around each quad (``i -> j -> k`` minus ``i -> l -> k``)."""
    return h_inc[:, :-1] + v_inc[1:, :] - v_inc[:-1, :] - h_inc[:, 1:]


def integrate_increments(
    h_inc: np.ndarray, v_inc: np.ndarray, base: tuple[int, int], base_value
) -> np.ndarray:
    """Sum forward increments from the base, along row ``n_min`` then up each column.

    ``base`` is an array index (not grid coordinates).  The caller is
    responsible for having checked closure; otherwise the result depends on
    this path.
    """
    h_inc = np.asarray(h_inc)
    v_inc = np.asarray(v_inc)
    width = h_inc.shape[0] + 1
    height = v_inc.shape[1] + 1
    tail = h_inc.shape[2:]
    dtype = np.result_type(h_inc, v_inc, np.asarray(base_value))
    out = np.zeros((width, height) + tail, dtype=dtype)
    out[1:, 0] = np.cumsum(h_inc[:, 0], axis=0)
    out[:, 1:] = out[:, :1] + np.cumsum(v_inc, axis=1)
    return out - out[base] + np.asarray(base_value, dtype=dtype)
