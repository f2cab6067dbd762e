"""OBJ and CSV output for surface nets.

OBJ vertices map ``(l, x, y)`` to spatial ``(x, y, l)`` so the vertical
direction renders as up.  Vertices are written in row-major order (``m``
fastest) and each quad becomes one face ``i j k l`` (1-based).  A leading
comment records the grid ranges; :func:`read_obj` needs it to rebuild the
domain, so only files written here can be read back.
"""

from __future__ import annotations

import csv
import io
import os
import tempfile
from pathlib import Path

import numpy as np

from .gauss import LightconeNet, circularity_residuals, mean_curvature
from .grid import GridDomain
from .weierstrass import SurfaceNet

GRID_TAG = "# isocmc-grid"
CSV_HEADER = (
    "m",
    "n",
    "H",
    "area_xx",
    "area_xn",
    "bivector_residual",
    "coplanarity",
    "concircularity",
    "flag",
)


def atomic_write(path, text: str) -> None:
    """Write ``text`` to a temporary file next to ``path`` and rename it into place."""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _num(x: float) -> str:
    return format(float(x), ".17g")


def obj_text(net: SurfaceNet) -> str:
    d = net.domain
    lines = [f"{GRID_TAG} {d.m_min} {d.m_max} {d.n_min} {d.n_max}"]
    for l, x, y in d.to_rows(net.points):
        lines.append(f"v {_num(x)} {_num(y)} {_num(l)}")
    for i, j, k, l in d.enumerate().quads:
        idx = [d.flat_index(v) + 1 for v in (i, j, k, l)]
        lines.append("f " + " ".join(map(str, idx)))
    return "\n".join(lines) + "\n"


def export_obj(net: SurfaceNet, path) -> None:
    atomic_write(path, obj_text(net))


def read_obj(path) -> SurfaceNet:
    domain = None
    rows = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            parts = raw.split()
            if not parts:
                continue
            if raw.startswith(GRID_TAG):
                domain = GridDomain(*(int(p) for p in parts[2:6]))
            elif parts[0] == "v":
                x, y, l = (float(p) for p in parts[1:4])
                rows.append((l, x, y))
    if domain is None:
        raise ValueError(f"{path}: missing '{GRID_TAG}' header; not an isocmc OBJ file")
    if len(rows) != domain.width * domain.height:
        raise ValueError(f"{path}: {len(rows)} vertices for a {domain.width}x{domain.height} grid")
    return SurfaceNet(domain, domain.from_rows(np.array(rows, dtype=float)))


def _cell(x) -> str:
    x = float(x)
    return "nan" if np.isnan(x) else repr(x)


def curvature_rows(net: SurfaceNet, gauss: LightconeNet, tol: float = 1e-8):
    field = mean_curvature(net, gauss, tol=tol, allow_degenerate=True, check_parallel=False)
    cop, conc = circularity_residuals(net)
    d = net.domain
    for n in range(d.n_min, d.n_max):
        for m in range(d.m_min, d.m_max):
            a, b = m - d.m_min, n - d.n_min
            yield (
                m,
                n,
                field.H[a, b],
                field.area_xx[a, b],
                field.area_xn[a, b],
                field.bivector_residual[a, b],
                cop[a, b],
                conc[a, b],
                int(field.degenerate[a, b]),
            )


def curvature_csv(net: SurfaceNet, gauss: LightconeNet, tol: float = 1e-8) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for m, n, *vals, flag in curvature_rows(net, gauss, tol):
        writer.writerow([m, n, *(_cell(v) for v in vals), flag])
    return buf.getvalue()


def curvature_table(net: SurfaceNet, gauss: LightconeNet, path, tol: float = 1e-8) -> None:
    atomic_write(path, curvature_csv(net, gauss, tol))


def read_curvature_table(path) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        return [
            {k: (int(v) if k in ("m", "n", "flag") else float(v)) for k, v in row.items()}
            for row in csv.DictReader(fh)
        ]
