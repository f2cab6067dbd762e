import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from isocmc.grid import EdgeLabels, GridDomain
from isocmc.holomorphic import from_boundary
from isocmc.surfaces import ExampleSpec

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def family_specs(H):
    """One spec per family at a desk-scale grid size."""
    return [
        ExampleSpec("doubly-channel", H, GridDomain(-10, 10, -10, 10), M=6, N=2),
        ExampleSpec("cylinder", H, GridDomain(-5, 5, -5, 5), N=3),
        ExampleSpec("delaunay", H, GridDomain(-5, 5, 0, 8), N=4, c=-0.5),
    ]


ALL_SPECS = [s for H in (1.0, -1.0, 0.5) for s in family_specs(H)]


def spec_id(s):
    return f"{s.family}-H{s.H:g}"


def random_holomorphic(seed, width=6, height=5, jitter=0.05):
    """A discrete holomorphic grid with generic (non -1) cross-ratios."""
    rng = np.random.default_rng(seed)
    d = GridDomain(0, width - 1, 0, height - 1)
    labels = EdgeLabels(d, rng.uniform(1.0, 2.0, width - 1), -rng.uniform(1.0, 2.0, height - 1))
    m, n = d.mn()
    z = 0.3 * (m + 1j * n) + jitter * (rng.normal(size=m.shape) + 1j * rng.normal(size=m.shape))
    return from_boundary(labels, z[:, 0], z[0, :])


@pytest.fixture(params=ALL_SPECS, ids=spec_id)
def spec(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
