import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from curvebound.curve import DiscreteCurve
from curvebound.surface import SurfaceModel

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

KINDS = ["plane", "torus", "sphere", "hyperbolic"]


def model(kind):
    return {
        "plane": SurfaceModel.plane(),
        "torus": SurfaceModel.torus(),
        "sphere": SurfaceModel.sphere(1.0),
        "hyperbolic": SurfaceModel.hyperbolic(1.0),
    }[kind]


def circle(n=512, r=1.0, center=(0.0, 0.0), phase=0.0):
    t = np.linspace(0, 2 * np.pi, n, endpoint=False) + phase
    return DiscreteCurve(SurfaceModel.plane(), np.c_[center[0] + r * np.cos(t), center[1] + r * np.sin(t)])


def horizontal(n=512, y=0.0):
    x = np.arange(n) * (2 * np.pi / n)
    return DiscreteCurve(SurfaceModel.torus(), np.c_[x, np.full(n, y)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
