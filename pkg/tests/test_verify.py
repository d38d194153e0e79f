import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvebound.constants import BoundsProfile, iso_constants
from curvebound.curve import DiscreteCurve
from curvebound.errors import DomainError, InputError, ParameterError, PreconditionError
from curvebound.surface import SurfaceModel, distance
from curvebound.torus_lab import family_curve, graph_curve
from curvebound.verify import (
    DEFAULT_SEED,
    Region2D,
    check_ball_monotonicity,
    check_farthest_point_curvature,
    check_isoperimetric_arc,
    check_isoperimetric_loop,
    check_main_inequality,
    check_small_ball_curvature,
    default_seed,
    farthest_point_suite,
    find_osculating_free_disk,
    inscribed_disk_oracle,
    isoperimetric_arc_suite,
    isoperimetric_suite,
    polar_points,
    profile_for_surface,
    small_ball_suite,
)

from conftest import KINDS, circle, horizontal

PLANE = SurfaceModel.plane()
TORUS = SurfaceModel.torus()
SPHERE = SurfaceModel.sphere(1.0)
HYP = SurfaceModel.hyperbolic(1.0)
FLAT = BoundsProfile()


def ellipse(a, b, n=1024):
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    return DiscreteCurve(PLANE, np.c_[a * np.cos(t), b * np.sin(t)])


def rectangle_on_torus(w, h, n_side=200, origin=(1.0, 1.0)):
    x0, y0 = origin
    e = np.linspace(0, 1, n_side, endpoint=False)
    pts = np.concatenate([
        np.c_[x0 + w * e, np.full(n_side, y0)],
        np.c_[np.full(n_side, x0 + w), y0 + h * e],
        np.c_[x0 + w - w * e, np.full(n_side, y0 + h)],
        np.c_[np.full(n_side, x0), y0 + h - h * e],
    ])
    return DiscreteCurve(TORUS, pts)


# --- seeds and verdicts -------------------------------------------------------------

def test_default_seed(monkeypatch):
    monkeypatch.delenv("CURVEBOUND_SEED", raising=False)
    assert default_seed() == DEFAULT_SEED == 0xC0FFEE
    monkeypatch.setenv("CURVEBOUND_SEED", "0x10")
    assert default_seed() == 16
    monkeypatch.setenv("CURVEBOUND_SEED", "abc")
    with pytest.raises(InputError):
        default_seed()


def test_verdict_dict_is_plain():
    v = check_isoperimetric_loop(circle(256), FLAT)
    d = v.to_dict()
    assert type(d["passed"]) is bool and type(d["lhs"]) is float
    assert set(d) >= {"engine", "passed", "status", "branch", "seed", "case"}


def test_profile_for_surface():
    assert profile_for_surface(TORUS).r0 == pytest.approx(math.pi)
    assert profile_for_surface(SPHERE).r0 == pytest.approx(0.999 * math.pi)
    assert profile_for_surface(HYP, Lambda=2.0).Lambda == 2.0


# --- isoperimetric ---------------------------------------------------------------

def test_isoperimetric_unit_circle():
    c = circle(4096)
    v = check_isoperimetric_loop(c, FLAT, center=(0, 0))
    assert v.passed
    assert v.lhs == pytest.approx(math.pi, rel=1e-5)
    assert v.rhs == pytest.approx(2 * math.pi**2, rel=1e-5)
    assert v.lhs / c.polygon_length**2 == pytest.approx(1 / (4 * math.pi), rel=1e-5)


def test_isoperimetric_sphere_cap():
    # frozen at 40 digits: 2 pi (1 - cos pi/4), 2 pi sin pi/4
    th = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
    cap = DiscreteCurve(SPHERE, polar_points(SPHERE, (0, 0, 1), np.full(th.size, math.pi / 4), th))
    v = check_isoperimetric_loop(cap, BoundsProfile(K0=1.0, r0=3.0), center=(0, 0, 1))
    assert v.passed
    assert v.lhs == pytest.approx(1.8403023690212202299, rel=1e-6)
    assert cap.polygon_length == pytest.approx(4.4428829381583662470, rel=1e-6)


def test_isoperimetric_precondition():
    with pytest.raises(PreconditionError, match="radius"):
        check_isoperimetric_loop(circle(256, r=2.0), BoundsProfile(r0=1.0))


def test_isoperimetric_arc_semicircle():
    L = DiscreteCurve(PLANE, np.c_[np.linspace(-3, 3, 601), np.zeros(601)], closed=False)
    t = np.linspace(np.pi, 0, 2001)
    g = DiscreteCurve(PLANE, np.c_[np.cos(t), np.sin(t)], closed=False)
    v = check_isoperimetric_arc(g, L, BoundsProfile(i0=10.0))
    assert v.passed
    assert v.lhs == pytest.approx(math.pi / 2, rel=1e-5)
    assert v.rhs == pytest.approx(math.pi**2, rel=1e-5)


def test_isoperimetric_arc_degenerate():
    L = horizontal(512)
    g = DiscreteCurve(TORUS, L.points[10:20], closed=False)
    v = check_isoperimetric_arc(g, L, BoundsProfile(r0=math.pi))
    assert v.passed and v.lhs == pytest.approx(0.0, abs=1e-12)


def test_isoperimetric_arc_errors():
    L = horizontal(512)
    g = DiscreteCurve(TORUS, np.c_[np.linspace(0.1, 0.5, 10), np.full(10, 0.2)], closed=False)
    with pytest.raises(InputError, match="off the base"):
        check_isoperimetric_arc(g, L, BoundsProfile(r0=math.pi))
    # semicircle of radius ~1.5 between two base samples: needs a ball wider than delta = 1
    base = horizontal(2048)
    xa, xb = base.points[700, 0], base.points[1678, 0]
    t = np.linspace(np.pi, 0, 200)
    r = (xb - xa) / 2
    big = DiscreteCurve(TORUS, np.c_[xa + r + r * np.cos(t), r * np.sin(t)], closed=False)
    with pytest.raises(PreconditionError):
        check_isoperimetric_arc(big, base, BoundsProfile(r0=math.pi))


@pytest.mark.parametrize("kind", KINDS)
def test_isoperimetric_suite_small(kind):
    res = isoperimetric_suite(kind, cases=100, seed=11)
    assert len(res) == 100 and all(v.passed for v in res)
    assert [v.case for v in res] == list(range(100))
    assert all(v.seed == 11 for v in res)


def test_plane_isoperimetric_ratio_below_sharp_constant():
    res = isoperimetric_suite("plane", cases=200, seed=3)
    c_prime, _ = iso_constants(FLAT)
    worst = max(v.margin for v in res) * c_prime  # a / l^2
    assert worst <= 1 / (4 * math.pi) * 1.02


def test_isoperimetric_arc_suite_small():
    res = isoperimetric_arc_suite(cases=40, seed=5)
    assert all(v.passed for v in res)
    assert {v.resolution["surface"] for v in res} == set(KINDS)


def test_suites_are_deterministic():
    a = [v.to_dict() for v in isoperimetric_suite("sphere", cases=20, seed=9)]
    b = [v.to_dict() for v in isoperimetric_suite("sphere", cases=20, seed=9)]
    c = [v.to_dict() for v in isoperimetric_suite("sphere", cases=20, seed=10)]
    assert a == b and a != c


# --- curvature bounds ----------------------------------------------------------

def test_farthest_point_circle_and_ellipse():
    v = check_farthest_point_curvature(circle(1024, r=0.7), (0, 0), FLAT)
    assert v.passed and v.lhs == pytest.approx(1 / 0.7, rel=1e-6) and v.rhs == pytest.approx(1 / 0.7)
    v = check_farthest_point_curvature(ellipse(1.0, 0.5, 4096), (0, 0), FLAT)
    assert v.passed
    assert v.lhs == pytest.approx(4.0, rel=1e-4) and v.rhs == pytest.approx(1.0)


def test_farthest_point_beyond_rho1():
    with pytest.raises(DomainError):
        check_farthest_point_curvature(circle(512, r=2.0), (0, 0), BoundsProfile(r0=1.0))


def test_farthest_point_sphere_suite():
    res = farthest_point_suite("sphere", cases=40, seed=1, profile=BoundsProfile(K0=1.0, r0=2.0))
    assert all(v.passed for v in res)


def test_small_ball_circle_is_tight():
    v = check_small_ball_curvature(circle(1024, r=0.3), FLAT, center=(0, 0))
    assert v.passed and v.margin == pytest.approx(1.0, abs=1e-3)


def test_small_ball_rounded_square():
    t = np.linspace(0, 2 * np.pi, 2048, endpoint=False)
    p = 8
    r = (np.abs(np.cos(t)) ** p + np.abs(np.sin(t)) ** p) ** (-1 / p)
    v = check_small_ball_curvature(DiscreteCurve(PLANE, np.c_[r * np.cos(t), r * np.sin(t)]), FLAT)
    assert v.passed and v.margin > 1.5


def test_small_ball_not_applicable_for_long_torus_curve():
    v = check_small_ball_curvature(family_curve("L", 2), profile_for_surface(TORUS))
    assert v.status == "not_applicable" and v.passed


def test_small_ball_on_curved_models():
    for m in (SPHERE, HYP):
        p = profile_for_surface(m)
        th = np.linspace(0, 2 * np.pi, 1024, endpoint=False)
        c0 = (0, 0, 1) if m is SPHERE else (0.1, 0.2)
        c = DiscreteCurve(m, polar_points(m, c0, np.full(th.size, 0.6), th))
        v = check_small_ball_curvature(c, p, center=c0)
        assert v.passed and v.margin >= 1.0


@pytest.mark.parametrize("kind", KINDS)
def test_small_ball_suite_small(kind):
    res = small_ball_suite(kind, cases=15, seed=4)
    assert all(v.passed and v.status == "pass" for v in res)


# --- regions and disks ----------------------------------------------------------

def test_region_requires_marked_point_on_boundary():
    with pytest.raises(InputError):
        Region2D([circle(128)], marked_point=(0.0, 0.0))


def test_oracle_unit_disk():
    r = inscribed_disk_oracle(Region2D([circle(1024)]), grid=100)
    assert r.radius == pytest.approx(1.0, abs=r.grid_step)
    assert np.hypot(*r.center) < r.grid_step


def test_oracle_ellipse():
    r = inscribed_disk_oracle(Region2D([ellipse(2.0, 1.0)]), grid=100)
    assert r.radius == pytest.approx(1.0, abs=r.grid_step)
    assert abs(r.center[0]) < 0.5


def test_oracle_torus_rectangle():
    r = inscribed_disk_oracle(Region2D([rectangle_on_torus(2.0, 1.0)]), grid=100)
    assert r.radius == pytest.approx(0.5, abs=r.grid_step)


def test_oracle_curved_models():
    for m, c0 in ((SPHERE, (0, 0, 1)), (HYP, (0.2, -0.1))):
        th = np.linspace(0, 2 * np.pi, 1024, endpoint=False)
        reg = Region2D([DiscreteCurve(m, polar_points(m, c0, np.full(th.size, 0.5), th))])
        r = inscribed_disk_oracle(reg, grid=100)
        assert r.radius == pytest.approx(0.5, abs=r.grid_step + 1e-3)
        assert distance(m, r.center, c0) < 2 * r.grid_step


@settings(max_examples=6)
@given(st.floats(0.2, 5.0))
def test_oracle_scaling(lam):
    base = ellipse(1.5, 0.7, 512)
    r1 = inscribed_disk_oracle(Region2D([base]), grid=60)
    scaled = DiscreteCurve(PLANE, lam * base.points)
    r2 = inscribed_disk_oracle(Region2D([scaled]), grid=60)
    assert r2.radius == pytest.approx(lam * r1.radius, abs=r2.grid_step)


def test_osculating_unit_disk():
    reg = Region2D([circle(1024)])
    v = find_osculating_free_disk(reg, 0.5)
    assert v.passed and v.witness["station"] == 0
    assert np.hypot(*v.witness["center"]) == pytest.approx(0.5, abs=1e-9)


def test_osculating_ellipse_matches_oracle():
    reg = Region2D([ellipse(2.0, 1.0)])
    prof = reg.derived_profile()
    assert prof.Lambda == pytest.approx(2.0, rel=1e-3)
    v = find_osculating_free_disk(reg, 0.45)
    assert v.passed
    assert v.witness["rho0"] == pytest.approx(0.5, rel=1e-3)
    oracle = inscribed_disk_oracle(reg, grid=100)
    assert 0.45 <= oracle.radius + oracle.grid_step


def test_osculating_lobe_of_l2():
    x = np.linspace(-np.pi / 4, np.pi / 4, 801)
    top = DiscreteCurve(TORUS, np.c_[x, np.cos(2 * x)], closed=False)
    bottom = DiscreteCurve(TORUS, np.c_[x[::-1], np.zeros_like(x)], closed=False)
    reg = Region2D([top, bottom], marked_point=(0.0, 1.0))
    prof = reg.derived_profile()
    assert prof.Lambda == pytest.approx(4.0, rel=1e-3)
    r0 = find_osculating_free_disk(reg, 0.01).witness["rho0"]
    assert r0 == pytest.approx(0.25, rel=1e-3)
    v = find_osculating_free_disk(reg, 0.9 * r0)
    assert v.passed
    oracle = inscribed_disk_oracle(reg, grid=120)
    assert 0.9 * r0 <= oracle.radius + oracle.grid_step


def test_osculating_with_obstacle():
    # a small island inside the unit disk limits rho0 through d(x, K)/2
    t = np.linspace(0, 2 * np.pi, 256, endpoint=False)
    island = DiscreteCurve(PLANE, np.c_[0.3 + 0.3 * np.cos(t), 0.3 * np.sin(t)])
    reg = Region2D([circle(1024), island], marked_point=(1.0, 0.0))
    assert reg.obstacle_distance() == pytest.approx(0.4, abs=1e-3)
    v = find_osculating_free_disk(reg, 0.18)
    assert v.passed
    assert v.witness["rho0"] == pytest.approx(0.2, abs=1e-3)


def test_osculating_too_large_is_resolution_failure():
    reg = Region2D([circle(512)])
    v = find_osculating_free_disk(reg, 1.2, levels=(512, 2048))
    assert not v.passed and v.status == "resolution_failure"
    assert "rho0" in v.note


# --- monotonicity and implication ---------------------------------------------

def test_ball_monotonicity_models():
    assert check_ball_monotonicity(PLANE, FLAT, np.linspace(0.1, 10, 20)).passed
    for m in (SPHERE, HYP):
        v = check_ball_monotonicity(m, BoundsProfile(K0=1.0, r0=3.0), np.linspace(0.1, 1.5, 20))
        assert v.passed and v.margin >= 1
    with pytest.raises(DomainError):
        check_ball_monotonicity(SPHERE, BoundsProfile(K0=1.0, r0=3.0), [2.0])


def test_main_inequality_identical_curves():
    L = horizontal(256)
    v = check_main_inequality(L, L, 0.0, 0.0)
    assert v.passed and v.branch == "conclusion_holds" and v.witness["hausdorff"] == 0


def test_main_inequality_translated_circle():
    L0 = horizontal(512)
    for a in (0.05, 0.3, 1.0):
        v = check_main_inequality(L0, horizontal(512, a), a, a)
        assert v.passed and v.branch == "conclusion_holds"
        assert v.witness["hausdorff"] == pytest.approx(a)


def test_main_inequality_branches():
    L0 = horizontal(512)
    v = check_main_inequality(L0, horizontal(512, 1.0), 0.01, 0.01)
    assert not v.passed and v.branch == "counterexample"
    v = check_main_inequality(L0, horizontal(512, 1.0), 0.01, 5.0)
    assert v.passed and v.branch == "inconclusive"
    v = check_main_inequality(L0, horizontal(512, 1.0), 5.0, 5.0)
    assert v.branch == "hypothesis_false"
    with pytest.raises(ParameterError):
        check_main_inequality(L0, L0, None, 1.0)
    with pytest.raises(InputError):
        check_main_inequality(L0, L0, 2.0, 1.0)


def test_main_inequality_uses_curvature_oracle():
    L0 = horizontal(512)
    L4 = graph_curve(lambda x: 0.25 * np.cos(4 * x), 2048)
    v = check_main_inequality(L0, L4, 0.5, 0.5)
    assert v.witness["Lambda"] == pytest.approx(4.0, rel=1e-3)
