import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from curvebound.constants import (
    BoundsProfile,
    alpha_of_tau,
    compute_report,
    convexity_radius_lower,
    delta_radii,
    disk_constants,
    eta_thresholds,
    iso_constants,
    monotonicity_constants,
    rho0,
    rho1_cap,
    sinh_over_sin,
    tuned_rho1,
)
from curvebound.errors import DomainError, InputError, ParameterError

mp.mp.dps = 40

# frozen at 40 digits
ALPHA_HALF = 0.7747201160046566836
ALPHA_CAP = 0.0047725901222716477  # tau = 0.99 pi / 2
C_PRIME_K1 = 0.69830167341544987355
CAP_PRIME_K1 = 0.35801145768021693566


def mp_alpha(t):
    t = mp.mpf(t)
    return t * mp.sin(2 * t) / (2 * mp.sinh(t) ** 2)


# --- profile -----------------------------------------------------------------

def test_profile_validation():
    with pytest.raises(InputError):
        BoundsProfile(K0=-1)
    with pytest.raises(InputError):
        BoundsProfile(eps=0)
    with pytest.raises(InputError):
        BoundsProfile(eps=1.5)
    with pytest.raises(InputError):
        BoundsProfile(r0=0)
    with pytest.raises(InputError):
        BoundsProfile(Lambda=-0.1)
    assert BoundsProfile(r0=2.0).replace(K0=1.0).K0 == 1.0


# --- scalar functions ------------------------------------------------------------

@pytest.mark.parametrize("x", [0.0, 1e-8, 9.9e-5, 1e-4, 0.3, 1.0, 2.5, 3.1])
def test_sinh_over_sin_against_mpmath(x):
    ref = 1 if x == 0 else mp.sinh(x) / mp.sin(x)
    assert sinh_over_sin(x) == pytest.approx(float(ref), rel=1e-13)


@pytest.mark.parametrize("t", [0.0, 1e-9, 9.9e-5, 1e-4, 0.01, 0.5, 1.0, 1.5, 0.99 * math.pi / 2, 5.0, 25.0])
def test_alpha_against_mpmath(t):
    ref = 1 if t == 0 else mp_alpha(t)
    assert alpha_of_tau(t) == pytest.approx(float(ref), rel=1e-12, abs=1e-300)


def test_alpha_frozen_values():
    assert alpha_of_tau(0.5) == pytest.approx(ALPHA_HALF, rel=1e-14)
    assert alpha_of_tau(0.99 * math.pi / 2) == pytest.approx(ALPHA_CAP, rel=1e-12)


def test_alpha_decreasing_and_bounded():
    t = np.linspace(0, math.pi / 2, 2001)
    a = np.array([alpha_of_tau(x) for x in t])
    assert np.all(np.diff(a) < 0)
    assert a[0] == 1.0 and 0 < a[-2] and abs(a[-1]) < 1e-15


# --- iso and monotonicity -------------------------------------------------------

def test_iso_constants_examples():
    assert iso_constants(BoundsProfile(K0=1e-14, r0=5.0))[0] == pytest.approx(0.5, abs=1e-9)
    assert iso_constants(BoundsProfile(K0=0.0, eps=1.0))[1] == 1.0
    cp, c = iso_constants(BoundsProfile(K0=1.0, r0=1.0))
    assert cp == pytest.approx(C_PRIME_K1, rel=1e-14)
    assert float(mp.sinh(1) / (2 * mp.sin(1))) == pytest.approx(C_PRIME_K1, rel=1e-15)


def test_iso_domain_error():
    with pytest.raises(DomainError, match="shrink r0"):
        iso_constants(BoundsProfile(K0=1.0, r0=math.pi))


def test_monotonicity_examples():
    C, Cp, Ct = monotonicity_constants(BoundsProfile())
    assert (C, Cp, Ct) == (0.25, 0.5, pytest.approx(1 / 36))
    _, Cp1, _ = monotonicity_constants(BoundsProfile(K0=1.0, r0=1.0))
    assert Cp1 == pytest.approx(CAP_PRIME_K1, rel=1e-14)
    C2, Cp2, _ = monotonicity_constants(BoundsProfile(), C1=2.0, C2=3.0)
    assert C2 == pytest.approx(0.25 / 6) and Cp2 == pytest.approx(0.5 / 6)


@given(st.floats(0, 4), st.floats(0.01, 1.5), st.floats(0.05, 1.0))
def test_report_invariants(K0, r0, eps):
    p = BoundsProfile(K0=K0, r0=r0, eps=eps, Lambda=1.0, i0=1.0)
    r = compute_report(p)
    assert r.c_prime <= r.c
    assert 0 < r.C_prime <= 0.5 + 1e-15
    assert r.C <= r.C_prime
    assert 0 < r.alpha <= 1
    assert r.rho0 <= r.rho1


def test_c_prime_increasing_in_radius():
    r0 = np.linspace(0.01, 3.1, 300)
    cp = [iso_constants(BoundsProfile(K0=1.0, r0=x))[0] for x in r0]
    assert np.all(np.diff(cp) > 0)


# --- radii -------------------------------------------------------------------

def test_delta_examples():
    p = BoundsProfile(r0=math.pi, r_inj_M=math.pi)
    assert delta_radii(p, math.pi)[0] == 1.0
    assert delta_radii(BoundsProfile(eps=0.5, r0=0.4), 10.0)[0] == pytest.approx(0.1)
    assert delta_radii(BoundsProfile(r0=math.pi, i0=math.pi))[1] == 1.0
    with pytest.raises(ParameterError):
        delta_radii(BoundsProfile())


def test_disk_constants_examples():
    r1, a = disk_constants(BoundsProfile(K0=1e-12, r0=1.0))
    assert a == pytest.approx(1.0, abs=1e-6)
    r1, a = disk_constants(BoundsProfile(K0=1.0, r0=10.0))
    assert r1 == pytest.approx(0.99 * math.pi / 2)
    assert a == pytest.approx(float(mp_alpha(0.99 * mp.pi / 2)), rel=1e-12)
    with pytest.raises(DomainError):
        disk_constants(BoundsProfile(K0=1.0, r0=1.0), rho1=5.0)
    with pytest.raises(InputError):
        rho1_cap(BoundsProfile(), slack=1.0)


def test_tuned_rho1_solves_balance():
    p = BoundsProfile(K0=1.0, r0=10.0, Lambda=3.0)
    r = tuned_rho1(p)
    assert r == pytest.approx(alpha_of_tau(r) / 3.0, rel=1e-12)
    assert r < rho1_cap(p)
    # unconstrained when Lambda is small
    assert tuned_rho1(p.replace(Lambda=0.0)) == rho1_cap(p)


def test_tuned_never_below_literal():
    for K0 in (1e-6, 0.3, 1.0, 4.0):
        for Lam in (0.1, 1.0, 10.0, 100.0):
            p = BoundsProfile(K0=K0, r0=1.0, Lambda=Lam)
            assert rho0(p) >= rho0(p, mode="literal") - 1e-15


def test_rho0_examples():
    assert rho0(BoundsProfile(K0=1e-12, r0=1e6, Lambda=2.0)) == pytest.approx(0.5, abs=1e-3)
    assert rho0(BoundsProfile(obstacle_distance=0.4, Lambda=1e-3)) == pytest.approx(0.2)
    p = BoundsProfile(K0=1.0, r0=1.0, Lambda=100.0)
    r1, a = disk_constants(p, rho1=tuned_rho1(p))
    assert rho0(p) == pytest.approx(a / 100.0)
    assert rho0(p, mode="literal") == pytest.approx(disk_constants(p)[1] / 100.0)
    with pytest.raises(InputError):
        rho0(p, mode="other")


def test_eta_thresholds_examples():
    r = compute_report(BoundsProfile(i0=math.pi, r0=math.pi))
    assert r.eta_pp == math.inf and r.eta_pp_infinite and r.eta == math.inf
    assert r.R == pytest.approx(r.C * r.delta0**2)
    p = BoundsProfile(K0=1e-14, Lambda=1.0, i0=2.0, r0=2.0)
    r = compute_report(p)
    eta_pp, eta, R, Rp = eta_thresholds(p, r)
    assert eta_pp == pytest.approx(1.0, abs=1e-9)
    assert R == pytest.approx(0.25, abs=1e-9)


def test_report_without_i0():
    r = compute_report(BoundsProfile(K0=1.0, r0=1.0))
    assert r.delta is None and r.delta0 is None and r.R is None and r.R_unobstructed is None
    assert len(r.rows()) == 16


def test_convexity_radius_examples():
    assert convexity_radius_lower(BoundsProfile(r0=math.pi)) == pytest.approx(math.pi / 2)
    assert convexity_radius_lower(BoundsProfile(K0=1.0, r0=10.0)) == pytest.approx(math.pi / 2)
    assert convexity_radius_lower(BoundsProfile(K0=4.0, r0=1.0)) == pytest.approx(0.5)


def test_euclidean_limit_is_continuous():
    for K in (1e-3, 1e-5, 1e-8, 1e-12):
        cp, _ = iso_constants(BoundsProfile(K0=K, r0=1.0))
        assert cp == pytest.approx(0.5 * (1 + K / 3), rel=1e-6)
        _, a = disk_constants(BoundsProfile(K0=K, r0=1.0))
        assert a == pytest.approx(1 - K * 0.99**2, rel=1e-5)
