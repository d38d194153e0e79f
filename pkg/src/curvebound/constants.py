"""Closed-form constants derived from curvature, injectivity and tameness bounds.

Notation: ``x = r0*sqrt(K0)`` and ``tau = sqrt(K0)*rho1``.

    c'    = sinh x / (2 sin x)
    c     = (1 + 1/eps) sinh x / (2 eps sin x)
    C     = 1 / (4 C1 C2 c)        C' = 1 / (4 C1 C2 c')      C_thm = 1 / (36 C1 C2 c)
    alpha = tau sin(2 tau) / (2 sinh(tau)^2)
    rho0  = min(r0/2, pi/(2 sqrt K0), rho1, alpha/Lambda, d/2)

Every formula has a series branch near ``K0 = 0`` so the flat limits are
exact rather than 0/0.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields

from scipy.optimize import brentq

from .errors import DomainError, InputError, ParameterError

_SERIES_BELOW = 1e-4
DEFAULT_SLACK = 0.99


def _pos_or_inf(name, v):
    v = float(v)
    if not (v > 0):
        raise InputError(f"{name} must be positive, got {v}")
    return v


@dataclass(frozen=True)
class BoundsProfile:
    """Input bounds. ``r_inj_M`` defaults to ``r0``; ``i0`` may be left for a curve to supply."""

    K0: float = 0.0
    r0: float = math.inf
    Lambda: float = 0.0
    eps: float = 1.0
    eta_prime: float = math.inf
    i0: float | None = None
    obstacle_distance: float = math.inf
    r_inj_M: float | None = None

    def __post_init__(self):
        if not (self.K0 >= 0 and math.isfinite(self.K0)):
            raise InputError(f"K0 must be finite and >= 0, got {self.K0}")
        _pos_or_inf("r0", self.r0)
        if not (self.Lambda >= 0 and math.isfinite(self.Lambda)):
            raise InputError(f"Lambda must be finite and >= 0, got {self.Lambda}")
        if not (0 < self.eps <= 1):
            raise InputError(f"eps must lie in (0, 1], got {self.eps}")
        _pos_or_inf("eta_prime", self.eta_prime)
        _pos_or_inf("obstacle_distance", self.obstacle_distance)
        if self.i0 is not None:
            _pos_or_inf("i0", self.i0)
        if self.r_inj_M is not None:
            _pos_or_inf("r_inj_M", self.r_inj_M)

    @property
    def injectivity_M(self) -> float:
        return self.r0 if self.r_inj_M is None else self.r_inj_M

    @property
    def sqrtK(self) -> float:
        return math.sqrt(self.K0)

    def replace(self, **kw) -> BoundsProfile:
        d = asdict(self)
        d.update(kw)
        return BoundsProfile(**d)

    def to_dict(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------------------
# scalar building blocks
# ---------------------------------------------------------------------------

def sinh_over_sin(x: float) -> float:
    """sinh(x)/sin(x) for 0 <= x < pi."""
    if x < _SERIES_BELOW:
        x2 = x * x
        return 1.0 + x2 / 3.0 + x2 * x2 / 18.0
    return math.sinh(x) / math.sin(x)


def alpha_of_tau(tau: float) -> float:
    """tau sin(2 tau) / (2 sinh(tau)^2); equals 1 at 0, decreasing to 0 at pi/2."""
    if tau < 0:
        raise DomainError("tau must be >= 0")
    if tau < _SERIES_BELOW:
        t2 = tau * tau
        return 1.0 - t2 + 19.0 * t2 * t2 / 45.0
    if tau > 20:
        # sinh^2 overflows long after the ratio is negligible
        return tau * math.sin(2 * tau) * 2.0 * math.exp(-2 * tau)
    return tau * math.sin(2 * tau) / (2.0 * math.sinh(tau) ** 2)


def _half_pi_over_sqrtK(p: BoundsProfile) -> float:
    return math.inf if p.K0 == 0 else math.pi / (2 * p.sqrtK)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def iso_constants(p: BoundsProfile) -> tuple[float, float]:
    """``(c', c)``. Requires ``r0*sqrt(K0) < pi``."""
    x = 0.0 if p.K0 == 0 else p.r0 * p.sqrtK
    if not x < math.pi - 1e-9:
        raise DomainError(
            f"r0*sqrt(K0) = {x:.6g} must be below pi; shrink r0 below {math.pi / p.sqrtK:.6g}"
        )
    q = sinh_over_sin(x)
    c_prime = 0.5 * q
    c = (1.0 + 1.0 / p.eps) * q / (2.0 * p.eps)
    return c_prime, c


def monotonicity_constants(p: BoundsProfile, C1: float = 1.0, C2: float = 1.0) -> tuple[float, float, float]:
    """``(C, C', C_thm)`` with tame factors ``C1, C2 >= 1``."""
    if not (C1 > 0 and C2 > 0):
        raise InputError("C1 and C2 must be positive")
    c_prime, c = iso_constants(p)
    k = C1 * C2
    return 1.0 / (4 * k * c), 1.0 / (4 * k * c_prime), 1.0 / (36 * k * c)


def delta_radii(p: BoundsProfile, r_inj_L: float | None = None) -> tuple[float, float]:
    """``(delta, delta0)``.

    ``delta = eps*min(1, r_inj(M)/2, r_inj(L)/2)``, ``delta0 = eps*min(1, r0/2, i0/2)``.
    Missing ``i0`` falls back to ``r_inj_L`` and vice versa.
    """
    if r_inj_L is not None:
        r_inj_L = _pos_or_inf("r_inj_L", r_inj_L)
    i0 = p.i0 if p.i0 is not None else r_inj_L
    rL = r_inj_L if r_inj_L is not None else p.i0
    if i0 is None:
        raise ParameterError("i0 is not set and no curve was supplied")
    delta = p.eps * min(1.0, p.injectivity_M / 2, rL / 2)
    delta0 = p.eps * min(1.0, p.r0 / 2, i0 / 2)
    return delta, delta0


def rho1_cap(p: BoundsProfile, slack: float = DEFAULT_SLACK) -> float:
    """``slack * min(r0, pi/(2 sqrt K0))``."""
    if not 0 < slack < 1:
        raise InputError(f"slack must lie in (0, 1), got {slack}")
    return slack * min(p.r0, _half_pi_over_sqrtK(p))


def tuned_rho1(p: BoundsProfile, slack: float = DEFAULT_SLACK) -> float:
    """Largest admissible ``rho1`` with ``rho1 <= alpha(sqrt(K0) rho1)/Lambda``.

    Any ``rho1`` below the cap is admissible, and shrinking it raises alpha;
    the crossing point maximises ``min(rho1, alpha/Lambda)``.
    """
    cap = rho1_cap(p, slack)
    if p.Lambda == 0:
        return cap
    if p.K0 == 0:
        return min(cap, 1.0 / p.Lambda)

    def f(r):
        return r - alpha_of_tau(p.sqrtK * r) / p.Lambda

    if f(cap) <= 0:
        return cap
    return brentq(f, 0.0, cap, xtol=1e-15, maxiter=200)


def disk_constants(p: BoundsProfile, slack: float = DEFAULT_SLACK, rho1: float | None = None) -> tuple[float, float]:
    """``(rho1, alpha)``. ``rho1`` defaults to the slack cap; an explicit value must not exceed it."""
    cap = rho1_cap(p, slack)
    if rho1 is None:
        rho1 = cap
    elif not 0 < rho1 <= cap * (1 + 1e-12):
        raise DomainError(f"rho1 = {rho1} outside (0, {cap}]")
    alpha = 1.0 if p.K0 == 0 else alpha_of_tau(p.sqrtK * rho1)
    return rho1, alpha


def rho0(p: BoundsProfile, slack: float = DEFAULT_SLACK, mode: str = "tuned") -> float:
    """Inscribed-disk radius ``min(r0/2, pi/(2 sqrt K0), rho1, alpha/Lambda, d/2)``.

    ``mode="literal"`` takes ``rho1`` at the slack cap; ``"tuned"`` (default)
    uses ``tuned_rho1``, which never gives a smaller result.
    """
    r1 = _rho1_for(p, slack, mode)
    r1, alpha = disk_constants(p, slack, r1)
    terms = [p.r0 / 2, _half_pi_over_sqrtK(p), r1, p.obstacle_distance / 2]
    if p.Lambda > 0:
        terms.append(alpha / p.Lambda)
    return min(terms)


def _rho1_for(p, slack, mode):
    if mode == "tuned":
        return tuned_rho1(p, slack)
    if mode == "literal":
        return rho1_cap(p, slack)
    raise InputError(f"unknown rho1 mode {mode!r}")


def convexity_radius_lower(p: BoundsProfile) -> float:
    """``min(r_inj(M), pi/sqrt K0) / 2``."""
    return 0.5 * min(p.injectivity_M, 2 * _half_pi_over_sqrtK(p))


@dataclass(frozen=True)
class ConstantsReport:
    c_prime: float
    c: float
    C: float
    C_prime: float
    C_thm: float
    delta: float | None
    delta0: float | None
    rho1: float
    alpha: float
    rho0: float
    eta_pp: float
    eta: float
    R: float | None
    R_unobstructed: float | None
    R_prime: float
    r_conv_lower: float
    eta_pp_infinite: bool = False
    rho1_mode: str = "tuned"

    def rows(self) -> list[tuple[str, float | None]]:
        """Numeric constants as ``(name, value)`` pairs, in declaration order."""
        skip = {"eta_pp_infinite", "rho1_mode"}
        return [(f.name, getattr(self, f.name)) for f in fields(self) if f.name not in skip]

    def to_dict(self) -> dict:
        return asdict(self)


def eta_thresholds(p: BoundsProfile, report: ConstantsReport) -> tuple[float, float, float | None, float]:
    """``(eta'', eta, R, R')`` from a profile and its constants.

    ``eta'' = alpha/Lambda`` (infinite when Lambda = 0), ``eta = min(eta', eta'')``,
    ``R = C min(delta0, eta)^2`` and ``R' = C' min(rho0, eta)^2``.
    """
    eta_pp = math.inf if p.Lambda == 0 else report.alpha / p.Lambda
    eta = min(p.eta_prime, eta_pp)
    R = None
    if report.C is not None and report.delta0 is not None:
        R = report.C * min(report.delta0, eta) ** 2
    R_prime = report.C_prime * min(report.rho0, eta) ** 2
    return eta_pp, eta, R, R_prime


def compute_report(
    p: BoundsProfile,
    r_inj_L: float | None = None,
    C1: float = 1.0,
    C2: float = 1.0,
    slack: float = DEFAULT_SLACK,
    rho1_mode: str = "tuned",
) -> ConstantsReport:
    """All constants for ``p``; ``delta``, ``delta0`` and ``R`` are None without ``i0`` or a curve."""
    C, C_prime, C_thm = monotonicity_constants(p, C1, C2)
    c_prime, c = iso_constants(p)
    try:
        delta, delta0 = delta_radii(p, r_inj_L)
    except ParameterError:
        delta = delta0 = None
    r1, alpha = disk_constants(p, slack, _rho1_for(p, slack, rho1_mode))
    r0v = rho0(p, slack, rho1_mode)
    partial = ConstantsReport(
        c_prime=c_prime, c=c, C=C, C_prime=C_prime, C_thm=C_thm,
        delta=delta, delta0=delta0, rho1=r1, alpha=alpha, rho0=r0v,
        eta_pp=math.inf, eta=math.inf, R=None, R_unobstructed=None, R_prime=math.nan,
        r_conv_lower=convexity_radius_lower(p), rho1_mode=rho1_mode,
    )
    eta_pp, eta, R, R_prime = eta_thresholds(p, partial)
    return ConstantsReport(
        **{
            **asdict(partial),
            "eta_pp": eta_pp,
            "eta": eta,
            "R": R,
            "R_unobstructed": None if delta0 is None else C * delta0**2,
            "R_prime": R_prime,
            "eta_pp_infinite": p.Lambda == 0,
        }
    )
