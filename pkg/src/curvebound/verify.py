"""Verification engines.

Each ``check_*`` returns a ``Verdict``: the two sides of an inequality, the
margin, a witness and the resolution used. The ``*_suite`` functions draw
seeded random cases and return one verdict per case.

Curvature-type inequalities ``lhs >= rhs`` are accepted with a relative
slack of ``CURVATURE_RTOL``, the accuracy of the discrete curvature oracle.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import _accel
from .constants import (
    BoundsProfile,
    alpha_of_tau,
    compute_report,
    delta_radii,
    disk_constants,
    iso_constants,
    monotonicity_constants,
    rho0,
)
from .curve import (
    DiscreteCurve,
    _from_frame,
    _to_frame,
    curvature_profile,
    hausdorff_distance,
    left_normals,
    resample_arclength,
)
from .errors import DomainError, InputError, ParameterError, PreconditionError, ScopeError
from .surface import (
    SurfaceKind,
    SurfaceModel,
    ball_area,
    centroid,
    exp_map,
    geodesic_between,
    loop_area,
    torus_delta,
)

DEFAULT_SEED = 0xC0FFEE
CURVATURE_RTOL = 1e-3
STATION_LEVELS = (512, 2048, 8192, 32768)


def default_seed() -> int:
    env = os.environ.get("CURVEBOUND_SEED")
    if env:
        try:
            return int(env, 0)
        except ValueError:
            raise InputError(f"CURVEBOUND_SEED={env!r} is not an integer") from None
    return DEFAULT_SEED


@dataclass
class Verdict:
    engine: str
    passed: bool
    status: str
    lhs: float | None = None
    rhs: float | None = None
    margin: float | None = None
    witness: dict | None = None
    resolution: dict = field(default_factory=dict)
    branch: str | None = None
    note: str | None = None
    seed: int | None = None
    case: int | None = None

    def to_dict(self) -> dict:
        return _plain(
            {
                "engine": self.engine,
                "passed": self.passed,
                "status": self.status,
                "lhs": self.lhs,
                "rhs": self.rhs,
                "margin": self.margin,
                "witness": self.witness,
                "resolution": self.resolution,
                "branch": self.branch,
                "note": self.note,
                "seed": self.seed,
                "case": self.case,
            }
        )


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    return x


# ---------------------------------------------------------------------------
# shared geometry helpers
# ---------------------------------------------------------------------------

def profile_for_surface(m: SurfaceModel, **kw) -> BoundsProfile:
    """Profile with ``K0`` from the model and ``r0`` its injectivity radius.

    For curved models ``r0`` is capped just below ``pi/sqrt(K0)``.
    """
    r0 = m.inj_radius
    if m.curvature > 0:
        r0 = min(r0, 0.999 * math.pi / math.sqrt(m.curvature))
    base = {"K0": m.curvature, "r0": r0}
    base.update(kw)
    return BoundsProfile(**base)


def polar_points(m: SurfaceModel, center, radii, thetas) -> np.ndarray:
    """``exp_center(r(theta) * e(theta))`` with ``e`` an orthonormal direction."""
    center = m.validate(center)
    radii = np.asarray(radii, dtype=float)
    w = np.stack([np.cos(thetas), np.sin(thetas)], axis=1)
    base = np.broadcast_to(center, (len(w), m.dim))
    v = _from_frame(m, np.ascontiguousarray(base), w) * radii[:, None]
    return exp_map(m, base, v)


def enclosing_ball(m: SurfaceModel, pts, center=None):
    """Small metric ball containing all ``pts``: ``(center, radius)``.

    Minimises the max distance over centres ``exp_c0(v)`` with Nelder-Mead,
    starting at the centroid. Any returned ball does contain the samples.
    """
    pts = np.asarray(pts, dtype=float)
    c0 = centroid(m, pts) if center is None else m.validate(center)

    frame = _from_frame(m, np.stack([c0, c0]), np.eye(2))

    def at(v):
        return exp_map(m, c0, v[0] * frame[0] + v[1] * frame[1])

    def f(v):
        return float(np.max(_accel.distance_np(m.code, m.param, at(v), pts)))

    r_start = f([0.0, 0.0])
    step = 0.1 * max(r_start, 1e-12)
    res = minimize(f, [0.0, 0.0], method="Nelder-Mead",
                   options={"xatol": 1e-8 * max(1.0, r_start), "fatol": 1e-11 * max(1.0, r_start),
                            "initial_simplex": [[0, 0], [step, 0], [0, step]], "maxiter": 600})
    if res.fun < r_start:
        c = at(res.x)
        return c, f(res.x)
    return c0, r_start


# ---------------------------------------------------------------------------
# isoperimetric
# ---------------------------------------------------------------------------

def check_isoperimetric_loop(g: DiscreteCurve, p: BoundsProfile, center=None) -> Verdict:
    """``|a(g)| <= c' l(g)^2`` for a closed polygon inside a ball of radius ``r0/2``."""
    if not g.closed:
        raise InputError("isoperimetric loop check needs a closed curve")
    m = g.surface
    if center is None:
        center, rad = enclosing_ball(m, g.points)
    else:
        rad = float(np.max(_accel.distance_np(m.code, m.param, m.validate(center), g.points)))
    if rad > p.r0 / 2 * (1 + 1e-12):
        raise PreconditionError(f"loop needs a ball of radius {rad:.6g} > r0/2 = {p.r0 / 2:.6g}")
    c_prime, _ = iso_constants(p)
    area = abs(loop_area(m, g.points, apex=center))
    ell = g.polygon_length
    rhs = c_prime * ell * ell
    return Verdict(
        engine="isoperimetric",
        passed=bool(area <= rhs),
        status="pass" if area <= rhs else "fail",
        lhs=area,
        rhs=rhs,
        margin=area / rhs,
        witness={"ball_radius": rad},
        resolution={"samples": g.n},
    )


def check_isoperimetric_arc(g: DiscreteCurve, L: DiscreteCurve, p: BoundsProfile, tol: float = 1e-6) -> Verdict:
    """``|a(g # reversed sub-arc of L)| <= c l(g)^2`` for an arc with endpoints on ``L``."""
    if g.closed:
        raise InputError("arc check needs an open arc")
    m = g.surface
    if L.surface != m:
        raise InputError("arc and base curve live on different surfaces")
    ends = g.points[[0, -1]]
    d_end, idx = _accel.min_dist_to_set(m.code, m.param, ends, L.points)
    if np.max(d_end) > tol * max(1.0, m.scale):
        raise InputError(f"arc endpoint lies {np.max(d_end):.3g} off the base curve")
    i, j = int(idx[0]), int(idx[1])
    delta, _ = delta_radii(p.replace(i0=p.i0 or L.inj_radius), L.inj_radius)
    # smallest radius of a ball centred on L that holds g
    far = np.max(_accel.distance_np(m.code, m.param, L.points[:, None, :], g.points[None, :, :]), axis=1)
    k = int(np.argmin(far))
    if far[k] > delta * (1 + 1e-9):
        raise PreconditionError(f"arc needs a ball of radius {far[k]:.6g} around L, delta = {delta:.6g}")
    sub = _sub_arc(L, i, j)
    loop = np.concatenate([g.points, sub[::-1][1:-1]]) if len(sub) > 2 else g.points
    area = abs(loop_area(m, loop, apex=L.points[k])) if len(loop) >= 3 else 0.0
    _, c = iso_constants(p)
    ell = g.polygon_length
    rhs = c * ell * ell
    return Verdict(
        engine="isoperimetric_arc",
        passed=bool(area <= rhs),
        status="pass" if area <= rhs else "fail",
        lhs=area,
        rhs=rhs,
        margin=area / rhs if rhs > 0 else 0.0,
        witness={"base_indices": [i, j], "ball_center_index": k, "ball_radius": float(far[k])},
        resolution={"samples": g.n, "base_samples": L.n, "delta": delta},
    )


def _sub_arc(L: DiscreteCurve, i: int, j: int) -> np.ndarray:
    """Samples of the shorter path along ``L`` from index ``i`` to ``j``, inclusive."""
    n = L.n
    if not L.closed:
        step = 1 if j >= i else -1
        return L.points[i:j + step:step] if j + step >= 0 else L.points[i::step]
    fwd = (j - i) % n
    s = L.sample_arclength
    dfwd = (s[j] - s[i]) % L.length
    if dfwd <= L.length - dfwd:
        idx = (i + np.arange(fwd + 1)) % n
    else:
        idx = (i - np.arange((i - j) % n + 1)) % n
    return L.points[idx]


# ---------------------------------------------------------------------------
# curvature bounds
# ---------------------------------------------------------------------------

def _alpha_for(p: BoundsProfile, rho: float, alpha_at: str) -> float:
    if p.K0 == 0:
        return 1.0
    if alpha_at == "rho":
        return alpha_of_tau(math.sqrt(p.K0) * rho)
    if alpha_at == "rho1":
        return disk_constants(p)[1]
    raise InputError(f"unknown alpha_at {alpha_at!r}")


def check_farthest_point_curvature(G: DiscreteCurve, x, p: BoundsProfile, alpha_at: str = "rho") -> Verdict:
    """kappa at the farthest sample from ``x`` is at least ``alpha/rho``, ``rho`` = max distance.

    ``alpha_at="rho"`` evaluates alpha at ``sqrt(K0)*rho`` (the comparison
    actually used at the farthest point); ``"rho1"`` uses the weaker value at
    the cap ``rho1``.
    """
    m = G.surface
    x = m.validate(x)
    d = _accel.distance_np(m.code, m.param, x, G.points)
    k = int(np.argmax(d))
    rho = float(d[k])
    rho1, _ = disk_constants(p)
    if rho > rho1:
        raise DomainError(f"curve reaches {rho:.6g} from x, beyond rho1 = {rho1:.6g}")
    if not G.closed and k in (0, G.n - 1):
        raise PreconditionError("farthest point is an endpoint of the arc")
    prof = curvature_profile(G)
    kappa = float(abs(prof.kappa[k]))
    alpha = _alpha_for(p, rho, alpha_at)
    rhs = alpha / rho
    ok = kappa >= rhs * (1 - CURVATURE_RTOL)
    return Verdict(
        engine="farthest_point",
        passed=bool(ok),
        status="pass" if ok else "fail",
        lhs=kappa,
        rhs=rhs,
        margin=kappa / rhs,
        witness={"index": k, "rho": rho, "alpha": alpha},
        resolution={"samples": G.n, "rtol": CURVATURE_RTOL},
    )


def check_small_ball_curvature(L: DiscreteCurve, p: BoundsProfile, alpha_at: str = "rho", center=None) -> Verdict:
    """``max kappa(L) >= alpha/rho`` for a closed curve in a metric ball ``B_rho``, ``rho <= rho1``."""
    if not L.closed:
        raise InputError("small-ball check needs a closed curve")
    m = L.surface
    if m.kind is SurfaceKind.FLAT_TORUS:
        # sample-based ball radii can undershoot for a wrapping curve
        wind = np.sum(torus_delta(m, L.points, np.roll(L.points, -1, axis=0)), axis=0)
        if np.max(np.abs(wind)) > 1e-9 * m.period:
            return Verdict(
                engine="small_ball",
                passed=True,
                status="not_applicable",
                note="curve is not contractible on the torus; no metric ball contains it",
                resolution={"samples": L.n},
            )
    c, rho = enclosing_ball(m, L.points, center)
    rho1, _ = disk_constants(p)
    if rho > rho1:
        return Verdict(
            engine="small_ball",
            passed=True,
            status="not_applicable",
            witness={"ball_radius": rho, "center": c},
            note=f"smallest ball found has radius {rho:.6g} > rho1 = {rho1:.6g}",
            resolution={"samples": L.n},
        )
    kmax = curvature_profile(L).max_curvature
    alpha = _alpha_for(p, rho, alpha_at)
    rhs = alpha / rho
    ok = kmax >= rhs * (1 - CURVATURE_RTOL)
    return Verdict(
        engine="small_ball",
        passed=bool(ok),
        status="pass" if ok else "fail",
        lhs=kmax,
        rhs=rhs,
        margin=kmax / rhs,
        witness={"ball_radius": rho, "center": c, "alpha": alpha},
        resolution={"samples": L.n, "rtol": CURVATURE_RTOL},
    )


# ---------------------------------------------------------------------------
# regions, inscribed disks
# ---------------------------------------------------------------------------

class Region2D:
    """Region bounded by curves; component 0 carries the marked point ``x``.

    Closed components are separate boundary loops (even-odd rule). Open arcs
    are chained end to end into a single loop.
    """

    def __init__(self, components, marked_point=None, tol: float = 1e-6):
        comps = list(components)
        if not comps:
            raise InputError("a region needs at least one boundary component")
        m = comps[0].surface
        if any(c.surface != m for c in comps):
            raise InputError("boundary components live on different surfaces")
        self.surface = m
        self.components = comps
        x = comps[0].points[0] if marked_point is None else m.validate(marked_point)
        d = _accel.distance_np(m.code, m.param, x, comps[0].points)
        if float(np.min(d)) > tol * max(1.0, m.scale) + comps[0].max_spacing:
            raise InputError("marked point is not on boundary component 0")
        self.x = np.asarray(x, dtype=float)
        self.x_index = int(np.argmin(d))
        self._build_chart(tol)

    # chart ------------------------------------------------------------------

    def _loops(self, tol):
        closed = [c for c in self.components if c.closed]
        arcs = [c for c in self.components if not c.closed]
        loops = [c.points for c in closed]
        if arcs:
            m = self.surface
            chain = [arcs[0].points]
            rest = arcs[1:]
            while rest:
                end = chain[-1][-1]
                best = None
                for k, a in enumerate(rest):
                    for rev in (False, True):
                        start = a.points[-1] if rev else a.points[0]
                        dd = float(_accel.distance_np(m.code, m.param, end, start))
                        if best is None or dd < best[0]:
                            best = (dd, k, rev)
                dd, k, rev = best
                if dd > 1e3 * tol * max(1.0, m.scale):
                    raise InputError("boundary arcs do not chain into a closed loop")
                pts = rest.pop(k).points
                pts = pts[::-1] if rev else pts
                chain.append(pts[1:])
            loop = np.concatenate(chain)
            gap = float(_accel.distance_np(m.code, m.param, loop[0], loop[-1]))
            if gap > 1e3 * tol * max(1.0, m.scale):
                raise InputError("boundary arcs do not close up")
            if gap <= 1e3 * tol * max(1.0, m.scale):
                loop = loop[:-1]
            loops.append(loop)
        return loops

    def _build_chart(self, tol):
        m = self.surface
        allpts = np.concatenate([c.points for c in self.components])
        self._center = centroid(m, allpts)
        self.loops = self._loops(tol)
        if m.kind is SurfaceKind.ROUND_SPHERE:
            c = self._center / np.linalg.norm(self._center)
            e1 = np.cross(c, [1.0, 0.0, 0.0] if abs(c[0]) < 0.9 else [0.0, 1.0, 0.0])
            e1 /= np.linalg.norm(e1)
            self._basis = (c, e1, np.cross(c, e1))
        self.polys = [self.to_chart(lp) for lp in self.loops]
        if m.kind is SurfaceKind.FLAT_TORUS:
            for lp, poly in zip(self.loops, self.polys):
                steps = torus_delta(m, lp, np.roll(lp, -1, axis=0))
                if np.max(np.abs(np.sum(steps, axis=0))) > 1e-9 * m.period:
                    raise ScopeError("region boundary is not contractible on the torus")
                poly[:] = self._lift(lp[0]) + np.concatenate([[[0.0, 0.0]], np.cumsum(steps[:-1], axis=0)])
        self.poly_all = np.concatenate(self.polys)

    def _lift(self, q):
        return self._center + torus_delta(self.surface, self._center, q)

    def to_chart(self, q) -> np.ndarray:
        m = self.surface
        q = np.asarray(q, dtype=float)
        if m.kind is SurfaceKind.FLAT_TORUS:
            return self._lift(q)
        if m.kind is SurfaceKind.ROUND_SPHERE:
            c, e1, e2 = self._basis
            h = q @ c
            if np.any(h <= 0):
                raise ScopeError("region does not fit in a hemisphere")
            return np.stack([(q @ e1) / h, (q @ e2) / h], axis=-1)
        return q.copy()

    def from_chart(self, u) -> np.ndarray:
        m = self.surface
        u = np.asarray(u, dtype=float)
        if m.kind is SurfaceKind.FLAT_TORUS:
            return m.project(u)
        if m.kind is SurfaceKind.ROUND_SPHERE:
            c, e1, e2 = self._basis
            v = c + u[..., :1] * e1 + u[..., 1:] * e2
            return m.project(v * m.scale)
        return u

    def inside(self, q) -> np.ndarray:
        """Even-odd membership over all boundary loops."""
        u = np.atleast_2d(self.to_chart(q))
        res = np.zeros(len(u), dtype=bool)
        for poly in self.polys:
            res ^= _accel.even_odd(u, poly)
        return res

    def boundary_distance(self, q) -> np.ndarray:
        """Distance from points to the boundary (exact polygon distance on flat models)."""
        q = np.atleast_2d(np.asarray(q, dtype=float))
        m = self.surface
        if m.is_flat:
            u = self.to_chart(q)
            return np.min([_accel.seg_dist(u, poly, True) for poly in self.polys], axis=0)
        pts = np.concatenate(self.loops)
        d, _ = _accel.min_dist_to_set(m.code, m.param, q, pts)
        return d

    @property
    def boundary_spacing(self) -> float:
        return max(c.max_spacing for c in self.components)

    def max_curvature(self) -> float:
        return max(curvature_profile(c).max_curvature for c in self.components)

    def obstacle_distance(self) -> float:
        others = self.components[1:]
        if not others:
            return math.inf
        m = self.surface
        pts = np.concatenate([c.points for c in others])
        return float(np.min(_accel.distance_np(m.code, m.param, self.x, pts)))

    def derived_profile(self) -> BoundsProfile:
        return profile_for_surface(self.surface, Lambda=self.max_curvature(),
                                   obstacle_distance=self.obstacle_distance())


@dataclass(frozen=True)
class OracleResult:
    radius: float
    center: np.ndarray
    grid_step: float
    grid: int


def inscribed_disk_oracle(region: Region2D, grid: int = 200) -> OracleResult:
    """Largest distance-to-boundary over interior grid points, then local ascent."""
    m = region.surface
    lo = region.poly_all.min(axis=0)
    hi = region.poly_all.max(axis=0)
    span = float(np.max(hi - lo))
    h = span / grid
    xs = np.arange(lo[0] + h / 2, hi[0], h)
    ys = np.arange(lo[1] + h / 2, hi[1], h)
    U = np.stack(np.meshgrid(xs, ys, indexing="xy"), axis=-1).reshape(-1, 2)
    inside = np.zeros(len(U), dtype=bool)
    for poly in region.polys:
        inside ^= _accel.even_odd(U, poly)
    U = U[inside]
    if len(U) == 0:
        raise ScopeError("region interior is empty at this grid resolution")
    Q = region.from_chart(U)
    d = region.boundary_distance(Q)
    k = int(np.argmax(d))

    def neg(u):
        q = region.from_chart(np.asarray(u)[None])
        if not region.inside(q)[0]:
            return 0.0
        return -float(region.boundary_distance(q)[0])

    res = minimize(neg, U[k], method="Nelder-Mead",
                   options={"xatol": 1e-10 * max(span, 1e-300), "fatol": 1e-14,
                            "initial_simplex": [U[k], U[k] + [h, 0], U[k] + [0, h]]})
    best_u, best = (res.x, -res.fun) if -res.fun > d[k] else (U[k], float(d[k]))
    factor = float(np.max(m.metric_factor(region.loops[0]))) if m.kind is SurfaceKind.HYPERBOLIC_PLANE else 1.0
    if m.kind is SurfaceKind.ROUND_SPHERE:
        factor = m.scale
    return OracleResult(float(best), region.from_chart(np.asarray(best_u)[None])[0], h * factor, grid)


def find_osculating_free_disk(region: Region2D, rho: float, profile: BoundsProfile | None = None,
                              levels=STATION_LEVELS, batch: int = 256) -> Verdict:
    """Scan stations on component 0 for a ball ``B_rho(exp(Gamma(s), rho N(s)))`` free of boundary.

    Stations are visited in order of intrinsic distance from the marked
    point. A station is free when no boundary sample is closer to its centre
    than ``rho - tol``, ``tol`` being the sagitta of the boundary sampling.
    """
    m = region.surface
    prof = profile or region.derived_profile()
    r0v = rho0(prof)
    note = None
    if rho >= r0v:
        note = f"rho = {rho:.6g} >= rho0 = {r0v:.6g}; existence is not guaranteed"
    G = region.components[0]
    others = [c.points for c in region.components[1:]]
    conclusive_everywhere = True
    last = None
    for n_st in levels:
        s_x = G.sample_arclength[region.x_index]
        if G.closed:
            # station 0 sits at the marked point
            S = DiscreteCurve(m, G.point_at(s_x + np.arange(n_st) * (G.length / n_st)), True)
            shift = s_x
        else:
            S = resample_arclength(G, n_st)
            shift = 0.0
        nrm = left_normals(S)
        h_b = max(S.max_spacing, max((c.max_spacing for c in region.components[1:]), default=0.0))
        tol = h_b * h_b / (8 * rho) + 1e-12 * max(1.0, rho)
        boundary = np.concatenate([S.points] + others)
        sx = S.sample_arclength
        dist_x = np.abs(sx - (0.0 if G.closed else s_x))
        if G.closed:
            dist_x = np.minimum(dist_x, S.length - dist_x)
        order = np.argsort(dist_x, kind="stable")
        # choose the inward side with a short probe
        probe = 1e-3 * min(rho, S.length / n_st)
        for lo in range(0, len(order), batch):
            idx = order[lo:lo + batch]
            P = S.points[idx]
            N = nrm[idx]
            nn = m.norm(P, N)[:, None]
            N = N / nn
            ins = region.inside(exp_map(m, P, probe * N))
            N = np.where(ins[:, None], N, -N)
            C = exp_map(m, P, rho * N)
            dmin, arg = _accel.min_dist_to_set(m.code, m.param, C, boundary)
            free = dmin >= rho - tol
            inner = region.inside(C)
            free &= inner
            if np.any(dmin >= rho - 2 * tol) or not np.all(inner):
                conclusive_everywhere = False
            if free.any():
                k = int(np.argmax(free))
                return Verdict(
                    engine="osculating_disk",
                    passed=True,
                    status="pass",
                    lhs=float(dmin[k]),
                    rhs=rho,
                    margin=float(dmin[k] - rho),
                    witness={"station": int(idx[k]), "arclength": float((sx[idx[k]] + shift) % S.length if G.closed else sx[idx[k]]),
                             "point": P[k], "center": C[k], "rho0": r0v},
                    resolution={"stations": n_st, "tol": tol},
                    note=note,
                )
        last = (n_st, tol)
    status = "counterexample" if (conclusive_everywhere and rho < r0v) else "resolution_failure"
    return Verdict(
        engine="osculating_disk",
        passed=False,
        status=status,
        rhs=rho,
        witness={"rho0": r0v},
        resolution={"stations": last[0], "tol": last[1]},
        note=note or ("every station obstructed beyond the rigor margin" if status == "counterexample"
                      else "no free station found at the finest resolution"),
    )


# ---------------------------------------------------------------------------
# ball monotonicity and the main implication
# ---------------------------------------------------------------------------

def check_ball_monotonicity(m: SurfaceModel, p: BoundsProfile, r_grid) -> Verdict:
    """``area(B_r) >= C' r^2`` for every ``r`` in the grid (``r <= r0/2``)."""
    r_grid = np.asarray(r_grid, dtype=float)
    if np.any(r_grid <= 0) or np.any(r_grid > p.r0 / 2):
        raise DomainError(f"grid radii must lie in (0, r0/2 = {p.r0 / 2:.6g}]")
    _, C_prime, _ = monotonicity_constants(p)
    areas = np.array([ball_area(m, r) for r in r_grid])
    bound = C_prime * r_grid**2
    ratio = areas / bound
    k = int(np.argmin(ratio))
    ok = bool(np.all(areas >= bound))
    return Verdict(
        engine="ball_monotonicity",
        passed=ok,
        status="pass" if ok else "fail",
        lhs=float(areas[k]),
        rhs=float(bound[k]),
        margin=float(ratio[k]),
        witness={"r": float(r_grid[k])},
        resolution={"grid": len(r_grid)},
    )


def check_main_inequality(L: DiscreteCurve, Lp: DiscreteCurve, d_lower: float | None, d_upper: float | None,
                          p: BoundsProfile | None = None, Lambda: float | None = None) -> Verdict:
    """Evaluate ``d < R'  =>  d >= C' delta_H^2`` on a bracket ``[d_lower, d_upper]``.

    Branches: ``hypothesis_false`` (d_lower >= R'), ``conclusion_holds``
    (d_lower >= C' delta_H^2), ``counterexample`` (d_upper < R' and
    d_upper < C' (delta_H - margin)^2) and ``inconclusive`` otherwise.
    ``passed`` is false only for a counterexample.
    """
    if d_lower is None or d_upper is None:
        raise ParameterError("both ends of the d bracket are required")
    if not 0 <= d_lower <= d_upper:
        raise InputError(f"invalid bracket [{d_lower}, {d_upper}]")
    m = L.surface
    if Lambda is None:
        Lambda = max(curvature_profile(L).max_curvature, curvature_profile(Lp).max_curvature)
    prof = (p or profile_for_surface(m)).replace(Lambda=float(Lambda))
    rep = compute_report(prof, r_inj_L=min(L.inj_radius, Lp.inj_radius))
    R_prime = rep.R_prime
    hd = hausdorff_distance(L, Lp)
    dh, marg = hd.value, hd.margin
    need = rep.C_prime * dh * dh
    if d_lower >= R_prime:
        branch = "hypothesis_false"
    elif d_lower >= need:
        branch = "conclusion_holds"
    elif d_upper < R_prime and d_upper < rep.C_prime * max(0.0, dh - marg) ** 2:
        branch = "counterexample"
    else:
        branch = "inconclusive"
    passed = branch != "counterexample"
    return Verdict(
        engine="main_inequality",
        passed=passed,
        status="pass" if passed else "counterexample",
        lhs=d_lower,
        rhs=need,
        margin=d_lower - need,
        witness={"hausdorff": dh, "hausdorff_margin": marg, "R_prime": R_prime, "Lambda": float(Lambda),
                 "C_prime": rep.C_prime, "d_upper": d_upper},
        branch=branch,
        resolution={"samples": [L.n, Lp.n]},
    )


# ---------------------------------------------------------------------------
# random suites
# ---------------------------------------------------------------------------

SUITE_KINDS = ("plane", "torus", "sphere", "hyperbolic")


def suite_surface(kind: str) -> tuple[SurfaceModel, BoundsProfile]:
    """Model and profile used by the random suites for each kind."""
    if kind == "plane":
        return SurfaceModel.plane(), BoundsProfile(K0=0.0, r0=math.inf)
    if kind == "torus":
        return SurfaceModel.torus(), BoundsProfile(K0=0.0, r0=math.pi)
    if kind == "sphere":
        return SurfaceModel.sphere(1.0), BoundsProfile(K0=1.0, r0=3.0)
    if kind == "hyperbolic":
        return SurfaceModel.hyperbolic(1.0), BoundsProfile(K0=1.0, r0=3.0)
    raise InputError(f"unknown surface kind {kind!r}")


def _random_center(m: SurfaceModel, rng) -> np.ndarray:
    if m.kind is SurfaceKind.FLAT_TORUS:
        return rng.uniform(0, m.period, 2)
    if m.kind is SurfaceKind.ROUND_SPHERE:
        v = rng.normal(size=3)
        return m.scale * v / np.linalg.norm(v)
    if m.kind is SurfaceKind.HYPERBOLIC_PLANE:
        r = 0.5 * math.sqrt(rng.uniform())
        a = rng.uniform(0, 2 * math.pi)
        return np.array([r * math.cos(a), r * math.sin(a)])
    return rng.uniform(-5, 5, 2)


def random_fourier_radii(rng, n: int, modes: int = 8, wiggle: float = 0.6) -> tuple[np.ndarray, np.ndarray]:
    """Positive star-shaped radius profile ``1 + sum`` with total amplitude below ``wiggle``."""
    th = np.linspace(0, 2 * np.pi, n, endpoint=False)
    a = rng.normal(size=modes) / np.arange(1, modes + 1) ** 2
    b = rng.normal(size=modes) / np.arange(1, modes + 1) ** 2
    tot = np.sum(np.abs(a) + np.abs(b))
    scale = wiggle * rng.uniform(0.05, 1.0) / tot
    k = np.arange(1, modes + 1)[:, None]
    r = 1 + scale * (a[:, None] * np.cos(k * th) + b[:, None] * np.sin(k * th)).sum(axis=0)
    return th, r


def isoperimetric_suite(kind: str, cases: int = 1000, seed: int | None = None, samples: int = 128) -> list[Verdict]:
    seed = default_seed() if seed is None else seed
    rng = np.random.default_rng([seed, SUITE_KINDS.index(kind), 1])
    m, p = suite_surface(kind)
    rmax = min(p.r0 / 2, 5.0)
    out = []
    for i in range(cases):
        c = _random_center(m, rng)
        th, r = random_fourier_radii(rng, samples)
        r = r / r.max() * rmax * rng.uniform(0.02, 1.0)
        pts = polar_points(m, c, r, th)
        v = check_isoperimetric_loop(DiscreteCurve(m, pts), p, center=c)
        v.seed, v.case = seed, i
        v.resolution["surface"] = kind
        out.append(v)
    return out


def _geodesic_base(m: SurfaceModel, n: int) -> DiscreteCurve:
    """A geodesic through the chart origin (closed where the model allows)."""
    if m.kind is SurfaceKind.FLAT_TORUS:
        x = np.linspace(0, m.period, n, endpoint=False)
        return DiscreteCurve(m, np.c_[x, np.full(n, 1.0)], True)
    if m.kind is SurfaceKind.ROUND_SPHERE:
        t = np.linspace(0, 2 * np.pi, n, endpoint=False)
        return DiscreteCurve(m, m.scale * np.c_[np.cos(t), np.sin(t), np.zeros(n)], True)
    if m.kind is SurfaceKind.HYPERBOLIC_PLANE:
        x = np.tanh(np.linspace(-3, 3, n) / 2)
        return DiscreteCurve(m, np.c_[x, np.zeros(n)], False)
    x = np.linspace(-4, 4, n)
    return DiscreteCurve(m, np.c_[x, np.zeros(n)], False)


def random_arc_on(L: DiscreteCurve, rng, delta: float, samples: int = 96):
    """Random bump arc with both endpoints on samples of ``L`` and inside a ``delta`` ball."""
    m = L.surface
    nL = L.n
    s = L.sample_arclength
    lo = nL // 4 if not L.closed else rng.integers(0, nL)
    i = int(lo)
    # endpoint j at arclength at most ~delta from i
    width = rng.uniform(0.1, 0.9) * delta
    ds = L.length / nL if L.closed else s[1] - s[0]
    steps = max(2, int(width / ds))
    j = (i + steps) % nL if L.closed else min(nL - 1, i + steps)
    base = geodesic_between(m, L.points[i], L.points[j], samples)
    u = np.linspace(0, 1, samples)
    chord = float(_accel.distance_np(m.code, m.param, L.points[i], L.points[j]))
    amp = rng.uniform(-1, 1) * 0.4 * delta
    k = rng.integers(1, 4)
    prof = amp * np.sin(np.pi * u) * (1 + 0.3 * np.sin(k * np.pi * u + rng.uniform(0, 2 * np.pi)))
    # push off along the normal of the chord
    chordc = DiscreteCurve(m, base, False)
    nrm = left_normals(chordc)
    nrm = nrm / m.norm(base, nrm)[:, None]
    pts = exp_map(m, base, prof[:, None] * nrm)
    pts[0], pts[-1] = L.points[i], L.points[j]
    return DiscreteCurve(m, pts, False), chord


def isoperimetric_arc_suite(cases: int = 300, seed: int | None = None) -> list[Verdict]:
    seed = default_seed() if seed is None else seed
    rng = np.random.default_rng([seed, 2])
    out = []
    bases = {}
    for i in range(cases):
        kind = SUITE_KINDS[i % 4]
        m, p = suite_surface(kind)
        if kind not in bases:
            bases[kind] = _geodesic_base(m, 2048)
        L = bases[kind]
        eps = float(rng.uniform(0.3, 1.0))
        p = p.replace(eps=eps)
        delta, _ = delta_radii(p.replace(i0=p.i0 or L.inj_radius), L.inj_radius)
        g, _ = random_arc_on(L, rng, delta)
        v = check_isoperimetric_arc(g, L, p)
        v.seed, v.case = seed, i
        v.resolution["surface"] = kind
        out.append(v)
    return out


def small_ball_suite(kind: str, cases: int = 200, seed: int | None = None, samples: int = 512) -> list[Verdict]:
    seed = default_seed() if seed is None else seed
    rng = np.random.default_rng([seed, SUITE_KINDS.index(kind), 3])
    m, p = suite_surface(kind)
    rmax = min(disk_constants(p)[0], 5.0)
    out = []
    for i in range(cases):
        c = _random_center(m, rng)
        th, r = random_fourier_radii(rng, 4 * samples, modes=6, wiggle=0.5)
        r = r / r.max() * rmax * rng.uniform(0.05, 0.95)
        pts = polar_points(m, c, r, th)
        curve = resample_arclength(DiscreteCurve(m, pts), samples)
        v = check_small_ball_curvature(curve, p, center=c)
        v.seed, v.case = seed, i
        v.resolution["surface"] = kind
        out.append(v)
    return out


def farthest_point_suite(kind: str = "sphere", cases: int = 200, seed: int | None = None,
                         samples: int = 512, profile: BoundsProfile | None = None) -> list[Verdict]:
    seed = default_seed() if seed is None else seed
    rng = np.random.default_rng([seed, SUITE_KINDS.index(kind), 4])
    m, p = suite_surface(kind)
    p = profile or p
    rmax = min(disk_constants(p)[0], 5.0)
    out = []
    for i in range(cases):
        c = _random_center(m, rng)
        th, r = random_fourier_radii(rng, 4 * samples, modes=6, wiggle=0.5)
        r = r / r.max() * rmax * rng.uniform(0.05, 0.95)
        curve = resample_arclength(DiscreteCurve(m, polar_points(m, c, r, th)), samples)
        v = check_farthest_point_curvature(curve, c, p)
        v.seed, v.case = seed, i
        v.resolution["surface"] = kind
        out.append(v)
    return out
