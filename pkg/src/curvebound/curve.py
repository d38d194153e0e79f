"""Discrete curves on a surface model and their metric quantities.

A ``DiscreteCurve`` is an ordered list of samples plus a smooth interpolant
(a cubic spline in the model's chart, periodic for closed curves) used for
length, arclength resampling and continuous refinement. Polygon quantities
(sums of geodesic chords) stay available for the inequality checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import minimize

from . import _accel
from .errors import InputError, ResolutionError, ScopeError
from .surface import SurfaceKind, SurfaceModel, TangentVec, log_map, torus_delta, unwrap

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)

MIN_POINTS = 8
MIN_CURVATURE_POINTS = 64
MIN_TAMENESS_POINTS = 256


class _Smooth:
    """Cubic-spline interpolant through the samples, parametrised by chord length."""

    def __init__(self, m: SurfaceModel, pts: np.ndarray, closed: bool):
        self.m = m
        self.closed = closed
        if m.kind is SurfaceKind.FLAT_TORUS:
            lift = unwrap(m, pts)
            if closed:
                tail = lift[-1] + torus_delta(m, pts[-1], pts[0])
                lift = np.vstack([lift, tail])
        else:
            lift = np.vstack([pts, pts[:1]]) if closed else pts.copy()
        t = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(lift, axis=0), axis=1))])
        self.t = t
        self.T = float(t[-1])
        self.drift = np.zeros(lift.shape[1])
        if closed and m.kind is SurfaceKind.FLAT_TORUS:
            self.drift = lift[-1] - lift[0]
        y = lift - np.outer(t / self.T, self.drift)
        if closed:
            y[-1] = y[0]
        self.cs = CubicSpline(t, y, bc_type="periodic" if closed else "not-a-knot")

    def _wrap(self, t):
        return np.mod(t, self.T) if self.closed else t

    def chart(self, t, nu=0):
        t = np.asarray(t, dtype=float)
        if nu == 0:
            return self.cs(t) + np.multiply.outer(t / self.T, self.drift)
        if nu == 1:
            return self.cs(t, 1) + self.drift / self.T
        return self.cs(t, nu)

    def point(self, t):
        x = self.chart(t)
        return self.m.project(x)

    def speed(self, t):
        x = self.chart(t)
        dx = self.chart(t, 1)
        k = self.m.kind
        if k is SurfaceKind.ROUND_SPHERE:
            r = np.linalg.norm(x, axis=-1, keepdims=True)
            xh = x / r
            tang = dx - np.sum(xh * dx, axis=-1, keepdims=True) * xh
            return self.m.scale * np.linalg.norm(tang, axis=-1) / r[..., 0]
        v = np.linalg.norm(dx, axis=-1)
        if k is SurfaceKind.HYPERBOLIC_PLANE:
            return v * self.m.metric_factor(x)
        return v

    def integral(self, a, b):
        """Arclength between parameters ``a`` and ``b`` (arrays, same shape)."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        h = 0.5 * (b - a)
        tt = (0.5 * (a + b))[..., None] + h[..., None] * _GL_X
        return h * np.sum(self.speed(tt) * _GL_W, axis=-1)

    @cached_property
    def table(self) -> np.ndarray:
        seg = self.integral(self.t[:-1], self.t[1:])
        return np.concatenate([[0.0], np.cumsum(seg)])

    def param_at(self, s, newton_steps: int = 12):
        """Chart parameter at arclength ``s`` by per-segment Newton iteration."""
        tab = self.table
        s = np.asarray(s, dtype=float)
        k = np.clip(np.searchsorted(tab, s, side="right") - 1, 0, len(tab) - 2)
        t0, t1 = self.t[k], self.t[k + 1]
        s0, s1 = tab[k], tab[k + 1]
        frac = np.where(s1 > s0, (s - s0) / np.where(s1 > s0, s1 - s0, 1.0), 0.0)
        t = t0 + frac * (t1 - t0)
        for _ in range(newton_steps):
            f = s0 + self.integral(t0, t) - s
            sp = self.speed(t)
            step = f / np.where(sp > 0, sp, 1.0)
            t = np.clip(t - step, t0, t1)
            if np.max(np.abs(step), initial=0.0) < 1e-15 * max(1.0, self.T):
                break
        return t


class DiscreteCurve:
    """Ordered samples on a surface, closed loop or open arc.

    Construction validates coordinates, rejects repeated consecutive samples
    and gaps of ``inj_radius/4`` or more, and builds the smooth interpolant.
    """

    def __init__(self, surface: SurfaceModel, points, closed: bool = True):
        self.surface = surface
        pts = surface.validate(np.asarray(points, dtype=float))
        if pts.ndim != 2:
            raise InputError("points must be a 2-D array of coordinates")
        if len(pts) < MIN_POINTS:
            raise InputError(f"a curve needs at least {MIN_POINTS} points, got {len(pts)}")
        pts.setflags(write=False)
        self.points = pts
        self.closed = bool(closed)
        seg = self.segment_lengths
        scale = max(float(np.max(seg)), 1e-300)
        bad = np.flatnonzero(seg <= 1e-14 * max(scale, surface.scale))
        if bad.size:
            raise InputError(f"repeated consecutive point at index {int(bad[0]) + 1 if bad[0] + 1 < len(pts) else 0}")
        lim = surface.inj_radius / 4
        far = np.flatnonzero(seg >= lim)
        if far.size:
            raise InputError(f"gap of {seg[far[0]]:.6g} after index {int(far[0])} exceeds inj_radius/4 = {lim:.6g}")
        self._smooth = _Smooth(surface, pts, self.closed)

    def __len__(self):
        return len(self.points)

    @property
    def n(self) -> int:
        return len(self.points)

    @cached_property
    def segment_lengths(self) -> np.ndarray:
        """Geodesic chord lengths, including the closing chord for loops."""
        p = self.points
        q = np.roll(p, -1, axis=0) if self.closed else p[1:]
        a = p if self.closed else p[:-1]
        return _accel.distance_np(self.surface.code, self.surface.param, a, q)

    @property
    def polygon_length(self) -> float:
        return float(np.sum(self.segment_lengths))

    @property
    def arclength_table(self) -> np.ndarray:
        """Cumulative smooth arclength at each sample, then the total for loops."""
        return self._smooth.table

    @property
    def sample_arclength(self) -> np.ndarray:
        return self._smooth.table[: self.n]

    @property
    def length(self) -> float:
        return float(self._smooth.table[-1])

    @property
    def max_spacing(self) -> float:
        return float(np.max(self.segment_lengths))

    @property
    def inj_radius(self) -> float:
        """Injectivity radius of the curve as a 1-manifold."""
        return self.length / 2 if self.closed else math.inf

    def point_at(self, s) -> np.ndarray:
        """Surface point at arclength ``s`` along the smooth interpolant."""
        s = np.asarray(s, dtype=float)
        if self.closed:
            s = np.mod(s, self.length)
        else:
            s = np.clip(s, 0.0, self.length)
        return self._smooth.point(self._smooth.param_at(s))

    def segments_in_chart(self):
        """``(A, B, period)`` straight segments for crossing tests.

        Torus segments are local lifts; sphere uses the gnomonic chart at the
        centroid and hyperbolic the Klein disk, both of which map geodesics to
        straight lines.
        """
        m = self.surface
        p = self.points
        nxt = np.roll(p, -1, axis=0) if self.closed else p[1:]
        a = p if self.closed else p[:-1]
        if m.kind is SurfaceKind.FLAT_TORUS:
            return a, a + torus_delta(m, a, nxt), m.period
        if m.kind is SurfaceKind.ROUND_SPHERE:
            c = p.mean(axis=0)
            nc = np.linalg.norm(c)
            if nc < 1e-9 * m.scale:
                raise ScopeError("curve is not contained in an open hemisphere")
            c = c / nc
            e1 = np.cross(c, [1.0, 0.0, 0.0] if abs(c[0]) < 0.9 else [0.0, 1.0, 0.0])
            e1 /= np.linalg.norm(e1)
            e2 = np.cross(c, e1)
            h = p @ c
            if np.any(h <= 0):
                raise ScopeError("curve is not contained in an open hemisphere")
            g = np.stack([(p @ e1) / h, (p @ e2) / h], axis=1)
            gn = np.roll(g, -1, axis=0) if self.closed else g[1:]
            return (g if self.closed else g[:-1]), gn, 0.0
        if m.kind is SurfaceKind.HYPERBOLIC_PLANE:
            k = 2 * p / (1 + np.sum(p * p, axis=1))[:, None]
            kn = np.roll(k, -1, axis=0) if self.closed else k[1:]
            return (k if self.closed else k[:-1]), kn, 0.0
        return a, nxt, 0.0

    def self_intersection(self, tol: float = 1e-9):
        """First crossing pair of segment indices, or ``None`` when embedded."""
        a, b, per = self.segments_in_chart()
        i, j = _accel.first_crossing(a, b, self.closed, per, tol)
        return None if i < 0 else (i, j)

    @property
    def is_embedded(self) -> bool:
        return self.self_intersection() is None

    def require_embedded(self):
        hit = self.self_intersection()
        if hit is not None:
            raise InputError(f"curve self-intersects: segments {hit[0]} and {hit[1]}")

    def to_dict(self) -> dict:
        return {
            "surface": self.surface.to_dict(),
            "closed": self.closed,
            "points": self.points.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> DiscreteCurve:
        for key in ("surface", "points"):
            if key not in d:
                raise InputError(f"curve object is missing {key!r}")
        surface = SurfaceModel.from_dict(d["surface"])
        closed = d.get("closed", True)
        if not isinstance(closed, bool):
            raise InputError("'closed' must be a boolean")
        try:
            pts = np.asarray(d["points"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise InputError(f"points are not numeric: {exc}") from None
        return cls(surface, pts, closed)


@dataclass(frozen=True)
class CurveMetrics:
    length: float
    max_curvature: float
    tameness: float | None
    inj_radius_L: float
    samples: int
    tameness_cutoff: float | None = None

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "max_curvature": self.max_curvature,
            "tameness": self.tameness,
            "tameness_cutoff": self.tameness_cutoff,
            "inj_radius_L": self.inj_radius_L,
            "samples": self.samples,
        }


# ---------------------------------------------------------------------------
# resampling
# ---------------------------------------------------------------------------

def resample_arclength(c: DiscreteCurve, n: int) -> DiscreteCurve:
    """``n`` samples at equal smooth-arclength spacing, starting at sample 0."""
    if n < MIN_POINTS:
        raise InputError(f"n must be at least {MIN_POINTS}")
    L = c.length
    if not L > 0:
        raise InputError("degenerate curve of zero length")
    s = np.arange(n) * (L / n) if c.closed else np.linspace(0.0, L, n)
    pts = c.point_at(s)
    pts[0] = c.points[0]
    if not c.closed:
        pts[-1] = c.points[-1]
    return DiscreteCurve(c.surface, pts, c.closed)


# ---------------------------------------------------------------------------
# local frames
# ---------------------------------------------------------------------------

def _sphere_basis(p, R):
    """Orthonormal tangent basis (e1, e2) at each row of ``p`` with e1 x e2 = outward normal."""
    nrm = p / R
    ref = np.where((np.abs(nrm[:, 2]) < 0.9)[:, None], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0])
    e1 = np.cross(ref, nrm)
    e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
    e2 = np.cross(nrm, e1)
    return e1, e2


def _to_frame(m: SurfaceModel, p, v):
    """Chart tangent vectors ``v`` at ``p`` in orthonormal 2-D components."""
    if m.kind is SurfaceKind.ROUND_SPHERE:
        e1, e2 = _sphere_basis(p, m.scale)
        return np.stack([np.sum(v * e1, axis=1), np.sum(v * e2, axis=1)], axis=1)
    if m.kind is SurfaceKind.HYPERBOLIC_PLANE:
        return v * m.metric_factor(p)[:, None]
    return v


def _from_frame(m: SurfaceModel, p, w):
    if m.kind is SurfaceKind.ROUND_SPHERE:
        e1, e2 = _sphere_basis(p, m.scale)
        return w[:, :1] * e1 + w[:, 1:] * e2
    if m.kind is SurfaceKind.HYPERBOLIC_PLANE:
        return w / m.metric_factor(p)[:, None]
    return w


def _neighbour_vectors(c: DiscreteCurve):
    """Normal-chart positions of the previous and next samples, orthonormal frame."""
    m = c.surface
    p = c.points
    prev = np.roll(p, 1, axis=0)
    nxt = np.roll(p, -1, axis=0)
    um = _to_frame(m, p, log_map(m, p, prev))
    up = _to_frame(m, p, log_map(m, p, nxt))
    return um, up


# ---------------------------------------------------------------------------
# curvature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurvatureProfile:
    kappa: np.ndarray  # signed, counterclockwise positive
    max_curvature: float
    argmax: int
    refined: bool = field(default=False)


def curvature_profile(c: DiscreteCurve) -> CurvatureProfile:
    """Signed geodesic curvature at every sample and the (refined) max of |kappa|.

    Each sample's neighbours are mapped to the normal chart at the sample and
    the Menger (circumcircle) curvature of the three points is taken; on
    evenly spaced samples this is second-order accurate. The maximum is
    refined by a parabola through the peak and its two neighbours.
    """
    n = c.n
    if n < MIN_CURVATURE_POINTS:
        raise ResolutionError(f"curvature needs at least {MIN_CURVATURE_POINTS} samples, got {n}")
    um, up = _neighbour_vectors(c)
    a = -um
    b = up
    cross = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
    la = np.linalg.norm(a, axis=1)
    lb = np.linalg.norm(b, axis=1)
    lc = np.linalg.norm(b + a, axis=1)
    kappa = 2.0 * cross / (la * lb * lc)
    if not c.closed:
        kappa[0] = kappa[1]
        kappa[-1] = kappa[-2]
    ak = np.abs(kappa)
    k = int(np.argmax(ak))
    peak = float(ak[k])
    refined = False
    if c.closed or 0 < k < n - 1:
        km, kp = ak[(k - 1) % n], ak[(k + 1) % n]
        den = km - 2 * peak + kp
        if den < 0:
            peak = peak - (kp - km) ** 2 / (8 * den)
            refined = True
    return CurvatureProfile(kappa=kappa, max_curvature=peak, argmax=k, refined=refined)


def max_curvature(c: DiscreteCurve) -> float:
    return curvature_profile(c).max_curvature


# ---------------------------------------------------------------------------
# intrinsic distance and tameness
# ---------------------------------------------------------------------------

def intrinsic_distance(c: DiscreteCurve, i: int, j: int) -> float:
    n = c.n
    if not (-n <= i < n and -n <= j < n):
        raise IndexError("sample index out of range")
    s = c.sample_arclength
    d = abs(float(s[i] - s[j]))
    if c.closed:
        d = min(d, c.length - d)
    return d


@dataclass(frozen=True)
class TamenessResult:
    value: float  # clamped to (0, 1]
    raw: float  # refined infimum before clamping
    discrete: float  # infimum over sample pairs
    witness: tuple
    cutoff: float
    samples: int
    self_intersecting: bool = False


def tameness_constant(c: DiscreteCurve, refine: bool = True) -> TamenessResult:
    """inf of ``d_M / min(1, d_L)`` over pairs with ``d_L`` beyond the near-diagonal cutoff.

    The cutoff is four sample spacings; closer pairs have ratio near 1.
    With ``refine`` the discrete minimiser is polished on the smooth
    interpolant. A self-intersecting curve gets 0 with the crossing segments
    as witness.
    """
    if not c.closed:
        raise InputError("tameness is defined here for closed curves")
    if c.n < MIN_TAMENESS_POINTS:
        raise ResolutionError(f"tameness needs at least {MIN_TAMENESS_POINTS} samples, got {c.n}")
    cutoff = 4.0 * c.length / c.n
    hit = c.self_intersection()
    if hit is not None:
        return TamenessResult(0.0, 0.0, 0.0, hit, cutoff, c.n, True)
    m = c.surface
    s = c.sample_arclength
    L = c.length
    disc, i, j = _accel.min_tameness(m.code, m.param, c.points, s, L, True, cutoff)
    if not math.isfinite(disc):
        return TamenessResult(1.0, 1.0, 1.0, (-1, -1), cutoff, c.n)
    best = disc

    if refine:
        def ratio(x):
            dl = abs(x[0] - x[1]) % L
            dl = min(dl, L - dl)
            if dl < cutoff:
                return math.inf
            pq = c.point_at(np.asarray(x))
            return float(_accel.distance_np(m.code, m.param, pq[0], pq[1])) / min(1.0, dl)

        h = L / c.n
        res = minimize(ratio, [s[i], s[j]], method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-13, "initial_simplex":
                                [[s[i], s[j]], [s[i] + h, s[j]], [s[i], s[j] + h]]})
        if res.fun < best:
            best = float(res.fun)
    return TamenessResult(min(1.0, best), best, disc, (i, j), cutoff, c.n)


# ---------------------------------------------------------------------------
# Hausdorff
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HausdorffResult:
    value: float
    margin: float
    witness: tuple  # (index in a, index in b)

    def __float__(self):
        return self.value


def _as_samples(x, surface):
    if isinstance(x, DiscreteCurve):
        return x.surface, x.points, 0.5 * x.max_spacing
    pts = np.asarray(x, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.size == 0:
        raise InputError("empty point set")
    return surface, pts, 0.0


def one_sided_hausdorff(a, b, surface: SurfaceModel | None = None) -> HausdorffResult:
    """``sup_{x in a} d(x, b)`` over samples, with the discretisation margin."""
    sa = a.surface if isinstance(a, DiscreteCurve) else None
    sb = b.surface if isinstance(b, DiscreteCurve) else None
    m = surface or sa or sb
    if m is None:
        raise InputError("a surface is required for bare point sets")
    if (sa and sa != m) or (sb and sb != m):
        raise InputError("curves live on different surfaces")
    _, A, ma = _as_samples(a, m)
    _, B, mb = _as_samples(b, m)
    if len(A) == 0 or len(B) == 0:
        raise InputError("empty point set")
    A = m.validate(A)
    B = m.validate(B)
    v, ia, ib = _accel.directed_hausdorff(m.code, m.param, A, B)
    return HausdorffResult(v, ma + mb, (ia, ib))


def hausdorff_distance(a, b, surface: SurfaceModel | None = None) -> HausdorffResult:
    ab = one_sided_hausdorff(a, b, surface)
    ba = one_sided_hausdorff(b, a, surface)
    if ab.value >= ba.value:
        return ab
    return HausdorffResult(ba.value, ba.margin, (ba.witness[1], ba.witness[0]))


# ---------------------------------------------------------------------------
# normals
# ---------------------------------------------------------------------------

def unit_tangents(c: DiscreteCurve) -> np.ndarray:
    """Central-difference unit tangents in the orthonormal frame at each sample."""
    um, up = _neighbour_vectors(c)
    la = np.linalg.norm(um, axis=1, keepdims=True)
    lb = np.linalg.norm(up, axis=1, keepdims=True)
    # weighted so that uneven spacing stays second order
    t = up * (la / lb) - um * (lb / la)
    if not c.closed:
        t[0] = up[0]
        t[-1] = -um[-1]
    return t / np.linalg.norm(t, axis=1, keepdims=True)


def left_normals(c: DiscreteCurve) -> np.ndarray:
    """Unit normals rotated +90 degrees from the tangent, as chart tangent vectors."""
    t = unit_tangents(c)
    w = np.stack([-t[:, 1], t[:, 0]], axis=1)
    return _from_frame(c.surface, c.points, w)


def inward_normal(c: DiscreteCurve, i: int, region_hint) -> TangentVec:
    """Unit normal at sample ``i`` on the side of ``region_hint``."""
    m = c.surface
    hint = m.validate(region_hint)
    p = c.points[i]
    if float(_accel.distance_np(m.code, m.param, p, hint)) < 1e-9 * max(1.0, m.scale):
        raise InputError("region hint lies on the curve; side is ambiguous")
    c.require_embedded()
    nl = left_normals(c)[i]
    toward = log_map(m, p, hint)
    dot = float(np.dot(_to_frame(m, p[None], nl[None])[0], _to_frame(m, p[None], toward[None])[0]))
    scale = np.linalg.norm(_to_frame(m, p[None], toward[None])[0])
    if abs(dot) <= 1e-12 * scale:
        raise InputError("region hint is tangent to the curve; side is ambiguous")
    return TangentVec(m, p, nl if dot > 0 else -nl)


# ---------------------------------------------------------------------------
# summary
# ---------------------------------------------------------------------------

def curve_metrics(c: DiscreteCurve, tameness: bool = True) -> CurveMetrics:
    kmax = curvature_profile(c).max_curvature
    tam = cut = None
    if tameness and c.closed and c.n >= MIN_TAMENESS_POINTS:
        res = tameness_constant(c)
        tam, cut = res.value, res.cutoff
    return CurveMetrics(
        length=c.length,
        max_curvature=kmax,
        tameness=tam,
        inj_radius_L=c.inj_radius,
        samples=c.n,
        tameness_cutoff=cut,
    )
