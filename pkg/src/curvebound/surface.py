"""Constant-curvature surface models.

Four homogeneous models with closed-form geometry:

* ``euclidean_plane``: Cartesian coordinates.
* ``flat_torus``: square torus ``R^2 / (period Z)^2``, coordinates reduced
  into ``[0, period)``.
* ``round_sphere``: points stored as 3-vectors of norm ``1/sqrt(K0)``;
  tangent vectors are ambient 3-vectors orthogonal to the base point.
* ``hyperbolic_plane``: Poincare disk of curvature ``-K0``; tangent vectors
  are chart components, with metric factor ``2 / (sqrt(K0) (1 - |z|^2))``.

All functions broadcast over leading axes of the coordinate arrays.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import _accel
from .errors import AmbiguityError, DomainError, InputError, ScopeError


class SurfaceKind(str, enum.Enum):
    EUCLIDEAN_PLANE = "euclidean_plane"
    FLAT_TORUS = "flat_torus"
    ROUND_SPHERE = "round_sphere"
    HYPERBOLIC_PLANE = "hyperbolic_plane"


_ALIASES = {
    "plane": SurfaceKind.EUCLIDEAN_PLANE,
    "torus": SurfaceKind.FLAT_TORUS,
    "sphere": SurfaceKind.ROUND_SPHERE,
    "hyperbolic": SurfaceKind.HYPERBOLIC_PLANE,
}

_CODES = {
    SurfaceKind.EUCLIDEAN_PLANE: _accel.PLANE,
    SurfaceKind.FLAT_TORUS: _accel.TORUS,
    SurfaceKind.ROUND_SPHERE: _accel.SPHERE,
    SurfaceKind.HYPERBOLIC_PLANE: _accel.HYPERBOLIC,
}


@dataclass(frozen=True)
class SurfaceModel:
    kind: SurfaceKind
    curvature: float = 0.0
    period: float | None = None

    def __post_init__(self):
        kind = _ALIASES.get(self.kind, self.kind)
        try:
            kind = SurfaceKind(kind)
        except ValueError:
            raise InputError(f"unknown surface kind {self.kind!r}") from None
        object.__setattr__(self, "kind", kind)
        flat = kind in (SurfaceKind.EUCLIDEAN_PLANE, SurfaceKind.FLAT_TORUS)
        if flat:
            if self.curvature != 0.0:
                raise InputError(f"{kind.value} has curvature bound 0, got {self.curvature}")
        elif not (self.curvature > 0 and math.isfinite(self.curvature)):
            raise InputError(f"{kind.value} needs a positive curvature bound, got {self.curvature}")
        if kind is SurfaceKind.FLAT_TORUS:
            period = 2 * math.pi if self.period is None else float(self.period)
            if not period > 0:
                raise InputError(f"torus period must be positive, got {period}")
            object.__setattr__(self, "period", period)
        elif self.period is not None:
            raise InputError("period only applies to flat_torus")

    # constructors -----------------------------------------------------------

    @classmethod
    def plane(cls) -> SurfaceModel:
        return cls(SurfaceKind.EUCLIDEAN_PLANE)

    @classmethod
    def torus(cls, period: float = 2 * math.pi) -> SurfaceModel:
        return cls(SurfaceKind.FLAT_TORUS, 0.0, period)

    @classmethod
    def sphere(cls, curvature: float = 1.0) -> SurfaceModel:
        return cls(SurfaceKind.ROUND_SPHERE, curvature)

    @classmethod
    def hyperbolic(cls, curvature: float = 1.0) -> SurfaceModel:
        return cls(SurfaceKind.HYPERBOLIC_PLANE, curvature)

    # derived ----------------------------------------------------------------

    @property
    def K0(self) -> float:
        return self.curvature

    @property
    def dim(self) -> int:
        """Length of a coordinate vector."""
        return 3 if self.kind is SurfaceKind.ROUND_SPHERE else 2

    @property
    def scale(self) -> float:
        """``1/sqrt(K0)`` for the curved models, 1 otherwise."""
        return 1.0 / math.sqrt(self.curvature) if self.curvature > 0 else 1.0

    @property
    def inj_radius(self) -> float:
        if self.kind is SurfaceKind.FLAT_TORUS:
            return self.period / 2
        if self.kind is SurfaceKind.ROUND_SPHERE:
            return math.pi * self.scale
        return math.inf

    @property
    def code(self) -> int:
        return _CODES[self.kind]

    @property
    def param(self) -> float:
        """Kernel parameter (see ``_accel``)."""
        return self.period if self.kind is SurfaceKind.FLAT_TORUS else self.scale

    @property
    def is_flat(self) -> bool:
        return self.curvature == 0.0

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value}
        if self.kind is SurfaceKind.FLAT_TORUS:
            out["period"] = self.period
        elif not self.is_flat:
            out["curvature"] = self.curvature
        return out

    @classmethod
    def from_dict(cls, d: dict) -> SurfaceModel:
        if not isinstance(d, dict) or "kind" not in d:
            raise InputError("surface descriptor needs a 'kind'")
        kind = _ALIASES.get(d["kind"], d["kind"])
        if kind in (SurfaceKind.ROUND_SPHERE, SurfaceKind.HYPERBOLIC_PLANE, "round_sphere", "hyperbolic_plane"):
            if "curvature" not in d:
                raise InputError(f"surface {d['kind']!r} requires 'curvature'")
            return cls(kind, float(d["curvature"]))
        if kind in (SurfaceKind.FLAT_TORUS, "flat_torus"):
            return cls(kind, 0.0, d.get("period"))
        return cls(kind)

    # points -----------------------------------------------------------------

    def validate(self, p, tol: float = 1e-12) -> np.ndarray:
        """Return ``p`` as a float array, reduced mod period on the torus.

        Raises InputError on malformed coordinates.
        """
        p = np.asarray(p, dtype=float)
        if p.shape[-1:] != (self.dim,):
            raise InputError(f"{self.kind.value} points need {self.dim} coordinates, got shape {p.shape}")
        if not np.all(np.isfinite(p)):
            raise InputError("non-finite coordinates")
        if self.kind is SurfaceKind.FLAT_TORUS:
            p = np.mod(p, self.period)
            p = np.where(p >= self.period, 0.0, p)
        elif self.kind is SurfaceKind.ROUND_SPHERE:
            r = np.linalg.norm(p, axis=-1)
            bad = np.abs(r - self.scale) > tol * max(1.0, self.scale)
            if np.any(bad):
                idx = int(np.flatnonzero(np.atleast_1d(bad))[0])
                raise InputError(f"sphere point {idx} has norm {np.atleast_1d(r)[idx]!r}, "
                                 f"expected {self.scale!r}")
        elif self.kind is SurfaceKind.HYPERBOLIC_PLANE:
            r2 = np.sum(p * p, axis=-1)
            if np.any(r2 >= 1.0):
                idx = int(np.flatnonzero(np.atleast_1d(r2 >= 1.0))[0])
                raise InputError(f"hyperbolic point {idx} lies outside the Poincare disk")
        return p

    def project(self, p) -> np.ndarray:
        """Snap raw coordinates onto the model (normalise, reduce)."""
        p = np.asarray(p, dtype=float)
        if self.kind is SurfaceKind.FLAT_TORUS:
            p = np.mod(p, self.period)
            return np.where(p >= self.period, 0.0, p)
        if self.kind is SurfaceKind.ROUND_SPHERE:
            return self.scale * p / np.linalg.norm(p, axis=-1, keepdims=True)
        return p

    def metric_factor(self, p) -> np.ndarray:
        """Ratio of Riemannian to chart length for tangent vectors at ``p``."""
        p = np.asarray(p, dtype=float)
        if self.kind is SurfaceKind.HYPERBOLIC_PLANE:
            return 2.0 * self.scale / (1.0 - np.sum(p * p, axis=-1))
        return np.ones(p.shape[:-1])

    def norm(self, p, v) -> np.ndarray:
        return self.metric_factor(p) * np.linalg.norm(np.asarray(v, dtype=float), axis=-1)


@dataclass(frozen=True)
class TangentVec:
    surface: SurfaceModel
    base: np.ndarray
    components: np.ndarray
    norm: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "base", np.asarray(self.base, dtype=float))
        object.__setattr__(self, "components", np.asarray(self.components, dtype=float))
        object.__setattr__(self, "norm", float(self.surface.norm(self.base, self.components)))


# ---------------------------------------------------------------------------
# distance, exp, log
# ---------------------------------------------------------------------------

def distance(m: SurfaceModel, p, q) -> np.ndarray | float:
    p = m.validate(p)
    q = m.validate(q)
    d = _accel.distance_np(m.code, m.param, p, q)
    return float(d) if np.ndim(d) == 0 else d


def torus_delta(m: SurfaceModel, p, q) -> np.ndarray:
    """Shortest displacement ``q - p`` over the 9 deck translates."""
    per = m.period
    d = np.asarray(q, dtype=float) - np.asarray(p, dtype=float)
    return d - per * np.round(d / per)


def _mobius(p, z):
    # z -> (z - p) / (1 - conj(p) z) on complex numbers
    return (z - p) / (1.0 - np.conj(p) * z)


def _mobius_inv(p, z):
    return (z + p) / (1.0 + np.conj(p) * z)


def _as_complex(a):
    a = np.asarray(a, dtype=float)
    return a[..., 0] + 1j * a[..., 1]


def _as_real(z):
    return np.stack([np.real(z), np.imag(z)], axis=-1)


def exp_map(m: SurfaceModel, p, v, warn: list | None = None) -> np.ndarray:
    """Geodesic flow from ``p`` for unit time with initial velocity ``v``.

    ``|v| >= inj_radius`` on sphere/torus still returns the flow image; when
    ``warn`` is a list, a message is appended to it.
    """
    p = m.validate(p)
    v = np.asarray(v, dtype=float)
    if v.shape[-1] != m.dim:
        raise InputError(f"tangent vector needs {m.dim} components")
    if warn is not None:
        nrm = np.max(np.atleast_1d(m.norm(p, v)))
        if nrm >= m.inj_radius:
            warn.append(f"|v| = {nrm:.6g} >= injectivity radius {m.inj_radius:.6g}; result not minimizing")
    k = m.kind
    if k is SurfaceKind.EUCLIDEAN_PLANE:
        return p + v
    if k is SurfaceKind.FLAT_TORUS:
        return m.project(p + v)
    if k is SurfaceKind.ROUND_SPHERE:
        R = m.scale
        nv = np.linalg.norm(v, axis=-1, keepdims=True)
        th = nv / R
        with np.errstate(invalid="ignore", divide="ignore"):
            dirn = np.where(nv > 0, v / np.where(nv > 0, nv, 1.0), 0.0)
        out = p * np.cos(th) + R * dirn * np.sin(th)
        return m.project(out)
    # hyperbolic: push to the origin, flow along a diameter, pull back
    pc = _as_complex(p)
    lam0 = 1.0 / (1.0 - np.abs(pc) ** 2)
    u = _as_complex(v) * lam0  # chart vector at the origin
    un = np.abs(u)
    d = 2.0 * un / math.sqrt(m.curvature)  # Riemannian length (origin factor 2/sqrt(K0))
    with np.errstate(invalid="ignore", divide="ignore"):
        w0 = np.where(un > 0, np.tanh(math.sqrt(m.curvature) * d / 2.0) * u / np.where(un > 0, un, 1.0), 0.0)
    return _as_real(_mobius_inv(pc, w0))


def log_map(m: SurfaceModel, p, q) -> np.ndarray:
    """Inverse of ``exp_map``: the tangent vector at ``p`` pointing to ``q``."""
    p = m.validate(p)
    q = m.validate(q)
    k = m.kind
    if k is SurfaceKind.EUCLIDEAN_PLANE:
        return q - p
    if k is SurfaceKind.FLAT_TORUS:
        return torus_delta(m, p, q)
    if k is SurfaceKind.ROUND_SPHERE:
        R = m.scale
        d = _accel.distance_np(_accel.SPHERE, R, p, q)[..., None]
        w = q - (np.sum(p * q, axis=-1, keepdims=True) / R**2) * p
        wn = np.linalg.norm(w, axis=-1, keepdims=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(wn > 0, d * w / np.where(wn > 0, wn, 1.0), 0.0)
    pc = _as_complex(p)
    w = _mobius(pc, _as_complex(q))
    wn = np.abs(w)
    d = 2.0 * m.scale * np.arctanh(wn)
    with np.errstate(invalid="ignore", divide="ignore"):
        u = np.where(wn > 0, w / np.where(wn > 0, wn, 1.0), 0.0) * d * math.sqrt(m.curvature) / 2.0
    return _as_real(u * (1.0 - np.abs(pc) ** 2))


def geodesic_between(m: SurfaceModel, p, q, samples: int) -> np.ndarray:
    """``samples`` points along the minimizing geodesic from ``p`` to ``q``."""
    if samples < 2:
        raise InputError("need at least 2 samples")
    d = distance(m, p, q)
    if d >= m.inj_radius:
        raise AmbiguityError(f"d(p, q) = {d:.6g} >= injectivity radius {m.inj_radius:.6g}")
    v = log_map(m, p, q)
    t = np.linspace(0.0, 1.0, samples)[:, None]
    pts = exp_map(m, np.broadcast_to(m.validate(p), (samples, m.dim)), t * v)
    pts[0] = m.validate(p)
    pts[-1] = m.validate(q)
    return pts


def ball_area(m: SurfaceModel, r: float) -> float:
    """Riemannian area of a metric ball of radius ``r`` (``0 < r < inj_radius``)."""
    r = float(r)
    if not (0 < r < m.inj_radius):
        raise DomainError(f"ball radius {r} outside (0, {m.inj_radius})")
    if m.is_flat:
        return math.pi * r * r
    k = math.sqrt(m.curvature)
    if m.kind is SurfaceKind.ROUND_SPHERE:
        return 2 * math.pi / m.curvature * (2 * math.sin(k * r / 2) ** 2)
    return 2 * math.pi / m.curvature * (2 * math.sinh(k * r / 2) ** 2)


# ---------------------------------------------------------------------------
# loop area
# ---------------------------------------------------------------------------

def centroid(m: SurfaceModel, pts) -> np.ndarray:
    """A centre for a small point cloud: extrinsic mean pulled back to the model."""
    pts = np.asarray(pts, dtype=float)
    if m.kind is SurfaceKind.FLAT_TORUS:
        lift = unwrap(m, pts)
        return m.project(lift.mean(axis=0))
    if m.kind is SurfaceKind.ROUND_SPHERE:
        c = pts.mean(axis=0)
        if np.linalg.norm(c) < 1e-12 * m.scale:
            raise ScopeError("points are not contained in an open hemisphere")
        return m.project(c)
    if m.kind is SurfaceKind.HYPERBOLIC_PLANE:
        H = _hyperboloid(pts)
        c = H.mean(axis=0)
        c = c / math.sqrt(c[0] ** 2 - c[1] ** 2 - c[2] ** 2)
        return c[1:] / (1.0 + c[0])
    return pts.mean(axis=0)


def unwrap(m: SurfaceModel, pts) -> np.ndarray:
    """Planar lift of a torus polyline, increment by increment."""
    pts = np.asarray(pts, dtype=float)
    steps = torus_delta(m, pts[:-1], pts[1:])
    return np.concatenate([pts[:1], pts[:1] + np.cumsum(steps, axis=0)])


def _hyperboloid(z):
    z = np.asarray(z, dtype=float)
    r2 = np.sum(z * z, axis=-1)
    den = 1.0 - r2
    return np.stack([(1 + r2) / den, 2 * z[..., 0] / den, 2 * z[..., 1] / den], axis=-1)


def _shoelace(xy) -> float:
    x, y = xy[:, 0], xy[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _fan_area(m: SurfaceModel, pts, apex) -> float:
    a = np.broadcast_to(apex, pts.shape)
    b = pts
    c = np.roll(pts, -1, axis=0)
    if m.is_flat:
        if m.kind is SurfaceKind.FLAT_TORUS:
            b = apex + torus_delta(m, apex, b)
            c = np.roll(b, -1, axis=0)
        ab, ac = b - a, c - a
        return 0.5 * float(np.sum(ab[:, 0] * ac[:, 1] - ab[:, 1] * ac[:, 0]))
    if m.kind is SurfaceKind.ROUND_SPHERE:
        R = m.scale
        A, B, C = a / R, b / R, c / R
        det = np.einsum("ij,ij->i", A, np.cross(B, C))
        den = 1.0 + np.einsum("ij,ij->i", A, B) + np.einsum("ij,ij->i", B, C) + np.einsum("ij,ij->i", C, A)
        return float(np.sum(2.0 * np.arctan2(det, den))) * R * R
    A, B, C = _hyperboloid(a), _hyperboloid(b), _hyperboloid(c)

    def mink(x, y):
        return -x[:, 0] * y[:, 0] + x[:, 1] * y[:, 1] + x[:, 2] * y[:, 2]

    det = np.einsum("ij,ij->i", A, np.cross(B, C))
    den = 1.0 - mink(A, B) - mink(B, C) - mink(C, A)
    return float(np.sum(2.0 * np.arctan2(det, den))) / m.curvature


def loop_area(m: SurfaceModel, loop, method: str = "auto", apex=None) -> float:
    """Signed area of the disk bounded by a closed geodesic polygon.

    ``loop`` is a DiscreteCurve or an ``(N, dim)`` array of vertices (the
    closing edge is implicit). Counterclockwise in the chart is positive; on
    the sphere that means counterclockwise seen from outside.

    ``method``: ``"lift"`` (planar lift + shoelace, flat kinds only),
    ``"fan"`` (triangle fan from ``apex``, default the centroid) or ``"auto"``
    (lift on flat kinds, fan otherwise).
    """
    pts = getattr(loop, "points", loop)
    if getattr(loop, "closed", True) is False:
        raise InputError("loop_area needs a closed curve")
    pts = m.validate(pts)
    if len(pts) < 3:
        return 0.0
    c = centroid(m, pts) if apex is None else m.validate(apex)
    reach = float(np.max(_accel.distance_np(m.code, m.param, c, pts)))
    if reach >= m.inj_radius:
        raise ScopeError(f"loop reaches {reach:.6g} from its centre; exceeds injectivity radius {m.inj_radius:.6g}")
    if method == "auto":
        method = "lift" if m.is_flat else "fan"
    if method == "lift":
        if not m.is_flat:
            raise InputError("lift method only applies to flat surfaces")
        if m.kind is SurfaceKind.FLAT_TORUS:
            lift = unwrap(m, np.concatenate([pts, pts[:1]]))
            if np.max(np.abs(lift[-1] - lift[0])) > 1e-9 * m.period:
                raise ScopeError("loop is not contractible on the torus")
            return _shoelace(lift[:-1])
        return _shoelace(pts)
    if method == "fan":
        return _fan_area(m, pts, c)
    raise InputError(f"unknown area method {method!r}")
