"""Hot loops: pairwise distance sweeps, point-in-polygon, segment tests.

Every kernel exists twice, as a numba ``@njit`` loop and as a chunked
pure-numpy version. The active backend is chosen once at import time:
numba when it imports cleanly, unless ``CURVEBOUND_NO_NUMBA`` is set to a
truthy value. Both implementations stay importable (``numba_impl`` and
``numpy_impl``) so the benchmark and the parity tests can call either.

Surface kinds are passed as small integer codes with one float parameter:
the torus period, the sphere radius ``1/sqrt(K0)`` or the hyperbolic length
scale ``1/sqrt(K0)``. Plane ignores the parameter.
"""

from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

PLANE, TORUS, SPHERE, HYPERBOLIC = 0, 1, 2, 3

_CHUNK = 1 << 21  # matrix entries per numpy chunk


def _env_disabled() -> bool:
    return os.environ.get("CURVEBOUND_NO_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}


try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _env_disabled()


# ---------------------------------------------------------------------------
# numpy reference path
# ---------------------------------------------------------------------------

def distance_np(kind: int, param: float, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Broadcasting geodesic distance between coordinate arrays ``a`` and ``b``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if kind == PLANE:
        d = a - b
        return np.hypot(d[..., 0], d[..., 1])
    if kind == TORUS:
        d = np.abs(a - b) % param
        d = np.minimum(d, param - d)
        return np.hypot(d[..., 0], d[..., 1])
    if kind == SPHERE:
        cr = np.cross(a, b)
        s = np.sqrt(np.sum(cr * cr, axis=-1))
        c = np.sum(a * b, axis=-1)
        return param * np.arctan2(s, c)
    if kind == HYPERBOLIC:
        d = a - b
        num = np.sum(d * d, axis=-1)
        den = (1.0 - np.sum(a * a, axis=-1)) * (1.0 - np.sum(b * b, axis=-1))
        return 2.0 * param * np.arcsinh(np.sqrt(num / den))
    raise ValueError(f"unknown surface kind code {kind}")


def _chunk_rows(n_rows: int, n_cols: int) -> int:
    return max(1, _CHUNK // max(1, n_cols))


def _directed_hausdorff_np(kind, param, A, B):
    best, ia, ib = -1.0, -1, -1
    step = _chunk_rows(len(A), len(B))
    for lo in range(0, len(A), step):
        D = distance_np(kind, param, A[lo:lo + step, None, :], B[None, :, :])
        jmin = np.argmin(D, axis=1)
        dmin = D[np.arange(D.shape[0]), jmin]
        k = int(np.argmax(dmin))
        if dmin[k] > best:
            best, ia, ib = float(dmin[k]), lo + k, int(jmin[k])
    return best, ia, ib


def _min_dist_to_set_np(kind, param, Q, B):
    out = np.empty(len(Q))
    arg = np.empty(len(Q), dtype=np.int64)
    step = _chunk_rows(len(Q), len(B))
    for lo in range(0, len(Q), step):
        D = distance_np(kind, param, Q[lo:lo + step, None, :], B[None, :, :])
        j = np.argmin(D, axis=1)
        arg[lo:lo + step] = j
        out[lo:lo + step] = D[np.arange(D.shape[0]), j]
    return out, arg


def _min_tameness_np(kind, param, P, s, length, closed, cutoff):
    n = len(P)
    best, bi, bj = np.inf, -1, -1
    step = _chunk_rows(n, n)
    for lo in range(0, n, step):
        rows = np.arange(lo, min(n, lo + step))
        dm = distance_np(kind, param, P[rows, None, :], P[None, :, :])
        dl = np.abs(s[rows, None] - s[None, :])
        if closed:
            dl = np.minimum(dl, length - dl)
        mask = (dl >= cutoff) & (rows[:, None] < np.arange(n)[None, :])
        if not mask.any():
            continue
        ratio = np.where(mask, dm / np.minimum(1.0, np.where(mask, dl, 1.0)), np.inf)
        k = int(np.argmin(ratio))
        r, c = divmod(k, n)
        if ratio[r, c] < best:
            best, bi, bj = float(ratio[r, c]), int(rows[r]), int(c)
    return best, bi, bj


def _even_odd_np(Q, poly):
    x, y = Q[:, 0][:, None], Q[:, 1][:, None]
    x1, y1 = poly[:, 0][None, :], poly[:, 1][None, :]
    nxt = np.roll(poly, -1, axis=0)
    x2, y2 = nxt[:, 0][None, :], nxt[:, 1][None, :]
    inside = np.zeros(len(Q), dtype=bool)
    step = _chunk_rows(len(Q), len(poly))
    for lo in range(0, len(Q), step):
        xx, yy = x[lo:lo + step], y[lo:lo + step]
        straddle = (y1 > yy) != (y2 > yy)
        with np.errstate(divide="ignore", invalid="ignore"):
            xc = x1 + (yy - y1) * (x2 - x1) / (y2 - y1)
        hits = straddle & (xx < xc)
        inside[lo:lo + step] = (np.count_nonzero(hits, axis=1) % 2) == 1
    return inside


def _seg_dist_np(Q, poly, closed):
    a = poly if closed else poly[:-1]
    b = np.roll(poly, -1, axis=0) if closed else poly[1:]
    ab = b - a
    ab2 = np.sum(ab * ab, axis=1)
    ab2 = np.where(ab2 > 0, ab2, 1.0)
    out = np.empty(len(Q))
    step = _chunk_rows(len(Q), len(a))
    for lo in range(0, len(Q), step):
        q = Q[lo:lo + step, None, :]
        t = np.clip(np.sum((q - a[None]) * ab[None], axis=2) / ab2[None], 0.0, 1.0)
        proj = a[None] + t[..., None] * ab[None]
        d = q - proj
        out[lo:lo + step] = np.sqrt(np.min(np.sum(d * d, axis=2), axis=1))
    return out


def _orient_np(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _first_crossing_np(A, B, closed, period, tol):
    # segment k runs A[k] -> B[k]; neighbours k, k+1 (and 0, m-1 when closed) share a vertex
    m = len(A)
    mid = 0.5 * (A + B)
    half = 0.5 * np.hypot(B[:, 0] - A[:, 0], B[:, 1] - A[:, 1])
    for i in range(m):
        j = np.arange(i + 2, m)
        if closed and i == 0:
            j = j[j != m - 1]
        if j.size == 0:
            continue
        shift = mid[j] - mid[i]
        if period > 0:
            shift = period * np.round(shift / period)
        else:
            shift = np.zeros_like(shift)
        r, s = A[j] - shift, B[j] - shift
        gap = np.hypot(*(0.5 * (r + s) - mid[i]).T)
        near = gap <= half[i] + half[j] + tol
        if not near.any():
            continue
        j, r, s = j[near], r[near], s[near]
        p, q = A[i], B[i]
        o1 = _orient_np(p[0], p[1], q[0], q[1], r[:, 0], r[:, 1])
        o2 = _orient_np(p[0], p[1], q[0], q[1], s[:, 0], s[:, 1])
        o3 = _orient_np(r[:, 0], r[:, 1], s[:, 0], s[:, 1], p[0], p[1])
        o4 = _orient_np(r[:, 0], r[:, 1], s[:, 0], s[:, 1], q[0], q[1])
        hit = (o1 * o2 <= 0.0) & (o3 * o4 <= 0.0)
        # collinear far-apart segments also give zero products; require box overlap
        lo_x = np.maximum(np.minimum(p[0], q[0]), np.minimum(r[:, 0], s[:, 0]))
        hi_x = np.minimum(np.maximum(p[0], q[0]), np.maximum(r[:, 0], s[:, 0]))
        lo_y = np.maximum(np.minimum(p[1], q[1]), np.minimum(r[:, 1], s[:, 1]))
        hi_y = np.minimum(np.maximum(p[1], q[1]), np.maximum(r[:, 1], s[:, 1]))
        hit &= (lo_x <= hi_x + tol) & (lo_y <= hi_y + tol)
        if hit.any():
            return i, int(j[np.argmax(hit)])
    return -1, -1


numpy_impl = SimpleNamespace(
    name="numpy",
    directed_hausdorff=_directed_hausdorff_np,
    min_dist_to_set=_min_dist_to_set_np,
    min_tameness=_min_tameness_np,
    even_odd=_even_odd_np,
    seg_dist=_seg_dist_np,
    first_crossing=_first_crossing_np,
)


# ---------------------------------------------------------------------------
# numba path
# ---------------------------------------------------------------------------

if HAVE_NUMBA:
    from numba import njit

    @njit(cache=True, fastmath=False)
    def _dist_nb(kind, param, A, i, B, j):
        if kind == 0:
            dx = A[i, 0] - B[j, 0]
            dy = A[i, 1] - B[j, 1]
            return np.sqrt(dx * dx + dy * dy)
        if kind == 1:
            dx = abs(A[i, 0] - B[j, 0]) % param
            dy = abs(A[i, 1] - B[j, 1]) % param
            dx = min(dx, param - dx)
            dy = min(dy, param - dy)
            return np.sqrt(dx * dx + dy * dy)
        if kind == 2:
            ax, ay, az = A[i, 0], A[i, 1], A[i, 2]
            bx, by, bz = B[j, 0], B[j, 1], B[j, 2]
            cx = ay * bz - az * by
            cy = az * bx - ax * bz
            cz = ax * by - ay * bx
            s = np.sqrt(cx * cx + cy * cy + cz * cz)
            c = ax * bx + ay * by + az * bz
            return param * np.arctan2(s, c)
        dx = A[i, 0] - B[j, 0]
        dy = A[i, 1] - B[j, 1]
        na = 1.0 - (A[i, 0] * A[i, 0] + A[i, 1] * A[i, 1])
        nb = 1.0 - (B[j, 0] * B[j, 0] + B[j, 1] * B[j, 1])
        return 2.0 * param * np.arcsinh(np.sqrt((dx * dx + dy * dy) / (na * nb)))

    @njit(cache=True)
    def _directed_hausdorff_nb(kind, param, A, B):
        # early-break sup-inf: stop scanning B once below the running max
        best = -1.0
        ia = -1
        ib = -1
        for i in range(A.shape[0]):
            cmin = np.inf
            jmin = -1
            broke = False
            for j in range(B.shape[0]):
                d = _dist_nb(kind, param, A, i, B, j)
                if d < cmin:
                    cmin = d
                    jmin = j
                    if cmin < best:
                        broke = True
                        break
            if not broke and cmin > best:
                best = cmin
                ia = i
                ib = jmin
        return best, ia, ib

    @njit(cache=True)
    def _min_dist_to_set_nb(kind, param, Q, B):
        out = np.empty(Q.shape[0])
        arg = np.empty(Q.shape[0], dtype=np.int64)
        for i in range(Q.shape[0]):
            cmin = np.inf
            jmin = -1
            for j in range(B.shape[0]):
                d = _dist_nb(kind, param, Q, i, B, j)
                if d < cmin:
                    cmin = d
                    jmin = j
            out[i] = cmin
            arg[i] = jmin
        return out, arg

    @njit(cache=True)
    def _min_tameness_nb(kind, param, P, s, length, closed, cutoff):
        n = P.shape[0]
        best = np.inf
        bi = -1
        bj = -1
        for i in range(n):
            for j in range(i + 1, n):
                dl = abs(s[i] - s[j])
                if closed:
                    dl = min(dl, length - dl)
                if dl < cutoff:
                    continue
                r = _dist_nb(kind, param, P, i, P, j) / min(1.0, dl)
                if r < best:
                    best = r
                    bi = i
                    bj = j
        return best, bi, bj

    @njit(cache=True)
    def _even_odd_nb(Q, poly):
        n = poly.shape[0]
        out = np.zeros(Q.shape[0], dtype=np.bool_)
        for q in range(Q.shape[0]):
            x = Q[q, 0]
            y = Q[q, 1]
            c = False
            for i in range(n):
                k = (i + 1) % n
                y1 = poly[i, 1]
                y2 = poly[k, 1]
                if (y1 > y) != (y2 > y):
                    xc = poly[i, 0] + (y - y1) * (poly[k, 0] - poly[i, 0]) / (y2 - y1)
                    if x < xc:
                        c = not c
            out[q] = c
        return out

    @njit(cache=True)
    def _seg_dist_nb(Q, poly, closed):
        n = poly.shape[0]
        m = n if closed else n - 1
        out = np.empty(Q.shape[0])
        for q in range(Q.shape[0]):
            best = np.inf
            for i in range(m):
                k = (i + 1) % n
                ax = poly[i, 0]
                ay = poly[i, 1]
                abx = poly[k, 0] - ax
                aby = poly[k, 1] - ay
                ab2 = abx * abx + aby * aby
                t = 0.0
                if ab2 > 0.0:
                    t = ((Q[q, 0] - ax) * abx + (Q[q, 1] - ay) * aby) / ab2
                    t = min(1.0, max(0.0, t))
                dx = Q[q, 0] - (ax + t * abx)
                dy = Q[q, 1] - (ay + t * aby)
                d2 = dx * dx + dy * dy
                if d2 < best:
                    best = d2
            out[q] = np.sqrt(best)
        return out

    @njit(cache=True)
    def _first_crossing_nb(A, B, closed, period, tol):
        m = A.shape[0]
        for i in range(m):
            px, py = A[i, 0], A[i, 1]
            qx, qy = B[i, 0], B[i, 1]
            mx, my = 0.5 * (px + qx), 0.5 * (py + qy)
            hi = 0.5 * np.sqrt((qx - px) ** 2 + (qy - py) ** 2)
            for j in range(i + 2, m):
                if closed and i == 0 and j == m - 1:
                    continue
                sx0 = 0.0
                sy0 = 0.0
                if period > 0.0:
                    sx0 = period * np.round((0.5 * (A[j, 0] + B[j, 0]) - mx) / period)
                    sy0 = period * np.round((0.5 * (A[j, 1] + B[j, 1]) - my) / period)
                rx, ry = A[j, 0] - sx0, A[j, 1] - sy0
                sx, sy = B[j, 0] - sx0, B[j, 1] - sy0
                hj = 0.5 * np.sqrt((sx - rx) ** 2 + (sy - ry) ** 2)
                gx = 0.5 * (rx + sx) - mx
                gy = 0.5 * (ry + sy) - my
                if np.sqrt(gx * gx + gy * gy) > hi + hj + tol:
                    continue
                o1 = (qx - px) * (ry - py) - (qy - py) * (rx - px)
                o2 = (qx - px) * (sy - py) - (qy - py) * (sx - px)
                o3 = (sx - rx) * (py - ry) - (sy - ry) * (px - rx)
                o4 = (sx - rx) * (qy - ry) - (sy - ry) * (qx - rx)
                if o1 * o2 <= 0.0 and o3 * o4 <= 0.0:
                    if (max(min(px, qx), min(rx, sx)) <= min(max(px, qx), max(rx, sx)) + tol
                            and max(min(py, qy), min(ry, sy)) <= min(max(py, qy), max(ry, sy)) + tol):
                        return i, j
        return -1, -1

    numba_impl = SimpleNamespace(
        name="numba",
        directed_hausdorff=_directed_hausdorff_nb,
        min_dist_to_set=_min_dist_to_set_nb,
        min_tameness=_min_tameness_nb,
        even_odd=_even_odd_nb,
        seg_dist=_seg_dist_nb,
        first_crossing=_first_crossing_nb,
    )
else:  # pragma: no cover
    numba_impl = None

impl = numba_impl if USE_NUMBA else numpy_impl
BACKEND = impl.name


def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def directed_hausdorff(kind, param, A, B):
    """``(sup_a inf_b d(a, b), index_a, index_b)``."""
    v, i, j = impl.directed_hausdorff(int(kind), float(param), _f64(A), _f64(B))
    return float(v), int(i), int(j)


def min_dist_to_set(kind, param, Q, B):
    d, j = impl.min_dist_to_set(int(kind), float(param), _f64(Q), _f64(B))
    return np.asarray(d), np.asarray(j)


def min_tameness(kind, param, P, s, length, closed, cutoff):
    """Smallest ``d_M / min(1, d_L)`` over sample pairs with ``d_L >= cutoff``."""
    v, i, j = impl.min_tameness(int(kind), float(param), _f64(P), _f64(s),
                                float(length), bool(closed), float(cutoff))
    return float(v), int(i), int(j)


def even_odd(Q, poly):
    return np.asarray(impl.even_odd(_f64(Q), _f64(poly)))


def seg_dist(Q, poly, closed=True):
    return np.asarray(impl.seg_dist(_f64(Q), _f64(poly), bool(closed)))


def first_crossing(A, B, closed, period=0.0, tol=1e-9):
    """First pair of non-adjacent crossing segments ``A[k] -> B[k]``, or ``(-1, -1)``.

    With ``period > 0`` segment ``j`` is compared in the translate nearest to
    segment ``i`` (valid when segments are shorter than a quarter period).
    """
    i, j = impl.first_crossing(_f64(A), _f64(B), bool(closed), float(period), float(tol))
    return int(i), int(j)
