"""Graph Hamiltonians on the flat torus and the two cosine families.

``H(x, y) = A sin(n x)`` generates the shear ``(x, y) -> (x, y + t A n cos(n x))``.
With ``A = 1/n`` the time-one image of the horizontal circle ``L0 = {y = 0}``
is ``L_n = {y = cos(n x)}``; with ``A = n^{-3/2}`` it is
``K_n = {y = n^{-1/2} cos(n x)}``.

The Hofer distance is bracketed: the oscillation ``2A`` bounds it above and
the smallest lobe between the curves bounds it below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import compute_report
from .curve import (
    DiscreteCurve,
    hausdorff_distance,
    resample_arclength,
    tameness_constant,
)
from .errors import InputError, ResolutionError, ScopeError
from .surface import SurfaceKind, SurfaceModel, loop_area
from .verify import Verdict, check_main_inequality, profile_for_surface

TORUS = SurfaceModel.torus()
CURVATURE_SAMPLES_PER_N = 4096


@dataclass(frozen=True)
class GraphHamiltonian:
    """``H(x, y) = amplitude * sin(frequency * x)``."""

    amplitude: float
    frequency: int

    @classmethod
    def H(cls, n: int) -> GraphHamiltonian:
        return cls(1.0 / n, n)

    @classmethod
    def G(cls, n: int) -> GraphHamiltonian:
        return cls(n ** -1.5, n)

    @classmethod
    def for_family(cls, kind: str, n: int) -> GraphHamiltonian:
        if kind == "L":
            return cls.H(n)
        if kind == "K":
            return cls.G(n)
        raise InputError(f"family must be 'L' or 'K', got {kind!r}")

    def __call__(self, x, y=None):
        return self.amplitude * np.sin(self.frequency * np.asarray(x, dtype=float))

    @property
    def graph_amplitude(self) -> float:
        """Amplitude of the time-one image of ``L0``."""
        return self.amplitude * self.frequency

    def graph(self, x, t: float = 1.0):
        return t * self.graph_amplitude * np.cos(self.frequency * np.asarray(x, dtype=float))

    def graph_derivatives(self, x):
        a, n = self.graph_amplitude, self.frequency
        x = np.asarray(x, dtype=float)
        return -a * n * np.sin(n * x), -a * n * n * np.cos(n * x)


def hamiltonian_flow(H: GraphHamiltonian, t: float, p, surface: SurfaceModel = TORUS) -> np.ndarray:
    """Time-``t`` flow of a graph Hamiltonian."""
    if surface.kind is not SurfaceKind.FLAT_TORUS:
        raise ScopeError("graph Hamiltonian flows are defined on the flat torus")
    p = surface.validate(p)
    x = p[..., 0]
    y = p[..., 1] + H.graph(x, t)
    return surface.project(np.stack([x, y], axis=-1))


def oscillation(H) -> float:
    """``max H - min H``; exact ``2A`` for a ``GraphHamiltonian``."""
    if isinstance(H, GraphHamiltonian):
        return 2.0 * abs(H.amplitude) if H.frequency != 0 else 0.0
    if isinstance(H, (int, float)):
        return 0.0
    return float(H.oscillation())


def graph_curve(f, n_points: int, surface: SurfaceModel = TORUS) -> DiscreteCurve:
    """Closed torus curve ``{y = f(x)}`` sampled at uniform ``x``."""
    x = np.arange(n_points) * (surface.period / n_points)
    return DiscreteCurve(surface, np.c_[x, f(x)], True)


def family_curve(kind: str, n: int, samples: int | None = None) -> DiscreteCurve:
    """``L_n`` or ``K_n``, resampled to equal arclength starting at the crest ``x = 0``."""
    if n < 1:
        raise InputError("n must be >= 1")
    samples = 64 * n if samples is None else samples
    if samples < 64 * n:
        raise ResolutionError(f"need at least 64n = {64 * n} samples, got {samples}")
    H = GraphHamiltonian.for_family(kind, n)
    dense = graph_curve(H.graph, max(8 * samples, 4096))
    return resample_arclength(dense, samples)


def base_circle(samples: int, height: float = 0.0) -> DiscreteCurve:
    return graph_curve(lambda x: np.full_like(x, height), samples)


def analytic_max_curvature(H: GraphHamiltonian) -> float:
    """``max |f''|/(1 + f'^2)^{3/2}`` for ``f = a cos(n x)``; attained at the crests."""
    return H.graph_amplitude * H.frequency**2


def graph_max_curvature(H, samples_per_n: int = CURVATURE_SAMPLES_PER_N, frequency: int | None = None) -> float:
    """Discrete curvature oracle on uniform-``x`` graph samples.

    The three-point stencil is symmetric, so its error is even in the
    spacing; one Richardson step against the half-resolution curve removes
    the leading term.
    """
    from .curve import curvature_profile

    n = frequency or H.frequency
    N = 2 * (samples_per_n * n // 2)
    fine = curvature_profile(graph_curve(H.graph, N)).max_curvature
    coarse = curvature_profile(graph_curve(H.graph, N // 2)).max_curvature
    return (4 * fine - coarse) / 3


# ---------------------------------------------------------------------------
# lobes
# ---------------------------------------------------------------------------

def _graph_function(c: DiscreteCurve):
    """Periodic interpolant ``y(x)`` for a torus curve that is a graph over ``x``."""
    from scipy.interpolate import CubicSpline

    m = c.surface
    if m.kind is not SurfaceKind.FLAT_TORUS:
        raise ScopeError("lobe areas are computed on the flat torus")
    P = m.period
    steps = np.diff(np.vstack([c.points, c.points[:1]]), axis=0)
    steps -= P * np.round(steps / P)
    if not np.all(steps[:, 0] > 0):
        raise InputError("curve is not a graph over x with increasing x")
    if abs(np.sum(steps[:, 0]) - P) > 1e-9 * P or abs(np.sum(steps[:, 1])) > 1e-9 * P:
        raise InputError("curve does not wind once horizontally")
    x = c.points[0, 0] + np.concatenate([[0.0], np.cumsum(steps[:, 0])])
    y = c.points[0, 1] + np.concatenate([[0.0], np.cumsum(steps[:, 1])])
    y[-1] = y[0]
    cs = CubicSpline(x, y, bc_type="periodic")
    x0 = x[0]

    def f(t):
        return cs(x0 + np.mod(np.asarray(t, dtype=float) - x0, P))

    return f


def _wrap_diff(d, P):
    return d - P * np.round(d / P)


def lobe_areas(a: DiscreteCurve, b: DiscreteCurve, scan: int | None = None) -> list[float]:
    """Areas of the regions between two transverse graph curves on the torus.

    Crossings are sign changes of ``f_a - f_b`` refined by bisection to
    ``1e-12``; each lobe is closed up from both curves and measured with
    ``loop_area``. Without crossings the single annulus area is returned.
    """
    m = a.surface
    P = m.period
    fa, fb = _graph_function(a), _graph_function(b)
    scan = scan or 16 * max(a.n, b.n)
    xs = np.arange(scan + 1) * (P / scan)

    def g(x):
        return _wrap_diff(fa(x) - fb(x), P)

    gv = g(xs)
    if np.all(gv != 0) and (np.all(gv > 0) or np.all(gv < 0)):
        # annulus: integrate the gap
        xq = np.arange(scan) * (P / scan)
        return [float(abs(np.mean(g(xq))) * P)]
    roots = []
    for k in range(scan):
        g0, g1 = gv[k], gv[k + 1]
        if g0 == 0:
            roots.append(xs[k])
            continue
        if g0 * g1 < 0:
            lo, hi = xs[k], xs[k + 1]
            while hi - lo > 1e-12:
                mid = 0.5 * (lo + hi)
                if g(mid) * g0 > 0:
                    lo = mid
                else:
                    hi = mid
            roots.append(0.5 * (lo + hi))
    roots = np.array(sorted(set(np.round(np.mod(roots, P), 14))))
    if len(roots) < 2:
        raise InputError("curves touch without crossing; perturb one of them")
    # tangency check: slope of the gap at each crossing
    h = 1e-7
    slope = (g(roots + h) - g(roots - h)) / (2 * h)
    if np.any(np.abs(slope) < 1e-9):
        raise InputError("non-transverse intersection; perturb one of the curves")
    areas = []
    per_lobe = max(64, 4 * scan // len(roots))
    for k in range(len(roots)):
        x0 = roots[k]
        x1 = roots[(k + 1) % len(roots)] + (P if k + 1 == len(roots) else 0.0)
        u = np.linspace(x0, x1, per_lobe)
        top = np.c_[u, fa(u)]
        bot = np.c_[u[::-1], fb(u[::-1])]
        loop = np.vstack([top, bot[1:-1]])
        areas.append(abs(loop_area(m, m.project(loop))))
    return areas


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

@dataclass
class FamilyReport:
    kind: str
    n: int
    hofer_lower: float
    hofer_upper: float
    hausdorff: float
    hausdorff_margin: float
    max_curvature_oracle: float
    max_curvature_analytic: float
    max_curvature_paper_claim: float
    curvature_mismatch: bool
    tameness: float
    threshold_R_prime: float
    implication_verdict: Verdict
    lobes: int

    @property
    def bracket_tight(self) -> bool:
        return abs(self.hofer_upper - self.hofer_lower) <= 1e-4

    def row(self) -> dict:
        return {
            "n": self.n,
            "hofer_lower": self.hofer_lower,
            "hofer_upper": self.hofer_upper,
            "hausdorff": self.hausdorff,
            "kappa_oracle": self.max_curvature_oracle,
            "kappa_paper": self.max_curvature_paper_claim,
            "tameness": self.tameness,
            "R_prime": self.threshold_R_prime,
            "implication": self.implication_verdict.branch,
        }

    def to_dict(self) -> dict:
        d = dict(self.row())
        d.update({
            "kind": self.kind,
            "hausdorff_margin": self.hausdorff_margin,
            "kappa_analytic": self.max_curvature_analytic,
            "curvature_mismatch": self.curvature_mismatch,
            "bracket_tight": self.bracket_tight,
            "implication_passed": self.implication_verdict.passed,
            "lobes": self.lobes,
        })
        return d


def paper_curvature_claim(kind: str, n: int) -> float:
    """The curvature maximum stated for the families (``n`` and ``sqrt n``)."""
    return float(n) if kind == "L" else math.sqrt(n)


def hausdorff_samples(n: int) -> int:
    """Sample count for distance work: a multiple of ``2n`` so every crest is a sample."""
    return 2 * n * max(64, 2048 // (2 * n))


def family_report(kind: str, n: int, tameness_samples: int | None = None) -> FamilyReport:
    if n < 2:
        raise InputError("family reports start at n = 2")
    H = GraphHamiltonian.for_family(kind, n)
    N = hausdorff_samples(n)
    curve = family_curve(kind, n, N)
    L0 = base_circle(N)
    lobes = lobe_areas(L0, curve)
    lower = min(lobes)
    upper = oscillation(H)
    hd = hausdorff_distance(L0, curve)
    kappa = graph_max_curvature(H)
    kappa_exact = analytic_max_curvature(H)
    claim = paper_curvature_claim(kind, n)
    ts = tameness_samples or max(256, 64 * n)
    tam = tameness_constant(family_curve(kind, n, ts) if ts != N else curve).value
    verdict = check_main_inequality(L0, curve, lower, upper, Lambda=kappa)
    R_prime = verdict.witness["R_prime"]
    return FamilyReport(
        kind=kind,
        n=n,
        hofer_lower=lower,
        hofer_upper=upper,
        hausdorff=hd.value,
        hausdorff_margin=hd.margin,
        max_curvature_oracle=kappa,
        max_curvature_analytic=kappa_exact,
        max_curvature_paper_claim=claim,
        curvature_mismatch=abs(kappa - claim) > 1e-3 * claim,
        tameness=tam,
        threshold_R_prime=R_prime,
        implication_verdict=verdict,
        lobes=len(lobes),
    )


# ---------------------------------------------------------------------------
# random graph Hamiltonians
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FourierHamiltonian:
    """``h(x) = sum_k a_k sin(k x + phi_k)``; its flow maps ``L0`` to ``{y = h'(x)}``."""

    coeffs: tuple
    phases: tuple

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        k = np.arange(1, len(self.coeffs) + 1)
        return np.sum(np.asarray(self.coeffs)[:, None] * np.sin(np.outer(k, x) + np.asarray(self.phases)[:, None]), axis=0)

    def graph(self, x):
        x = np.asarray(x, dtype=float)
        k = np.arange(1, len(self.coeffs) + 1)
        a = np.asarray(self.coeffs)[:, None] * k[:, None]
        return np.sum(a * np.cos(np.outer(k, x) + np.asarray(self.phases)[:, None]), axis=0)

    def oscillation(self, grid: int = 1 << 15) -> float:
        x = np.arange(grid) * (2 * math.pi / grid)
        v = self(x)
        # refine the extremes on the grid with a parabola
        return float(_refined_extreme(v, +1) - _refined_extreme(v, -1))

    @property
    def max_frequency(self) -> int:
        return len(self.coeffs)


def _refined_extreme(v, sign):
    k = int(np.argmax(sign * v))
    a, b, c = v[k - 1], v[k], v[(k + 1) % len(v)]
    den = a - 2 * b + c
    if den * sign < 0:
        return b - (c - a) ** 2 / (8 * den)
    return b


def random_hamiltonian(rng, modes: int = 4, amplitude: float = 0.3) -> FourierHamiltonian:
    k = np.arange(1, modes + 1)
    a = rng.uniform(-1, 1, modes) * amplitude / k**2
    phi = rng.uniform(0, 2 * math.pi, modes)
    return FourierHamiltonian(tuple(float(v) for v in a), tuple(float(v) for v in phi))


def hamiltonian_pair_verdict(h: FourierHamiltonian, samples: int = 1024) -> Verdict:
    """Main-inequality verdict for ``(L0, {y = h'(x)})`` with bracket ``[min lobe, osc h]``."""
    from .curve import curvature_profile

    curve = resample_arclength(graph_curve(h.graph, 8 * samples), samples)
    L0 = base_circle(samples)
    try:
        lobes = lobe_areas(L0, curve)
    except InputError as exc:
        return Verdict(engine="main_inequality", passed=True, status="not_applicable", note=str(exc))
    upper = h.oscillation()
    lower = min(min(lobes), upper)
    kappa = graph_max_curvature(h, 16 * samples // h.max_frequency, h.max_frequency)
    return check_main_inequality(L0, curve, lower, upper, Lambda=kappa)


def random_pair_suite(cases: int = 100, seed: int | None = None) -> list[Verdict]:
    from .verify import default_seed

    seed = default_seed() if seed is None else seed
    rng = np.random.default_rng([seed, 9])
    out = []
    for i in range(cases):
        h = random_hamiltonian(rng, modes=int(rng.integers(1, 5)), amplitude=float(rng.uniform(0.02, 0.5)))
        v = hamiltonian_pair_verdict(h)
        v.seed, v.case = seed, i
        v.witness = dict(v.witness or {}, coeffs=list(h.coeffs), phases=list(h.phases))
        out.append(v)
    return out


def _profile():
    return profile_for_surface(TORUS)


def family_constants(kind: str, n: int):
    """Constants report for the torus profile with the analytic curvature bound."""
    H = GraphHamiltonian.for_family(kind, n)
    return compute_report(_profile().replace(Lambda=analytic_max_curvature(H)), r_inj_L=math.pi)
