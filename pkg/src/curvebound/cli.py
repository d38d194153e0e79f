"""Command-line entry point.

    curvebound constants --K0 0 --r0 3.1416 --Lambda 1 --eps 1
    curvebound analyze-curve loop.json --csv-out samples.csv
    curvebound compare a.json b.json --d-lower 0.1 --d-upper 0.2
    curvebound verify isoperimetric --surface plane --cases 10 --seed 7
    curvebound torus-family --kind L --n 2,4,8 --out report.csv

Exit status: 0 when everything passes, 1 on a failed check or
counterexample, 2 on usage, input or domain errors. JSON output is a
stream of lines, a ``meta`` record first.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__, _accel
from .constants import BoundsProfile, compute_report
from .curve import curvature_profile, curve_metrics, hausdorff_distance, resample_arclength
from .errors import CurveboundError
from .report_io import csv_text, curve_csv_rows, jsonl_text, load_curve, write_text
from .surface import SurfaceModel
from .verify import (
    SUITE_KINDS,
    DiscreteCurve,
    Region2D,
    check_ball_monotonicity,
    check_main_inequality,
    default_seed,
    farthest_point_suite,
    find_osculating_free_disk,
    inscribed_disk_oracle,
    isoperimetric_arc_suite,
    isoperimetric_suite,
    small_ball_suite,
    suite_surface,
)

FAMILY_COLUMNS = ["n", "hofer_lower", "hofer_upper", "hausdorff", "kappa_oracle", "kappa_paper",
                  "tameness", "R_prime", "implication"]
PAPER_COLUMNS = ["hofer_claim", "hausdorff_claim", "curvature_mismatch"]


def _float(s: str) -> float:
    try:
        return float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None


def _int_list(s: str) -> list[int]:
    try:
        vals = [int(v) for v in s.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _seed(s: str) -> int:
    try:
        return int(s, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer seed: {s!r}") from None


def _add_profile_args(p: argparse.ArgumentParser):
    g = p.add_argument_group("bounds profile")
    g.add_argument("--K0", type=_float, default=0.0)
    g.add_argument("--r0", type=_float, default=math.inf)
    g.add_argument("--Lambda", type=_float, default=0.0)
    g.add_argument("--eps", type=_float, default=1.0)
    g.add_argument("--eta-prime", type=_float, default=math.inf)
    g.add_argument("--i0", type=_float, default=None)
    g.add_argument("--obstacle-distance", type=_float, default=math.inf)
    g.add_argument("--slack", type=_float, default=0.99)
    g.add_argument("--rho1-mode", choices=["tuned", "literal"], default="tuned")
    g.add_argument("--C1", type=_float, default=1.0)
    g.add_argument("--C2", type=_float, default=1.0)


def _profile(a) -> BoundsProfile:
    return BoundsProfile(K0=a.K0, r0=a.r0, Lambda=a.Lambda, eps=a.eps, eta_prime=a.eta_prime,
                         i0=a.i0, obstacle_distance=a.obstacle_distance)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="curvebound", description=__doc__.split("\n\n")[0])
    ap.add_argument("--version", action="version", version=f"curvebound {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constants", help="evaluate the constants for a bounds profile")
    _add_profile_args(c)
    c.add_argument("--curve", help="closed curve JSON; supplies r_inj(L) = length/2")
    c.add_argument("--format", choices=["json", "csv"], default="json")
    c.add_argument("--out", default=None)

    a = sub.add_parser("analyze-curve", help="length, curvature, tameness of a curve file")
    a.add_argument("path")
    a.add_argument("--resample", type=int, default=None, metavar="N")
    a.add_argument("--no-tameness", action="store_true")
    a.add_argument("--csv-out", default=None, help="per-sample s,x,y,kappa table")
    a.add_argument("--out", default=None)

    m = sub.add_parser("compare", help="Hausdorff distance and the main implication for two curves")
    m.add_argument("a")
    m.add_argument("b")
    m.add_argument("--d-lower", type=_float, default=None)
    m.add_argument("--d-upper", type=_float, default=None)
    m.add_argument("--Lambda", type=_float, default=None, help="curvature bound (default: oracle)")
    m.add_argument("--out", default=None)

    v = sub.add_parser("verify", help="run a verification engine")
    v.add_argument("engine", choices=["isoperimetric", "isoperimetric-arc", "small-ball", "farthest-point",
                                      "ball-monotonicity", "osculating", "main-inequality"])
    v.add_argument("--surface", choices=list(SUITE_KINDS) + ["all"], default="all")
    v.add_argument("--cases", type=int, default=None)
    v.add_argument("--seed", type=_seed, default=None)
    v.add_argument("--samples", type=int, default=None, help="resolution override")
    v.add_argument("--curve", default=None, help="osculating: boundary curve JSON")
    v.add_argument("--ellipse", default=None, metavar="A,B", help="osculating: ellipse semi-axes")
    v.add_argument("--factor", type=_float, default=0.9, help="osculating: rho as a fraction of rho0")
    v.add_argument("--grid", type=int, default=200, help="osculating: oracle grid")
    v.add_argument("--n", type=_int_list, default=None, help="main-inequality: family sizes")
    v.add_argument("--out", default=None)

    t = sub.add_parser("torus-family", help="report for the cosine families on the torus")
    t.add_argument("--kind", choices=["L", "K"], default="L")
    t.add_argument("--n", type=_int_list, default=[2, 4, 8, 16, 32])
    t.add_argument("--out", default=None)
    t.add_argument("--format", choices=["csv", "json"], default="csv")
    t.add_argument("--paper-table", action="store_true", help="add the stated values beside computed ones")
    return ap


def _meta(args, **extra) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("out", "csv_out")}
    meta = {"tool": "curvebound", "version": __version__, "backend": _accel.BACKEND, "config": cfg}
    meta.update(extra)
    return meta


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_constants(a) -> int:
    p = _profile(a)
    r_inj_L = None
    if a.curve:
        curve = load_curve(a.curve, check_embedded=False)
        r_inj_L = curve.inj_radius
    rep = compute_report(p, r_inj_L=r_inj_L, C1=a.C1, C2=a.C2, slack=a.slack, rho1_mode=a.rho1_mode)
    meta = _meta(a)
    if a.format == "csv":
        rows = [{"name": k, "value": v} for k, v in rep.rows()]
        write_text(csv_text(rows, ["name", "value"], meta), a.out)
    else:
        write_text(jsonl_text([rep.to_dict()], meta), a.out)
    return 0


def cmd_analyze(a) -> int:
    curve = load_curve(a.path)
    if a.resample:
        curve = resample_arclength(curve, a.resample)
    met = curve_metrics(curve, tameness=not a.no_tameness)
    prof = curvature_profile(curve)
    rec = met.to_dict()
    rec["polygon_length"] = curve.polygon_length
    rec["closed"] = curve.closed
    rec["surface"] = curve.surface.to_dict()
    if a.csv_out:
        rows = curve_csv_rows(curve, prof.kappa)
        cols = list(rows[0].keys())
        write_text(csv_text(rows, cols, _meta(a)), a.csv_out)
    write_text(jsonl_text([rec], _meta(a)), a.out)
    return 0


def cmd_compare(a) -> int:
    A, B = load_curve(a.a), load_curve(a.b)
    hd = hausdorff_distance(A, B)
    recs = [{"hausdorff": hd.value, "margin": hd.margin, "witness": list(hd.witness)}]
    code = 0
    if a.d_lower is not None or a.d_upper is not None:
        lo = a.d_lower if a.d_lower is not None else 0.0
        hi = a.d_upper if a.d_upper is not None else lo
        v = check_main_inequality(A, B, lo, hi, Lambda=a.Lambda)
        recs.append(v.to_dict())
        code = 0 if v.passed else 1
    write_text(jsonl_text(recs, _meta(a)), a.out)
    return code


def _kinds(a):
    return list(SUITE_KINDS) if a.surface == "all" else [a.surface]


def cmd_verify(a) -> int:
    seed = a.seed if a.seed is not None else default_seed()
    verdicts = []
    e = a.engine
    if e == "isoperimetric":
        for k in _kinds(a):
            verdicts += isoperimetric_suite(k, a.cases or 1000, seed, a.samples or 128)
    elif e == "isoperimetric-arc":
        verdicts += isoperimetric_arc_suite(a.cases or 300, seed)
    elif e == "small-ball":
        for k in _kinds(a):
            verdicts += small_ball_suite(k, a.cases or 200, seed, a.samples or 512)
    elif e == "farthest-point":
        for k in _kinds(a):
            verdicts += farthest_point_suite(k, a.cases or 200, seed, a.samples or 512)
    elif e == "ball-monotonicity":
        for k in _kinds(a):
            m, p = suite_surface(k)
            top = min(p.r0 / 2, 10.0)
            v = check_ball_monotonicity(m, p, np.linspace(top / 20, top, 20))
            v.resolution["surface"] = k
            verdicts.append(v)
    elif e == "osculating":
        verdicts += _osculating(a)
    elif e == "main-inequality":
        from .torus_lab import family_report, random_pair_suite

        for kind in ("L", "K"):
            for n in a.n or [2, 4, 8, 16, 32, 64]:
                r = family_report(kind, n)
                v = r.implication_verdict
                v.witness = dict(v.witness, family=kind, n=n)
                verdicts.append(v)
        verdicts += random_pair_suite(a.cases if a.cases is not None else 100, seed)
    for v in verdicts:
        if v.seed is None:
            v.seed = seed
    write_text(jsonl_text([v.to_dict() for v in verdicts], _meta(a, seed=seed)), a.out)
    return 0 if all(v.passed for v in verdicts) else 1


def _osculating(a):
    if a.curve:
        curve = load_curve(a.curve)
        shapes = [curve]
    else:
        ab = [(1.0, 0.5), (2.0, 1.0)] if a.ellipse is None else [tuple(_float(x) for x in a.ellipse.split(","))]
        shapes = []
        for ax, bx in ab:
            t = np.linspace(0, 2 * np.pi, 4 * (a.samples or 4096), endpoint=False)
            e = DiscreteCurve(SurfaceModel.plane(), np.c_[ax * np.cos(t), bx * np.sin(t)])
            shapes.append(resample_arclength(e, a.samples or 4096))
    out = []
    for i, c in enumerate(shapes):
        region = Region2D([c])
        prof = region.derived_profile()
        from .constants import rho0

        rho = a.factor * rho0(prof)
        v = find_osculating_free_disk(region, rho, prof)
        orc = inscribed_disk_oracle(region, a.grid)
        v.witness = dict(v.witness or {}, oracle_radius=orc.radius, oracle_grid_step=orc.grid_step)
        if v.passed and rho > orc.radius + orc.grid_step:
            v.passed, v.status = False, "fail"
            v.note = "scan radius exceeds the oracle inscribed radius"
        v.case = i
        out.append(v)
    return out


def cmd_torus_family(a) -> int:
    from .torus_lab import family_report

    reports = [family_report(a.kind, n) for n in a.n]
    rows = []
    for r in reports:
        row = r.row()
        if a.paper_table:
            n = r.n
            row["hofer_claim"] = 2.0 / n if a.kind == "L" else 2.0 * n ** -1.5
            row["hausdorff_claim"] = 1.0 if a.kind == "L" else n ** -0.5
            row["curvature_mismatch"] = r.curvature_mismatch
        rows.append(row)
    cols = FAMILY_COLUMNS + (PAPER_COLUMNS if a.paper_table else [])
    meta = _meta(a, curvature_samples_per_n=4096)
    if a.format == "csv":
        write_text(csv_text(rows, cols, meta), a.out)
    else:
        write_text(jsonl_text([r.to_dict() for r in reports], meta), a.out)
    return 0 if all(r.implication_verdict.passed for r in reports) else 1


COMMANDS = {
    "constants": cmd_constants,
    "analyze-curve": cmd_analyze,
    "compare": cmd_compare,
    "verify": cmd_verify,
    "torus-family": cmd_torus_family,
}


def parse_and_dispatch(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return COMMANDS[args.command](args)
    except CurveboundError as exc:
        print(f"curvebound: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"curvebound: error: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> None:
    sys.exit(parse_and_dispatch(argv))


if __name__ == "__main__":  # pragma: no cover
    main()
