"""Deterministic JSON-lines / CSV output and curve file loading.

Floats are written with 17 significant digits so every double survives a
write/read cycle exactly; keys are sorted; lines end in LF. Non-finite
floats become the strings ``"inf"``, ``"-inf"`` and ``"nan"``.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .curve import DiscreteCurve
from .errors import InputError


def fmt_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    s = "%.17g" % x
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def _encode(x) -> str:
    if x is None:
        return "null"
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return json.dumps(fmt_float(x))
        return fmt_float(x)
    if isinstance(x, str):
        return json.dumps(x, ensure_ascii=False)
    if isinstance(x, dict):
        items = sorted((str(k), v) for k, v in x.items())
        return "{" + ",".join(json.dumps(k) + ":" + _encode(v) for k, v in items) + "}"
    if isinstance(x, (list, tuple, np.ndarray)):
        return "[" + ",".join(_encode(v) for v in (x.tolist() if isinstance(x, np.ndarray) else x)) + "]"
    if hasattr(x, "to_dict"):
        return _encode(x.to_dict())
    raise TypeError(f"cannot serialise {type(x).__name__}")


def dumps(obj) -> str:
    """One-line canonical JSON."""
    return _encode(obj)


def jsonl_text(records, meta: dict | None = None) -> str:
    lines = []
    if meta is not None:
        lines.append(dumps({"meta": meta}))
    lines.extend(dumps(r) for r in records)
    return "".join(line + "\n" for line in lines)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return fmt_float(float(v))
    return str(v)


def csv_text(rows, columns, meta: dict | None = None) -> str:
    """CSV with ``# key=value`` metadata lines ahead of the header."""
    out = []
    for k in sorted(meta or {}):
        v = meta[k]
        out.append(f"# {k}={v if isinstance(v, str) else dumps(v)}")
    out.append(",".join(columns))
    for r in rows:
        out.append(",".join(_cell(r.get(c)) for c in columns))
    return "".join(line + "\n" for line in out)


def write_text(text: str, path) -> None:
    """Write ``text`` with LF endings; ``None`` or ``"-"`` means stdout."""
    import sys

    if path is None or str(path) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_report(results, path, format: str = "json", columns=None, meta: dict | None = None) -> None:
    """Write records as JSON lines or CSV (``columns`` required for CSV)."""
    results = list(results)
    if format == "json":
        write_text(jsonl_text(results, meta), path)
    elif format == "csv":
        if columns is None:
            columns = sorted({k for r in results for k in r}) if results else []
        write_text(csv_text(results, columns, meta), path)
    else:
        raise InputError(f"unknown format {format!r}")


# ---------------------------------------------------------------------------
# curves
# ---------------------------------------------------------------------------

def parse_curve_text(text: str, source: str = "<string>", check_embedded: bool = True) -> DiscreteCurve:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None
    if not isinstance(data, dict):
        raise InputError(f"{source}: expected a JSON object")
    curve = DiscreteCurve.from_dict(data)
    if check_embedded:
        hit = curve.self_intersection()
        if hit is not None:
            raise InputError(f"{source}: curve self-intersects at segment {hit[0]} (and {hit[1]})")
    return curve


def load_curve(path, check_embedded: bool = True) -> DiscreteCurve:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_curve_text(text, str(path), check_embedded)


def curve_json(curve: DiscreteCurve) -> str:
    return dumps(curve.to_dict()) + "\n"


def export_curve(curve: DiscreteCurve, path) -> None:
    write_text(curve_json(curve), path)


def curve_csv_rows(curve: DiscreteCurve, kappa=None) -> list[dict]:
    """One row per sample: arclength, coordinates and curvature."""
    s = curve.sample_arclength
    pts = curve.points
    names = ["x", "y", "z"][: pts.shape[1]]
    rows = []
    for i in range(curve.n):
        r = {"s": float(s[i])}
        for k, nm in enumerate(names):
            r[nm] = float(pts[i, k])
        r["kappa"] = None if kappa is None else float(kappa[i])
        rows.append(r)
    return rows
