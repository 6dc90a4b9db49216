"""Command-line front end.

Subcommands::

    hull        report on the tropical hull of a points file
    from-ineq   close an inequality matrix and print its tropical vertices
    construct   write the weight matrix of a named polytrope
    classify    enumerate tropical types and write catalog + table
    export      render a polytrope as SVG (d = 2) or OFF (d = 3)

Exit codes: 0 success, 2 malformed input or bad parameters, 3 infeasible
system, 4 unbounded system.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import classify as _classify
from .constructions import (
    associahedron,
    epsilon_matrix,
    fixture_polytrope,
    perturbed_pyrope,
    pyrope,
    small_simplex,
)
from .covector import cornered_hull, corners, is_polytrope, tropical_vertices
from .polytrope_algebra import (
    InfeasibleSystem,
    Polytrope,
    UnboundedSystem,
    WeightMatrix,
    f_vector,
    kleene_closure,
)
from .trop_core import INF, dehomogenize, to_scalar

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_UNBOUNDED = 4


class InputError(ValueError):
    """Malformed file or bad parameters (exit code 2)."""


# ---------------------------------------------------------------- serialisation


def encode_scalar(v):
    if v == INF:
        return "inf"
    v = to_scalar(v)
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return v


def decode_scalar(v, allow_inf: bool = True):
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise InputError(f"entry {v!r} must be an integer or a string 'p/q'")
    if isinstance(v, str) and v.strip() == "inf" and not allow_inf:
        raise InputError("'inf' is not allowed here")
    try:
        return to_scalar(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse entry {v!r}") from exc


def encode(obj):
    """Recursively turn tuples, Fractions and INF into JSON-ready values."""
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, frozenset):
        return sorted(obj)
    if isinstance(obj, dict):
        return {k: encode(v) for k, v in obj.items()}
    if isinstance(obj, (int, Fraction, float)) and not isinstance(obj, bool):
        return encode_scalar(obj)
    return obj


def dumps(obj) -> str:
    """Deterministic JSON: one top-level key per line, compact values."""
    enc = encode(obj)
    if not isinstance(enc, dict):
        return json.dumps(enc, separators=(", ", ": ")) + "\n"
    body = ",\n".join(
        f"  {json.dumps(k)}: {json.dumps(enc[k], sort_keys=True, separators=(', ', ': '))}"
        for k in sorted(enc)
    )
    return "{\n" + body + "\n}\n"


def _load_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def parse_matrix_file(data) -> WeightMatrix:
    if not isinstance(data, dict) or "dim" not in data or "c" not in data:
        raise InputError('matrix file needs keys "dim" and "c"')
    d = data["dim"]
    rows = data["c"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 0:
        raise InputError("dim must be a non-negative integer")
    if not isinstance(rows, list) or len(rows) != d + 1:
        raise InputError(f"c must have {d + 1} rows")
    c = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d + 1:
            raise InputError(f"row {i} must have {d + 1} entries")
        c.append([decode_scalar(v, allow_inf=(i != j)) for j, v in enumerate(row)])
    return WeightMatrix(c)


def matrix_document(c) -> dict:
    if isinstance(c, WeightMatrix):
        c = c.c
    return {"dim": len(c) - 1, "c": c}


def parse_points_file(data) -> list:
    if not isinstance(data, dict) or "dim" not in data or "points" not in data:
        raise InputError('points file needs keys "dim" and "points"')
    d = data["dim"]
    pts = data["points"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 0:
        raise InputError("dim must be a non-negative integer")
    if not isinstance(pts, list) or not pts:
        raise InputError("points must be a non-empty list")
    out = []
    for i, p in enumerate(pts):
        if not isinstance(p, list) or len(p) != d + 1:
            raise InputError(f"point {i} must have {d + 1} coordinates")
        out.append(tuple(decode_scalar(v, allow_inf=False) for v in p))
    return out


# ---------------------------------------------------------------- reports


def hull_report(points) -> dict:
    report = {
        "tropical_vertices": tropical_vertices(points),
        "corners": corners(points),
        "is_polytrope": is_polytrope(points),
    }
    if report["is_polytrope"]:
        P = Polytrope(kleene_closure(cornered_hull(points)))
        report["pseudo_vertices"] = len(P.pseudo_vertices)
        if P.affine_dim == P.dim and P.dim <= 3:
            report["f_vector"] = f_vector(P)
    return report


def closure_report(c) -> tuple:
    """``(exit code, report, polytrope or None)`` for the closure of ``c``."""
    try:
        closed = kleene_closure(c)
    except InfeasibleSystem as exc:
        return EXIT_INFEASIBLE, {"status": "infeasible", "cycle": list(exc.cycle)}, None
    except UnboundedSystem as exc:
        return EXIT_UNBOUNDED, {"status": "unbounded", "entry": list(exc.entry)}, None
    P = Polytrope(closed)
    return EXIT_OK, {"status": "closed", "c": closed.c, "vertices": P.vertices}, P


def construct(name: str, d=None, n=None, eps=None, index=None, scale=1) -> Polytrope:
    def need(value, flag):
        if value is None:
            raise InputError(f"{name} needs {flag}")
        return value

    try:
        if name == "simplex":
            return small_simplex(need(d, "--d"), scale=scale)
        if name == "pyrope":
            return pyrope(need(d, "--d"))
        if name == "perturbed-pyrope":
            dd = need(d, "--d")
            return perturbed_pyrope(dd, epsilon_matrix(dd, eps if eps is not None else Fraction(1, 3)))
        if name == "associahedron":
            return associahedron(need(n, "--n"))
        if name == "fixture20":
            return fixture_polytrope(need(index, "--index"))
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    raise InputError(f"unknown construction {name!r}")


def catalog_lines(catalog) -> list:
    lines = []
    for r in catalog:
        rec = {
            "m": r.m,
            "f": r.f,
            "representative": r.representative.c,
            "tropical_form": r.tropical_form,
            "ordinary_form": r.ordinary_form,
        }
        lines.append(json.dumps(encode(rec), sort_keys=True, separators=(",", ":")))
    return lines


def table_csv(table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "t", "o"])
    w.writerows(table)
    return buf.getvalue()


# ---------------------------------------------------------------- export


def _decimal(v) -> str:
    """Exact decimal expansion when it terminates, else 17 significant digits."""
    v = Fraction(v)
    den = v.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return repr(float(v))
    digits = max(twos, fives)
    if digits == 0:
        return str(v.numerator)
    scaled = v * 10**digits
    sign = "-" if scaled < 0 else ""
    s = str(abs(scaled.numerator)).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def _cyclic(points2d) -> list:
    """Indices of planar points sorted counter-clockwise about their centroid."""
    k = len(points2d)
    cx = sum(p[0] for p in points2d) / k
    cy = sum(p[1] for p in points2d) / k
    return sorted(range(k), key=lambda i: math.atan2(float(points2d[i][1] - cy), float(points2d[i][0] - cx)))


def svg_document(P: Polytrope, size: int = 400, margin: int = 20) -> str:
    if P.dim != 2:
        raise InputError("svg export needs d = 2")
    pv = [dehomogenize(p) for p in P.pseudo_vertices]
    tv = [dehomogenize(v) for v in P.vertices]
    xs = [p[0] for p in pv + tv]
    ys = [p[1] for p in pv + tv]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1)
    unit = Fraction(size - 2 * margin, 1) / span

    def place(p):
        x = margin + (p[0] - min(xs)) * unit
        y = size - margin - (p[1] - min(ys)) * unit
        return f"{float(x):.3f},{float(y):.3f}"

    order = _cyclic(pv) if len(pv) > 2 else list(range(len(pv)))
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'  <polygon class="polytrope" points="{" ".join(place(pv[i]) for i in order)}" '
        'fill="#f3d27a" stroke="#333" stroke-width="1.5"/>',
    ]
    for p in pv:
        x, y = place(p).split(",")
        lines.append(f'  <circle class="pseudo-vertex" cx="{x}" cy="{y}" r="3" fill="#333"/>')
    for v in tv:
        x, y = place(v).split(",")
        lines.append(f'  <circle class="tropical-vertex" cx="{x}" cy="{y}" r="6" fill="none" stroke="#c0392b" stroke-width="2"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def off_document(P: Polytrope) -> str:
    if P.dim != 3 or P.affine_dim != 3:
        raise InputError("off export needs a full-dimensional polytrope with d = 3")
    pts = [dehomogenize(p) for p in P.pseudo_vertices]
    faces = []
    for (i, j, off) in P.facets:
        normal = [0, 0, 0, 0]
        normal[i] += 1
        normal[j] -= 1
        normal = normal[1:]
        on = [k for k, p in enumerate(P.pseudo_vertices) if p[i] - p[j] == off]
        drop = max(range(3), key=lambda a: abs(normal[a]))
        keep = [a for a in range(3) if a != drop]
        flat = [(pts[k][keep[0]], pts[k][keep[1]]) for k in on]
        order = [on[t] for t in _cyclic(flat)]
        # make the cycle counter-clockwise seen from outside
        a, b, c = (pts[order[0]], pts[order[1]], pts[order[2]])
        u = [b[t] - a[t] for t in range(3)]
        w = [c[t] - a[t] for t in range(3)]
        cross = (u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0])
        if sum(x * y for x, y in zip(cross, normal)) < 0:
            order.reverse()
        faces.append(order)
    lines = ["OFF", f"{len(pts)} {len(faces)} 0"]
    lines += [" ".join(_decimal(v) for v in p) for p in pts]
    lines += [" ".join(str(t) for t in [len(f)] + f) for f in faces]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- entry point


def _rational(text: str):
    try:
        return to_scalar(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polytropes", description="Exact tropical convexity tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hull", help="analyse the tropical hull of a points file")
    p.add_argument("points", help="PointsFile (JSON) or - for stdin")

    p = sub.add_parser("from-ineq", help="close an inequality matrix")
    p.add_argument("matrix", help="MatrixFile (JSON) or - for stdin")

    p = sub.add_parser("construct", help="write the weight matrix of a named polytrope")
    p.add_argument("name", choices=["simplex", "pyrope", "perturbed-pyrope", "associahedron", "fixture20"])
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--eps", type=_rational)
    p.add_argument("--index", type=int)
    p.add_argument("--scale", type=int, default=1)
    p.add_argument("--out")

    p = sub.add_parser("classify", help="enumerate tropical types of d-polytropes")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--bound", type=int, help="fixed scan bound (default: adaptive per class)")
    p.add_argument("--out", help="path prefix for <out>.jsonl and <out>.csv")

    p = sub.add_parser("export", help="render a polytrope given by a MatrixFile")
    p.add_argument("matrix", help="MatrixFile (JSON) or - for stdin")
    p.add_argument("--format", choices=["svg", "off"], required=True)
    p.add_argument("--out")
    return parser


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.command == "hull":
            pts = parse_points_file(_load_json(args.points))
            _emit(dumps(hull_report(pts)), None)
            return EXIT_OK
        if args.command == "from-ineq":
            c = parse_matrix_file(_load_json(args.matrix))
            code, report, _ = closure_report(c)
            _emit(dumps(report), None)
            return code
        if args.command == "construct":
            P = construct(args.name, d=args.d, n=args.n, eps=args.eps, index=args.index, scale=args.scale)
            _emit(dumps(matrix_document(P.matrix)), args.out)
            return EXIT_OK
        if args.command == "classify":
            if args.d not in (1, 2, 3):
                raise InputError("--d must be 1, 2 or 3")
            if args.bound is not None and args.bound < 1:
                raise InputError("--bound must be positive")
            catalog = _classify.enumerate_classes(args.d, B=args.bound)
            table = _classify.class_table(catalog)
            if args.out:
                Path(f"{args.out}.jsonl").write_text("\n".join(catalog_lines(catalog)) + "\n")
                Path(f"{args.out}.csv").write_text(table_csv(table))
            totals = {
                "d": args.d,
                "tropical": sum(t for _, t, _ in table),
                "ordinary": sum(o for _, _, o in table),
                "table": [list(row) for row in table],
            }
            _emit(dumps(totals), None)
            return EXIT_OK
        if args.command == "export":
            c = parse_matrix_file(_load_json(args.matrix))
            code, report, P = closure_report(c)
            if P is None:
                _emit(dumps(report), None)
                return code
            text = svg_document(P) if args.format == "svg" else off_document(P)
            _emit(text, args.out)
            return EXIT_OK
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_INPUT


def main() -> None:
    sys.exit(run())
