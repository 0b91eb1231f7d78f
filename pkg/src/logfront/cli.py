"""Command-line entry point: one JSON report per run.

Exit status is 0 on success, 2 when a validation step reports a mismatch
and 1 on any error.
"""

from __future__ import annotations

import argparse
import json
import math
import platform
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .exactalg import SparsePoly, format_poly, poly_from_json, poly_parse, poly_to_json, rename
from .exactalg.elimination import METHODS
from .invariants import (
    SMOOTH,
    DegenerateCurve,
    InvariantError,
    SingularityProfile,
    classical_klein_check,
    generic_degree_report,
    klein_generic,
    klein_sum,
    logfront_cuspidal,
    logfront_euler,
    logfront_gauss_degree,
    logfront_nodal,
)
from .lattice import LatticePolygon, newton_polygon, polygon_metrics, predict_logfront
from .numerics import (
    DEFAULT,
    Tolerances,
    alga_sample,
    amoeba_area_estimate,
    amoeba_sample,
    cusp_detect,
    harnack_fiber_test,
    planar_function,
    points_csv,
    svg_document,
    trace_csv,
    trace_real_locus,
    verify_logfront,
)
from .pipeline import DEFAULT_DEGREE_BOUND, compute, curve_data

LINE = "z + w + 1"


class CliError(Exception):
    code = "cli.error"


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for mismatches here
    def error(self, message):
        raise CliError(message)


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    output: Optional[str]
    degree_bound: int
    window: Optional[tuple]
    resolution: int
    seed: int
    tol: Tolerances = DEFAULT

    def __post_init__(self):
        if self.window is not None:
            x0, x1, y0, y1 = self.window
            if not (x0 < x1 and y0 < y1):
                raise CliError("window needs min < max on both axes")
        if not 8 <= self.resolution <= 4096:
            raise CliError("resolution must lie in [8, 4096]")


# --- input -------------------------------------------------------------------------

def _locate(name: str) -> Optional[Path]:
    """A file path, falling back to the bundled data directory."""
    p = Path(name)
    if p.is_file():
        return p
    bundled = resources.files("logfront") / "data" / name
    if bundled.is_file():
        return Path(str(bundled))
    return None


def read_poly(arg: str) -> SparsePoly:
    """Polynomial from a .poly/.json file (local or bundled) or an inline expression."""
    path = _locate(arg)
    if path is None:
        if arg.endswith((".poly", ".json", ".txt")):
            raise CliError(f"cannot read {arg}")
        return poly_parse(arg)
    text = path.read_text()
    if path.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CliError(f"{arg} is not valid JSON: {exc}") from exc
        # a compute report carries R as text
        if isinstance(data, dict) and isinstance(data.get("R"), str):
            return poly_parse(data["R"])
        try:
            return poly_from_json(data)
        except (KeyError, TypeError, IndexError) as exc:
            raise CliError(f"{arg} holds neither a polynomial nor a report with R") from exc
    return poly_parse(" ".join(line.split("#")[0] for line in text.splitlines()))


def read_profile(arg: Optional[str]) -> SingularityProfile:
    if arg is None:
        return SMOOTH
    path = _locate(arg)
    if path is None:
        raise CliError(f"cannot read profile {arg}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise CliError(f"profile {arg} is not valid JSON: {exc}") from exc
    return SingularityProfile.from_json(data)


def _window(text: Optional[str]) -> Optional[tuple]:
    if text is None:
        return None
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise CliError(f"bad window {text!r}") from exc
    if len(vals) != 4:
        raise CliError("window is x0,x1,y0,y1")
    return vals


# --- output ------------------------------------------------------------------------

def _json_text(obj, indent: int = 0) -> str:
    """JSON with floats written at 17 significant digits and sorted keys."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "NaN"
        if math.isinf(x):
            return "Infinity" if x > 0 else "-Infinity"
        return format(x, ".17g")
    if isinstance(obj, Fraction):
        return json.dumps(str(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_json_text(v, indent + 1)}" for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_json_text(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + _json_text(v, indent + 1) for v in obj) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def provenance() -> dict:
    return {"logfront": __version__, "numpy": np.__version__, "python": platform.python_version()}


def _emit(report: dict, output: Optional[str]) -> None:
    text = _json_text(report | {"provenance": provenance()}) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _poly_entry(p: SparsePoly) -> dict:
    return {"text": format_poly(p), "json": poly_to_json(p)}


# --- subcommands ----------------------------------------------------------------------

def _sides(poly: LatticePolygon) -> list:
    return [length for _, _, length, _, _ in poly.edges()]


def _is_simplex(poly: LatticePolygon) -> Optional[int]:
    """d when poly is the standard d-simplex up to translation."""
    v = set(poly.vertices)
    xs = [x for x, _ in v]
    d = max(xs) - min(xs)
    if len(v) == 3 and d > 0:
        o = min(v)
        if {(x - o[0], y - o[1]) for x, y in v} == {(0, 0), (d, 0), (0, d)}:
            return d
    return None


def _polygon_figure(args, rep: dict, polys: dict, title: str) -> None:
    if not getattr(args, "figure", None):
        return
    if not polys:
        raise CliError("nothing to draw: no polygon was predicted or computed")
    from .figures import polygon_figure
    polygon_figure(polys, args.figure, title)
    rep["figure"] = str(args.figure)


def cmd_compute(args, cfg: RunConfig, P: Optional[SparsePoly] = None) -> int:
    P = P if P is not None else read_poly(args.p)
    Q = read_poly(args.q)
    prof_p = read_profile(getattr(args, "profile_p", None))
    prof_q = read_profile(args.profile_q)
    res, diag = compute(P, Q, prof_p, prof_q, order=args.order, method=args.method,
                        degree_bound=cfg.degree_bound)
    rep = {"command": cfg.subcommand, "P": _poly_entry(P), "Q": _poly_entry(Q),
           "result": res.to_json(), "diagnostics": diag.to_json(),
           "R": format_poly(res.R), "match": res.match}
    if not res.empty:
        rep["sides"] = _sides(res.polygon_computed)
    polys = {}
    if diag.predicted is not None:
        polys["predicted"] = diag.predicted.polygon
    if not res.empty:
        polys["computed"] = res.polygon_computed
    _polygon_figure(args, rep, polys, f"{format_poly(P)}  /  {format_poly(Q)}")
    _emit(rep, cfg.output)
    return 0 if res.match else 2


def predict_report(P: SparsePoly, Q: SparsePoly, prof_p: SingularityProfile,
                   prof_q: SingularityProfile) -> dict:
    """Newton polygon and Plücker-type numbers of P / Q without elimination."""
    mp, ip = curve_data(P, prof_p)
    mq, iq = curve_data(Q, prof_q)
    pred = predict_logfront(mp, mq, ip.deg_gauss, iq.deg_gauss)
    poly = pred.marked.polygon
    rep = {
        "P": {"curve": _poly_entry(P), "polygon": mp.to_json(), "invariants": ip.to_json()},
        "Q": {"curve": _poly_entry(Q), "polygon": mq.to_json(), "invariants": iq.to_json()},
        "predicted_polygon": pred.marked.to_json(),
        "sides": [] if poly.degenerate else _sides(poly),
        "directions": [{"normal": list(d.normal), "minkowski_length": d.minkowski_length,
                        "subtracted": d.subtracted, "length": d.length, "parts": list(d.parts)}
                       for d in pred.directions],
        "boundary_count": {"derived": pred.boundary_derived, "as_printed": pred.boundary_as_printed},
        "deg_gauss": logfront_gauss_degree(ip.deg_gauss, iq.deg_gauss),
    }
    chi_hat, _ = logfront_euler(ip.deg_gauss, iq.deg_gauss, ip.euler_char, iq.euler_char)
    rep["euler"] = chi_hat
    rep["genus"] = (2 - chi_hat) // 2 if chi_hat <= 2 and chi_hat % 2 == 0 else None
    cusps = logfront_cuspidal(chi_hat, pred.boundary_derived,
                              ip.euler_char, ip.c, ip.boundary_simple,
                              iq.euler_char, iq.c, iq.boundary_simple)
    rep["cusps"] = cusps
    if rep["genus"] is not None and not poly.degenerate:
        try:
            rep["nodes"] = logfront_nodal(polygon_metrics(poly).interior, rep["genus"], cusps)
        except InvariantError as exc:
            rep["nodes"] = None
            rep["nodes_note"] = str(exc)
    dp, dq = _is_simplex(mp.polygon), _is_simplex(mq.polygon)
    if dp and dq:
        rep["generic"] = generic_degree_report(dp, dq).to_json()
    return rep


def cmd_predict(args, cfg: RunConfig) -> int:
    P, Q = read_poly(args.p), read_poly(args.q)
    rep = {"command": "predict"} | predict_report(P, Q, read_profile(args.profile_p),
                                                  read_profile(args.profile_q))
    polys = {"Newton P": newton_polygon(P), "Newton Q": newton_polygon(Q)}
    if rep["sides"]:
        polys["predicted R"] = LatticePolygon(tuple(map(tuple, rep["predicted_polygon"]["vertices"])))
    _polygon_figure(args, rep, polys, f"{format_poly(P)}  /  {format_poly(Q)}")
    _emit(rep, cfg.output)
    return 0


def cmd_invariants(args, cfg: RunConfig) -> int:
    C = read_poly(args.curve)
    mp, inv = curve_data(C, read_profile(args.profile))
    m = polygon_metrics(mp.polygon)
    rep = {"command": "invariants", "curve": _poly_entry(C), "polygon": mp.to_json(),
           "metrics": {"area2": m.area2, "interior": m.interior,
                       "lattice_perimeter": m.lattice_perimeter, "vertex_count": m.vertex_count},
           "invariants": inv.to_json()}
    _emit(rep, cfg.output)
    return 0


def _split(text: Optional[str]) -> Optional[tuple]:
    if text is None:
        return None
    try:
        b, c = (int(v) for v in text.split(","))
    except ValueError as exc:
        raise CliError("--r-split is b_plus,c_re") from exc
    return b, c


def _generic(mp, inv) -> bool:
    """Smooth in the torus and transverse to the boundary."""
    return inv.c == 0 and inv.b == 0 and all(set(e.marking.parts) <= {1} for e in mp.edges)


def cmd_klein(args, cfg: RunConfig) -> int:
    P, Q = read_poly(args.p), read_poly(args.q)
    mp, ip = curve_data(P, read_profile(args.profile_p))
    mq, iq = curve_data(Q, read_profile(args.profile_q))
    total = klein_sum(mp.polygon, mq.polygon, ip, iq)
    if total < 0:
        raise DegenerateCurve(f"negative Klein sum {total}: the pair has no log-front in the torus")
    rep: dict = {"command": "klein", "P": _poly_entry(P), "Q": _poly_entry(Q),
                 "klein_sum": total}
    dp, dq = _is_simplex(mp.polygon), _is_simplex(mq.polygon)
    ok = True
    if dp and dq and _generic(mp, ip) and _generic(mq, iq):
        try:
            gen = klein_generic(dp, dq)
            rep["klein_generic"] = gen
        except DegenerateCurve as exc:
            rep["klein_generic"] = None
            rep["klein_generic_note"] = str(exc)
    if dp == 1 and dq:
        pred = predict_logfront(mp, mq, ip.deg_gauss, iq.deg_gauss).marked.polygon
        d_star = _is_simplex(pred) or 0
        split = _split(args.r_split) or (0, total)
        residual = classical_klein_check(dq, d_star, iq.b_re_plus, iq.c_re, *split)
        rep["classical"] = {"d": dq, "d_star": d_star, "r_b_plus": split[0], "r_c_re": split[1],
                            "residual": residual}
        ok = residual == 0
    if args.cusps is not None:
        rep["detected_cusps"] = args.cusps
        half = Fraction(total - args.cusps, 2)
        rep["inferred_solitary_nodes"] = int(half) if half.denominator == 1 else half
    rep["match"] = ok
    _emit(rep, cfg.output)
    return 0 if ok else 2


def cmd_verify(args, cfg: RunConfig) -> int:
    P, Q = read_poly(args.p), read_poly(args.q)
    if args.r is not None:
        R = read_poly(args.r)
    else:
        R = compute(P, Q, degree_bound=cfg.degree_bound)[0].R
    tol = Tolerances(tangency_on=args.tol) if args.tol is not None else cfg.tol
    rep = verify_logfront(P, Q, R, cfg.window or (-4.0, 4.0, -4.0, 4.0), args.samples, tol, cfg.seed)
    rep = {"command": "verify", "P": _poly_entry(P), "Q": _poly_entry(Q), "R": _poly_entry(R)} | rep
    rep["match"] = rep["verdict"] == "pass"
    _emit(rep, cfg.output)
    return 0 if rep["match"] else 2


def _plot_vars(p: SparsePoly) -> tuple:
    for pair in (("a", "b"), ("z", "w"), ("x", "y")):
        if set(v for v in p.vars if p.degree(v) > 0) <= set(pair):
            return pair
    raise CliError(f"plot expression must be in one of a,b / z,w / x,y; got {p.vars}")


def cmd_plot(args, cfg: RunConfig) -> int:
    p = read_poly(args.expr)
    window = cfg.window or (-3.0, 3.0, -3.0, 3.0)
    out = Path(args.output)
    if out.suffix.lower() not in (".svg", ".csv"):
        raise CliError("plot output must end in .svg or .csv")
    rep: dict = {"command": "plot", "mode": args.mode, "expr": _poly_entry(p), "output": str(out),
                 "window": list(window), "resolution": cfg.resolution}
    markers: list = []
    if args.mode in ("logfront", "frozen"):
        x, y = _plot_vars(p)
        f = planar_function(p, x, y, exponential=args.mode == "frozen")
        trace = trace_real_locus(f, window, cfg.resolution, args.mode, cfg.tol)
        res = trace.all_residuals()
        rep |= {"polylines": len(trace.polylines), "points": int(len(res)),
                "max_residual": float(res.max()) if len(res) else 0.0}
        if args.cusps:
            cusps = cusp_detect(trace)
            markers = [(c.x, c.y) for c in cusps]
            rep["cusps"] = [{"x": c.x, "y": c.y, "angle": c.angle, "confidence": c.confidence}
                            for c in cusps]
            rep["cusp_count"] = len(cusps)
        body = trace_csv(trace) if out.suffix.lower() == ".csv" else \
            svg_document(window, trace.polylines, markers=markers, title=f"{args.mode}: {format_poly(p)}")
        if args.figure:
            from .figures import trace_figure
            labels = ("x", "y") if args.mode == "frozen" else (x, y)
            trace_figure(trace, args.figure, cusps if args.cusps else (), format_poly(p), labels)
    else:
        x, y = _plot_vars(p)
        curve = rename(p, {x: "z", y: "w"}) if (x, y) != ("z", "w") else p
        xs = np.linspace(window[0], window[1], cfg.resolution)
        thetas = np.linspace(0.0, 2 * np.pi, cfg.resolution, endpoint=False)
        if args.mode == "amoeba":
            pts, res = amoeba_sample(curve, xs, thetas, residuals=True)
            view = window
        else:
            pts, res = alga_sample(curve, xs, thetas, residuals=True)
            view = (0.0, float(np.pi), 0.0, float(np.pi))
        rep |= {"points": int(len(pts)), "max_residual": float(res.max()) if len(res) else 0.0}
        body = points_csv(zip(pts[:, 0], pts[:, 1], res)) if out.suffix.lower() == ".csv" else \
            svg_document(view, points=pts, title=f"{args.mode}: {format_poly(p)}")
        if args.figure:
            from .figures import cloud_figure
            labels = ("log|z|", "log|w|") if args.mode == "amoeba" else ("arg z", "arg w")
            cloud_figure(pts, args.figure, view, format_poly(p), labels)
    out.write_text(body)
    if args.figure:
        rep["figure"] = str(args.figure)
    _emit(rep, None)
    return 0


def cmd_harnack(args, cfg: RunConfig) -> int:
    P = read_poly(args.p)
    fib = harnack_fiber_test(P, cfg.window or (-3.0, 3.0, -3.0, 3.0), args.grid)
    rep: dict = {"command": "harnack", "P": _poly_entry(P), "fiber": fib.to_json()}
    if args.n:
        ar = amoeba_area_estimate(P, _window(args.area_window) or (-10.0, 10.0, -10.0, 10.0),
                                  args.n, seed=cfg.seed)
        rep["area"] = ar.to_json()
    verdicts = [fib.verdict] + ([rep["area"]["verdict"]] if "area" in rep else [])
    rep["harnack"] = all(v == "pass" for v in verdicts)
    _emit(rep, cfg.output)
    return 0


COMMANDS = {"compute": cmd_compute, "predict": cmd_predict, "invariants": cmd_invariants,
            "klein": cmd_klein, "verify": cmd_verify, "plot": cmd_plot, "harnack": cmd_harnack}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-o", "--output", help="write the report (or plot) here instead of stdout")
    common.add_argument("--degree-bound", type=int, default=DEFAULT_DEGREE_BOUND)
    common.add_argument("--window", help="x0,x1,y0,y1")
    common.add_argument("--res", type=int, default=256, help="grid resolution")
    common.add_argument("--seed", type=int, default=0)

    parser = _Parser(prog="logfront", description="Log-fronts of plane curves.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def pq(sp, profiles=True):
        sp.add_argument("--p", required=True, help="curve P (file or expression)")
        sp.add_argument("--q", required=True, help="curve Q (file or expression)")
        if profiles:
            sp.add_argument("--profile-p")
            sp.add_argument("--profile-q")

    def elim(sp):
        sp.add_argument("--order", choices=("w", "z"), default=None)
        sp.add_argument("--method", choices=METHODS, default="subresultant")

    def figure(sp, what):
        sp.add_argument("--figure", help=f"also render {what} with matplotlib (png/pdf/svg)")

    sp = sub.add_parser("compute", parents=[common], help="log-front by elimination, validated")
    pq(sp)
    elim(sp)
    figure(sp, "the predicted and computed polygons")
    sp = sub.add_parser("dual", parents=[common], help="compute with P = z + w + 1")
    sp.add_argument("--q", required=True)
    sp.add_argument("--profile-q")
    elim(sp)
    figure(sp, "the predicted and computed polygons")
    sp = sub.add_parser("predict", parents=[common], help="polygon and counts without elimination")
    pq(sp)
    figure(sp, "the Newton polygons and the predicted one")
    sp = sub.add_parser("invariants", parents=[common], help="single-curve numbers")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--profile")
    sp = sub.add_parser("klein", parents=[common], help="real (Klein-type) counts")
    pq(sp)
    sp.add_argument("--r-split", help="b_plus,c_re of R for the classical identity")
    sp.add_argument("--cusps", type=int, help="detected real cusps, to infer solitary nodes")
    sp = sub.add_parser("verify", parents=[common], help="numeric tangency check of R")
    pq(sp, profiles=False)
    sp.add_argument("--r", help="log-front R in a, b (computed when omitted)")
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument("--tol", type=float, default=None)
    sp = sub.add_parser("plot", parents=[common], help="trace or sample to SVG or CSV")
    sp.add_argument("--expr", required=True)
    sp.add_argument("--mode", choices=("logfront", "frozen", "amoeba", "alga"), required=True)
    sp.add_argument("--cusps", action="store_true", help="detect and mark cusps on traces")
    figure(sp, "the trace or point cloud")
    sp = sub.add_parser("harnack", parents=[common], help="fiber and area tests")
    sp.add_argument("--p", required=True)
    sp.add_argument("--grid", type=int, default=41)
    sp.add_argument("--n", type=int, default=10**6, help="Monte Carlo samples; 0 skips the area test")
    sp.add_argument("--area-window", help="x0,x1,y0,y1 for the area test")
    return parser


def _glue_negative(argv: list) -> list:
    """Attach values such as "-3,1,-3,1" to their option so argparse keeps them."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in ("--window", "--area-window", "--r-split") and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_glue_negative(argv))
        cfg = RunConfig(args.command, args.output, args.degree_bound, _window(args.window),
                        args.res, args.seed)
        if args.command == "plot" and not args.output:
            raise CliError("plot needs -o out.svg or out.csv")
        if args.command == "dual":
            return cmd_compute(args, cfg, P=poly_parse(LINE))
        return COMMANDS[args.command](args, cfg)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (CliError, ValueError, ArithmeticError, RuntimeError, OSError) as exc:
        code = getattr(exc, "code", None) or f"{type(exc).__module__.split('.')[-1]}.{type(exc).__name__}"
        sys.stderr.write(_json_text({"error": {"code": code, "message": str(exc)}}) + "\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
