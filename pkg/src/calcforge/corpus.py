"""Problem-file loading and verification reporting.

A corpus file is a flat sectioned text format: each ``[problem]`` line starts
a block of ``key = value`` lines.  Expressions are stored as grammar text and
expected answers as closed-form expression text, evaluated exactly at load
time.  Verification dispatches each problem to the matching engine operation
and emits per-problem rows plus summary counts; problems are independent and
may be verified concurrently, with the report assembled in input order.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import expr as ex
from . import geometry as geo
from .exact_algebra import poly_from_expr
from .partial_fractions import antiderivative, decompose, to_expr
from .quadrature import Convergent, Divergent, IntegralSpec, integrate_improper

__all__ = [
    "CorpusError", "Problem", "Row", "Report", "load", "verify",
    "format_table", "report_to_json",
]

KINDS = (
    "definite", "improper", "indefinite_check", "pfrac",
    "area_between", "area_parametric", "area_polar", "arclen",
    "surface", "volume_washer", "volume_polar", "intersections",
)

_AXES = {"ox": geo.Axis.OX, "oy": geo.Axis.OY, "polar": geo.Axis.POLAR}


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class Problem:
    id: str
    kind: str
    payload: dict
    tol_rel: float = 1e-6
    paper_discrepancy: str | None = None
    skip: str | None = None


@dataclass(frozen=True)
class Row:
    id: str
    computed: float | None
    expected: float | None
    abs_err: float | None
    rel_err: float | None
    status: str
    note: str = ""


@dataclass(frozen=True)
class Report:
    rows: tuple
    summary: dict
    wall_time: float


def _evaluate_closed(text: str, *, what: str, pid: str) -> float:
    try:
        value = ex.evaluate(ex.parse(text))
    except (ex.ParseError, ex.UnboundVariable) as err:
        raise CorpusError(f"problem {pid!r}, field {what!r}: {err}") from err
    if not math.isfinite(value):
        raise CorpusError(f"problem {pid!r}, field {what!r}: not finite")
    return value


def _parse_bound(text: str, *, what: str, pid: str) -> float:
    stripped = text.strip()
    if stripped in ("inf", "+inf"):
        return math.inf
    if stripped == "-inf":
        return -math.inf
    return _evaluate_closed(stripped, what=what, pid=pid)


def _parse_expr(text: str, *, what: str, pid: str) -> ex.Expr:
    try:
        return ex.parse(text)
    except ex.ParseError as err:
        raise CorpusError(f"problem {pid!r}, field {what!r}: {err}") from err


def _need(raw: dict, key: str, pid: str) -> str:
    if key not in raw:
        raise CorpusError(f"problem {pid!r}: missing field {key!r}")
    return raw[key]


def _build_problem(raw: dict, line_no: int) -> Problem:
    pid = raw.get("id")
    if not pid:
        raise CorpusError(f"line {line_no}: block without an 'id' field")
    kind = raw.get("kind")
    if kind not in KINDS:
        raise CorpusError(f"problem {pid!r}: unknown kind {kind!r}")
    tol_rel = float(raw.get("tol_rel", "1e-6"))
    if tol_rel <= 0:
        raise CorpusError(f"problem {pid!r}: tol_rel must be positive")
    discrepancy = raw.get("paper_discrepancy")
    skip = raw.get("skip")
    payload: dict = {}

    def bound(key):
        return _parse_bound(_need(raw, key, pid), what=key, pid=pid)

    def expr_of(key):
        return _parse_expr(_need(raw, key, pid), what=key, pid=pid)

    def closed(key):
        return _evaluate_closed(_need(raw, key, pid), what=key, pid=pid)

    if kind in ("definite", "improper"):
        payload["integrand"] = expr_of("integrand")
        payload["var"] = raw.get("var", "x")
        payload["lower"] = bound("lower")
        payload["upper"] = bound("upper")
        if kind == "definite":
            for side in ("lower", "upper"):
                if not math.isfinite(payload[side]):
                    raise CorpusError(
                        f"problem {pid!r}: definite bounds must be finite")
            payload["expected"] = closed("expected")
        elif raw.get("expected_status", "").strip() == "divergent":
            payload["expected_status"] = "divergent"
        else:
            payload["expected"] = closed("expected")
    elif kind == "indefinite_check":
        payload["integrand"] = expr_of("integrand")
        payload["var"] = raw.get("var", "x")
        payload["expected"] = expr_of("expected")
        payload["probe_lo"] = bound("probe_lo")
        payload["probe_hi"] = bound("probe_hi")
        if not payload["probe_lo"] < payload["probe_hi"]:
            raise CorpusError(f"problem {pid!r}: probe bounds out of order")
    elif kind == "pfrac":
        payload["num"] = expr_of("num")
        payload["den"] = expr_of("den")
        payload["expected"] = expr_of("expected")
    elif kind == "area_between":
        payload["lower_fn"] = expr_of("lower_fn")
        payload["upper_fn"] = expr_of("upper_fn")
        payload["var"] = raw.get("var", "x")
        if "bracket_lo" in raw:
            payload["bracket_lo"] = bound("bracket_lo")
            payload["bracket_hi"] = bound("bracket_hi")
        else:
            payload["a"] = bound("a")
            payload["b"] = bound("b")
            if not payload["a"] < payload["b"]:
                raise CorpusError(f"problem {pid!r}: bounds out of order")
        payload["expected"] = closed("expected")
    elif kind == "area_parametric":
        payload["x"] = expr_of("x")
        payload["y"] = expr_of("y")
        payload["t_from"] = bound("t_from")
        payload["t_to"] = bound("t_to")
        payload["factor"] = int(raw.get("factor", "1"))
        payload["expected"] = closed("expected")
    elif kind in ("area_polar", "volume_polar"):
        payload["rho"] = expr_of("rho")
        payload["phi_from"] = bound("phi_from")
        payload["phi_to"] = bound("phi_to")
        payload["factor"] = int(raw.get("factor", "1"))
        if not payload["phi_from"] < payload["phi_to"]:
            raise CorpusError(f"problem {pid!r}: bounds out of order")
        payload["expected"] = closed("expected")
    elif kind in ("arclen", "surface"):
        if "rho" in raw:
            payload["coords"] = "polar"
            payload["rho"] = expr_of("rho")
            payload["phi_from"] = bound("phi_from")
            payload["phi_to"] = bound("phi_to")
        elif "t_from" in raw:
            payload["coords"] = "parametric"
            payload["x"] = expr_of("x")
            payload["y"] = expr_of("y")
            payload["t_from"] = bound("t_from")
            payload["t_to"] = bound("t_to")
        else:
            payload["coords"] = "cartesian"
            payload["y"] = expr_of("y")
            payload["a"] = bound("a")
            payload["b"] = bound("b")
            if not payload["a"] < payload["b"]:
                raise CorpusError(f"problem {pid!r}: bounds out of order")
        payload["factor"] = int(raw.get("factor", "1"))
        if kind == "surface":
            axis = raw.get("axis", "").strip()
            if axis not in _AXES:
                raise CorpusError(f"problem {pid!r}: bad axis {axis!r}")
            payload["axis"] = _AXES[axis]
        payload["expected"] = closed("expected")
    elif kind == "volume_washer":
        payload["outer"] = expr_of("outer")
        payload["inner"] = expr_of("inner")
        payload["a"] = bound("a")
        payload["b"] = bound("b")
        if not payload["a"] < payload["b"]:
            raise CorpusError(f"problem {pid!r}: bounds out of order")
        axis = raw.get("axis", "ox").strip()
        if axis not in ("ox", "oy"):
            raise CorpusError(f"problem {pid!r}: bad axis {axis!r}")
        payload["axis"] = _AXES[axis]
        payload["expected"] = closed("expected")
    elif kind == "intersections":
        payload["f"] = expr_of("f")
        payload["g"] = expr_of("g")
        payload["lo"] = bound("lo")
        payload["hi"] = bound("hi")
        if not payload["lo"] < payload["hi"]:
            raise CorpusError(f"problem {pid!r}: bounds out of order")
        roots_text = _need(raw, "expected_roots", pid)
        roots = []
        for piece in roots_text.split(","):
            piece = piece.strip()
            if piece:
                roots.append(_evaluate_closed(piece, what="expected_roots",
                                              pid=pid))
        payload["expected_roots"] = sorted(roots)
    return Problem(pid, kind, payload, tol_rel, discrepancy, skip)


def load(path: str) -> list:
    """Parse and validate a corpus file into a list of problems."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    problems = []
    seen = set()
    raw: dict | None = None
    block_line = 0
    for i, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped == "[problem]":
            if raw is not None:
                problems.append(_build_problem(raw, block_line))
            raw, block_line = {}, i
            continue
        if raw is None:
            raise CorpusError(f"line {i}: content before first [problem]")
        if "=" not in stripped:
            raise CorpusError(f"line {i}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if key in raw:
            raise CorpusError(f"line {i}: duplicate key {key!r}")
        raw[key] = value
    if raw is not None:
        problems.append(_build_problem(raw, block_line))
    for p in problems:
        if p.id in seen:
            raise CorpusError(f"duplicate problem id {p.id!r}")
        seen.add(p.id)
    return problems


def _row(p: Problem, computed, expected, note: str = "") -> Row:
    if computed is None or expected is None:
        abs_err = rel_err = None
        passed = computed is None and expected is None
    else:
        abs_err = abs(computed - expected)
        rel_err = abs_err / abs(expected) if expected != 0 else math.inf
        passed = rel_err <= p.tol_rel or abs_err <= 1e-12
    if passed and p.paper_discrepancy:
        status = "discrepancy_documented"
        note = note or p.paper_discrepancy
    elif passed:
        status = "pass"
    else:
        status = "fail"
    return Row(p.id, computed, expected, abs_err, rel_err, status, note)


def _check_row(p: Problem, deviation: float, note: str = "") -> Row:
    """Row for identity checks: deviation against zero at tol_rel scale."""
    passed = deviation <= p.tol_rel
    if passed and p.paper_discrepancy:
        status = "discrepancy_documented"
        note = note or p.paper_discrepancy
    else:
        status = "pass" if passed else "fail"
    return Row(p.id, deviation, 0.0, deviation, deviation, status, note)


def _interior_probes(lo: float, hi: float, n: int = 10) -> list:
    step = (hi - lo) / (n + 1)
    return [lo + step * (i + 1) for i in range(n)]


def _derivative_deviation(candidate: ex.Expr, integrand: ex.Expr, var: str,
                          points: list) -> float:
    dfn = ex.compile_single(ex.differentiate(candidate, var), var)
    ifn = ex.compile_single(integrand, var)
    worst = 0.0
    used = 0
    for x in points:
        dv, iv = dfn(x), ifn(x)
        if not (math.isfinite(dv) and math.isfinite(iv)):
            continue
        worst = max(worst, abs(dv - iv) / (1.0 + abs(iv)))
        used += 1
    if used < max(3, len(points) // 2):
        return math.inf
    return worst


def _run_definite(p: Problem, cfg: geo.QuadConfig) -> Row:
    pay = p.payload
    value = geo._integrate(pay["integrand"], pay["var"],
                           pay["lower"], pay["upper"], cfg)
    return _row(p, value, pay["expected"])


def _run_improper(p: Problem, cfg: geo.QuadConfig) -> Row:
    pay = p.payload
    spec = IntegralSpec(pay["integrand"], pay["var"], pay["lower"],
                        pay["upper"], cfg.rel_tol, cfg.abs_tol, cfg.max_depth)
    result = integrate_improper(spec)
    status = result.status
    if pay.get("expected_status") == "divergent":
        if isinstance(status, Divergent):
            return _row(p, None, None, note=f"divergent {status.direction}")
        got = getattr(status, "value", None)
        return Row(p.id, got, None, None, None, "fail",
                   note=f"expected divergent, got {type(status).__name__}")
    if isinstance(status, Convergent):
        return _row(p, status.value, pay["expected"])
    return Row(p.id, None, pay["expected"], None, None, "fail",
               note=f"classified {type(status).__name__}")


def _run_indefinite(p: Problem) -> Row:
    pay = p.payload
    points = _interior_probes(pay["probe_lo"], pay["probe_hi"])
    dev = _derivative_deviation(pay["expected"], pay["integrand"],
                                pay["var"], points)
    return _check_row(p, dev)


def _run_pfrac(p: Problem) -> Row:
    pay = p.payload
    num = poly_from_expr(pay["num"])
    den = poly_from_expr(pay["den"])
    decomposition = decompose(num, den)
    if decomposition.recompose_over(den * (1 / den.leading())) != \
            num * (1 / den.leading()):
        return Row(p.id, None, None, None, None, "fail",
                   note="recomposition is not an exact identity")
    form = antiderivative(decomposition)
    integrand = ex.Div(pay["num"], pay["den"])
    den_fn = ex.compile_single(pay["den"], "x")
    points = [x for x in _interior_probes(-6.0, 6.0, 40)
              if abs(den_fn(x)) > 1e-3][:10]
    dev_ours = _derivative_deviation(to_expr(form, "x"), integrand, "x", points)
    dev_expected = _derivative_deviation(pay["expected"], integrand, "x",
                                         points)
    return _check_row(p, max(dev_ours, dev_expected),
                      note="exact recomposition verified")


def _run_geometry(p: Problem, cfg: geo.QuadConfig) -> Row:
    pay = p.payload
    kind = p.kind
    if kind == "area_between":
        var = pay["var"]
        if "bracket_lo" in pay:
            roots = geo.find_intersections(pay["lower_fn"], pay["upper_fn"],
                                           var, pay["bracket_lo"],
                                           pay["bracket_hi"])
            if len(roots) < 2:
                return Row(p.id, None, pay["expected"], None, None, "fail",
                           note="fewer than two intersections in bracket")
            a, b = roots[0], roots[-1]
        else:
            a, b = pay["a"], pay["b"]
        if var == "y":
            region = geo.BetweenCartesianX(pay["lower_fn"], pay["upper_fn"],
                                           a, b)
        else:
            region = geo.BetweenCartesian(pay["lower_fn"], pay["upper_fn"],
                                          a, b)
        value = geo.area(region, cfg=cfg)
    elif kind == "area_parametric":
        curve = geo.Parametric(pay["x"], pay["y"], pay["t_from"], pay["t_to"])
        value = geo.area_parametric(curve, pay["factor"], cfg)
    elif kind == "area_polar":
        region = geo.PolarSector(pay["rho"], pay["phi_from"], pay["phi_to"])
        value = geo.area(region, pay["factor"], cfg)
    elif kind == "arclen":
        value = pay["factor"] * geo.arc_length(_curve_of(pay), cfg)
    elif kind == "surface":
        value = geo.surface_of_revolution(_curve_of(pay), pay["axis"],
                                          pay["factor"], cfg)
    elif kind == "volume_washer":
        if pay["axis"] == geo.Axis.OY:
            shape = geo.BetweenCartesianX(pay["inner"], pay["outer"],
                                          pay["a"], pay["b"])
        else:
            shape = geo.BetweenCartesian(pay["inner"], pay["outer"],
                                         pay["a"], pay["b"])
        value = geo.volume_of_revolution(shape, pay["axis"], cfg)
    elif kind == "volume_polar":
        curve = geo.Polar(pay["rho"], pay["phi_from"], pay["phi_to"])
        value = pay["factor"] * geo.volume_of_revolution(
            curve, geo.Axis.POLAR, cfg)
    else:
        raise ValueError(f"unhandled kind {kind!r}")
    return _row(p, value, pay["expected"])


def _curve_of(pay: dict):
    if pay["coords"] == "polar":
        return geo.Polar(pay["rho"], pay["phi_from"], pay["phi_to"])
    if pay["coords"] == "parametric":
        return geo.Parametric(pay["x"], pay["y"], pay["t_from"], pay["t_to"])
    return geo.CartesianY(pay["y"], pay["a"], pay["b"])


def _run_intersections(p: Problem) -> Row:
    pay = p.payload
    roots = geo.find_intersections(pay["f"], pay["g"], "x",
                                   pay["lo"], pay["hi"])
    expected = pay["expected_roots"]
    if len(roots) != len(expected):
        return Row(p.id, float(len(roots)), float(len(expected)), None, None,
                   "fail", note="root count mismatch")
    worst = 0.0
    for r, e in zip(roots, expected):
        worst = max(worst, abs(r - e) / (1.0 + abs(e)))
    return _check_row(p, worst)


def _run_problem(p: Problem, cfg: geo.QuadConfig) -> Row:
    if p.skip:
        return Row(p.id, None, None, None, None, "skipped", note=p.skip)
    try:
        if p.kind == "definite":
            return _run_definite(p, cfg)
        if p.kind == "improper":
            return _run_improper(p, cfg)
        if p.kind == "indefinite_check":
            return _run_indefinite(p)
        if p.kind == "pfrac":
            return _run_pfrac(p)
        if p.kind == "intersections":
            return _run_intersections(p)
        return _run_geometry(p, cfg)
    except Exception as err:  # failures are rows, not exceptions
        return Row(p.id, None, None, None, None, "fail",
                   note=f"{type(err).__name__}: {err}")


def verify(problems: list, cfg: geo.QuadConfig | None = None,
           jobs: int | None = None) -> Report:
    """Run every problem against the engine and assemble a report in order."""
    cfg = cfg or geo.QuadConfig()
    start = time.perf_counter()
    if jobs is not None and jobs <= 1:
        rows = [_run_problem(p, cfg) for p in problems]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda p: _run_problem(p, cfg), problems))
    wall = time.perf_counter() - start
    summary = {"pass": 0, "fail": 0, "discrepancy_documented": 0, "skipped": 0}
    for row in rows:
        summary[row.status] += 1
    return Report(tuple(rows), summary, wall)


def format_table(report: Report) -> str:
    """Human-readable fixed-width table of the report rows plus summary."""
    header = f"{'id':<16} {'computed':>22} {'expected':>22} {'rel_err':>10} status"
    lines = [header, "-" * len(header)]
    for r in report.rows:
        computed = "-" if r.computed is None else f"{r.computed:.12g}"
        expected = "-" if r.expected is None else f"{r.expected:.12g}"
        rel = "-" if r.rel_err is None else f"{r.rel_err:.2e}"
        line = f"{r.id:<16} {computed:>22} {expected:>22} {rel:>10} {r.status}"
        if r.note:
            line += f"  # {r.note}"
        lines.append(line)
    s = report.summary
    lines.append("-" * len(header))
    lines.append(
        f"pass={s['pass']} fail={s['fail']} "
        f"discrepancy_documented={s['discrepancy_documented']} "
        f"skipped={s['skipped']} wall={report.wall_time:.3f}s")
    return "\n".join(lines)


def _dump_json(obj) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return repr(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        return "%.17g" % obj
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_dump_json(v) for v in obj) + "]"
    if isinstance(obj, dict):
        return "{" + ", ".join(
            f"{json.dumps(k)}: {_dump_json(v)}" for k, v in obj.items()) + "}"
    raise TypeError(f"unserializable: {obj!r}")


def report_to_json(report) -> str:
    """Serialize a report (or its parsed-dict form) with 17-significant-digit
    reals; serializing ``json.loads`` of the output is byte-identical."""
    if isinstance(report, Report):
        payload = {
            "rows": [
                {"id": r.id, "computed": r.computed, "expected": r.expected,
                 "abs_err": r.abs_err, "rel_err": r.rel_err,
                 "status": r.status, "note": r.note}
                for r in report.rows
            ],
            "summary": report.summary,
            "wall_time": report.wall_time,
        }
    else:
        payload = report
    return _dump_json(payload) + "\n"
