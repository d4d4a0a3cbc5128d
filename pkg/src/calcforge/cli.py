"""Terminal entry point: single-shot computations, partial-fraction printing,
corpus verification, and plot-data emission.

Expressions are passed as single shell-quoted arguments.  Exit codes: 0 on
success, 1 when corpus verification has failing rows, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from fractions import Fraction

from . import corpus as corpus_mod
from . import expr as ex
from . import geometry as geo
from .exact_algebra import poly_from_expr
from .partial_fractions import (
    LinearPower, QuadAtan, QuadLog, antiderivative, decompose, to_expr,
)
from .quadrature import (
    Convergent, Divergent, IntegralSpec, NonFiniteSample,
    detect_singular_endpoints, integrate_finite, integrate_improper,
)

__all__ = ["main"]

_AXES = {"ox": geo.Axis.OX, "oy": geo.Axis.OY, "polar": geo.Axis.POLAR}


class UsageError(ValueError):
    pass


def _default_rel_tol() -> float:
    raw = os.environ.get("CALCFORGE_REL_TOL")
    if raw is None:
        return 1e-10
    try:
        value = float(raw)
    except ValueError as err:
        raise UsageError(f"CALCFORGE_REL_TOL is not a number: {raw!r}") from err
    if value <= 0:
        raise UsageError("CALCFORGE_REL_TOL must be positive")
    return value


def _parse_expr(text: str, what: str) -> ex.Expr:
    try:
        return ex.parse(text)
    except ex.ParseError as err:
        raise UsageError(f"bad expression for {what}: {err}") from err


def _parse_bound(text: str, what: str) -> float:
    stripped = text.strip()
    if stripped in ("inf", "+inf"):
        return math.inf
    if stripped == "-inf":
        return -math.inf
    try:
        value = ex.evaluate(ex.parse(stripped))
    except (ex.ParseError, ex.UnboundVariable) as err:
        raise UsageError(f"bad bound for {what}: {err}") from err
    if not math.isfinite(value):
        raise UsageError(f"bound for {what} is not finite")
    return value


def _config(args) -> geo.QuadConfig:
    return geo.QuadConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol,
                          max_depth=args.max_depth)


def _cmd_integrate(args) -> int:
    integrand = _parse_expr(args.expr, "--expr")
    lower = _parse_bound(getattr(args, "from"), "--from")
    upper = _parse_bound(args.to, "--to")
    cfg = _config(args)
    spec = IntegralSpec(integrand, args.var, lower, upper,
                        cfg.rel_tol, cfg.abs_tol, cfg.max_depth)
    improper = not (math.isfinite(lower) and math.isfinite(upper))
    if not improper:
        flags = detect_singular_endpoints(spec)
        improper = flags.lower_singular or flags.upper_singular
    if not improper:
        try:
            result = integrate_finite(spec)
            print(f"value: {result.value:.15g}")
            print(f"error_estimate: {result.err_estimate:.3e}")
            print("status: converged")
            return 0
        except NonFiniteSample:
            improper = True
    result = integrate_improper(spec)
    status = result.status
    if isinstance(status, Convergent):
        print(f"value: {status.value:.15g}")
        print(f"error_estimate: {status.err:.3e}")
        print("status: converged")
    elif isinstance(status, Divergent):
        print(f"status: divergent ({status.direction})")
    else:
        print("status: inconclusive")
    return 0


def _pf_term_expr(term, var: str = "x") -> ex.Expr:
    x = ex.Var(var)
    if isinstance(term, LinearPower):
        base = (x if term.root == 0
                else ex.Sub(x, ex.Const(term.root)) if term.root > 0
                else ex.Add(x, ex.Const(-term.root)))
        den = base if term.power == 1 else ex.Pow(base, ex.Const(
            Fraction(term.power)))
        return ex.Div(ex.Const(term.coef), den)
    quad = ex.Add(ex.Add(ex.Pow(x, ex.Const(Fraction(2))),
                         ex.Mul(ex.Const(term.b), x)), ex.Const(term.c))
    if isinstance(term, QuadLog):
        num = ex.Mul(ex.Const(term.coef),
                     ex.Add(ex.Mul(ex.Const(Fraction(2)), x),
                            ex.Const(term.b)))
        return ex.Div(num, quad)
    assert isinstance(term, QuadAtan)
    return ex.Div(ex.Const(term.coef), quad)


def _cmd_pfrac(args) -> int:
    try:
        num = poly_from_expr(_parse_expr(args.num, "--num"))
        den = poly_from_expr(_parse_expr(args.den, "--den"))
    except ValueError as err:
        raise UsageError(str(err)) from err
    decomposition = decompose(num, den)
    pieces = []
    if not decomposition.polynomial_part.is_zero():
        pieces.append(ex.to_text(decomposition.polynomial_part.to_expr()))
    for term in decomposition.terms:
        pieces.append(ex.to_text(_pf_term_expr(term)))
    print("decomposition:", " + ".join(pieces) if pieces else "0")
    form = antiderivative(decomposition)
    print("antiderivative:", ex.to_text(to_expr(form)))
    return 0


def _require(args, names: list, coords: str) -> None:
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        flags = ", ".join("--" + n for n in missing)
        raise UsageError(f"--coords {coords} requires {flags}")


def _curve_from_args(args):
    if args.coords == "cartesian":
        _require(args, ["y", "a", "b"], "cartesian")
        return geo.CartesianY(_parse_expr(args.y, "--y"),
                              _parse_bound(args.a, "--a"),
                              _parse_bound(args.b, "--b"))
    if args.coords == "parametric":
        _require(args, ["x", "y", "t-from", "t-to"], "parametric")
        return geo.Parametric(_parse_expr(args.x, "--x"),
                              _parse_expr(args.y, "--y"),
                              _parse_bound(args.t_from, "--t-from"),
                              _parse_bound(args.t_to, "--t-to"))
    _require(args, ["rho", "phi-from", "phi-to"], "polar")
    return geo.Polar(_parse_expr(args.rho, "--rho"),
                     _parse_bound(args.phi_from, "--phi-from"),
                     _parse_bound(args.phi_to, "--phi-to"))


def _cmd_area(args) -> int:
    cfg = _config(args)
    if args.coords == "cartesian":
        _require(args, ["lower-fn", "upper-fn", "a", "b"], "cartesian")
        region = geo.BetweenCartesian(_parse_expr(args.lower_fn, "--lower-fn"),
                                      _parse_expr(args.upper_fn, "--upper-fn"),
                                      _parse_bound(args.a, "--a"),
                                      _parse_bound(args.b, "--b"))
        value = geo.area(region, args.factor, cfg)
    elif args.coords == "parametric":
        curve = _curve_from_args(args)
        value = geo.area_parametric(curve, args.factor, cfg)
    else:
        _require(args, ["rho", "phi-from", "phi-to"], "polar")
        region = geo.PolarSector(_parse_expr(args.rho, "--rho"),
                                 _parse_bound(args.phi_from, "--phi-from"),
                                 _parse_bound(args.phi_to, "--phi-to"))
        value = geo.area(region, args.factor, cfg)
    print(f"{value:.15g}")
    return 0


def _cmd_arclen(args) -> int:
    value = args.factor * geo.arc_length(_curve_from_args(args), _config(args))
    print(f"{value:.15g}")
    return 0


def _cmd_surface(args) -> int:
    curve = _curve_from_args(args)
    value = geo.surface_of_revolution(curve, _AXES[args.axis], args.factor,
                                      _config(args))
    print(f"{value:.15g}")
    return 0


def _cmd_volume(args) -> int:
    cfg = _config(args)
    if args.coords == "polar":
        _require(args, ["rho", "phi-from", "phi-to"], "polar")
        curve = geo.Polar(_parse_expr(args.rho, "--rho"),
                          _parse_bound(args.phi_from, "--phi-from"),
                          _parse_bound(args.phi_to, "--phi-to"))
        value = args.factor * geo.volume_of_revolution(curve, geo.Axis.POLAR,
                                                       cfg)
    else:
        _require(args, ["outer", "inner", "a", "b"], "cartesian")
        axis = _AXES[args.axis]
        outer = _parse_expr(args.outer, "--outer")
        inner = _parse_expr(args.inner, "--inner")
        a, b = _parse_bound(args.a, "--a"), _parse_bound(args.b, "--b")
        if axis == geo.Axis.OY:
            shape = geo.BetweenCartesianX(inner, outer, a, b)
        else:
            shape = geo.BetweenCartesian(inner, outer, a, b)
        value = geo.volume_of_revolution(shape, axis, cfg)
    print(f"{value:.15g}")
    return 0


def _cmd_intersect(args) -> int:
    roots = geo.find_intersections(_parse_expr(args.f, "--f"),
                                   _parse_expr(args.g, "--g"), args.var,
                                   _parse_bound(args.lo, "--lo"),
                                   _parse_bound(args.hi, "--hi"))
    for r in roots:
        print(f"{r:.15g}")
    return 0


def _cmd_verify(args) -> int:
    try:
        problems = corpus_mod.load(args.corpus)
    except (OSError, corpus_mod.CorpusError) as err:
        raise UsageError(str(err)) from err
    report = corpus_mod.verify(problems, _config(args), jobs=args.jobs)
    print(corpus_mod.format_table(report))
    if args.json:
        with open(args.json, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(corpus_mod.report_to_json(report))
    return 1 if report.summary["fail"] else 0


def _cmd_plot(args) -> int:
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    curve = _curve_from_args(args)
    rows = []
    n = args.samples
    if isinstance(curve, geo.CartesianY):
        fn = ex.compile_single(curve.y, "x")
        rows.append("x,y")
        for i in range(n):
            x = curve.a + (curve.b - curve.a) * i / (n - 1)
            rows.append(f"{x:.15g},{fn(x):.15g}")
    elif isinstance(curve, geo.Parametric):
        fx = ex.compile_single(curve.x, "t")
        fy = ex.compile_single(curve.y, "t")
        rows.append("t,x,y")
        for i in range(n):
            t = curve.t0 + (curve.t1 - curve.t0) * i / (n - 1)
            rows.append(f"{t:.15g},{fx(t):.15g},{fy(t):.15g}")
    else:
        fr = ex.compile_single(curve.rho, "phi")
        rows.append("phi,rho,x,y")
        for i in range(n):
            phi = curve.phi0 + (curve.phi1 - curve.phi0) * i / (n - 1)
            rho = fr(phi)
            rows.append(f"{phi:.15g},{rho:.15g},"
                        f"{rho * math.cos(phi):.15g},"
                        f"{rho * math.sin(phi):.15g}")
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(rows) + "\n")
    return 0


def _add_common(sub) -> None:
    sub.add_argument("--rel-tol", type=float, default=None)
    sub.add_argument("--abs-tol", type=float, default=1e-12)
    sub.add_argument("--max-depth", type=int, default=50)


def _add_curve_flags(sub) -> None:
    sub.add_argument("--coords", choices=["cartesian", "parametric", "polar"],
                     default="cartesian")
    sub.add_argument("--x")
    sub.add_argument("--y")
    sub.add_argument("--t-from")
    sub.add_argument("--t-to")
    sub.add_argument("--rho")
    sub.add_argument("--phi-from")
    sub.add_argument("--phi-to")
    sub.add_argument("--a")
    sub.add_argument("--b")
    sub.add_argument("--factor", type=int, default=1)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="calcforge",
        description="Symbolic-numeric engine for one-dimensional integral "
                    "calculus.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("integrate", help="definite or improper integral")
    p.add_argument("--expr", required=True)
    p.add_argument("--var", default="x")
    p.add_argument("--from", required=True)
    p.add_argument("--to", required=True)
    _add_common(p)
    p.set_defaults(run=_cmd_integrate)

    p = subs.add_parser("pfrac", help="partial-fraction decomposition")
    p.add_argument("--num", required=True)
    p.add_argument("--den", required=True)
    _add_common(p)
    p.set_defaults(run=_cmd_pfrac)

    p = subs.add_parser("area", help="area of a region")
    _add_curve_flags(p)
    p.add_argument("--lower-fn")
    p.add_argument("--upper-fn")
    _add_common(p)
    p.set_defaults(run=_cmd_area)

    p = subs.add_parser("arclen", help="arc length of a curve")
    _add_curve_flags(p)
    _add_common(p)
    p.set_defaults(run=_cmd_arclen)

    p = subs.add_parser("surface", help="surface of revolution")
    _add_curve_flags(p)
    p.add_argument("--axis", choices=["ox", "oy", "polar"], required=True)
    _add_common(p)
    p.set_defaults(run=_cmd_surface)

    p = subs.add_parser("volume", help="volume of revolution")
    _add_curve_flags(p)
    p.add_argument("--outer")
    p.add_argument("--inner")
    p.add_argument("--axis", choices=["ox", "oy", "polar"], default="ox")
    _add_common(p)
    p.set_defaults(run=_cmd_volume)

    p = subs.add_parser("intersect", help="curve intersection points")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--var", default="x")
    p.add_argument("--lo", required=True)
    p.add_argument("--hi", required=True)
    _add_common(p)
    p.set_defaults(run=_cmd_intersect)

    p = subs.add_parser("verify", help="run a corpus file and report")
    p.add_argument("--corpus", required=True)
    p.add_argument("--json")
    p.add_argument("--jobs", type=int, default=os.cpu_count())
    _add_common(p)
    p.set_defaults(run=_cmd_verify)

    p = subs.add_parser("plot", help="emit CSV samples of a curve")
    p.add_argument("--kind", choices=["curve"], default="curve")
    _add_curve_flags(p)
    p.add_argument("--samples", type=int, default=512)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(run=_cmd_plot)
    return parser


def main(argv: list | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.rel_tol is None:
            args.rel_tol = _default_rel_tol()
        elif args.rel_tol <= 0:
            raise UsageError("--rel-tol must be positive")
        return args.run(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except SystemExit as err:
        return 2 if err.code not in (0, None) else 0


if __name__ == "__main__":
    sys.exit(main())
