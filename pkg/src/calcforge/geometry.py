"""Metric characteristics of curves and regions: areas, arc lengths,
surfaces and volumes of revolution in Cartesian, parametric, and polar
coordinates, plus curve-intersection finding.

Symmetry factors are explicit caller inputs; the engine never infers
symmetry.  Endpoint singularities of derivative radicands (cusps, vertical
tangents) are rerouted automatically through the improper-integral path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from . import expr as ex
from .quadrature import (
    Convergent, IntegralSpec, NonFiniteSample, detect_singular_endpoints,
    integrate_finite, integrate_improper,
)

__all__ = [
    "Axis", "CartesianY", "CartesianX", "Parametric", "Polar",
    "BetweenCartesian", "BetweenCartesianX", "PolarSector",
    "TooManyRoots", "NegativeRadius", "ProfileOrderViolated",
    "QuadConfig", "find_intersections", "area", "area_parametric",
    "arc_length", "surface_of_revolution", "volume_of_revolution",
]

_PROBE_POINTS = 256
_PROBE_SLACK = 1e-9


class Axis(Enum):
    OX = "ox"
    OY = "oy"
    POLAR = "polar"


class TooManyRoots(ValueError):
    pass


class NegativeRadius(ValueError):
    pass


class ProfileOrderViolated(ValueError):
    pass


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_depth: int = 50


_DEFAULT = QuadConfig()


@dataclass(frozen=True)
class CartesianY:
    y: ex.Expr  # in x
    a: float
    b: float


@dataclass(frozen=True)
class CartesianX:
    x: ex.Expr  # in y
    c: float
    d: float


@dataclass(frozen=True)
class Parametric:
    x: ex.Expr  # in t
    y: ex.Expr
    t0: float
    t1: float


@dataclass(frozen=True)
class Polar:
    rho: ex.Expr  # in phi
    phi0: float
    phi1: float


@dataclass(frozen=True)
class BetweenCartesian:
    lower: ex.Expr
    upper: ex.Expr
    a: float
    b: float


@dataclass(frozen=True)
class BetweenCartesianX:
    left: ex.Expr
    right: ex.Expr
    c: float
    d: float


@dataclass(frozen=True)
class PolarSector:
    rho: ex.Expr
    phi0: float
    phi1: float


def _probe_points(lo: float, hi: float):
    step = (hi - lo) / (_PROBE_POINTS + 1)
    return [lo + step * (i + 1) for i in range(_PROBE_POINTS)]


def _check_factor(factor: int) -> int:
    if not isinstance(factor, int) or factor < 1:
        raise ValueError("symmetry factor must be a positive integer")
    return factor


def _integrate(integrand: ex.Expr, var: str, lo: float, hi: float,
               cfg: QuadConfig) -> float:
    """Finite quadrature with automatic 2nd-kind rerouting at endpoints."""
    spec = IntegralSpec(integrand, var, lo, hi,
                        cfg.rel_tol, cfg.abs_tol, cfg.max_depth)
    flags = detect_singular_endpoints(spec)
    if flags.lower_singular or flags.upper_singular:
        result = integrate_improper(spec)
        if isinstance(result.status, Convergent):
            return result.status.value
        raise ArithmeticError(
            f"integral did not converge: {result.status!r}")
    try:
        return integrate_finite(spec).value
    except NonFiniteSample:
        result = integrate_improper(spec)
        if isinstance(result.status, Convergent):
            return result.status.value
        raise ArithmeticError(
            f"integral did not converge: {result.status!r}")


def find_intersections(f: ex.Expr, g: ex.Expr, var: str, lo: float, hi: float,
                       max_roots: int = 32) -> list:
    """Roots of f-g on [lo, hi] by sign-change scan plus bisection.

    Tangential (no-sign-change) roots are not guaranteed.  Identical inputs
    (f-g vanishing at every probe) are rejected.
    """
    if not lo < hi:
        raise ValueError("lo must be < hi")
    diff = ex.compile_single(ex.Sub(f, g), var)
    n = 4096
    xs = [lo + (hi - lo) * i / n for i in range(n + 1)]
    vals = [diff(x) for x in xs]
    if all(abs(v) <= 1e-12 for v in vals if math.isfinite(v)):
        raise ValueError("curves are identical at every probe point")

    roots = []
    for i in range(n):
        v0, v1 = vals[i], vals[i + 1]
        if not (math.isfinite(v0) and math.isfinite(v1)):
            continue
        if v0 == 0.0:
            roots.append(xs[i])
            continue
        if v0 * v1 < 0:
            a, b = xs[i], xs[i + 1]
            fa = v0
            while b - a > 1e-12:
                mid = 0.5 * (a + b)
                fm = diff(mid)
                if fm == 0.0:
                    a = b = mid
                    break
                if fa * fm < 0:
                    b = mid
                else:
                    a, fa = mid, fm
            roots.append(0.5 * (a + b))
    if math.isfinite(vals[-1]) and vals[-1] == 0.0:
        roots.append(xs[-1])

    deduped = []
    for r in sorted(roots):
        if not deduped or r - deduped[-1] > 1e-9:
            deduped.append(r)
    if len(deduped) > max_roots:
        raise TooManyRoots(f"{len(deduped)} roots exceed max_roots={max_roots}")
    return deduped


def area(region, factor: int = 1, cfg: QuadConfig = _DEFAULT) -> float:
    """Area of a region, scaled by an explicit symmetry factor."""
    factor = _check_factor(factor)
    if isinstance(region, BetweenCartesian):
        _require_ordered(region.lower, region.upper, "x", region.a, region.b)
        integrand = ex.Sub(region.upper, region.lower)
        return factor * _integrate(integrand, "x", region.a, region.b, cfg)
    if isinstance(region, BetweenCartesianX):
        _require_ordered(region.left, region.right, "y", region.c, region.d)
        integrand = ex.Sub(region.right, region.left)
        return factor * _integrate(integrand, "y", region.c, region.d, cfg)
    if isinstance(region, PolarSector):
        _require_nonnegative_rho(region.rho, region.phi0, region.phi1)
        integrand = ex.Mul(ex.Const(Fraction(1, 2)),
                           ex.Pow(region.rho, ex.Const(Fraction(2))))
        return factor * _integrate(integrand, "phi", region.phi0, region.phi1, cfg)
    raise TypeError(f"not a region: {region!r}")


def area_parametric(curve: Parametric, factor: int = 1,
                    cfg: QuadConfig = _DEFAULT) -> float:
    """Signed area factor * integral of x(t) y'(t) dt over [t0, t1]."""
    factor = _check_factor(factor)
    dy = ex.differentiate(curve.y, "t")
    integrand = ex.Mul(curve.x, dy)
    return factor * _integrate(integrand, "t", curve.t0, curve.t1, cfg)


def _arc_radicand(curve) -> tuple:
    """(integrand, var, lo, hi) for the arc-length element of the curve."""
    one = ex.Const(Fraction(1))
    two = ex.Const(Fraction(2))
    if isinstance(curve, CartesianY):
        dy = ex.differentiate(curve.y, "x")
        rad = ex.Add(one, ex.Pow(dy, two))
        return ex.Func("sqrt", rad), "x", curve.a, curve.b
    if isinstance(curve, CartesianX):
        dx = ex.differentiate(curve.x, "y")
        rad = ex.Add(one, ex.Pow(dx, two))
        return ex.Func("sqrt", rad), "y", curve.c, curve.d
    if isinstance(curve, Parametric):
        dx = ex.differentiate(curve.x, "t")
        dy = ex.differentiate(curve.y, "t")
        rad = ex.Add(ex.Pow(dx, two), ex.Pow(dy, two))
        return ex.Func("sqrt", rad), "t", curve.t0, curve.t1
    if isinstance(curve, Polar):
        drho = ex.differentiate(curve.rho, "phi")
        rad = ex.Add(ex.Pow(curve.rho, two), ex.Pow(drho, two))
        return ex.Func("sqrt", rad), "phi", curve.phi0, curve.phi1
    raise TypeError(f"not a curve: {curve!r}")


def arc_length(curve, cfg: QuadConfig = _DEFAULT) -> float:
    """Arc length of a curve in any of the four coordinate forms."""
    integrand, var, lo, hi = _arc_radicand(curve)
    return _integrate(integrand, var, lo, hi, cfg)


def surface_of_revolution(curve, axis: Axis, factor: int = 1,
                          cfg: QuadConfig = _DEFAULT) -> float:
    """Area of the surface swept by revolving the curve about the axis."""
    factor = _check_factor(factor)
    element, var, lo, hi = _arc_radicand(curve)
    if isinstance(curve, CartesianY):
        if axis == Axis.OX:
            radius = curve.y
        elif axis == Axis.OY:
            radius = ex.Var("x")
        else:
            raise ValueError("polar axis requires a polar curve")
    elif isinstance(curve, Parametric):
        if axis == Axis.OX:
            radius = curve.y
        elif axis == Axis.OY:
            radius = curve.x
        else:
            raise ValueError("polar axis requires a polar curve")
    elif isinstance(curve, Polar):
        if axis != Axis.POLAR:
            raise ValueError("polar curves revolve about the polar axis")
        radius = ex.Mul(curve.rho, ex.Func("sin", ex.Var("phi")))
    else:
        raise TypeError(f"unsupported curve for surface: {curve!r}")
    _require_nonnegative(radius, var, lo, hi, NegativeRadius)
    integrand = ex.Mul(ex.Mul(ex.Const(Fraction(2)), ex.NamedConst("pi")),
                       ex.Mul(radius, element))
    return factor * _integrate(integrand, var, lo, hi, cfg)


def volume_of_revolution(shape, axis: Axis, cfg: QuadConfig = _DEFAULT) -> float:
    """Volume of the solid of revolution.

    Washer method for Cartesian regions (BetweenCartesian about OX,
    BetweenCartesianX about OY); polar formula (2 pi / 3) * integral of
    rho^3 sin(phi) for Polar curves about the polar axis.
    """
    two_pi = ex.Mul(ex.Const(Fraction(2)), ex.NamedConst("pi"))
    if isinstance(shape, BetweenCartesian):
        if axis != Axis.OX:
            raise ValueError("BetweenCartesian regions revolve about OX")
        _require_washer_order(shape.lower, shape.upper, "x", shape.a, shape.b)
        two = ex.Const(Fraction(2))
        integrand = ex.Mul(ex.NamedConst("pi"),
                           ex.Sub(ex.Pow(shape.upper, two),
                                  ex.Pow(shape.lower, two)))
        return _integrate(integrand, "x", shape.a, shape.b, cfg)
    if isinstance(shape, BetweenCartesianX):
        if axis != Axis.OY:
            raise ValueError("BetweenCartesianX regions revolve about OY")
        _require_washer_order(shape.left, shape.right, "y", shape.c, shape.d)
        two = ex.Const(Fraction(2))
        integrand = ex.Mul(ex.NamedConst("pi"),
                           ex.Sub(ex.Pow(shape.right, two),
                                  ex.Pow(shape.left, two)))
        return _integrate(integrand, "y", shape.c, shape.d, cfg)
    if isinstance(shape, Polar):
        if axis != Axis.POLAR:
            raise ValueError("polar volumes revolve about the polar axis")
        if shape.phi0 < -_PROBE_SLACK or shape.phi1 > math.pi + _PROBE_SLACK:
            raise ValueError("polar volume requires the angle domain within [0, pi]")
        _require_nonnegative_rho(shape.rho, shape.phi0, shape.phi1)
        integrand = ex.Mul(
            ex.Div(two_pi, ex.Const(Fraction(3))),
            ex.Mul(ex.Pow(shape.rho, ex.Const(Fraction(3))),
                   ex.Func("sin", ex.Var("phi"))))
        return _integrate(integrand, "phi", shape.phi0, shape.phi1, cfg)
    raise TypeError(f"unsupported shape for volume: {shape!r}")


def _require_ordered(low: ex.Expr, high: ex.Expr, var: str,
                     lo: float, hi: float) -> None:
    f = ex.compile_single(ex.Sub(high, low), var)
    for x in _probe_points(lo, hi):
        v = f(x)
        if math.isfinite(v) and v < -_PROBE_SLACK:
            raise ProfileOrderViolated(
                f"profile order violated near {var}={x:.6g}")


def _require_washer_order(inner: ex.Expr, outer: ex.Expr, var: str,
                          lo: float, hi: float) -> None:
    fi = ex.compile_single(inner, var)
    fo = ex.compile_single(outer, var)
    for x in _probe_points(lo, hi):
        vi, vo = fi(x), fo(x)
        if math.isfinite(vi) and math.isfinite(vo) and vi * vi > vo * vo + _PROBE_SLACK:
            raise ProfileOrderViolated(
                f"inner profile exceeds outer near {var}={x:.6g}")


def _require_nonnegative(e: ex.Expr, var: str, lo: float, hi: float,
                         exc: type) -> None:
    f = ex.compile_single(e, var)
    for x in _probe_points(lo, hi):
        v = f(x)
        if math.isfinite(v) and v < -_PROBE_SLACK:
            raise exc(f"negative value {v:.3g} near {var}={x:.6g}")


def _require_nonnegative_rho(rho: ex.Expr, phi0: float, phi1: float) -> None:
    _require_nonnegative(rho, "phi", phi0, phi1, NegativeRadius)
