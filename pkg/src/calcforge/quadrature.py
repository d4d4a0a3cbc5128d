"""Adaptive numerical integration and improper-integral classification.

Finite intervals use adaptive bisection with an embedded Gauss(7)/Kronrod(15)
pair; the per-panel error estimate is |K15 - G7|.  Improper integrals are
handled by cutoff-sequence probing: growing cutoffs T_k = a + 2^k for infinite
limits, shrinking offsets eps_k = (b-a) * 10^-k for endpoint singularities.
The partial-integral sequence drives the convergent/divergent classification
and doubles as the reported evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import expr as ex

__all__ = [
    "IntegralSpec", "QuadResult", "ImproperResult", "Convergent", "Divergent",
    "Inconclusive", "NonFiniteSample", "integrate_finite",
    "detect_singular_endpoints", "integrate_improper", "EndpointFlags",
]

INF = math.inf

# Gauss(7)/Kronrod(15) nodes and weights on [-1, 1] (QUADPACK dqk15 constants).
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


class NonFiniteSample(ArithmeticError):
    """The integrand evaluated to NaN/inf at an interior sample point."""

    def __init__(self, x: float):
        super().__init__(f"non-finite integrand sample at x={x!r}")
        self.x = x


@dataclass(frozen=True)
class IntegralSpec:
    integrand: ex.Expr
    var: str = "x"
    lower: float = 0.0
    upper: float = 1.0
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_depth: int = 50

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if math.isnan(self.lower) or math.isnan(self.upper):
            raise ValueError("bounds must not be nan")
        if self.lower == self.upper and not math.isfinite(self.lower):
            raise ValueError("equal infinite bounds")


@dataclass
class QuadResult:
    value: float
    err_estimate: float
    evaluations: int
    depth_hit: bool = False


@dataclass(frozen=True)
class Convergent:
    value: float
    err: float


@dataclass(frozen=True)
class Divergent:
    direction: str  # "+inf" | "-inf" | "oscillating"


@dataclass(frozen=True)
class Inconclusive:
    pass


@dataclass
class ImproperResult:
    status: object  # Convergent | Divergent | Inconclusive
    partials: list = field(default_factory=list)  # [(cutoff, value), ...]


@dataclass(frozen=True)
class EndpointFlags:
    lower_singular: bool
    upper_singular: bool


def _kronrod_panel(f, a: float, b: float):
    """One GK15 application on [a, b]; returns (K15, |K15-G7|, samples)."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = f(mid)
    if not math.isfinite(fc):
        raise NonFiniteSample(mid)
    resk = _WGK[7] * fc
    resg = _WG[3] * fc
    for j in range(7):
        dx = half * _XGK[j]
        f1 = f(mid - dx)
        f2 = f(mid + dx)
        if not math.isfinite(f1):
            raise NonFiniteSample(mid - dx)
        if not math.isfinite(f2):
            raise NonFiniteSample(mid + dx)
        resk += _WGK[j] * (f1 + f2)
        if j % 2 == 1:  # Gauss nodes sit at the odd Kronrod indices
            resg += _WG[j // 2] * (f1 + f2)
    return resk * half, abs((resk - resg) * half), 15


def integrate_finite(spec: IntegralSpec, fn=None) -> QuadResult:
    """Adaptive GK15 bisection on a finite interval.

    Raises NonFiniteSample if the integrand is NaN/inf at a sampled point
    (the caller should reroute through the improper path).  Hitting max_depth
    is reported via ``depth_hit``, not an error.
    """
    a, b = spec.lower, spec.upper
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("integrate_finite requires finite bounds")
    if a == b:
        return QuadResult(0.0, 0.0, 0)
    sign = 1.0
    if a > b:
        a, b, sign = b, a, -1.0
    f = fn if fn is not None else ex.compile_single(spec.integrand, spec.var)

    value0, _, evals = _kronrod_panel(f, a, b)
    total_width = b - a
    tol = max(spec.abs_tol, spec.rel_tol * abs(value0))

    total = 0.0
    err_total = 0.0
    depth_hit = False
    stack = [(a, b, 0)]
    while stack:
        lo, hi, depth = stack.pop()
        panel_value, panel_err, n = _kronrod_panel(f, lo, hi)
        evals += n
        local_tol = tol * (hi - lo) / total_width
        if panel_err <= local_tol or depth >= spec.max_depth:
            if panel_err > local_tol:
                depth_hit = True
            total += panel_value
            err_total += panel_err
        else:
            mid = 0.5 * (lo + hi)
            stack.append((lo, mid, depth + 1))
            stack.append((mid, hi, depth + 1))
    return QuadResult(sign * total, err_total, evals, depth_hit)


def detect_singular_endpoints(spec: IntegralSpec) -> EndpointFlags:
    """Probe toward each finite endpoint; flag blow-up or non-finite values."""
    a, b = spec.lower, spec.upper
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("finite bounds required")
    f = ex.compile_single(spec.integrand, spec.var)
    width = b - a

    def singular_at(endpoint: float, direction: float) -> bool:
        if not math.isfinite(f(endpoint)):
            return True
        bad = 0
        for k in (11, 12):
            x = endpoint + direction * 10.0 ** (-k) * width
            v = f(x)
            if not math.isfinite(v) or abs(v) > 1e8:
                bad += 1
        return bad == 2

    return EndpointFlags(
        lower_singular=singular_at(a, 1.0),
        upper_singular=singular_at(b, -1.0),
    )


def _classify(partials: list, increments: list, tol: float):
    """Classify a partial-integral sequence; see module docstring."""
    if len(partials) >= 3:
        v3 = [p[1] for p in partials[-3:]]
        if abs(v3[2] - v3[1]) <= tol and abs(v3[1] - v3[0]) <= tol:
            return Convergent(v3[2], max(abs(v3[2] - v3[1]), abs(v3[1] - v3[0])))
    if len(increments) >= 5:
        last = increments[-5:]
        # geometric tail: same-signed shrinking increments extrapolate to a limit
        if all(d != 0.0 for d in last):
            ratios = [last[i + 1] / last[i] for i in range(4)]
            if all(0.0 < r <= 0.95 for r in ratios):
                r = ratios[-1]
                tail = last[-1] * r / (1.0 - r)
                return Convergent(partials[-1][1] + tail, abs(tail) * 0.5 + tol)
        same_sign = all(d > 0 for d in last) or all(d < 0 for d in last)
        non_shrinking = all(
            abs(last[i + 1]) >= abs(last[i]) * (1.0 - 1e-3) for i in range(4)
        )
        if same_sign and non_shrinking:
            return Divergent("+inf" if last[-1] > 0 else "-inf")
        alternating = all(last[i] * last[i + 1] < 0 for i in range(4))
        if alternating and non_shrinking:
            return Divergent("oscillating")
    return Inconclusive()


def _probe_sequence(f, spec: IntegralSpec, cutoffs: list, start: float):
    """Accumulate partial integrals over successive cutoffs with early exit."""
    partials = []
    increments = []
    acc = 0.0
    prev = start
    for cut in cutoffs:
        piece = integrate_finite(
            IntegralSpec(spec.integrand, spec.var, prev, cut,
                         spec.rel_tol, spec.abs_tol, spec.max_depth),
            fn=f,
        )
        acc += piece.value
        if partials:
            increments.append(acc - partials[-1][1])
        partials.append((cut, acc))
        prev = cut
        tol = max(spec.abs_tol, spec.rel_tol * abs(acc)) * 10.0
        if len(partials) >= 3:
            v3 = [p[1] for p in partials[-3:]]
            if abs(v3[2] - v3[1]) <= tol and abs(v3[1] - v3[0]) <= tol:
                break
    tol = max(spec.abs_tol, spec.rel_tol * abs(partials[-1][1])) * 10.0
    return partials, increments, tol


def _first_kind_upper(spec: IntegralSpec, f) -> ImproperResult:
    cutoffs = [spec.lower + 2.0 ** k for k in range(41)]
    partials, increments, tol = _probe_sequence(f, spec, cutoffs, spec.lower)
    return ImproperResult(_classify(partials, increments, tol), partials)


def _second_kind(spec: IntegralSpec, f, singular_upper: bool) -> ImproperResult:
    a, b = spec.lower, spec.upper
    width = b - a
    if singular_upper:
        cutoffs = [b - width * 10.0 ** (-k) for k in range(1, 13)]
        partials, increments, tol = _probe_sequence(f, spec, cutoffs, a)
    else:
        cutoffs = [a + width * 10.0 ** (-k) for k in range(1, 13)]
        # integrate from b down toward a; orientation sign folded per piece
        partials = []
        increments = []
        acc = 0.0
        prev = b
        for cut in cutoffs:
            piece = integrate_finite(
                IntegralSpec(spec.integrand, spec.var, cut, prev,
                             spec.rel_tol, spec.abs_tol, spec.max_depth),
                fn=f,
            )
            acc += piece.value
            if partials:
                increments.append(acc - partials[-1][1])
            partials.append((cut, acc))
            prev = cut
        tol = max(spec.abs_tol, spec.rel_tol * abs(acc)) * 10.0
    return ImproperResult(_classify(partials, increments, tol), partials)


def _negate_result(res: ImproperResult) -> ImproperResult:
    status = res.status
    if isinstance(status, Convergent):
        status = Convergent(-status.value, status.err)
    elif isinstance(status, Divergent) and status.direction in ("+inf", "-inf"):
        status = Divergent("-inf" if status.direction == "+inf" else "+inf")
    return ImproperResult(status, [(c, -v) for c, v in res.partials])


def integrate_improper(spec: IntegralSpec) -> ImproperResult:
    """Evaluate/classify an improper integral of the 1st or 2nd kind."""
    f = ex.compile_single(spec.integrand, spec.var)
    a, b = spec.lower, spec.upper

    if a > b:
        flipped = IntegralSpec(spec.integrand, spec.var, b, a,
                               spec.rel_tol, spec.abs_tol, spec.max_depth)
        return _negate_result(integrate_improper(flipped))

    if b == INF and a == -INF:
        left = integrate_improper(
            IntegralSpec(spec.integrand, spec.var, -INF, 0.0,
                         spec.rel_tol, spec.abs_tol, spec.max_depth))
        right = integrate_improper(
            IntegralSpec(spec.integrand, spec.var, 0.0, INF,
                         spec.rel_tol, spec.abs_tol, spec.max_depth))
        partials = left.partials + right.partials
        if isinstance(left.status, Convergent) and isinstance(right.status, Convergent):
            return ImproperResult(
                Convergent(left.status.value + right.status.value,
                           left.status.err + right.status.err), partials)
        for side in (left, right):
            if isinstance(side.status, Divergent):
                return ImproperResult(side.status, partials)
        return ImproperResult(Inconclusive(), partials)

    if b == INF:
        return _first_kind_upper(spec, f)
    if a == -INF:
        # mirror x -> -x reduces to an upper-infinite problem
        mirrored = IntegralSpec(
            _substitute_negated(spec.integrand, spec.var), spec.var,
            -b, INF, spec.rel_tol, spec.abs_tol, spec.max_depth)
        res = _first_kind_upper(mirrored, ex.compile_single(mirrored.integrand, spec.var))
        return ImproperResult(res.status, [(-c, v) for c, v in res.partials])

    flags = detect_singular_endpoints(spec)
    if flags.lower_singular and flags.upper_singular:
        mid = 0.5 * (a + b)
        left = integrate_improper(IntegralSpec(spec.integrand, spec.var, a, mid,
                                               spec.rel_tol, spec.abs_tol, spec.max_depth))
        right = integrate_improper(IntegralSpec(spec.integrand, spec.var, mid, b,
                                                spec.rel_tol, spec.abs_tol, spec.max_depth))
        partials = left.partials + right.partials
        if isinstance(left.status, Convergent) and isinstance(right.status, Convergent):
            return ImproperResult(
                Convergent(left.status.value + right.status.value,
                           left.status.err + right.status.err), partials)
        for side in (left, right):
            if isinstance(side.status, Divergent):
                return ImproperResult(side.status, partials)
        return ImproperResult(Inconclusive(), partials)
    if flags.upper_singular:
        return _second_kind(spec, f, singular_upper=True)
    if flags.lower_singular:
        return _second_kind(spec, f, singular_upper=False)
    # no singularity after all: a plain finite integral
    res = integrate_finite(spec, fn=f)
    return ImproperResult(Convergent(res.value, res.err_estimate),
                          [(b, res.value)])


def _substitute_negated(e: ex.Expr, var: str) -> ex.Expr:
    """Replace var by -var (for mirroring lower-infinite integrals)."""
    if isinstance(e, ex.Var) and e.name == var:
        return ex.Neg(e)
    if isinstance(e, (ex.Const, ex.NamedConst, ex.Var)):
        return e
    if isinstance(e, ex.Neg):
        return ex.Neg(_substitute_negated(e.operand, var))
    if isinstance(e, ex.Func):
        return ex.Func(e.name, _substitute_negated(e.arg, var))
    if isinstance(e, ex.Pow):
        return ex.Pow(_substitute_negated(e.base, var),
                      _substitute_negated(e.exponent, var))
    cls = type(e)
    return cls(_substitute_negated(e.left, var), _substitute_negated(e.right, var))
