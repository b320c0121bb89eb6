"""Geometric censuses: collinear triples and quadruples on plane curves,
distinct directions, the three-fixed-points distance polynomial, and the
chord construction on the model cubic y = x^3.

All counts are ordered and "proper" means pairwise-distinct points, so the
x6 / x24 ordering factors are unambiguous.  Everything is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .common import InputError, InvariantViolation
from .curves import PlaneCurve
from .poly import MPoly
from .scalars import GaussRat


@dataclass(frozen=True)
class PlanePoint:
    x: GaussRat
    y: GaussRat

    @staticmethod
    def of(x, y) -> "PlanePoint":
        if not isinstance(x, GaussRat):
            x = GaussRat(x)
        if not isinstance(y, GaussRat):
            y = GaussRat(y)
        return PlanePoint(x, y)

    def sort_key(self):
        return (self.x.sort_key(), self.y.sort_key())

    def __str__(self):
        return f"({self.x}, {self.y})"


@dataclass(frozen=True)
class CurvePointSet:
    """Points lying exactly on one plane curve."""

    curve: PlaneCurve
    points: tuple[PlanePoint, ...]

    def __post_init__(self):
        for p in self.points:
            if not self.curve.contains_point(p.x, p.y):
                raise InputError(f"point {p} is not on the curve")

    def __len__(self):
        return len(self.points)


def _curve_from(defining: MPoly, vars2) -> PlaneCurve:
    return PlaneCurve(vars2, defining.with_variables(vars2).monic())


def cubic_point_set(params) -> CurvePointSet:
    """(t, t^3) samples on the model cubic."""
    from .parse import parse_poly

    curve = _curve_from(parse_poly("x^3 - y", ("x", "y")), ("x", "y"))
    pts = tuple(PlanePoint.of(t, GaussRat(t) ** 3) for t in map(GaussRat, params))
    return CurvePointSet(curve, pts)


def parabola_point_set(params) -> CurvePointSet:
    from .parse import parse_poly

    curve = _curve_from(parse_poly("x^2 - y", ("x", "y")), ("x", "y"))
    pts = tuple(PlanePoint.of(t, GaussRat(t) ** 2) for t in map(GaussRat, params))
    return CurvePointSet(curve, pts)


def line_point_set(params) -> CurvePointSet:
    """(t, 0) samples on the x-axis."""
    from .parse import parse_poly

    curve = _curve_from(parse_poly("y", ("x", "y")), ("x", "y"))
    pts = tuple(PlanePoint.of(t, 0) for t in map(GaussRat, params))
    return CurvePointSet(curve, pts)


def collinearity_det(p1: PlanePoint, p2: PlanePoint, p3: PlanePoint) -> GaussRat:
    """The 3x3 determinant with rows (1, x_i, y_i); zero iff collinear."""
    return (p2.x - p1.x) * (p3.y - p1.y) - (p3.x - p1.x) * (p2.y - p1.y)


def _line_key(p: PlanePoint, q: PlanePoint):
    """Canonical (slope, offset) key of the line through two distinct points."""
    if p.x == q.x:
        return ("v", p.x)
    slope = (q.y - p.y) / (q.x - p.x)
    intercept = p.y - slope * p.x
    return ("s", slope, intercept)


def collinear_triples(
    s1: CurvePointSet, s2: CurvePointSet, s3: CurvePointSet, method: str = "auto"
) -> int:
    """Ordered triples of pairwise-distinct collinear points, one from each set.

    "brute" tests the determinant on every triple; "lines" groups the third
    set by exact slope-intercept keys.  Both give identical counts; brute
    force is the oracle.
    """
    a, b, c = s1.points, s2.points, s3.points
    if method == "auto":
        method = "lines" if len(a) * len(b) * len(c) > 20_000 else "brute"
    if method == "brute":
        count = 0
        for p in a:
            for q in b:
                if p == q:
                    continue
                for r in c:
                    if r == p or r == q:
                        continue
                    if collinearity_det(p, q, r).is_zero():
                        count += 1
        return count
    if method != "lines":
        raise InputError(f"unknown method {method!r}")
    # cache, per exact line key, which points of the third set lie on the line
    by_line: dict[tuple, frozenset] = {}
    count = 0
    for p in a:
        for q in b:
            if p == q:
                continue
            key = _line_key(p, q)
            bucket = by_line.get(key)
            if bucket is None:
                bucket = frozenset(
                    r for r in c if collinearity_det(p, q, r).is_zero()
                )
                by_line[key] = bucket
            count += len(bucket) - (p in bucket) - (q in bucket)
    return count


def collinear_quadruples(s: CurvePointSet) -> int:
    """Ordered quadruples of pairwise-distinct points on one line.

    Tested via two determinant vanishings against the first two entries.
    """
    pts = s.points
    n = len(pts)
    if n < 4:
        return 0
    count = 0
    for i in range(n):
        for j in range(n):
            if j == i:
                continue
            for k in range(n):
                if k == i or k == j:
                    continue
                if not collinearity_det(pts[i], pts[j], pts[k]).is_zero():
                    continue
                for l in range(n):
                    if l == i or l == j or l == k:
                        continue
                    if collinearity_det(pts[i], pts[j], pts[l]).is_zero():
                        count += 1
    return count


def directions_count(s: CurvePointSet) -> int:
    """Distinct slopes over unordered pairs of distinct points.

    Vertical pairs contribute a single sentinel direction.
    """
    pts = s.points
    if len(pts) < 2:
        raise InputError("directions need at least two points")
    slopes = set()
    vertical = False
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            p, q = pts[i], pts[j]
            if p == q:
                continue
            if p.x == q.x:
                vertical = True
            else:
                slopes.add((q.y - p.y) / (q.x - p.x))
    return len(slopes) + (1 if vertical else 0)


# ---------------------------------------------------------------------------
# The distance polynomial of three fixed points
# ---------------------------------------------------------------------------


def _require_rational(p: PlanePoint, name: str):
    if not (p.x.is_rational() and p.y.is_rational()):
        raise InputError(f"{name} must have rational coordinates")


def _primitive_signed(f: MPoly) -> MPoly:
    """Scale to integer coefficients with gcd 1 and positive leading coefficient."""
    from math import gcd, lcm

    den = 1
    for c in f.terms.values():
        den = lcm(den, c.re.denominator)
    num = 0
    for c in f.terms.values():
        num = gcd(num, abs((c.re * den).numerator))
    scale = GaussRat(Fraction(den, num if num else 1))
    out = f * scale
    if out.leading_coefficient().re < 0:
        out = -out
    return out


def distance_triple_poly(
    p1: PlanePoint, p2: PlanePoint, p3: PlanePoint
) -> MPoly:
    """Eliminate the query point from the three squared-distance equations.

    For non-collinear anchors the result is a quadratic relation F(a,b,c)
    among the squared distances a, b, c to p1, p2, p3; for collinear anchors
    the relation degenerates to a linear one.  Coefficients are normalized
    primitive-integer with positive leading coefficient.
    """
    for p, name in ((p1, "p1"), (p2, "p2"), (p3, "p3")):
        _require_rational(p, name)
    if p1 == p2 or p1 == p3 or p2 == p3:
        raise InputError("anchor points must be distinct")
    vars3 = ("a", "b", "c")
    a = MPoly.var("a", vars3)
    b = MPoly.var("b", vars3)
    c = MPoly.var("c", vars3)
    s1 = p1.x * p1.x + p1.y * p1.y
    s2 = p2.x * p2.x + p2.y * p2.y
    s3 = p3.x * p3.x + p3.y * p3.y
    det = collinearity_det(p1, p2, p3)
    if det.is_zero():
        # collinear anchors: p3 = p1 + u * (p2 - p1); eliminate along the axis
        dx, dy = p2.x - p1.x, p2.y - p1.y
        u = (p3.x - p1.x) / dx if not dx.is_zero() else (p3.y - p1.y) / dy
        e = dx * dx + dy * dy
        one = GaussRat(1)
        f = a * (u - one) - b * u + c + MPoly.constant(u * e * (one - u), vars3)
        return _primitive_signed(f)
    # rows of the linear system 2(p_i - p1) . (X, Y) = rhs_i
    m11, m12 = GaussRat(2) * (p2.x - p1.x), GaussRat(2) * (p2.y - p1.y)
    m21, m22 = GaussRat(2) * (p3.x - p1.x), GaussRat(2) * (p3.y - p1.y)
    rhs1 = a - b + MPoly.constant(s2 - s1, vars3)
    rhs2 = a - c + MPoly.constant(s3 - s1, vars3)
    d = m11 * m22 - m12 * m21
    xn = rhs1 * m22 - rhs2 * m12  # = X * d
    yn = rhs2 * m11 - rhs1 * m21  # = Y * d
    f = (
        (xn - MPoly.constant(p1.x * d, vars3)) ** 2
        + (yn - MPoly.constant(p1.y * d, vars3)) ** 2
        - a * (d * d)
    )
    return _primitive_signed(f)


# ---------------------------------------------------------------------------
# Chord construction on the model cubic y = x^3
# ---------------------------------------------------------------------------


def cubic_point(t: GaussRat) -> PlanePoint:
    t = t if isinstance(t, GaussRat) else GaussRat(t)
    return PlanePoint(t, t**3)


def third_intersection_cubic(t1, t2) -> GaussRat:
    """Parameter of the third intersection of the chord through t1, t2.

    On y = x^3 three points are collinear exactly when their parameters sum
    to zero, so the answer is -t1 - t2; t1 = t2 is the tangent case.  The
    returned point lies on the curve and is exactly collinear with the
    inputs.
    """
    t1 = t1 if isinstance(t1, GaussRat) else GaussRat(t1)
    t2 = t2 if isinstance(t2, GaussRat) else GaussRat(t2)
    t3 = -t1 - t2
    if t3 != t1 and t3 != t2 and t1 != t2:
        det = collinearity_det(cubic_point(t1), cubic_point(t2), cubic_point(t3))
        if not det.is_zero():
            raise InvariantViolation("chord rule broke collinearity")
    return t3


@dataclass(frozen=True)
class CantileverPoint:
    role: str  # C1, C2, or C3
    label: GaussRat
    parameter: GaussRat
    point: PlanePoint
    step: int

    def to_dict(self) -> dict:
        return {
            "role": self.role,
            "label": str(self.label),
            "parameter": str(self.parameter),
            "point": [str(self.point.x), str(self.point.y)],
            "step": self.step,
        }


@dataclass
class Cantilever:
    points: list[CantileverPoint] = field(default_factory=list)
    triples: list[tuple[int, int, int]] = field(default_factory=list)

    def labels(self):
        return [p.label for p in self.points]


def cantilever_build(t_p1, t_p3, t_q, steps: int) -> Cantilever:
    """Iterated chord construction on y = x^3.

    Starts from anchor points with labels 0 (first-curve role), 0
    (third-curve role) and 1 (the free second-curve point), then repeatedly
    constructs third intersections per the fixed schedule; labels follow
    -1, -1, 2, -2, -2, 3, -3, -3, 5, ...  Every constructed triple is exactly
    collinear and its labels sum to zero.  A parameter collision is reported
    with the step at which it occurred.
    """
    t_p1, t_p3, t_q = (v if isinstance(v, GaussRat) else GaussRat(v) for v in (t_p1, t_p3, t_q))
    t2 = -t_p1 - t_p3
    scale = t_q - t2
    if scale.is_zero():
        raise InputError("the free point coincides with the implicit anchor")
    anchors = {"C1": t_p1, "C2": t2, "C3": t_p3}
    inv = scale.inverse()

    def label(role: str, t: GaussRat) -> GaussRat:
        return (t - anchors[role]) * inv

    built = Cantilever()
    seen: dict[GaussRat, int] = {}

    def add(role: str, t: GaussRat, step: int) -> int:
        if t in seen:
            raise InputError(f"coincidence collision at step {step}: parameter {t}")
        idx = len(built.points)
        seen[t] = idx
        built.points.append(
            CantileverPoint(
                role=role, label=label(role, t), parameter=t, point=cubic_point(t), step=step
            )
        )
        return idx

    i_p1 = add("C1", t_p1, 0)
    i_p3 = add("C3", t_p3, 0)
    i_q = add("C2", t_q, 0)

    def chord(i: int, j: int, role: str, step: int) -> int:
        ti, tj = built.points[i].parameter, built.points[j].parameter
        t = third_intersection_cubic(ti, tj)
        k = add(role, t, step)
        det = collinearity_det(
            built.points[i].point, built.points[j].point, built.points[k].point
        )
        if not det.is_zero():
            raise InvariantViolation("constructed triple is not collinear")
        if built.points[i].label + built.points[j].label + built.points[k].label != GaussRat(0):
            raise InvariantViolation("constructed triple labels do not sum to zero")
        built.triples.append((i, j, k))
        return k

    c2_prev = i_q
    r3_prev: int | None = None
    for step in range(1, steps + 1):
        r3 = chord(i_p1, c2_prev, "C3", step)
        r1 = chord(i_p3, c2_prev, "C1", step)
        partner = r3 if r3_prev is None else r3_prev
        c2_prev = chord(r1, partner, "C2", step)
        r3_prev = r3
    return built
