"""Curve systems obtained by eliminating the shared coordinate.

For fixed (y0, y0') the locus of (z, z') pairs admitting a common witness x
with F(x,y0,z) = F(x,y0',z') = 0 is realized as the zero set of the
Sylvester resultant eliminating x.  The resultant zero set contains the
projection closure and may pick up a leading-coefficient locus; membership
in it is therefore necessary for witnessed pairs (the soundness direction),
which is what every downstream count relies on.  Spurious components are
reported, never silently removed.

Exceptional parameter values (axis values along which the elimination
degenerates) are found exactly from the coefficient system of the
univariate view, and every candidate is verified by exact gcd computations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .common import InputError, InvariantViolation
from .elim import gcd_many, poly_gcd, rational_roots, resultant, squarefree_part
from .poly import MPoly
from .scalars import GaussRat


@dataclass(frozen=True)
class PlaneCurve:
    """A plane curve with a squarefree, monic-normalized defining polynomial.

    ``is_full_plane`` marks a degenerate construction whose locus is all of
    C^2 (the defining polynomial is then zero); ``is_empty`` marks a
    nonzero-constant resultant (empty locus).
    """

    vars: tuple[str, str]
    defining: MPoly
    is_empty: bool = False
    is_full_plane: bool = False
    contains_axis_parallel_line: bool = False

    def degree(self) -> int:
        return max(self.defining.degree(), 0)

    def contains_point(self, p: GaussRat, q: GaussRat) -> bool:
        if self.is_full_plane:
            return True
        if self.is_empty:
            return False
        return self.defining.eval_scalar(
            {self.vars[0]: p, self.vars[1]: q}
        ).is_zero()

    def to_dict(self) -> dict:
        return {
            "vars": list(self.vars),
            "defining": str(self.defining),
            "degree": self.degree(),
            "flags": {
                "is_empty": self.is_empty,
                "is_full_plane": self.is_full_plane,
                "contains_axis_parallel_line": self.contains_axis_parallel_line,
            },
        }


def _axis_line_flag(f: MPoly, vars2: tuple[str, str]) -> bool:
    """Whether f has a factor depending on only one of the two variables."""
    if f.is_zero() or f.is_constant():
        return False
    for var, other in (vars2, vars2[::-1]):
        if not f.depends_on(other):
            return f.depends_on(var)
        # content of f as a univariate in `other`: a nonconstant content is a
        # product of factors in `var` alone, i.e. axis-parallel lines over C
        polys = [c.with_variables(f.variables) for c in f.as_upoly(other).coeffs]
        content = gcd_many([c for c in polys if not c.is_zero()])
        if not content.is_constant():
            return True
    return False


def _make_curve(raw: MPoly, vars2: tuple[str, str], max_degree: int | None) -> PlaneCurve:
    raw = raw.with_variables(vars2)
    if raw.is_zero():
        return PlaneCurve(vars2, raw, is_full_plane=True)
    if raw.is_constant():
        return PlaneCurve(vars2, MPoly.constant(GaussRat(1), vars2), is_empty=True)
    f = squarefree_part(raw)
    if max_degree is not None and f.degree() > max_degree:
        raise InvariantViolation(
            f"curve degree {f.degree()} exceeds the d^2 bound {max_degree}"
        )
    return PlaneCurve(
        vars2, f, contains_axis_parallel_line=_axis_line_flag(f, vars2)
    )


def _eliminate(f: MPoly, g: MPoly, var: str, vars2: tuple[str, str]) -> MPoly:
    """Resultant-style elimination tolerating specializations that drop var."""
    df, dg = f.degree_in(var), g.degree_in(var)
    if f.is_zero() or g.is_zero():
        return MPoly.zero(vars2)
    if df > 0 and dg > 0:
        return resultant(f, g, var)
    if df == 0 and dg == 0:
        raise InputError(
            "both specializations are independent of the witness variable; "
            "the parameter pair lies in the exceptional set"
        )
    # one factor is free of the witness variable: its zero locus is the
    # curve (the other equation is solvable in the witness for generic points)
    h = f if df == 0 else g
    return h.with_variables(vars2)


def gamma_curve(F: MPoly, y0: GaussRat, y0p: GaussRat) -> PlaneCurve:
    """The curve of (z, z') pairs sharing a witness x for parameters (y0, y0').

    Computed as Res_x(F(x,y0,z), F(x,y0',z')) followed by the squarefree
    part.  Flags full-plane and empty outcomes instead of failing; the
    degree bound d^2 is asserted.
    """
    vx, vy, vz = _three_vars(F)
    if not F.depends_on(vx):
        raise InputError(f"polynomial does not depend on {vx!r}")
    vzp = vz + "'"
    f = F.eval({vy: y0})
    g = F.eval({vy: y0p}).rename({vz: vzp})
    allv = (vx, vz, vzp)
    raw = _eliminate(
        f.with_variables(allv), g.with_variables(allv), vx, (vz, vzp)
    )
    d = max(F.degree(), 1)
    return _make_curve(raw, (vz, vzp), d * d)


def dual_curve(F: MPoly, z0: GaussRat, z0p: GaussRat) -> PlaneCurve:
    """gamma_curve with the roles of the second and third coordinates swapped."""
    vx, vy, vz = _three_vars(F)
    if not F.depends_on(vx):
        raise InputError(f"polynomial does not depend on {vx!r}")
    vyp = vy + "'"
    f = F.eval({vz: z0})
    g = F.eval({vz: z0p}).rename({vy: vyp})
    allv = (vx, vy, vyp)
    raw = _eliminate(
        f.with_variables(allv), g.with_variables(allv), vx, (vy, vyp)
    )
    d = max(F.degree(), 1)
    return _make_curve(raw, (vy, vyp), d * d)


def _three_vars(F: MPoly):
    if len(F.variables) != 3:
        raise InputError("curve construction needs a trivariate polynomial")
    return F.variables


# ---------------------------------------------------------------------------
# Exceptional axis values
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExceptionalReport:
    axis: str
    values: tuple[GaussRat, ...]
    residuals: tuple[str, ...]

    def pairs(self):
        """The exceptional pair set: the Cartesian square of the values."""
        return [(a, b) for a in self.values for b in self.values]

    def to_dict(self) -> dict:
        return {
            "axis": self.axis,
            "values": [str(v) for v in self.values],
            "residuals": list(self.residuals),
        }


def exceptional_set(F: MPoly, axis: str = "y") -> ExceptionalReport:
    """Axis values along which the elimination defining the curves degenerates.

    For axis 'y' these are the values y0 admitting x0 with F(x0,y0,.)
    identically zero, or z0 with F(.,y0,z0) identically zero.  Candidates are
    extracted exactly by eliminating the companion variable from the
    coefficient system of the univariate view and taking Q(i)-rational roots;
    each candidate is then verified by exact gcd computations.  A coefficient
    system that is identically satisfiable (which signals reducibility along
    the axis) is reported as a residual, not enumerated.
    """
    if F.is_zero():
        raise InputError("exceptional set of the zero polynomial")
    vx, vy, vz = _three_vars(F)
    if axis == "y":
        keep = vy
        conditions = [(vz, vx), (vx, vz)]
    elif axis == "z":
        keep = vz
        conditions = [(vy, vx), (vx, vy)]
    else:
        raise InputError("axis must be 'y' or 'z'")
    values: set[GaussRat] = set()
    residuals: list[str] = []
    for view_var, companion in conditions:
        coeffs = [
            c.with_variables(tuple(v for v in F.variables if v != view_var))
            for c in F.as_upoly(view_var).coeffs
        ]
        vals, note = _axis_values(coeffs, companion, keep)
        values.update(vals)
        if note:
            residuals.append(f"coefficient system in {view_var}: {note}")
    return ExceptionalReport(
        axis=axis,
        values=tuple(sorted(values, key=GaussRat.sort_key)),
        residuals=tuple(residuals),
    )


def _axis_values(system: list[MPoly], elim: str, keep: str):
    """Verified keep-variable values where the system has a common elim-root.

    Returns (values, residual_note).  The system lives in variables
    (elim, keep) after specialization of the view variable's coefficients.
    """
    polys = [p for p in system if not p.is_zero()]
    if not polys:
        return [], "all coefficients vanish identically"
    if any(p.is_constant() for p in polys):
        return [], None
    overall = gcd_many(polys)
    if not overall.is_constant():
        return [], (
            "common factor "
            f"{overall}; identically satisfiable (reducible along this axis)"
        )
    p_elim = [p for p in polys if p.depends_on(elim)]
    p_keep = [p for p in polys if not p.depends_on(elim)]
    eliminants = [p for p in p_keep]
    if len(p_elim) == 1 and not p_keep:
        return [], (
            "a single bivariate constraint remains; almost every axis value "
            "admits a companion root"
        )
    if len(p_elim) >= 2:
        base = p_elim[0]
        for p in p_elim[1:]:
            r = resultant(base, p, elim)
            if not r.is_zero():
                eliminants.append(r)
        if len(eliminants) == len(p_keep):
            # pairwise resultants collapsed; try seeded random combinations
            rng = random.Random(0xE5CA)
            for _ in range(6):
                combo = MPoly.zero(base.variables)
                for p in p_elim[1:]:
                    combo = combo + p * GaussRat(rng.randint(1, 9))
                if combo.is_zero() or not combo.depends_on(elim):
                    continue
                r = resultant(base, combo, elim)
                if not r.is_zero():
                    eliminants.append(r)
                    break
            else:
                return [], "entangled coefficient system; elimination collapsed"
    if not eliminants:
        return [], None
    e = gcd_many(eliminants)
    if e.is_constant():
        return [], None
    candidates = rational_roots(e.with_variables((keep,)))
    verified = [v for v in candidates if _admits_common_root(polys, keep, v, elim)]
    return verified, None


def _admits_common_root(polys, keep, value, elim) -> bool:
    specialized = [p.eval({keep: value}) for p in polys]
    nonzero = [p for p in specialized if not p.is_zero()]
    if not nonzero:
        return True
    if any(p.is_constant() for p in nonzero):
        return False
    return not gcd_many(nonzero).is_constant()


# ---------------------------------------------------------------------------
# Families, popular components, intersection degree
# ---------------------------------------------------------------------------


@dataclass
class CurveFamily:
    """Curves gamma_{y,y'} indexed by parameter pairs, with exceptions flagged."""

    index: list[tuple[GaussRat, GaussRat]] = field(default_factory=list)
    curves: list[PlaneCurve] = field(default_factory=list)
    exceptional: list[tuple[tuple[GaussRat, GaussRat], str]] = field(
        default_factory=list
    )

    def __post_init__(self):
        if len(self.index) != len(self.curves):
            raise InputError("index and curves must have equal length")


def build_family(F: MPoly, pairs) -> CurveFamily:
    """gamma curves for every parameter pair, flagging degenerate ones."""
    exc = exceptional_set(F, axis="y")
    exc_values = set(exc.values)
    family = CurveFamily()
    for y0, y0p in pairs:
        reason = None
        try:
            curve = gamma_curve(F, y0, y0p)
        except InputError as err:
            reason = f"construction failed: {err}"
            curve = None
        if curve is not None and curve.is_full_plane:
            reason = "resultant identically zero (full plane)"
        elif curve is not None and curve.is_empty:
            reason = "resultant is a nonzero constant (empty locus)"
        elif y0 in exc_values or y0p in exc_values:
            reason = "parameter lies in the exceptional axis set"
        if reason is not None:
            family.exceptional.append(((y0, y0p), reason))
        if curve is not None and not curve.is_full_plane and not curve.is_empty:
            family.index.append((y0, y0p))
            family.curves.append(curve)
    return family


@dataclass(frozen=True)
class PopularReport:
    components: tuple
    threshold: int

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "components": [
                {
                    "defining": str(c),
                    "multiplicity": mult,
                    "popular": mult >= self.threshold,
                }
                for c, mult in self.components
            ],
        }


def popular_components(
    family: CurveFamily, d: int, threshold: int | None = None
) -> PopularReport:
    """Common components across the family and their sharing multiplicities.

    A component is popular when it divides at least d^4 + 1 members (the
    default threshold; configurable for experiments).  Every reported
    multiplicity is established by exact trial division.
    """
    if threshold is None:
        threshold = d**4 + 1
    defs = [c.defining for c in family.curves]
    pool: list[MPoly] = []
    for i in range(len(defs)):
        for j in range(i + 1, len(defs)):
            g = poly_gcd(defs[i], defs[j])
            if g.is_constant():
                continue
            g = g.monic()
            if g not in pool:
                pool.append(g)
    components = []
    for g in pool:
        mult = sum(1 for f in defs if g.divides(f))
        components.append((g, mult))
    components.sort(key=lambda cm: (-cm[1], cm[0].degree(), str(cm[0])))
    return PopularReport(components=tuple(components), threshold=threshold)


def _coordinate_candidates(f: MPoly, g: MPoly, elim: str, keep: str):
    """Q(i) candidates for the keep-coordinate of common zeros of f and g."""
    df, dg = f.degree_in(elim), g.degree_in(elim)
    if df > 0 and dg > 0:
        r = resultant(f, g, elim)
        if r.is_zero():
            raise InvariantViolation("resultant vanished for coprime curves")
        if r.is_constant():
            return []
        return rational_roots(r.with_variables((keep,)))
    sources = []
    for h, dh in ((f, df), (g, dg)):
        if dh == 0 and h.depends_on(keep):
            sources.append(h.with_variables((keep,)))
    out: set[GaussRat] = set()
    first = True
    for h in sources:
        roots = set(rational_roots(h))
        out = roots if first else out & roots
        first = False
    return sorted(out, key=GaussRat.sort_key)


def bezout_check(c1: PlaneCurve, c2: PlaneCurve, grid=None):
    """(common_component, intersection_count); count None means infinite.

    Without a common component, common zeros are counted over the supplied
    grid or over resultant-derived Q(i) candidates, and the count is
    asserted against deg(c1) * deg(c2).
    """
    if c1.vars != c2.vars:
        raise InputError("curves live in different variable pairs")
    if c1.is_full_plane or c2.is_full_plane:
        return True, None
    if c1.is_empty or c2.is_empty:
        return False, 0
    g = poly_gcd(c1.defining, c2.defining)
    if not g.is_constant():
        return True, None
    v1, v2 = c1.vars
    if grid is not None:
        xs = list(grid)
        ys = list(grid)
    else:
        xs = _coordinate_candidates(c1.defining, c2.defining, v2, v1)
        ys = _coordinate_candidates(c1.defining, c2.defining, v1, v2)
    count = 0
    for a in xs:
        for b in ys:
            if c1.contains_point(a, b) and c2.contains_point(a, b):
                count += 1
    limit = c1.degree() * c2.degree()
    if count > limit:
        raise InvariantViolation(
            f"Bezout violated: {count} intersections > {limit}"
        )
    return False, count


def family_common_degree(curves: list[PlaneCurve]) -> int:
    """Degree of the common intersection of the whole family.

    The gcd of the defining polynomials is the one-dimensional part; when it
    is constant the remaining common points are counted over
    resultant-derived candidates.  The result is asserted against delta^2
    for delta the maximum degree in the family.
    """
    if len(curves) < 2:
        raise InputError("family intersection needs at least two curves")
    vars2 = curves[0].vars
    if any(c.vars != vars2 for c in curves):
        raise InputError("curves live in different variable pairs")
    real = [c for c in curves if not c.is_full_plane]
    if any(c.is_empty for c in real):
        return 0
    if not real:
        raise InputError("all curves are the full plane")
    delta = max(c.degree() for c in real)
    g = gcd_many([c.defining for c in real])
    if not g.is_constant():
        degree = g.degree()
    else:
        v1, v2 = vars2
        xs: set[GaussRat] | None = None
        ys: set[GaussRat] | None = None
        for i in range(len(real)):
            for j in range(i + 1, len(real)):
                gij = poly_gcd(real[i].defining, real[j].defining)
                if not gij.is_constant():
                    continue
                cx = set(
                    _coordinate_candidates(real[i].defining, real[j].defining, v2, v1)
                )
                cy = set(
                    _coordinate_candidates(real[i].defining, real[j].defining, v1, v2)
                )
                xs = cx if xs is None else xs & cx
                ys = cy if ys is None else ys & cy
        if xs is None or ys is None:
            # every pair shares a component yet the overall gcd is constant
            degree = 0
        else:
            degree = sum(
                1
                for a in sorted(xs, key=GaussRat.sort_key)
                for b in sorted(ys, key=GaussRat.sort_key)
                if all(c.contains_point(a, b) for c in real)
            )
    if degree > delta * delta:
        raise InvariantViolation(
            f"many-curve Bezout violated: degree {degree} > {delta * delta}"
        )
    return degree
