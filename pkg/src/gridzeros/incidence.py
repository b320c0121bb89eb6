"""Incidences between grid-product point sets and curve multisets.

Incidences are counted with curve multiplicity by exact evaluation of the
defining polynomials.  The bounded-multiplicity condition limits, for each
curve, how many other curves share more than mu points of the given point
set with it (and symmetrically for points); coinciding curves always count
as conflicting, matching the clique convention used when the conflict graph
is colored.  The coloring is greedy over vertices in decreasing conflict
degree and yields at most lambda + 1 classes whenever the condition holds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .common import InputError, InvariantViolation
from .counting import GridSet
from .curves import PlaneCurve
from .scalars import GaussRat


@dataclass(frozen=True)
class PointSet2:
    """Distinct points inside the product of two ground grids."""

    ambient: tuple[GridSet, GridSet]
    members: tuple[tuple[GaussRat, GaussRat], ...]

    def __post_init__(self):
        a1, a2 = (set(g.elements) for g in self.ambient)
        seen = set()
        for p, q in self.members:
            if p not in a1 or q not in a2:
                raise InputError(f"point ({p}, {q}) is outside the ambient product")
            if (p, q) in seen:
                raise InputError(f"duplicate point ({p}, {q})")
            seen.add((p, q))

    @staticmethod
    def from_points(points) -> "PointSet2":
        pts = [
            (
                p if isinstance(p, GaussRat) else GaussRat(p),
                q if isinstance(q, GaussRat) else GaussRat(q),
            )
            for p, q in points
        ]
        g1 = GridSet(sorted({p for p, _ in pts}, key=GaussRat.sort_key))
        g2 = GridSet(sorted({q for _, q in pts}, key=GaussRat.sort_key))
        return PointSet2(ambient=(g1, g2), members=tuple(pts))

    @staticmethod
    def full_product(g1: GridSet, g2: GridSet) -> "PointSet2":
        return PointSet2(
            ambient=(g1, g2), members=tuple((p, q) for p in g1 for q in g2)
        )

    def ambient_size(self) -> int:
        return len(self.ambient[0]) * len(self.ambient[1])

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class CurveMultiset:
    entries: tuple[tuple[PlaneCurve, int], ...]

    def __post_init__(self):
        for curve, mult in self.entries:
            if mult < 1:
                raise InputError("multiplicities must be positive")
        vars_seen = {c.vars for c, _ in self.entries}
        if len(vars_seen) > 1:
            raise InputError("curves live in different variable pairs")

    @staticmethod
    def of(curves) -> "CurveMultiset":
        entries = []
        for item in curves:
            if isinstance(item, tuple):
                entries.append(item)
            else:
                entries.append((item, 1))
        return CurveMultiset(entries=tuple(entries))

    def total_size(self) -> int:
        return sum(m for _, m in self.entries)

    def instances(self):
        """(entry_index, copy_index, curve) for every multiset copy."""
        out = []
        for ei, (curve, mult) in enumerate(self.entries):
            for ci in range(mult):
                out.append((ei, ci, curve))
        return out


def incidence_count(pts: PointSet2, curves: CurveMultiset) -> int:
    """Exact incidence count, multiplicities included."""
    total = 0
    for curve, mult in curves.entries:
        on = sum(1 for p, q in pts.members if curve.contains_point(p, q))
        total += on * mult
    return total


def _membership_sets(pts: PointSet2, curves: CurveMultiset):
    """For each entry, the set of member indices lying on the curve."""
    out = []
    for curve, _ in curves.entries:
        out.append(
            frozenset(
                i for i, (p, q) in enumerate(pts.members) if curve.contains_point(p, q)
            )
        )
    return out


@dataclass
class MultiplicityVerdict:
    ok: bool
    curve_violations: list = field(default_factory=list)
    point_violations: list = field(default_factory=list)


def _curve_conflicts(pts: PointSet2, curves: CurveMultiset, mu: int):
    """Adjacency lists over curve instances; coinciding curves always conflict."""
    inst = curves.instances()
    member_sets = _membership_sets(pts, curves)
    n = len(inst)
    adj = [set() for _ in range(n)]
    for i in range(n):
        ei, _, ci_curve = inst[i]
        for j in range(i + 1, n):
            ej, _, cj_curve = inst[j]
            conflict = ci_curve.defining == cj_curve.defining or (
                len(member_sets[ei] & member_sets[ej]) > mu
            )
            if conflict:
                adj[i].add(j)
                adj[j].add(i)
    return inst, adj


def _point_conflicts(pts: PointSet2, curves: CurveMultiset, mu: int):
    member_sets = _membership_sets(pts, curves)
    mults = [m for _, m in curves.entries]
    n = len(pts.members)
    adj = [set() for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            through = sum(
                m
                for s, m in zip(member_sets, mults)
                if i in s and j in s
            )
            if through > mu:
                adj[i].add(j)
                adj[j].add(i)
    return adj


def bounded_multiplicity_check(
    pts: PointSet2, curves: CurveMultiset, lam: int, mu: int
) -> MultiplicityVerdict:
    """Check the two conflict-degree conditions; return any violating witnesses.

    Condition (a): every curve instance conflicts (shares more than mu points
    of pts, or coincides) with at most lam other instances.  Condition (b):
    every point shares more than mu curves with at most lam other points.
    """
    inst, curve_adj = _curve_conflicts(pts, curves, mu)
    verdict = MultiplicityVerdict(ok=True)
    for i, neighbors in enumerate(curve_adj):
        if len(neighbors) > lam:
            verdict.ok = False
            verdict.curve_violations.append(
                {
                    "entry": inst[i][0],
                    "copy": inst[i][1],
                    "conflicts": len(neighbors),
                }
            )
    point_adj = _point_conflicts(pts, curves, mu)
    for i, neighbors in enumerate(point_adj):
        if len(neighbors) > lam:
            verdict.ok = False
            verdict.point_violations.append(
                {"point": pts.members[i], "conflicts": len(neighbors)}
            )
    return verdict


def _greedy_coloring(order, adj):
    color: dict[int, int] = {}
    for v in order:
        used = {color[u] for u in adj[v] if u in color}
        c = 0
        while c in used:
            c += 1
        color[v] = c
    return color


@dataclass
class Partition:
    point_classes: list[list[tuple[GaussRat, GaussRat]]]
    curve_classes: list[list[PlaneCurve]]


def multiplicity_partition(
    pts: PointSet2, curves: CurveMultiset, lam: int, mu: int
) -> Partition:
    """Color the conflict graphs into at most lam + 1 classes each.

    Requires (lam, mu)-bounded multiplicity (checked first; violations are
    raised with their witnesses).  Within a curve class every pair of curves
    shares at most mu points of pts and no multiset entry repeats; within a
    point class every pair of points lies on at most mu common curves.
    Processing order is decreasing conflict degree with deterministic
    tie-breaks.
    """
    verdict = bounded_multiplicity_check(pts, curves, lam, mu)
    if not verdict.ok:
        raise InputError(
            "system does not have bounded multiplicity; "
            f"curve violations: {verdict.curve_violations}, "
            f"point violations: {verdict.point_violations}"
        )
    inst, curve_adj = _curve_conflicts(pts, curves, mu)
    curve_order = sorted(
        range(len(inst)),
        key=lambda i: (-len(curve_adj[i]), str(inst[i][2].defining), inst[i][0], inst[i][1]),
    )
    curve_color = _greedy_coloring(curve_order, curve_adj)
    n_curve_classes = max(curve_color.values(), default=-1) + 1
    if n_curve_classes > lam + 1:
        raise InvariantViolation(
            f"greedy coloring used {n_curve_classes} > lambda+1 classes"
        )
    curve_classes: list[list[PlaneCurve]] = [[] for _ in range(n_curve_classes)]
    for i in sorted(curve_color):
        curve_classes[curve_color[i]].append(inst[i][2])

    point_adj = _point_conflicts(pts, curves, mu)
    point_order = sorted(
        range(len(pts.members)),
        key=lambda i: (
            -len(point_adj[i]),
            pts.members[i][0].sort_key(),
            pts.members[i][1].sort_key(),
        ),
    )
    point_color = _greedy_coloring(point_order, point_adj)
    n_point_classes = max(point_color.values(), default=-1) + 1
    if n_point_classes > lam + 1:
        raise InvariantViolation(
            f"greedy coloring used {n_point_classes} > lambda+1 classes"
        )
    point_classes: list[list] = [[] for _ in range(n_point_classes)]
    for i in sorted(point_color):
        point_classes[point_color[i]].append(pts.members[i])
    return Partition(point_classes=point_classes, curve_classes=curve_classes)


def incidence_bound_report(
    pts: PointSet2,
    curves: CurveMultiset,
    delta: int | None = None,
    lam: int | None = None,
    mu: int | None = None,
) -> dict:
    """Actual incidence count with reference right-hand sides (constant 1).

    The trivial bound I <= |members| * total multiplicity is asserted; the
    incidence-theorem expressions are reported as REFERENCE ONLY.  When lam
    and mu are supplied a partition is attempted and its class counts are
    included (null with a note when bounded multiplicity fails).
    """
    count = incidence_count(pts, curves)
    size_pi = pts.ambient_size()
    size_gamma = curves.total_size()
    if delta is None:
        delta = max((c.degree() for c, _ in curves.entries), default=0)
    trivial = len(pts.members) * size_gamma
    if count > trivial:
        raise InvariantViolation(f"I={count} exceeds the trivial bound {trivial}")
    report = {
        "I": count,
        "trivial_bound": trivial,
        "n_points": len(pts.members),
        "ambient_size": size_pi,
        "n_curves": size_gamma,
        "delta": delta,
        "classes_points": None,
        "classes_curves": None,
    }
    if mu is not None:
        report["thm41_reference"] = (
            delta ** (4.0 / 3.0)
            * mu ** (1.0 / 3.0)
            * size_pi ** (2.0 / 3.0)
            * size_gamma ** (2.0 / 3.0)
            + mu * size_pi
            + delta**4 * size_gamma
        )
    if lam is not None and mu is not None:
        report["thm43_reference"] = (
            delta ** (4.0 / 3.0)
            * lam ** (4.0 / 3.0)
            * mu ** (1.0 / 3.0)
            * size_pi ** (2.0 / 3.0)
            * size_gamma ** (2.0 / 3.0)
            + lam**2 * mu * size_pi
            + delta**4 * lam * size_gamma
        )
        try:
            partition = multiplicity_partition(pts, curves, lam, mu)
            report["classes_points"] = len(partition.point_classes)
            report["classes_curves"] = len(partition.curve_classes)
        except InputError as err:
            report["partition_note"] = str(err)
    return report
