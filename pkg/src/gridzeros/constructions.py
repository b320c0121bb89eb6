"""Degenerate instances and their quadratic-size extremal Cartesian products.

A SpecialForm packages the three building blocks of an additively structured
surface: a plain sum p(x) + q(y) + r(z), a composed form z - g(h(x) + k(y)),
or a product form z - g(h(x) k(y)).  For SUM and COMPOSED forms the Jacobian
polynomial of the assembled surface vanishes identically, and this is
checked exactly at construction.  For PRODUCT forms the degeneracy enters
through a logarithmic change of variables, so only the counting lower bound
is asserted, never the polynomial identity.

extremal_sets pulls arithmetic (or, for products, geometric) progressions
back through linear parts to produce grids A, B, C of size n on which the
surface has at least n^2/4 zeros; the bound is asserted by running the
counter.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .common import InputError, InvariantViolation
from .counting import CountReport, GridSet, count_zeros
from .degeneracy import _assemble_G
from .poly import MPoly
from .scalars import GaussRat

SUM = "SUM"
COMPOSED = "COMPOSED"
PRODUCT = "PRODUCT"

_PART_NAMES = {SUM: ("p", "q", "r"), COMPOSED: ("g", "h", "k"), PRODUCT: ("g", "h", "k")}


def _compose(part: MPoly, argument: MPoly) -> MPoly:
    """part(argument) for a univariate part, by Horner on polynomials."""
    var = next(v for v in part.variables if part.depends_on(v))
    coeffs = [c.constant_value() for c in part.as_upoly(var).coeffs]
    total = MPoly.zero(argument.variables)
    for c in reversed(coeffs):
        total = total * argument + MPoly.constant(c, argument.variables)
    return total


@dataclass(frozen=True)
class SpecialForm:
    """A named degenerate shape with univariate polynomial parts."""

    kind: str
    parts: tuple[MPoly, MPoly, MPoly]

    def __post_init__(self):
        if self.kind not in (SUM, COMPOSED, PRODUCT):
            raise InputError(f"unknown form kind {self.kind!r}")
        for name, part in zip(_PART_NAMES[self.kind], self.parts):
            used = [v for v in part.variables if part.depends_on(v)]
            if len(used) != 1:
                raise InputError(f"part {name} must be univariate and nonconstant")
        if self.kind in (SUM, COMPOSED):
            g = _assemble_G(to_poly(self))
            if not g.is_zero():
                raise InvariantViolation(
                    f"{self.kind} form does not annihilate the Jacobian polynomial"
                )

    def part_names(self):
        return _PART_NAMES[self.kind]

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        for name, part in zip(self.part_names(), self.parts):
            out[name] = str(part)
        return out


def to_poly(form: SpecialForm) -> MPoly:
    """The expanded trivariate polynomial in variables (x, y, z)."""
    vars3 = ("x", "y", "z")
    x = MPoly.var("x", vars3)
    y = MPoly.var("y", vars3)
    z = MPoly.var("z", vars3)
    a, b, c = form.parts
    if form.kind == SUM:
        return _compose(a, x) + _compose(b, y) + _compose(c, z)
    inner = _compose(b, x) + _compose(c, y) if form.kind == COMPOSED else _compose(
        b, x
    ) * _compose(c, y)
    return z - _compose(a, inner)


def _linear_parts(form: SpecialForm):
    out = []
    for name, part in zip(form.part_names(), form.parts):
        var = next(v for v in part.variables if part.depends_on(v))
        coeffs = [c.constant_value() for c in part.as_upoly(var).coeffs]
        if len(coeffs) != 2:
            raise InputError(
                f"extremal construction needs linear parts; {name} has degree "
                f"{len(coeffs) - 1}"
            )
        beta, alpha = coeffs
        out.append((alpha, beta))
    return out


def _pullback(alpha: GaussRat, beta: GaussRat, targets) -> GridSet:
    inv = alpha.inverse()
    return GridSet([(t - beta) * inv for t in targets])


def extremal_sets(form: SpecialForm, n: int, step: int = 1):
    """Grids (A, B, C) of size n with at least n^2/4 zeros on the surface.

    Parts must be linear (invertible over Q(i)).  SUM and COMPOSED forms
    pull back arithmetic progressions with the given step; PRODUCT forms
    pull back geometric progressions with ratio 2.  The n^2/4 lower bound is
    asserted by running the counter on the constructed instance.
    """
    if n < 1:
        raise InputError("n must be at least 1")
    a_step = GaussRat(step)
    if a_step.is_zero():
        raise InputError("step must be nonzero")
    (al_a, be_a), (al_b, be_b), (al_c, be_c) = _linear_parts(form)
    if form.kind == SUM:
        t1, t2 = be_a, be_b
        t3 = -t1 - t2
        A = _pullback(al_a, be_a, [t1 + a_step * j for j in range(n)])
        B = _pullback(al_b, be_b, [t2 + a_step * j for j in range(n)])
        C = _pullback(al_c, be_c, [t3 - a_step * j for j in range(n)])
    elif form.kind == COMPOSED:
        # parts are (g, h, k); zeros satisfy z = g(h(x) + k(y))
        t1, t2 = be_b, be_c
        A = _pullback(al_b, be_b, [t1 + a_step * j for j in range(n)])
        B = _pullback(al_c, be_c, [t2 + a_step * j for j in range(n)])
        g_of = lambda t: al_a * t + be_a
        C = GridSet([g_of(t1 + t2 + a_step * j) for j in range(n)])
    else:
        ratio = GaussRat(2)
        targets = [ratio**j for j in range(n)]
        A = _pullback(al_b, be_b, targets)
        B = _pullback(al_c, be_c, targets)
        g_of = lambda t: al_a * t + be_a
        C = GridSet([g_of(ratio**j) for j in range(n)])
    F = to_poly(form)
    report = count_zeros(F, A, B, C)
    if 4 * report.M < n * n:
        raise InvariantViolation(
            f"extremal construction fell below n^2/4: M={report.M}, n={n}"
        )
    return A, B, C


@dataclass
class GrowthRow:
    n: int
    M: int
    lower_bound: int

    @property
    def ok(self) -> bool:
        return self.M >= self.lower_bound


@dataclass
class GrowthTable:
    rows: list[GrowthRow] = field(default_factory=list)

    def to_csv(self) -> str:
        lines = ["n,M,n_sq_over_4,ok"]
        for r in self.rows:
            lines.append(f"{r.n},{r.M},{r.lower_bound},{str(r.ok).lower()}")
        return "\n".join(lines) + "\n"


def verify_quadratic_growth(form: SpecialForm, n_list: list[int]) -> GrowthTable:
    """Run extremal_sets + count_zeros per n and assert M >= ceil(n^2/4)."""
    if list(n_list) != sorted(n_list):
        raise InputError("n_list must be ascending")
    F = to_poly(form)
    table = GrowthTable()
    for n in n_list:
        A, B, C = extremal_sets(form, n)
        report = count_zeros(F, A, B, C)
        row = GrowthRow(n=n, M=report.M, lower_bound=ceil(n * n / 4))
        if not row.ok:
            raise InvariantViolation(
                f"quadratic growth violated at n={n}: M={row.M} < {row.lower_bound}"
            )
        table.rows.append(row)
    return table


def form_from_dict(data: dict) -> SpecialForm:
    """Build a SpecialForm from its JSON shape {kind, p|g, q|h, r|k}."""
    kind = data.get("kind")
    if kind not in _PART_NAMES:
        raise InputError(f"unknown form kind {kind!r}")
    from .parse import parse_poly

    names = _PART_NAMES[kind]
    default_vars = {
        SUM: ("x", "y", "z"),
        COMPOSED: ("t", "x", "y"),
        PRODUCT: ("t", "x", "y"),
    }[kind]
    parts = []
    for name, var in zip(names, default_vars):
        if name not in data:
            raise InputError(f"form is missing part {name!r}")
        parts.append(parse_poly(data[name], (var,)))
    return SpecialForm(kind=kind, parts=tuple(parts))
