"""Sparse multivariate polynomials over the Gaussian rationals.

An MPoly carries an ordered tuple of variable names and a map from exponent
vectors to nonzero coefficients.  Arithmetic is exact.  The canonical term
order is graded lexicographic where ties between monomials of equal total
degree are broken by the *later* declared variable being the larger one
(so in variables (z, z') the leading term of z' - z + 1 is z').  All
canonical forms, leading coefficients, and gcd normalizations use it.

The degree of the zero polynomial is the sentinel -1.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .scalars import GaussRat

ZERO_DEGREE = -1  # degree sentinel for the zero polynomial


def _coerce_scalar(v) -> GaussRat | None:
    if isinstance(v, GaussRat):
        return v
    if isinstance(v, (int, Fraction)):
        return GaussRat(v)
    return None


class MPoly:
    """Immutable sparse polynomial in named variables over Q(i)."""

    __slots__ = ("variables", "terms", "_float_cache")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, GaussRat]):
        vs = tuple(variables)
        clean = {}
        for exps, c in terms.items():
            if not isinstance(c, GaussRat):
                c = GaussRat(c)
            if c.is_zero():
                continue
            e = tuple(exps)
            if len(e) != len(vs):
                raise ValueError("exponent vector length mismatch")
            clean[e] = c
        object.__setattr__(self, "variables", vs)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_float_cache", None)

    def __setattr__(self, name, value):
        raise AttributeError("MPoly is immutable")

    # -- constructors ----------------------------------------------------

    @staticmethod
    def constant(c, variables: Sequence[str] = ()) -> "MPoly":
        vs = tuple(variables)
        return MPoly(vs, {(0,) * len(vs): _coerce_scalar(c) or c})

    @staticmethod
    def zero(variables: Sequence[str] = ()) -> "MPoly":
        return MPoly(variables, {})

    @staticmethod
    def var(name: str, variables: Sequence[str] | None = None) -> "MPoly":
        vs = tuple(variables) if variables is not None else (name,)
        if name not in vs:
            raise ValueError(f"variable {name!r} not among {vs}")
        e = tuple(1 if v == name else 0 for v in vs)
        return MPoly(vs, {e: GaussRat(1)})

    # -- term order -------------------------------------------------------

    @staticmethod
    def _order_key(exps: tuple) -> tuple:
        return (sum(exps), tuple(exps[::-1]))

    def sorted_terms(self, reverse: bool = True):
        """Terms sorted by the canonical order (leading first by default)."""
        return sorted(self.terms.items(), key=lambda t: MPoly._order_key(t[0]), reverse=reverse)

    def leading_term(self) -> tuple[tuple, GaussRat]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=MPoly._order_key)
        return e, self.terms[e]

    def leading_coefficient(self) -> GaussRat:
        return self.leading_term()[1]

    def monic(self) -> "MPoly":
        """Scale so the leading coefficient is 1 (zero stays zero)."""
        if not self.terms:
            return self
        lc = self.leading_coefficient()
        return self * lc.inverse()

    # -- basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def constant_value(self) -> GaussRat:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        if not self.terms:
            return GaussRat(0)
        return next(iter(self.terms.values()))

    def degree(self) -> int:
        if not self.terms:
            return ZERO_DEGREE
        return max(sum(e) for e in self.terms)

    def degree_in(self, var: str) -> int:
        if not self.terms:
            return ZERO_DEGREE
        i = self._index(var)
        return max(e[i] for e in self.terms)

    def depends_on(self, var: str) -> bool:
        if var not in self.variables:
            return False
        i = self._index(var)
        return any(e[i] > 0 for e in self.terms)

    def _index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise KeyError(f"unknown variable {var!r}") from None

    # -- variable plumbing --------------------------------------------------

    def with_variables(self, variables: Sequence[str]) -> "MPoly":
        """Re-express over a superset (or reordering) of the variables."""
        vs = tuple(variables)
        pos = []
        for v in self.variables:
            if v not in vs:
                if self.depends_on(v):
                    raise ValueError(f"cannot drop used variable {v!r}")
                pos.append(None)
            else:
                pos.append(vs.index(v))
        out = {}
        for exps, c in self.terms.items():
            e = [0] * len(vs)
            for i, p in enumerate(pos):
                if p is not None:
                    e[p] = exps[i]
            key = tuple(e)
            out[key] = out.get(key, GaussRat(0)) + c
        return MPoly(vs, out)

    def rename(self, mapping: Mapping[str, str]) -> "MPoly":
        vs = tuple(mapping.get(v, v) for v in self.variables)
        if len(set(vs)) != len(vs):
            raise ValueError("rename collides variable names")
        return MPoly(vs, self.terms)

    @staticmethod
    def _merge_vars(a: Sequence[str], b: Sequence[str]) -> tuple:
        out = list(a)
        for v in b:
            if v not in out:
                out.append(v)
        return tuple(out)

    def _aligned(self, other: "MPoly"):
        if self.variables == other.variables:
            return self, other
        vs = MPoly._merge_vars(self.variables, other.variables)
        return self.with_variables(vs), other.with_variables(vs)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _as_poly(other, self.variables)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._aligned(other)
        out = dict(a.terms)
        for e, c in b.terms.items():
            s = out.get(e, GaussRat(0)) + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return MPoly(a.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = _as_poly(other, self.variables)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        s = _coerce_scalar(other)
        if s is not None:
            return MPoly(self.variables, {e: c * s for e, c in self.terms.items()})
        if not isinstance(other, MPoly):
            return NotImplemented
        a, b = self._aligned(other)
        out: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                prod = c1 * c2
                s0 = out.get(e)
                s0 = prod if s0 is None else s0 + prod
                if s0.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s0
        return MPoly(a.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = MPoly.constant(1, self.variables)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- evaluation and calculus ---------------------------------------------

    def eval(self, assignment: Mapping[str, GaussRat]) -> "MPoly":
        """Substitute scalars for some variables, exactly.

        The result is a polynomial in the remaining variables; a full
        assignment yields a constant MPoly.
        """
        for v in assignment:
            self._index(v)  # raises on unknown variable
        keep = [i for i, v in enumerate(self.variables) if v not in assignment]
        vals = {self._index(v): _coerce_scalar(c) or c for v, c in assignment.items()}
        out: dict = {}
        for exps, c in self.terms.items():
            factor = c
            for i, power in vals.items():
                if exps[i]:
                    factor = factor * (power ** exps[i])
            e = tuple(exps[i] for i in keep)
            s = out.get(e, GaussRat(0)) + factor
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return MPoly(tuple(self.variables[i] for i in keep), out)

    def eval_scalar(self, assignment: Mapping[str, GaussRat]) -> GaussRat:
        return self.eval(assignment).constant_value()

    def derivative(self, var: str) -> "MPoly":
        i = self._index(var)
        out = {}
        for exps, c in self.terms.items():
            k = exps[i]
            if k == 0:
                continue
            e = exps[:i] + (k - 1,) + exps[i + 1 :]
            out[e] = out.get(e, GaussRat(0)) + c * k
        return MPoly(self.variables, out)

    # -- division -------------------------------------------------------------

    def divide_exact(self, g: "MPoly") -> "MPoly | None":
        """Return self / g when the division is exact, else None."""
        if g.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        a, b = self._aligned(g)
        lt_e, lt_c = b.leading_term()
        lt_c_inv = lt_c.inverse()
        quot: dict = {}
        rem = dict(a.terms)
        while rem:
            e = max(rem, key=MPoly._order_key)
            c = rem[e]
            qe = tuple(x - y for x, y in zip(e, lt_e))
            if any(q < 0 for q in qe):
                return None
            qc = c * lt_c_inv
            quot[qe] = qc
            for be, bc in b.terms.items():
                te = tuple(x + y for x, y in zip(qe, be))
                s = rem.get(te, GaussRat(0)) - qc * bc
                if s.is_zero():
                    rem.pop(te, None)
                else:
                    rem[te] = s
        return MPoly(a.variables, quot)

    def divides(self, other: "MPoly") -> bool:
        return other.divide_exact(self) is not None

    def pseudo_divmod(self, g: "MPoly", var: str) -> tuple["MPoly", "MPoly", int]:
        """Pseudo-division in ``var``: lc(g)^k * self = q*g + r with deg_var(r) < deg_var(g).

        Returns (q, r, k).  Requires g to have positive degree in var.
        """
        dg = g.degree_in(var)
        if dg <= 0:
            raise ValueError(f"divisor must have positive degree in {var!r}")
        a, b = self._aligned(g)
        var_i = a._index(var)
        gv = b.as_upoly(var)
        lc = gv.coeffs[-1]
        q = MPoly.zero(a.variables)
        r = a
        k = 0
        while not r.is_zero() and r.degree_in(var) >= dg:
            dr = r.degree_in(var)
            rv = r.as_upoly(var)
            lead = rv.coeffs[dr].with_variables(a.variables)
            shift = MPoly.var(var, a.variables) ** (dr - dg)
            q = q * lc + lead * shift
            r = r * lc - lead * shift * b
            k += 1
        return q, r, k

    # -- univariate views ---------------------------------------------------

    def as_upoly(self, var: str) -> "UPolyView":
        return UPolyView(self, var)

    # -- numeric compilation ---------------------------------------------------

    def complex_eval(self, point: Mapping[str, complex]) -> complex:
        """Evaluate at floating complex arguments (for sampling only)."""
        cache = self._float_cache
        if cache is None:
            cache = [(c.to_complex(), exps) for exps, c in self.terms.items()]
            object.__setattr__(self, "_float_cache", cache)
        args = [complex(point[v]) for v in self.variables]
        total = 0j
        for c, exps in cache:
            t = c
            for a, e in zip(args, exps):
                if e == 1:
                    t *= a
                elif e:
                    t *= a**e
            total += t
        return total

    # -- identity ------------------------------------------------------------

    def _content_key(self):
        items = []
        for exps, c in self.terms.items():
            mono = tuple(
                (v, e) for v, e in zip(self.variables, exps) if e
            )
            items.append((tuple(sorted(mono)), (c.re, c.im)))
        return frozenset(items)

    def __eq__(self, other):
        p = _as_poly(other, self.variables)
        if p is NotImplemented:
            return NotImplemented
        return self._content_key() == p._content_key()

    def __hash__(self):
        return hash(self._content_key())

    def __bool__(self):
        return bool(self.terms)

    # -- printing ----------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(self.variables, exps)
                if e
            )
            if not mono:
                cs = str(c)
                piece = cs if (c.im == 0 or c.re == 0) else f"({cs})"
            elif c == GaussRat(1):
                piece = mono
            elif c == GaussRat(-1):
                piece = f"-{mono}"
            else:
                cs = str(c)
                if c.im != 0 and not cs.startswith("("):
                    cs = f"({cs})"
                piece = f"{cs}*{mono}"
            if not parts:
                parts.append(piece)
            elif piece.startswith("-"):
                parts.append(f"- {piece[1:]}")
            else:
                parts.append(f"+ {piece}")
        return " ".join(parts)

    def __repr__(self):
        return f"MPoly({str(self)!r}, vars={self.variables})"


class UPolyView:
    """A polynomial viewed as univariate in one distinguished variable.

    ``coeffs[k]`` is the coefficient of ``var**k`` as an MPoly in the
    remaining variables.  Reassembling coeffs against powers of var
    reproduces the base polynomial exactly.
    """

    __slots__ = ("base", "var", "coeffs")

    def __init__(self, base: MPoly, var: str):
        i = base._index(var)
        rest = tuple(v for v in base.variables if v != var)
        d = base.degree_in(var)
        buckets: list[dict] = [{} for _ in range(max(d, 0) + 1)]
        for exps, c in base.terms.items():
            k = exps[i]
            e = tuple(x for j, x in enumerate(exps) if j != i)
            buckets[k][e] = c
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "var", var)
        object.__setattr__(
            self, "coeffs", tuple(MPoly(rest, b) for b in buckets)
        )

    def __setattr__(self, name, value):
        raise AttributeError("UPolyView is immutable")

    def degree(self) -> int:
        return len(self.coeffs) - 1 if not self.base.is_zero() else ZERO_DEGREE

    def reassemble(self) -> MPoly:
        vs = self.base.variables
        x = MPoly.var(self.var, vs)
        total = MPoly.zero(vs)
        for k, c in enumerate(self.coeffs):
            total = total + c.with_variables(vs) * x**k
        return total

    def scalar_coeffs(self, assignment: Mapping[str, GaussRat]) -> list[GaussRat]:
        """Coefficients with the remaining variables fully substituted."""
        return [c.eval_scalar(assignment) for c in self.coeffs]


def _as_poly(v, variables: Sequence[str]):
    if isinstance(v, MPoly):
        return v
    s = _coerce_scalar(v)
    if s is None:
        return NotImplemented
    return MPoly.constant(s, variables)


def horner_eval(coeffs: Iterable[GaussRat], x: GaussRat) -> GaussRat:
    """Evaluate sum(coeffs[k] * x**k) by Horner's rule, exactly."""
    total = GaussRat(0)
    for c in reversed(list(coeffs)):
        total = total * x + c
    return total
