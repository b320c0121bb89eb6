"""Exact zero counting on Cartesian products, and quadruple statistics.

M is the number of (a, b, c) in A x B x C with F(a, b, c) = 0, counted
exactly.  Two independent engines are provided and must always agree:

* ``triple_loop`` substitutes coordinates one at a time and tests every
  triple of the product.
* ``pair_loop`` enumerates pairs over the two largest grids, specializes F
  to a univariate in the remaining coordinate, and membership-tests the
  smallest grid.  For purely rational instances, candidates are pruned
  modulo a few random 62-bit primes first; every surviving candidate is
  re-verified exactly, so pruning cannot change the count.

The quadruple count Q, the quintuple count R, and the witness-fiber
histogram drive the Cauchy-Schwarz chain M^2 <= |A| * R, which is asserted
(exactly, in integers) on every report.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .common import DEFAULT_PRIMES, DEFAULT_SEED, InputError, InvariantViolation
from .elim import _is_probable_prime
from .poly import MPoly, horner_eval
from .scalars import GaussRat

_FIBER_BUDGET = 50_000_000  # max quintuple insertions in quadruple_stats


class GridSet:
    """A finite set of distinct Gaussian rationals with deterministic order.

    Iteration order is sorted by (re, im) on the reduced fractions.
    """

    __slots__ = ("elements",)

    def __init__(self, values):
        vals = []
        for v in values:
            if isinstance(v, (int, Fraction)):
                v = GaussRat(v)
            if not isinstance(v, GaussRat):
                raise InputError(f"grid element {v!r} is not a Gaussian rational")
            vals.append(v)
        uniq = sorted(set(vals), key=GaussRat.sort_key)
        if len(uniq) != len(vals):
            raise InputError("grid contains duplicate values")
        object.__setattr__(self, "elements", tuple(uniq))

    def __setattr__(self, name, value):
        raise AttributeError("GridSet is immutable")

    @staticmethod
    def from_literals(literals) -> "GridSet":
        return GridSet([GaussRat.from_literal(s) for s in literals])

    @staticmethod
    def from_json(text: str) -> "GridSet":
        data = json.loads(text)
        if not isinstance(data, list) or not all(isinstance(s, str) for s in data):
            raise InputError("grid file must be a JSON array of strings")
        return GridSet.from_literals(data)

    def to_json(self) -> str:
        return json.dumps([str(v) for v in self.elements])

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, value):
        return value in set(self.elements)

    def __eq__(self, other):
        return isinstance(other, GridSet) and self.elements == other.elements

    def __repr__(self):
        return f"GridSet([{', '.join(str(v) for v in self.elements)}])"


@dataclass(frozen=True)
class CountReport:
    """Counting results plus theorem-backed and reference bounds.

    sz_bound (Schwartz-Zippel) and the Cauchy-Schwarz comparison are hard
    bounds asserted at construction; thm11_reference / thm12_reference carry
    implied constant 1 and are REFERENCE ONLY, never asserted.
    """

    M: int
    degree: int
    sizes: tuple[int, int, int]
    sz_bound: int
    thm11_reference: float
    thm12_reference: float
    engine: str
    elapsed_seconds: float
    Q: int | None = None
    R: int | None = None
    S_hits: int | None = None
    fiber_histogram: dict[int, int] | None = None

    def __post_init__(self):
        if self.M > self.sz_bound:
            raise InvariantViolation(
                f"Schwartz-Zippel violated: M={self.M} > {self.sz_bound}"
            )
        if self.R is not None and self.M * self.M > self.sizes[0] * self.R:
            raise InvariantViolation(
                f"Cauchy-Schwarz violated: M^2={self.M * self.M} > "
                f"|A|*R={self.sizes[0] * self.R}"
            )

    @property
    def cs_bound(self) -> float | None:
        if self.R is None:
            return None
        return (self.sizes[0] * self.R) ** 0.5

    def to_dict(self) -> dict:
        out = {
            "M": self.M,
            "degree": self.degree,
            "sizes": list(self.sizes),
            "sz_bound": self.sz_bound,
            "thm11_reference": self.thm11_reference,
            "thm12_reference": self.thm12_reference,
            "engine": self.engine,
            "elapsed_ms": round(self.elapsed_seconds * 1000.0, 3),
        }
        if self.Q is not None:
            out["Q"] = self.Q
            out["R"] = self.R
            out["S_hits"] = self.S_hits
            out["cs_bound"] = self.cs_bound
            out["fiber_histogram"] = {
                str(k): v for k, v in sorted((self.fiber_histogram or {}).items())
            }
        return out


def reference_bounds(d: int, na: int, nb: int, nc: int):
    """(sz_bound, thm11_reference, thm12_reference) for an instance shape.

    sz_bound = d * min(|A||B|, |A||C|, |B||C|) is a hard bound.  The other
    two evaluate the headline asymptotic expressions with constant 1 and are
    reference scalings only.
    """
    if d < 1:
        raise InputError("degree must be at least 1")
    sz = d * min(na * nb, na * nc, nb * nc)
    n = max(na, nb, nc, 0)
    thm11 = d**6.5 * n ** (11.0 / 6.0)

    def unbalanced(r, s, t):
        return d**6.5 * r**0.5 * (s * t) ** (2.0 / 3.0) + d**8.5 * r**0.5 * (
            r**0.5 + s + t
        )

    thm12 = min(
        unbalanced(na, nb, nc), unbalanced(nb, na, nc), unbalanced(nc, na, nb)
    )
    return sz, thm11, thm12


def _roles(F: MPoly, A: GridSet, B: GridSet, C: GridSet):
    if len(F.variables) != 3:
        raise InputError("counting needs a polynomial in exactly three variables")
    return list(zip(F.variables, (A, B, C)))


def _choose_inner(F: MPoly, A: GridSet, B: GridSet, C: GridSet) -> int:
    """Index of the membership-test coordinate: smallest grid, ties prefer z."""
    sizes = (len(A), len(B), len(C))
    best = 2
    for i in (1, 0):
        if sizes[i] < sizes[best]:
            best = i
    return best


def count_zeros(
    F: MPoly,
    A: GridSet,
    B: GridSet,
    C: GridSet,
    engine: str = "pair_loop",
    primes: int = DEFAULT_PRIMES,
    seed: int = DEFAULT_SEED,
) -> CountReport:
    """Count |Z(F) cap (A x B x C)| exactly with the chosen engine."""
    if F.is_zero():
        raise InputError("the zero polynomial vanishes everywhere; refusing to count")
    start = time.perf_counter()
    if engine == "triple_loop":
        m = _count_triple_loop(F, A, B, C)
    elif engine == "pair_loop":
        m = _count_pair_loop(F, A, B, C, primes=primes, seed=seed)
    else:
        raise InputError(f"unknown engine {engine!r}")
    elapsed = time.perf_counter() - start
    d = max(F.degree(), 1)
    sz, t11, t12 = reference_bounds(d, len(A), len(B), len(C))
    return CountReport(
        M=m,
        degree=F.degree(),
        sizes=(len(A), len(B), len(C)),
        sz_bound=sz,
        thm11_reference=t11,
        thm12_reference=t12,
        engine=engine,
        elapsed_seconds=elapsed,
    )


def _count_triple_loop(F: MPoly, A: GridSet, B: GridSet, C: GridSet) -> int:
    (vx, _), (vy, _), (vz, _) = _roles(F, A, B, C)
    m = 0
    for a in A:
        fa = F.eval({vx: a})
        for b in B:
            fab = fa.eval({vy: b})
            coeffs = [c.constant_value() for c in fab.as_upoly(vz).coeffs]
            for c in C:
                if horner_eval(coeffs, c).is_zero():
                    m += 1
    return m


def _count_pair_loop(
    F: MPoly,
    A: GridSet,
    B: GridSet,
    C: GridSet,
    primes: int = DEFAULT_PRIMES,
    seed: int = DEFAULT_SEED,
) -> int:
    roles = _roles(F, A, B, C)
    inner = _choose_inner(F, A, B, C)
    outer = [i for i in range(3) if i != inner]
    inner_var, inner_grid = roles[inner]
    (u_var, u_grid), (v_var, v_grid) = roles[outer[0]], roles[outer[1]]

    view = F.as_upoly(inner_var)
    coeff_polys = [c.with_variables((u_var, v_var)) for c in view.coeffs]

    rational = all(v.is_rational() for g in (A, B, C) for v in g) and all(
        c.is_rational() for c in F.terms.values()
    )
    pruner = None
    if rational and primes > 0 and len(inner_grid) > 0:
        pruner = _ModularPruner(coeff_polys, u_grid, v_grid, inner_grid, primes, seed)

    inner_vals = list(inner_grid)
    m = 0
    for ui, u in enumerate(u_grid):
        partial = [c.eval({u_var: u}) for c in coeff_polys]
        for vi, v in enumerate(v_grid):
            if pruner is not None:
                candidates, maybe_degenerate = pruner.candidates(ui, vi)
                if not candidates and not maybe_degenerate:
                    continue
            else:
                candidates, maybe_degenerate = range(len(inner_vals)), True
            coeffs = [c.eval_scalar({v_var: v}) for c in partial]
            if maybe_degenerate and all(c.is_zero() for c in coeffs):
                # degenerate specialization: the whole inner grid counts
                m += len(inner_vals)
                continue
            for ci in candidates:
                if horner_eval(coeffs, inner_vals[ci]).is_zero():
                    m += 1
    return m


class _ModularPruner:
    """Multi-prime candidate pruning for rational instances.

    A true zero is 0 modulo every prime, so surviving candidates are a
    superset of the true zeros; the caller re-verifies each exactly.
    """

    def __init__(self, coeff_polys, u_grid, v_grid, inner_grid, n_primes, seed):
        dens = set()
        for p in coeff_polys:
            for c in p.terms.values():
                dens.add(c.re.denominator)
        for g in (u_grid, v_grid, inner_grid):
            for val in g:
                dens.add(val.re.denominator)
        den_lcm = 1
        for d in dens:
            den_lcm = lcm(den_lcm, d)
        rng = random.Random(seed)
        self.primes = []
        while len(self.primes) < n_primes:
            p = rng.getrandbits(62) | (1 << 61) | 1
            if _is_probable_prime(p) and den_lcm % p != 0:
                self.primes.append(p)
        self.tables = [
            _PrimeTable(p, coeff_polys, u_grid, v_grid, inner_grid)
            for p in self.primes
        ]

    def candidates(self, ui: int, vi: int):
        """(surviving inner indices, whether the pair may be degenerate)."""
        survivors = None
        degenerate = True
        for table in self.tables:
            hits, all_zero = table.scan(ui, vi)
            degenerate = degenerate and all_zero
            if survivors is None:
                survivors = hits
            else:
                survivors = [i for i in survivors if i in hits]
            if not survivors and not degenerate:
                return [], False
        return sorted(survivors or []), degenerate


class _PrimeTable:
    def __init__(self, p, coeff_polys, u_grid, v_grid, inner_grid):
        self.p = p
        self.u_res = [_to_residue(v, p) for v in u_grid]
        self.v_res = [_to_residue(v, p) for v in v_grid]
        self.inner_res = [_to_residue(v, p) for v in inner_grid]
        # each coefficient polynomial becomes [(residue, e_u, e_v), ...]
        self.compiled = []
        for poly in coeff_polys:
            terms = []
            for exps, c in poly.terms.items():
                terms.append((_to_residue(c, p), exps[0], exps[1]))
            self.compiled.append(terms)

    def scan(self, ui: int, vi: int):
        p = self.p
        u, v = self.u_res[ui], self.v_res[vi]
        coeffs = []
        all_zero = True
        for terms in self.compiled:
            total = 0
            for r, eu, ev in terms:
                t = r
                if eu:
                    t = t * pow(u, eu, p) % p
                if ev:
                    t = t * pow(v, ev, p) % p
                total = (total + t) % p
            coeffs.append(total)
            all_zero = all_zero and total == 0
        if all_zero:
            return set(range(len(self.inner_res))), True
        hits = set()
        for i, x in enumerate(self.inner_res):
            total = 0
            for c in reversed(coeffs):
                total = (total * x + c) % p
            if total == 0:
                hits.add(i)
        return hits, False


def _to_residue(value: GaussRat, p: int) -> int:
    f = value.re
    return f.numerator * pow(f.denominator, p - 2, p) % p


def quadruple_stats(F: MPoly, A: GridSet, B: GridSet, C: GridSet):
    """(Q, R, fiber_histogram) for the instance.

    Q counts quadruples (b, b', c, c') admitting a witness a in A with
    F(a,b,c) = F(a,b',c') = 0.  R is the quintuple count, which equals
    sum over a of |(B x C)_a|^2.  The histogram maps witness count k to the
    number of quadruples with exactly k witnesses.
    """
    if F.is_zero():
        raise InputError("the zero polynomial vanishes everywhere; refusing to count")
    fibers, r_total = _witness_fibers(F, A, B, C)
    histogram: dict[int, int] = {}
    for k in fibers.values():
        histogram[k] = histogram.get(k, 0) + 1
    return len(fibers), r_total, histogram


def _witness_fibers(F: MPoly, A: GridSet, B: GridSet, C: GridSet):
    (vx, _), (vy, _), (vz, _) = _roles(F, A, B, C)
    fibers: dict[tuple, int] = {}
    r_total = 0
    for a in A:
        fa = F.eval({vx: a})
        hits = []
        for b in B:
            fab = fa.eval({vy: b})
            coeffs = [c.constant_value() for c in fab.as_upoly(vz).coeffs]
            for c in C:
                if horner_eval(coeffs, c).is_zero():
                    hits.append((b, c))
        r_total += len(hits) * len(hits)
        if r_total > _FIBER_BUDGET:
            raise InputError("quadruple enumeration exceeds the desk-scale budget")
        for b, c in hits:
            for b2, c2 in hits:
                key = (b, b2, c, c2)
                fibers[key] = fibers.get(key, 0) + 1
    return fibers, r_total


def identically_zero_pairs(F: MPoly, B: GridSet, C: GridSet) -> list[tuple]:
    """Pairs (b, c) with F(x, b, c) identically zero in the first variable."""
    vx, vy, vz = F.variables
    out = []
    for b in B:
        fb = F.eval({vy: b})
        for c in C:
            if fb.eval({vz: c}).is_zero():
                out.append((b, c))
    return out


def analyze(
    F: MPoly,
    A: GridSet,
    B: GridSet,
    C: GridSet,
    engine: str = "pair_loop",
    primes: int = DEFAULT_PRIMES,
    seed: int = DEFAULT_SEED,
) -> CountReport:
    """count_zeros + quadruple_stats in one report, with all assertions."""
    start = time.perf_counter()
    base = count_zeros(F, A, B, C, engine=engine, primes=primes, seed=seed)
    q, r, hist = quadruple_stats(F, A, B, C)
    s = len(identically_zero_pairs(F, B, C))
    elapsed = time.perf_counter() - start
    return CountReport(
        M=base.M,
        degree=base.degree,
        sizes=base.sizes,
        sz_bound=base.sz_bound,
        thm11_reference=base.thm11_reference,
        thm12_reference=base.thm12_reference,
        engine=engine,
        elapsed_seconds=elapsed,
        Q=q,
        R=r,
        S_hits=s * s,
        fiber_histogram=hist,
    )


def cs_chain_check(report: CountReport, n_a: int):
    """Verify M^2 <= |A| * R in integers; returns (ok, slack).

    The report must come from the same instance: its |A| must match.
    """
    if report.R is None:
        raise InputError("report carries no quintuple count; run analyze() first")
    if report.sizes[0] != n_a:
        raise InputError(
            f"instance mismatch: report has |A|={report.sizes[0]}, got {n_a}"
        )
    slack = n_a * report.R - report.M * report.M
    return slack >= 0, slack


@dataclass(frozen=True)
class FiberViolation:
    quadruple: tuple
    witnesses: int
    covers_all_of_A: bool
    identically_zero: bool


def witness_fiber_check(
    F: MPoly, A: GridSet, B: GridSet, C: GridSet, d: int | None = None
) -> list[FiberViolation]:
    """All quadruples with more than d witnesses in A.

    Each violation is checked for membership in the exceptional set: whether
    every a in A is a witness, and whether the specialized polynomials
    F(x,b,c) and F(x,b',c') are identically zero.
    """
    if d is None:
        d = max(F.degree(), 1)
    fibers, _ = _witness_fibers(F, A, B, C)
    zero_pairs = set(identically_zero_pairs(F, B, C))
    out = []
    for key, count in sorted(
        fibers.items(), key=lambda kv: tuple(v.sort_key() for v in kv[0])
    ):
        if count <= d:
            continue
        b, b2, c, c2 = key
        out.append(
            FiberViolation(
                quadruple=key,
                witnesses=count,
                covers_all_of_A=count == len(A),
                identically_zero=(b, c) in zero_pairs and (b2, c2) in zero_pairs,
            )
        )
    return out


# ---------------------------------------------------------------------------
# Scaling sweeps
# ---------------------------------------------------------------------------

SWEEP_COLUMNS = "n,M,Q,R,sz_bound,cs_bound,thm12_reference,engine,elapsed_ms"


@dataclass
class SweepResult:
    rows: list[dict] = field(default_factory=list)
    fitted_exponent: float | None = None
    fit_note: str = ""

    def to_csv(self) -> str:
        lines = [SWEEP_COLUMNS]
        for r in self.rows:
            lines.append(
                "{n},{M},{Q},{R},{sz_bound},{cs_bound:.6g},{thm12_reference:.6g},"
                "{engine},{elapsed_ms}".format(**r)
            )
        return "\n".join(lines) + "\n"


def generate_family(family: str, n: int, rng: random.Random):
    """Grids (A, B, C) of size n for a named scaling family."""
    if family == "extremal":
        a = GridSet(range(n))
        return a, a, GridSet([-k for k in range(n)])
    if family == "arithmetic-progression":
        a = GridSet(range(n))
        return a, a, a
    if family == "random-integer":
        lo, hi = -3 * n, 3 * n
        grids = []
        for _ in range(3):
            vals: set[int] = set()
            while len(vals) < n:
                vals.add(rng.randint(lo, hi))
            grids.append(GridSet(sorted(vals)))
        return tuple(grids)
    raise InputError(f"unknown family {family!r}")


def scaling_sweep(
    F: MPoly,
    family: str,
    n_list: list[int],
    seed: int = DEFAULT_SEED,
    engine: str = "pair_loop",
    stable_timing: bool = False,
) -> SweepResult:
    """Run the family at each n, fit log M against log n, emit CSV rows.

    The fit uses least squares over rows with M > 0 and requires at least
    three such rows; otherwise the result carries an "insufficient data"
    note instead of a slope.  stable_timing zeroes the elapsed_ms column for
    byte-reproducible output.
    """
    if list(n_list) != sorted(n_list):
        raise InputError("n_list must be ascending")
    rng = random.Random(seed)
    result = SweepResult()
    for n in n_list:
        a, b, c = generate_family(family, n, rng)
        report = analyze(F, a, b, c, engine=engine, seed=seed)
        result.rows.append(
            {
                "n": n,
                "M": report.M,
                "Q": report.Q,
                "R": report.R,
                "sz_bound": report.sz_bound,
                "cs_bound": report.cs_bound,
                "thm12_reference": report.thm12_reference,
                "engine": engine,
                "elapsed_ms": 0
                if stable_timing
                else round(report.elapsed_seconds * 1000.0, 3),
            }
        )
    fit_rows = [(r["n"], r["M"]) for r in result.rows if r["M"] > 0]
    if len(fit_rows) < 3:
        result.fit_note = "insufficient data"
    else:
        import math

        xs = [math.log(n) for n, _ in fit_rows]
        ys = [math.log(m) for _, m in fit_rows]
        k = len(xs)
        sx, sy = sum(xs), sum(ys)
        sxx = sum(x * x for x in xs)
        sxy = sum(x * y for x, y in zip(xs, ys))
        denom = k * sxx - sx * sx
        if denom == 0:
            result.fit_note = "insufficient data"
        else:
            result.fitted_exponent = (k * sxy - sx * sy) / denom
    return result
