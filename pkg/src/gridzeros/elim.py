"""Elimination machinery: Sylvester resultants, gcd, squarefree parts.

The resultant is computed by fraction-free (Bareiss) elimination of the
Sylvester matrix; the gcd uses a primitive pseudo-remainder sequence with
recursive content extraction.  Both stay inside exact Gaussian-rational
arithmetic throughout.

Also provided: exact enumeration of the Q(i)-rational roots of a univariate
polynomial, via the rational root theorem over the Gaussian integers.  Every
candidate is verified by exact evaluation before it is returned.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .poly import MPoly
from .scalars import GaussRat


# ---------------------------------------------------------------------------
# Resultants
# ---------------------------------------------------------------------------


def sylvester_matrix(f: MPoly, g: MPoly, var: str) -> list[list[MPoly]]:
    m = f.degree_in(var)
    n = g.degree_in(var)
    if m <= 0 or n <= 0:
        raise ValueError(f"both arguments must have positive degree in {var!r}")
    fv = f.as_upoly(var).coeffs
    gv = g.as_upoly(var).coeffs
    rest = fv[0].variables
    zero = MPoly.zero(rest)
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * size
        for k, c in enumerate(reversed(fv)):
            row[i + k] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k, c in enumerate(reversed(gv)):
            row[i + k] = c
        rows.append(row)
    return rows


def bareiss_determinant(matrix: list[list[MPoly]]) -> MPoly:
    """Fraction-free determinant; all intermediate divisions are exact."""
    m = [row[:] for row in matrix]
    n = len(m)
    if n == 0:
        return MPoly.constant(1)
    variables = m[0][0].variables
    sign = 1
    prev = MPoly.constant(1, variables)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for r in range(k + 1, n):
                if not m[r][k].is_zero():
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return MPoly.zero(variables)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                q = num.divide_exact(prev)
                if q is None:
                    raise AssertionError("Bareiss division was not exact")
                m[i][j] = q
            m[i][k] = MPoly.zero(variables)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def resultant(f: MPoly, g: MPoly, var: str) -> MPoly:
    """Sylvester resultant eliminating ``var``.

    Zero iff f and g share a factor of positive degree in var over the
    function field of the remaining variables.
    """
    return bareiss_determinant(sylvester_matrix(f, g, var))


# ---------------------------------------------------------------------------
# Gcd and squarefree machinery
# ---------------------------------------------------------------------------


def poly_gcd(f: MPoly, g: MPoly) -> MPoly:
    """A greatest common divisor, normalized to leading coefficient 1."""
    if f.is_zero() and g.is_zero():
        return MPoly.zero(f.variables)
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    a, b = f._aligned(g)
    return _gcd_aligned(a, b).monic()


def _gcd_aligned(f: MPoly, g: MPoly) -> MPoly:
    if f.is_constant() or g.is_constant():
        return MPoly.constant(1, f.variables)
    var = next(v for v in f.variables if f.depends_on(v) or g.depends_on(v))
    if not f.depends_on(var):
        return _gcd_aligned(f, _content(g, var))
    if not g.depends_on(var):
        return _gcd_aligned(_content(f, var), g)
    cf, pf = _content_primitive(f, var)
    cg, pg = _content_primitive(g, var)
    c = _gcd_aligned(cf, cg)
    a, b = pf, pg
    if a.degree_in(var) < b.degree_in(var):
        a, b = b, a
    while not b.is_zero() and b.degree_in(var) > 0:
        _, r, _ = a.pseudo_divmod(b, var)
        a, b = b, _primitive(r, var)
    if not b.is_zero():
        return c
    return c * _primitive(a, var)


def _content(f: MPoly, var: str) -> MPoly:
    """Gcd of the coefficients of f viewed as univariate in var."""
    coeffs = [c.with_variables(f.variables) for c in f.as_upoly(var).coeffs]
    acc = MPoly.zero(f.variables)
    for c in coeffs:
        if c.is_zero():
            continue
        acc = c.monic() if acc.is_zero() else _gcd_aligned(acc, c).monic()
        if acc.is_constant():
            return MPoly.constant(1, f.variables)
    return acc


def _content_primitive(f: MPoly, var: str) -> tuple[MPoly, MPoly]:
    c = _content(f, var)
    p = f.divide_exact(c)
    if p is None:
        raise AssertionError("content division was not exact")
    return c, p


def _primitive(f: MPoly, var: str) -> MPoly:
    if f.is_zero():
        return f
    return _content_primitive(f, var)[1]


def gcd_many(polys: list[MPoly]) -> MPoly:
    acc = MPoly.zero(())
    for p in polys:
        acc = poly_gcd(acc, p)
        if not acc.is_zero() and acc.is_constant():
            break
    return acc


def squarefree_part(f: MPoly) -> MPoly:
    """Product of the distinct irreducible factors of f, monic-normalized.

    Computed as f / gcd(f, df/dv), recursing on the content for variables
    not present in the primitive part.  The result divides f and satisfies
    gcd(result, d(result)/dv) constant for every variable v.
    """
    if f.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    if f.is_constant():
        return MPoly.constant(1, f.variables)
    var = next(v for v in f.variables if f.depends_on(v))
    cont, prim = _content_primitive(f, var)
    g = poly_gcd(prim, prim.derivative(var))
    sq = prim.divide_exact(g)
    if sq is None:
        raise AssertionError("squarefree division was not exact")
    return (squarefree_part(cont) * sq).monic()


# ---------------------------------------------------------------------------
# Gaussian integers and exact rational roots
# ---------------------------------------------------------------------------
# A Gaussian integer is an (a, b) pair meaning a + b*i.


def _gi_mul(u, v):
    return (u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def _gi_norm(u):
    return u[0] * u[0] + u[1] * u[1]


def _gi_divmod(u, v):
    """Nearest-lattice-point division, |remainder| < |v|."""
    n = _gi_norm(v)
    conj = (v[0], -v[1])
    num = _gi_mul(u, conj)
    q = (_round_div(num[0], n), _round_div(num[1], n))
    r = (u[0] - (q[0] * v[0] - q[1] * v[1]), u[1] - (q[0] * v[1] + q[1] * v[0]))
    return q, r


def _round_div(a: int, b: int) -> int:
    return (2 * a + b) // (2 * b)


def _gi_gcd(u, v):
    while v != (0, 0):
        _, r = _gi_divmod(u, v)
        u, v = v, r
    return u


def _gi_canonical(u):
    """Canonical associate: rotate by units into {a > 0, b >= 0} (or 0)."""
    a, b = u
    for _ in range(4):
        if a > 0 and b >= 0:
            return (a, b)
        a, b = -b, a
    return (0, 0)


def _factor_int(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 7
    steps = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while f * f <= n and f < 1_000_000:
        if n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        else:
            f += steps[i % 8]
            i += 1
    while n > 1:
        d = _pollard_rho(n) if n >= 1_000_000**2 and not _is_probable_prime(n) else n
        if d == n:
            out[n] = out.get(n, 0) + 1
            break
        cnt = 0
        while n % d == 0:
            cnt += 1
            n //= d
        for q, e in _factor_int(d).items():
            out[q] = out.get(q, 0) + e * cnt
    return out


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    for c in range(1, 50):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = _int_gcd(abs(x - y), n)
        if d != n:
            return d
    return n


def _int_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _sqrt_minus_one(p: int) -> int:
    """A square root of -1 modulo a prime p = 1 mod 4."""
    for g in range(2, p):
        t = pow(g, (p - 1) // 4, p)
        if t * t % p == p - 1:
            return t
    raise AssertionError("no sqrt(-1) found; p is not 1 mod 4")


def _gi_prime_factors(z) -> list[tuple[tuple[int, int], int]]:
    """Gaussian prime factorization of a nonzero Gaussian integer."""
    out = []
    rem = z
    for p, _ in sorted(_factor_int(_gi_norm(z)).items()):
        if p == 2:
            pi = (1, 1)
            e = 0
            while True:
                q, r = _gi_divmod(rem, pi)
                if r != (0, 0):
                    break
                rem = q
                e += 1
            if e:
                out.append((pi, e))
        elif p % 4 == 3:
            e = 0
            while True:
                q, r = _gi_divmod(rem, (p, 0))
                if r != (0, 0):
                    break
                rem = q
                e += 1
            if e:
                out.append(((p, 0), e))
        else:
            t = _sqrt_minus_one(p)
            for pi in (_gi_gcd((p, 0), (t, 1)), _gi_gcd((p, 0), (t, -1))):
                if _gi_norm(pi) != p:
                    continue
                e = 0
                while True:
                    q, r = _gi_divmod(rem, pi)
                    if r != (0, 0):
                        break
                    rem = q
                    e += 1
                if e:
                    out.append((pi, e))
    return out


def _gi_divisors(z) -> list[tuple[int, int]]:
    """All divisors of z up to units, as canonical associates."""
    if z == (0, 0):
        raise ValueError("divisors of zero")
    divs = [(1, 0)]
    for pi, e in _gi_prime_factors(z):
        grown = []
        power = (1, 0)
        for _ in range(e + 1):
            grown.extend(_gi_mul(d, power) for d in divs)
            power = _gi_mul(power, pi)
        divs = grown
    return sorted({_gi_canonical(d) for d in divs})


_UNITS = ((1, 0), (0, 1), (-1, 0), (0, -1))


def rational_roots(p: MPoly) -> list[GaussRat]:
    """All roots of a nonzero univariate polynomial that lie in Q(i).

    Exact and complete over Q(i): clears denominators, strips the root at
    zero, reduces to the squarefree part, and enumerates candidates by the
    rational root theorem over the Gaussian integers.  Every returned value
    verifiably satisfies p(root) = 0.
    """
    if p.is_zero():
        raise ValueError("rational roots of the zero polynomial")
    used = [v for v in p.variables if p.depends_on(v)]
    if len(used) > 1:
        raise ValueError("polynomial is not univariate")
    if not used:
        return []
    var = used[0]
    roots: list[GaussRat] = []
    coeffs = squarefree_part(p).as_upoly(var).coeffs
    vals = [c.constant_value() for c in coeffs]
    if vals[0].is_zero():
        roots.append(GaussRat(0))
        while vals and vals[0].is_zero():
            vals = vals[1:]
    if len(vals) <= 1:
        return sorted(roots, key=GaussRat.sort_key)
    den = 1
    for v in vals:
        den = lcm(den, v.re.denominator, v.im.denominator)
    ints = [(int(v.re * den), int(v.im * den)) for v in vals]
    lead, const = ints[-1], ints[0]
    for num in _gi_divisors(const):
        for dv in _gi_divisors(lead):
            base = GaussRat(Fraction(num[0], 1), Fraction(num[1], 1)) / GaussRat(
                Fraction(dv[0], 1), Fraction(dv[1], 1)
            )
            for u in _UNITS:
                cand = base * GaussRat(u[0], u[1])
                if cand in roots:
                    continue
                total = GaussRat(0)
                for v in reversed(vals):
                    total = total * cand + v
                if total.is_zero():
                    roots.append(cand)
    return sorted(roots, key=GaussRat.sort_key)
