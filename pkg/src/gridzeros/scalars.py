"""Exact Gaussian-rational arithmetic: the scalar ground field of the package.

A Gaussian rational is a complex number whose real and imaginary parts are
both rational.  Every exact computation in this package (polynomials,
resultants, counting, curve equations) happens over these scalars; floating
complex numbers appear only inside the numeric root sampler.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction
from math import lcm


class GaussRat:
    """An element of Q(i), stored as two Fractions in lowest terms.

    Instances are immutable and hashable.  All field operations are exact;
    division by zero raises ZeroDivisionError.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussRat):
            if im != 0:
                raise ValueError("cannot combine a GaussRat with an imaginary part")
            re, im = re.re, re.im
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRat is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def from_literal(text: str) -> "GaussRat":
        """Parse a literal like ``3/2``, ``-1``, ``2/3i``, ``i``, ``(1+2i)/5``.

        This is the format used by GridSet files and by coefficient printing.
        """
        s = text.strip().replace(" ", "")
        if not s:
            raise ValueError("empty Gaussian-rational literal")
        m = _re.fullmatch(r"\((?P<body>[^()]+)\)(?:/(?P<den>\d+))?", s)
        if m:
            body = m.group("body")
            den = int(m.group("den")) if m.group("den") else 1
            inner = GaussRat.from_literal(body)
            return inner / GaussRat(den)
        # split a+bi / a-bi at the last top-level sign that is not leading
        # and not part of an exponent (no exponents occur in these literals)
        for k in range(len(s) - 1, 0, -1):
            if s[k] in "+-" and s[k - 1] not in "+-/":
                left, right = s[:k], s[k:]
                if "i" in right and "i" not in left:
                    return GaussRat._simple(left) + GaussRat._simple(right)
        return GaussRat._simple(s)

    @staticmethod
    def _simple(s: str) -> "GaussRat":
        if s in ("i", "+i"):
            return GaussRat(0, 1)
        if s == "-i":
            return GaussRat(0, -1)
        if s.endswith("i"):
            return GaussRat(0, Fraction(s[:-1]))
        return GaussRat(Fraction(s))

    # -- field operations ------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussRat(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussRat(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussRat":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussRat(self.re / n, -self.im / n)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = GaussRat(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- predicates and conversions ---------------------------------------

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_rational(self) -> bool:
        return self.im == 0

    def conjugate(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def sort_key(self):
        """Lexicographic (re, im) key on the reduced fractions."""
        return (self.re, self.im)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"GaussRat({str(self)!r})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return _imag_str(self.im)
        d = lcm(self.re.denominator, self.im.denominator)
        a, b = self.re * d, self.im * d
        sign = "+" if b > 0 else "-"
        babs = abs(b)
        bpart = "i" if babs == 1 else f"{babs}i"
        body = f"{a}{sign}{bpart}"
        return body if d == 1 else f"({body})/{d}"


def _imag_str(b: Fraction) -> str:
    if b == 1:
        return "i"
    if b == -1:
        return "-i"
    return f"{b}i"


def _coerce(v):
    if isinstance(v, GaussRat):
        return v
    if isinstance(v, (int, Fraction)):
        return GaussRat(v)
    return NotImplemented


ZERO = GaussRat(0)
ONE = GaussRat(1)
I = GaussRat(0, 1)
