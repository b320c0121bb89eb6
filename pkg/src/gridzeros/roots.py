"""Durand-Kerner simultaneous iteration for complex polynomial roots.

Self-contained (no external linear algebra).  Initial guesses sit on a
circle of radius 1 + max|c_i / c_deg|, at equally spaced angles offset by a
fixed irrational rotation so no guess starts on a symmetry axis of the root
set.  Used only for sampling; all decision-making arithmetic stays exact.
"""

from __future__ import annotations

import cmath
import math

DEFAULT_TOL = 1e-12
MAX_ITERATIONS = 200

_IRRATIONAL_OFFSET = 2.0 * math.pi * (math.sqrt(2.0) - 1.0)


class RootFindingError(RuntimeError):
    """Raised when the iteration fails to converge within the budget."""


def complex_roots(
    coeffs: list[complex],
    tol: float = DEFAULT_TOL,
    max_iterations: int = MAX_ITERATIONS,
) -> list[complex]:
    """All roots (with multiplicity) of sum(coeffs[k] * z**k).

    Coefficients are ascending in the power of z.  Each returned root r
    satisfies |p(r)| <= tol * (1 + |r|)**deg * max|coeffs|.  Raises
    RootFindingError on non-convergence.
    """
    cs = [complex(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    if len(cs) <= 1:
        raise ValueError("degree must be at least 1 with a nonzero leading coefficient")
    lead = cs[-1]
    monic = [c / lead for c in cs]
    n = len(monic) - 1
    if n == 1:
        return [-monic[0]]

    radius = 1.0 + max(abs(c) for c in monic[:-1])
    roots = [
        radius * cmath.exp(1j * (2.0 * math.pi * k / n + _IRRATIONAL_OFFSET))
        for k in range(n)
    ]

    def p_of(z: complex) -> complex:
        total = 0j
        for c in reversed(monic):
            total = total * z + c
        return total

    for _ in range(max_iterations):
        moved = 0.0
        for i in range(n):
            denom = 1.0 + 0j
            for j in range(n):
                if j != i:
                    denom *= roots[i] - roots[j]
            if denom == 0:
                roots[i] += tol + tol * 1j
                moved = math.inf
                continue
            step = p_of(roots[i]) / denom
            roots[i] -= step
            moved = max(moved, abs(step))
        if moved <= tol * (1.0 + max(abs(r) for r in roots)):
            break
    else:
        raise RootFindingError(
            f"Durand-Kerner did not converge in {max_iterations} iterations"
        )

    scale = max(abs(c) for c in cs)
    for r in roots:
        bound = tol * (1.0 + abs(r)) ** n * scale
        if abs(p_of(r) * lead) > max(bound, 1e-300):
            raise RootFindingError("converged point fails the residual bound")
    return sorted(roots, key=lambda z: (z.real, z.imag))
