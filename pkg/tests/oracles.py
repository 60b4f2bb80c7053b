"""Independent reference implementations used only by the tests."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import mpmath
import numpy as np
import sympy


def pascal_table(nmax: int) -> list[list[int]]:
    rows = [[1]]
    for _ in range(nmax):
        prev = rows[-1]
        rows.append([1] + [prev[i] + prev[i + 1] for i in range(len(prev) - 1)] + [1])
    return rows


def direct_steiner_verdict(a) -> bool:
    """Contiguous positive support and ultra-logconcavity with denominators
    cleared: ``i (n-i) a_i^2 >= (i+1)(n-i+1) a_{i-1} a_{i+1}``, in rationals."""
    a = [Fraction(x) for x in a]
    n = len(a) - 1
    pos = [i for i, x in enumerate(a) if x > 0]
    if not pos:
        return False
    if any(a[i] == 0 for i in range(pos[0], pos[-1] + 1)):
        return False
    for i in range(1, n):
        if i * (n - i) * a[i] * a[i] < (i + 1) * (n - i + 1) * a[i - 1] * a[i + 1]:
            return False
    return True


def mp_roots(coeffs_ascending, dps: int = 60) -> list[complex]:
    """Roots by mpmath at high precision (zero roots included).

    The polynomial is first split into square-free factors with exact
    rational arithmetic, since mpmath's iteration stalls on repeated roots."""
    c = [Fraction(x) for x in coeffs_ascending]
    z = sympy.symbols("z")
    poly = sympy.Poly(list(reversed([sympy.Rational(x.numerator, x.denominator) for x in c])), z)
    out = []
    with mpmath.workdps(dps):
        for factor, mult in poly.sqf_list()[1]:
            if factor.degree() < 1:
                continue
            coeffs = [mpmath.mpf(int(q.p)) / int(q.q) for q in factor.all_coeffs()]
            rs = [-coeffs[1] / coeffs[0]] if factor.degree() == 1 else mpmath.polyroots(
                coeffs, maxsteps=500, extraprec=4 * dps)
            out.extend(complex(r) for r in rs for _ in range(mult))
    return out


def match_multisets(a, b) -> float:
    """Largest distance under the best greedy matching of two equal-size multisets."""
    a, b = list(a), list(b)
    assert len(a) == len(b)
    worst = 0.0
    for x in a:
        j = min(range(len(b)), key=lambda k: abs(b[k] - x))
        worst = max(worst, abs(b[j] - x))
        b.pop(j)
    return worst


def quartic_inequalities_sympy():
    """Derive the ULC rows of ``(z^2+2z+2)(z^2+cz+d)`` in R^4 symbolically.

    Returns the three expressions ``c_{i,4} a_i^2 - a_{i-1} a_{i+1}`` for
    ``i = 3, 2, 1`` as sympy expressions in ``c, d``."""
    z, c, d = sympy.symbols("z c d")
    poly = sympy.Poly(sympy.expand((z**2 + 2 * z + 2) * (z**2 + c * z + d)), z)
    a = [poly.coeff_monomial(z**i) for i in range(5)]
    n = 4
    rows = {}
    for i in range(1, n):
        w = sympy.Rational(sympy.binomial(n, i - 1) * sympy.binomial(n, i + 1), sympy.binomial(n, i) ** 2)
        rows[i] = sympy.expand(w * a[i] ** 2 - a[i - 1] * a[i + 1])
    return c, d, (rows[3], rows[2], rows[1])


def simplex_volume(vertices) -> float:
    v = np.asarray(vertices, dtype=float)
    return abs(np.linalg.det(v[1:] - v[0])) / math.factorial(v.shape[1])


def random_concave_logs(rng: np.random.Generator, m: int) -> np.ndarray:
    """Strictly concave sequence of length ``m + 1`` (test-side sampler)."""
    inc = np.sort(rng.uniform(-2.0, 2.0, size=m))[::-1] - 1e-5 * np.arange(m)
    return np.concatenate([[0.0], np.cumsum(inc)])


def all_subsets_sum(vals, k):
    return sum(math.prod(c) for c in itertools.combinations(vals, k))
