"""Ultra-logconcave coefficient sequences and the quermassintegral dictionary.

A real polynomial ``sum a_i z**i`` with ``a_i >= 0`` is the relative Steiner
polynomial of a pair of convex bodies ``K, E`` in ``R^n`` exactly when its
positive coefficients form a contiguous block ``n - dim K <= i <= dim E`` and
``c_{i,n} a_i**2 >= a_{i-1} a_{i+1}`` for ``1 <= i <= n - 1``, where
``c_{i,n} = (i / (i + 1)) * ((n - i) / (n - i + 1))``.

Two arithmetic modes are supported and always chosen by the caller:

* ``"exact"``: coefficients are stored as :class:`fractions.Fraction` and every
  comparison is exact.  Floats passed in are converted to the rational number
  they represent, not rounded.
* ``"numeric"``: coefficients are floats and inequalities are tested with a
  relative tolerance against ``max(lhs, rhs)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence, Union

Number = Union[int, float, Fraction]

EXACT = "exact"
NUMERIC = "numeric"
MODES = (EXACT, NUMERIC)

DEFAULT_TOL = 1e-9


class SteinerRejection(ValueError):
    """A coefficient sequence that is not a relative Steiner polynomial.

    ``index`` names the offending coefficient or inequality row, ``reason`` is
    one of ``"support_gap"``, ``"ulc"``, ``"sign"`` or ``"dimension"``.
    """

    def __init__(self, message: str, index: int | None = None, reason: str = "ulc"):
        super().__init__(message)
        self.index = index
        self.reason = reason


class SupportGapError(SteinerRejection):
    def __init__(self, index: int):
        super().__init__(f"support gap at index {index}", index=index, reason="support_gap")


def binomial(n: int, i: int) -> int:
    """Exact binomial coefficient C(n, i) as a Python integer."""
    if not (0 <= i <= n):
        raise ValueError(f"index out of range: C({n}, {i})")
    return math.comb(n, i)


def c_coeff(n: int, i: int) -> Fraction:
    """The ultra-logconcavity weight ``c_{i,n} = C(n,i-1) C(n,i+1) / C(n,i)**2``."""
    if not (1 <= i <= n - 1):
        raise ValueError(f"c_{{i,n}} needs 1 <= i <= n-1, got i={i}, n={n}")
    return Fraction(i, i + 1) * Fraction(n - i, n - i + 1)


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


def _convert(value: Number | str, mode: str) -> Number:
    if mode == EXACT:
        if isinstance(value, float) and not math.isfinite(value):
            raise ValueError(f"non-finite coefficient {value!r}")
        return Fraction(value)
    out = float(value)
    if not math.isfinite(out):
        raise ValueError(f"non-finite coefficient {value!r}")
    return out


@dataclass(frozen=True)
class CoeffSequence:
    """Coefficients ``a_0..a_n`` of a candidate Steiner polynomial in ``R^n``."""

    n: int
    a: tuple
    mode: str = EXACT

    def __post_init__(self):
        _check_mode(self.mode)
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"ambient dimension must be an integer >= 1, got {self.n!r}")
        vals = tuple(_convert(x, self.mode) for x in self.a)
        if len(vals) != self.n + 1:
            raise ValueError(f"expected {self.n + 1} coefficients for n={self.n}, got {len(vals)}")
        for i, x in enumerate(vals):
            if x < 0:
                raise ValueError(f"coefficient a_{i} = {x} is negative")
        if all(x == 0 for x in vals):
            raise ValueError("all coefficients vanish: dim(K+E) < n, the polynomial is trivial")
        object.__setattr__(self, "a", vals)

    @classmethod
    def from_values(cls, a: Sequence[Number], mode: str = EXACT) -> "CoeffSequence":
        return cls(len(a) - 1, tuple(a), mode)

    def __len__(self):
        return len(self.a)

    def __getitem__(self, i):
        return self.a[i]

    def as_floats(self) -> list[float]:
        return [float(x) for x in self.a]

    def to_mode(self, mode: str) -> "CoeffSequence":
        return CoeffSequence(self.n, self.a, mode)

    def scaled(self, t: Number) -> "CoeffSequence":
        t = _convert(t, self.mode)
        if t <= 0:
            raise ValueError("scale factor must be positive")
        return CoeffSequence(self.n, tuple(t * x for x in self.a), self.mode)

    def normalized(self) -> "CoeffSequence":
        """Divide by ``sum(a)`` so that the polynomial takes the value 1 at z = 1,
        i.e. ``vol(K + E) = 1``."""
        total = sum(self.a)
        return CoeffSequence(self.n, tuple(x / total for x in self.a), self.mode)


class SteinerDims(NamedTuple):
    r: int  # dim E
    s: int  # dim K


@dataclass(frozen=True)
class UlcRow:
    i: int
    c_in: Fraction
    lhs: Number
    rhs: Number
    margin: Number
    equality: bool

    @property
    def ok(self) -> bool:
        return self.margin >= 0


@dataclass(frozen=True)
class UlcReport:
    n: int
    rows: tuple
    passed: bool
    failures: tuple
    support: tuple | None
    mode: str
    tol: float

    def format(self) -> str:
        lines = [f"n = {self.n}  mode = {self.mode}  support = {self.support}"]
        for row in self.rows:
            if row.i in self.failures:
                flag = "FAIL"
            else:
                flag = "equality" if row.equality else "ok"
            lines.append(
                f"  i={row.i:<3d} c={str(row.c_in):<10s} lhs={float(row.lhs):.10g} "
                f"rhs={float(row.rhs):.10g} margin={float(row.margin):.4g} {flag}"
            )
        lines.append("verdict: " + ("pass" if self.passed else f"fail at i = {list(self.failures)}"))
        return "\n".join(lines)


def support_interval(seq: CoeffSequence) -> tuple[int, int]:
    """Smallest and largest index with ``a_i > 0``; interior zeros are rejected."""
    nz = [i for i, x in enumerate(seq.a) if x > 0]
    lo, hi = nz[0], nz[-1]
    for i in range(lo, hi + 1):
        if seq.a[i] == 0:
            raise SupportGapError(i)
    return lo, hi


def _support_or_none(seq: CoeffSequence):
    try:
        return support_interval(seq)
    except SupportGapError:
        return None


def check_ulc(seq: CoeffSequence, tol: float = DEFAULT_TOL) -> UlcReport:
    rows = []
    failures = []
    a = seq.a
    for i in range(1, seq.n):
        c = c_coeff(seq.n, i)
        if seq.mode == EXACT:
            lhs = c * a[i] * a[i]
            rhs = a[i - 1] * a[i + 1]
            margin = lhs - rhs
            bad = margin < 0
            equal = margin == 0
        else:
            lhs = float(c) * a[i] * a[i]
            rhs = a[i - 1] * a[i + 1]
            margin = lhs - rhs
            scale = max(lhs, rhs)
            bad = margin < -tol * scale
            equal = abs(margin) <= tol * scale
        rows.append(UlcRow(i, c, lhs, rhs, margin, equal))
        if bad:
            failures.append(i)
    return UlcReport(
        n=seq.n,
        rows=tuple(rows),
        passed=not failures,
        failures=tuple(failures),
        support=_support_or_none(seq),
        mode=seq.mode,
        tol=tol,
    )


def validate_steiner(seq: CoeffSequence, tol: float = DEFAULT_TOL) -> SteinerDims:
    """Decide whether ``seq`` is a relative Steiner polynomial.

    Returns ``(r, s) = (dim E, dim K)`` on acceptance and raises
    :class:`SteinerRejection` naming the first violated index otherwise.
    """
    lo, hi = support_interval(seq)
    report = check_ulc(seq, tol)
    if not report.passed:
        i = report.failures[0]
        row = report.rows[i - 1]
        raise SteinerRejection(
            f"not ultra-logconcave at i={i}: c_{{{i},{seq.n}}} a_i^2 = {row.lhs} < "
            f"a_{i - 1} a_{i + 1} = {row.rhs}",
            index=i,
            reason="ulc",
        )
    return SteinerDims(r=hi, s=seq.n - lo)


def is_steiner(seq: CoeffSequence, tol: float = DEFAULT_TOL) -> bool:
    try:
        validate_steiner(seq, tol)
    except SteinerRejection:
        return False
    return True


@dataclass(frozen=True)
class QuermassTuple:
    """Relative quermassintegrals ``W_0..W_n`` with ``a_i = C(n, i) W_i``.

    ``r`` is the dimension of ``E`` and ``s`` the dimension of ``K``; both are
    read off the positive support ``[n - s, r]``.  Set ``check_af=False`` to
    build a tuple that violates ``W_i**2 >= W_{i-1} W_{i+1}`` on purpose (the
    realization pipeline reports such input instead of crashing on it).
    """

    n: int
    W: tuple
    mode: str = EXACT
    tol: float = DEFAULT_TOL
    check_af: bool = True
    r: int = field(init=False)
    s: int = field(init=False)

    def __post_init__(self):
        _check_mode(self.mode)
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"ambient dimension must be an integer >= 1, got {self.n!r}")
        vals = tuple(_convert(x, self.mode) for x in self.W)
        if len(vals) != self.n + 1:
            raise ValueError(f"expected {self.n + 1} values for n={self.n}, got {len(vals)}")
        if any(x < 0 for x in vals):
            raise ValueError("quermassintegrals must be nonnegative")
        if all(x == 0 for x in vals):
            raise ValueError("all quermassintegrals vanish: dim(K+E) < n")
        object.__setattr__(self, "W", vals)
        nz = [i for i, x in enumerate(vals) if x > 0]
        lo, hi = nz[0], nz[-1]
        for i in range(lo, hi + 1):
            if vals[i] == 0:
                raise SupportGapError(i)
        object.__setattr__(self, "r", hi)
        object.__setattr__(self, "s", self.n - lo)
        if self.check_af:
            for i in range(1, self.n):
                lhs, rhs = vals[i] * vals[i], vals[i - 1] * vals[i + 1]
                if self.mode == EXACT:
                    bad = lhs < rhs
                else:
                    bad = lhs - rhs < -self.tol * max(lhs, rhs)
                if bad:
                    raise SteinerRejection(
                        f"W_{i}^2 < W_{i - 1} W_{i + 1} (Aleksandrov-Fenchel violated at i={i})",
                        index=i,
                        reason="ulc",
                    )

    @property
    def support(self) -> tuple[int, int]:
        return self.n - self.s, self.r

    def scaled(self, t: Number) -> "QuermassTuple":
        t = _convert(t, self.mode)
        return QuermassTuple(self.n, tuple(t * w for w in self.W), self.mode, self.tol, self.check_af)


def coeffs_from_quermass(q: QuermassTuple) -> CoeffSequence:
    return CoeffSequence(q.n, tuple(binomial(q.n, i) * w for i, w in enumerate(q.W)), q.mode)


def quermass_from_coeffs(
    seq: CoeffSequence, r: int | None = None, s: int | None = None, tol: float = DEFAULT_TOL
) -> QuermassTuple:
    """Divide out the binomial weights.  ``r`` and ``s``, when given, must agree
    with the support of ``seq``."""
    lo, hi = support_interval(seq)
    if r is not None and r != hi:
        raise SteinerRejection(f"dim E = {r} does not match support end {hi}", index=hi, reason="dimension")
    if s is not None and seq.n - s != lo:
        raise SteinerRejection(
            f"dim K = {s} does not match support start {lo}", index=lo, reason="dimension"
        )
    if seq.mode == EXACT:
        W = tuple(x / binomial(seq.n, i) for i, x in enumerate(seq.a))
    else:
        W = tuple(x / float(binomial(seq.n, i)) for i, x in enumerate(seq.a))
    return QuermassTuple(seq.n, W, seq.mode, tol)


def af_equalities(q: QuermassTuple, tol: float = DEFAULT_TOL) -> list[int]:
    """Indices ``1 <= i <= n-1`` with ``W_i**2 == W_{i-1} W_{i+1}`` and ``W_i > 0``.

    Rows where ``W_i = 0`` hold with equality trivially (both sides vanish)
    and are not reported.
    """
    W = q.W
    out = []
    for i in range(1, q.n):
        if W[i] == 0:
            continue
        lhs, rhs = W[i] * W[i], W[i - 1] * W[i + 1]
        if q.mode == EXACT:
            eq = lhs == rhs
        else:
            eq = abs(lhs - rhs) <= tol * max(lhs, rhs)
        if eq:
            out.append(i)
    return out


class NewtonResult(NamedTuple):
    sequence: CoeffSequence
    r: int
    s: int


def newton_check(gammas: Iterable[Number], n: int | None = None) -> NewtonResult:
    """Build the monic polynomial with the given nonpositive real roots and
    validate it exactly.

    Floats are converted to the rationals they represent, so the check is an
    exact consequence of Newton's inequalities, not a tolerance test.
    """
    gs = [Fraction(g) for g in gammas]
    if n is None:
        n = len(gs)
    if len(gs) != n:
        raise ValueError(f"expected {n} roots, got {len(gs)}")
    for g in gs:
        if g > 0:
            raise ValueError(f"root {g} is positive; only nonpositive reals are allowed")
    coeffs = [Fraction(1)]
    for g in gs:
        # multiply by (z - g) = (z + |g|)
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] -= g * c
            nxt[i + 1] += c
        coeffs = nxt
    seq = CoeffSequence(n, tuple(coeffs), EXACT)
    r, s = validate_steiner(seq)
    return NewtonResult(seq, r, s)

