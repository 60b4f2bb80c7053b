"""Explicit simplices K, E realizing a prescribed tuple of quermassintegrals.

For a tuple with support ``[n - s, r]`` the bodies are

    K = mu * conv{0, e_{n-s+1}, ..., e_n}
    E = mu * conv{0, alpha_1 e_1, ..., alpha_r e_r}

with ``alpha_1 = ... = alpha_{n-s} = (n! W_{n-s})**(1/(n-s))`` and
``alpha_i = W_i / W_{i-1}`` for ``n-s < i <= r``.  Then
``W_i(K; E) = mu**n / n! * alpha_1 ... alpha_i`` on the support.  The global
factor ``mu`` is 1 unless ``s = n``, where there is no head block to absorb
``W_0`` and ``mu = (n! W_0)**(1/n)`` is used instead.

The construction is checked against an independent oracle: the convex hull
volume of ``K + lambda E`` sampled at ``lambda = 1..n+1`` and interpolated back
into quermassintegrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import hull
from .hull import DISSECTION, HULL_EXACT, MONTE_CARLO, VolumeSample
from .ulc_core import QuermassTuple, binomial

EXACT_MAX_DIM = 4
EXACT_REL_TOL = 1e-6


class RealizationError(ValueError):
    def __init__(self, message: str, stage: str, index: int | None = None):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
        self.index = index


@dataclass(frozen=True, eq=False)
class SimplexPair:
    n: int
    r: int
    s: int
    alphas: tuple
    scale: float
    K_vertices: np.ndarray
    E_vertices: np.ndarray

    def quermass(self) -> list[float]:
        """Closed form ``W_i(K;E) = mu^n / n! * alpha_1 ... alpha_i`` on the support."""
        n = self.n
        out = []
        for i in range(n + 1):
            if n - self.s <= i <= self.r:
                out.append(self.scale**n / math.factorial(n) * math.prod(self.alphas[:i]))
            else:
                out.append(0.0)
        return out


def alphas_from_quermass(q: QuermassTuple) -> tuple:
    """The edge lengths ``alpha_1..alpha_n`` of E.

    Raises :class:`RealizationError` (stage ``"alphas"``) if the middle block
    is not nonincreasing, which happens exactly when the input violates
    ``W_i^2 >= W_{i-1} W_{i+1}``.
    """
    n, r, s = q.n, q.r, q.s
    W = [float(w) for w in q.W]
    head = n - s
    alphas = [0.0] * n
    if head > 0:
        a = (math.factorial(n) * W[head]) ** (1.0 / head)
        for i in range(head):
            alphas[i] = a
    for i in range(head + 1, r + 1):
        alphas[i - 1] = W[i] / W[i - 1]
    for i in range(head + 1, r):
        if alphas[i - 1] < alphas[i] * (1.0 - 1e-12):
            raise RealizationError(
                f"alpha_{i} = {alphas[i - 1]} < alpha_{i + 1} = {alphas[i]}: "
                f"W_{i}^2 < W_{i - 1} W_{i + 1}",
                stage="alphas",
                index=i,
            )
    return tuple(alphas)


def build_simplex_pair(q: QuermassTuple) -> SimplexPair:
    n, r, s = q.n, q.r, q.s
    alphas = alphas_from_quermass(q)
    mu = 1.0
    if s == n:
        mu = (math.factorial(n) * float(q.W[0])) ** (1.0 / n)
    eye = np.eye(n)
    K = np.vstack([np.zeros(n)] + [eye[i - 1] for i in range(n - s + 1, n + 1)]) * mu
    E = np.vstack([np.zeros(n)] + [alphas[j - 1] * eye[j - 1] for j in range(1, r + 1)]) * mu
    return SimplexPair(n, r, s, alphas, mu, K, E)


def minkowski_vertices(sp: SimplexPair, lam: float = 1.0) -> np.ndarray:
    """Reduced vertex set of ``K + lam E``: the origin, ``e_i + lam q_j`` for
    ``j <= i``, plus ``e_i`` for ``i > r`` and ``lam q_j`` for ``j <= n - s``."""
    n, r, s = sp.n, sp.r, sp.s
    e = np.eye(n)
    q = [lam * sp.alphas[j] * e[j] for j in range(n)]
    pts = [np.zeros(n)]
    for i in range(n - s + 1, n + 1):
        for j in range(1, min(i, r) + 1):
            pts.append(e[i - 1] + q[j - 1])
    for i in range(r + 1, n + 1):
        pts.append(e[i - 1])
    for j in range(1, n - s + 1):
        pts.append(q[j - 1])
    P = np.unique(np.array(pts), axis=0)
    return P * sp.scale


def product_vertices(sp: SimplexPair, lam: float = 1.0) -> np.ndarray:
    """All pairwise sums of vertices of K and lam E."""
    return np.array([k + lam * x for k in sp.K_vertices for x in sp.E_vertices])


def dissection_volume(sp: SimplexPair, lam: float) -> VolumeSample:
    """``vol(K + lam E)`` from the interior-disjoint pieces ``K_m + E_m``:
    the piece for ``m`` has volume ``C(n, m-1) / n! * alpha_1 ... alpha_{m-1}``."""
    n = sp.n
    total = 0.0
    for m in range(n - sp.s + 1, sp.r + 2):
        i = m - 1
        total += binomial(n, i) * math.prod(sp.alphas[:i]) * lam**i
    total *= sp.scale**n / math.factorial(n)
    return VolumeSample(lam, total, DISSECTION)


def sample_volume(sp: SimplexPair, lam: float, method: str = "auto", samples: int = hull.MC_SAMPLES) -> VolumeSample:
    if method == DISSECTION:
        return dissection_volume(sp, lam)
    return hull.hull_volume(minkowski_vertices(sp, lam), lam=lam, method=method, samples=samples)


@dataclass(frozen=True)
class QuermassEstimate:
    """Quermassintegrals recovered by interpolating sampled volumes."""

    n: int
    W: tuple
    halfwidths: tuple
    method: str
    samples: tuple


def _solve_exact(lams, vals):
    """Solve the Vandermonde system ``sum_i x_i lam^i = val`` in rationals."""
    m = len(lams)
    A = [[Fraction(l) ** i for i in range(m)] + [Fraction(v)] for l, v in zip(lams, vals)]
    for col in range(m):
        piv = next(rw for rw in range(col, m) if A[rw][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        for rw in range(m):
            if rw != col and A[rw][col] != 0:
                f = A[rw][col] / A[col][col]
                A[rw] = [x - f * y for x, y in zip(A[rw], A[col])]
    return [A[i][m] / A[i][i] for i in range(m)]


def quermass_via_interpolation(
    sp: SimplexPair, method: str = "auto", samples: int = hull.MC_SAMPLES
) -> QuermassEstimate:
    """Sample ``vol(K + lam E)`` at ``lam = 1..n+1`` and solve for ``W_0..W_n``.

    Exact-method samples (hull recursion, dissection) are solved in rational
    arithmetic on the sampled floats; Monte Carlo samples carry their
    confidence half-widths through the inverse Vandermonde matrix.
    """
    n = sp.n
    lams = list(range(1, n + 2))
    vs = [sample_volume(sp, lam, method, samples) for lam in lams]
    binom = [binomial(n, i) for i in range(n + 1)]
    used = vs[0].method
    if used == MONTE_CARLO:
        V = np.array([[float(l) ** i for i in range(n + 1)] for l in lams])
        Vinv = np.linalg.inv(V)
        coef = Vinv @ np.array([v.volume for v in vs])
        half = np.abs(Vinv) @ np.array([v.ci_halfwidth for v in vs])
        W = tuple(float(coef[i] / binom[i]) for i in range(n + 1))
        H = tuple(float(half[i] / binom[i]) for i in range(n + 1))
    else:
        coef = _solve_exact(lams, [v.volume for v in vs])
        W = tuple(float(coef[i] / binom[i]) for i in range(n + 1))
        H = (0.0,) * (n + 1)
    return QuermassEstimate(n, W, H, used, tuple(vs))


@dataclass
class RealizationReport:
    n: int
    passed: bool
    stage: str
    message: str = ""
    alphas: tuple = ()
    target: tuple = ()
    recovered: tuple = ()
    halfwidths: tuple = ()
    method: str = ""
    max_rel_error: float = math.nan
    volume_discrepancies: list = field(default_factory=list)
    hull_contains_products: bool | None = None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "passed": self.passed,
            "stage": self.stage,
            "message": self.message,
            "method": self.method,
            "alphas": list(self.alphas),
            "target": list(self.target),
            "recovered": list(self.recovered),
            "halfwidths": list(self.halfwidths),
            "max_rel_error": self.max_rel_error,
            "volume_discrepancies": self.volume_discrepancies,
            "hull_contains_products": self.hull_contains_products,
        }


def verify_realization(
    q: QuermassTuple, method: str = "auto", samples: int = hull.MC_SAMPLES, rel_tol: float = EXACT_REL_TOL
) -> RealizationReport:
    """Build the simplex pair for ``q`` and check it independently.

    Stages: ``alphas`` -> ``build`` -> ``volumes`` (dissection formula against
    the hull oracle at every ``lam``) -> ``interpolation`` (recovered tuple
    against ``q``).  Relative errors are taken against ``max_i W_i``.  With
    the exact hull oracle the verdict needs ``max_rel_error <= rel_tol``;
    with Monte Carlo every component must lie within 3 half-widths.
    ``method="dissection"`` only checks the closed form (any dimension).
    """
    target = tuple(float(w) for w in q.W)
    report = RealizationReport(q.n, False, "alphas", target=target)
    try:
        alphas = alphas_from_quermass(q)
    except RealizationError as err:
        report.message = str(err)
        return report
    report.alphas = alphas
    report.stage = "build"
    try:
        sp = build_simplex_pair(q)
    except (ValueError, ArithmeticError) as err:
        report.message = str(err)
        return report
    if method == "auto":
        method = HULL_EXACT if q.n <= EXACT_MAX_DIM else MONTE_CARLO
    report.method = method
    wmax = max(target)

    if method == DISSECTION:
        report.stage = "closed_form"
        got = sp.quermass()
        err = max(abs(a - b) for a, b in zip(got, target)) / wmax
        report.recovered = tuple(got)
        report.max_rel_error = err
        report.passed = err <= rel_tol
        report.stage = "done"
        return report

    report.stage = "volumes"
    est = quermass_via_interpolation(sp, method, samples)
    for v in est.samples:
        d = dissection_volume(sp, v.lam).volume
        report.volume_discrepancies.append(
            {"lam": v.lam, "dissection": d, "oracle": v.volume, "ci_halfwidth": v.ci_halfwidth,
             "rel_diff": abs(d - v.volume) / max(abs(v.volume), 1e-300)}
        )
    if method == HULL_EXACT:
        ok = True
        for lam in range(1, q.n + 2):
            ok &= bool(np.all(hull.contains(minkowski_vertices(sp, lam), product_vertices(sp, lam))))
        report.hull_contains_products = ok
        if not ok:
            report.message = "a vertex of the full product set lies outside the reduced hull"
            return report

    report.stage = "interpolation"
    report.recovered = est.W
    report.halfwidths = est.halfwidths
    errs = [abs(a - b) for a, b in zip(est.W, target)]
    report.max_rel_error = max(errs) / wmax
    if est.method == MONTE_CARLO:
        report.passed = all(e <= 3.0 * h for e, h in zip(errs, est.halfwidths))
    else:
        report.passed = report.max_rel_error <= rel_tol
    if not report.passed:
        report.message = f"recovered tuple deviates: max relative error {report.max_rel_error:.3g}"
    report.stage = "done"
    return report


def write_points(path, vertices) -> None:
    """One point per line, coordinates space-separated with round-trip precision."""
    lines = [" ".join(repr(float(x)) for x in row) for row in np.asarray(vertices, dtype=float)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_points(path) -> np.ndarray:
    rows = [list(map(float, ln.split())) for ln in Path(path).read_text().splitlines() if ln.strip()]
    return np.array(rows)
