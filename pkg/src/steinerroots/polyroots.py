"""Complex polynomial roots and the root-side view of Steiner polynomials.

Root finding uses the Aberth-Ehrlich simultaneous iteration.  Zero roots are
never searched for: they are split off exactly from the leading zero
coefficients.  The single-polynomial entry point :func:`roots` additionally
merges numerically multiple roots, polishes every root with Newton steps on
the original polynomial and, for real coefficients, returns an exactly
conjugate-closed multiset.  :func:`aberth_batch` runs the bare iteration on
many polynomials of equal degree at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .ulc_core import (
    DEFAULT_TOL,
    EXACT,
    NUMERIC,
    CoeffSequence,
    SteinerRejection,
    binomial,
    c_coeff,
    support_interval,
    validate_steiner,
)

MAX_ITER = 500
# Starting points sit on a circle rotated by this angle so that no start is
# placed on a symmetry axis of a real polynomial.
START_ANGLE = math.sqrt(2.0) - 1.0
_EPS = np.finfo(float).eps


class RootFindingError(RuntimeError):
    """Aberth iteration failed to converge within the iteration cap."""

    def __init__(self, message: str, best=None, residuals=None):
        super().__init__(message)
        self.best = best
        self.residuals = residuals


@dataclass(frozen=True, eq=False)
class ComplexPolynomial:
    """Polynomial with complex coefficients in ascending powers, trailing
    (highest-power) zeros trimmed."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        nz = np.nonzero(c)[0]
        c = c[: nz[-1] + 1] if nz.size else np.zeros(1, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_sequence(cls, seq: CoeffSequence) -> "ComplexPolynomial":
        return cls(np.array([float(x) for x in seq.a], dtype=complex))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.coeffs.imag == 0))

    def __call__(self, z):
        return eval_poly(self, z)

    def derivative(self, k: int = 1) -> "ComplexPolynomial":
        c = self.coeffs
        for _ in range(k):
            if len(c) == 1:
                return ComplexPolynomial(np.zeros(1))
            c = c[1:] * np.arange(1, len(c))
        return ComplexPolynomial(c)

    def __eq__(self, other):
        return isinstance(other, ComplexPolynomial) and np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self):
        return f"ComplexPolynomial({self.coeffs.tolist()!r})"


def eval_poly(p: ComplexPolynomial | Sequence, z):
    """Horner evaluation, highest power first.  ``z`` may be an array."""
    c = p.coeffs if isinstance(p, ComplexPolynomial) else np.asarray(p, dtype=complex)
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z) + c[-1]
    for coef in c[-2::-1]:
        acc = acc * z + coef
    return acc if acc.ndim else complex(acc)


def _horner_batch(c: np.ndarray, z: np.ndarray):
    """Value, derivative and rounding bound of rows of ``c`` (ascending) at ``z``.

    ``c`` has shape (B, d+1), ``z`` shape (B, d)."""
    p = np.broadcast_to(c[:, -1:], z.shape).astype(complex)
    dp = np.zeros_like(p)
    az = np.abs(z)
    bound = np.broadcast_to(np.abs(c[:, -1:]), z.shape).astype(float)
    for k in range(c.shape[1] - 2, -1, -1):
        dp = dp * z + p
        p = p * z + c[:, k : k + 1]
        bound = bound * az + np.abs(c[:, k : k + 1])
    return p, dp, bound


def aberth_batch(coeffs, tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER):
    """Aberth-Ehrlich iteration on a batch of polynomials of equal degree.

    ``coeffs`` has shape (B, d+1), ascending powers, with nonzero constant and
    leading coefficients.  Returns ``(z, converged)`` with ``z`` of shape
    (B, d).  A root approximation is frozen once its correction falls below
    ``tol * (1 + |z|)`` or once ``|p(z)|`` reaches the rounding floor of the
    evaluation (the latter is what stops members of a multiple-root cluster).
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim == 1:
        c = c[None, :]
    B, d1 = c.shape
    d = d1 - 1
    if d < 1:
        raise ValueError("degree must be at least 1")
    if np.any(c[:, 0] == 0) or np.any(c[:, -1] == 0):
        raise ValueError("constant and leading coefficients must be nonzero")
    c = c / np.max(np.abs(c), axis=1, keepdims=True)

    radius = np.abs(c[:, 0] / c[:, -1]) ** (1.0 / d)
    angles = 2.0 * np.pi * np.arange(d) / d + START_ANGLE
    z = radius[:, None] * np.exp(1j * angles)[None, :]
    if d == 1:
        return -c[:, :1] / c[:, 1:2], np.ones((B, 1), dtype=bool)

    active = np.ones((B, d), dtype=bool)
    floor_factor = 8.0 * d1 * _EPS
    eye = np.eye(d, dtype=bool)
    for _ in range(max_iter):
        rows = np.nonzero(active.any(axis=1))[0]
        if rows.size == 0:
            break
        zr, cr, act = z[rows], c[rows], active[rows]
        p, dp, bound = _horner_batch(cr, zr)
        with np.errstate(divide="ignore", invalid="ignore"):
            diff = zr[:, :, None] - zr[:, None, :]
            diff[:, eye] = np.inf
            s = np.sum(1.0 / diff, axis=2)
            w = p / dp
            step = w / (1.0 - w * s)
        at_floor = np.abs(p) <= floor_factor * bound
        bad = ~np.isfinite(step)
        if np.any(bad):
            # coincident iterates or vanishing derivative: nudge off the spot
            step = np.where(bad, 1e-3 * (1.0 + np.abs(zr)) * np.exp(1j * START_ANGLE), step)
        step = np.where(act & ~at_floor, step, 0.0)
        zr = zr - step
        small = np.abs(step) < tol * (1.0 + np.abs(zr))
        act = act & ~(small | at_floor)
        z[rows] = zr
        active[rows] = act
    return z, ~active


class RootSet(NamedTuple):
    """Roots of a polynomial with multiplicities.

    ``values`` holds the distinct nonzero roots, ``multiplicities`` their
    counts; the root 0 is stored only as ``zero_multiplicity``.  ``residuals``
    are ``|p(root)|`` on the original polynomial, aligned with ``values``.
    """

    values: tuple
    multiplicities: tuple
    zero_multiplicity: int
    residuals: tuple
    degree: int

    def nonzero(self) -> list[complex]:
        out = []
        for v, m in zip(self.values, self.multiplicities):
            out.extend([v] * m)
        return out

    def all_roots(self) -> list[complex]:
        return [0j] * self.zero_multiplicity + self.nonzero()

    def __len__(self):
        return self.degree


def _taylor(c: np.ndarray, x: complex, upto: int) -> np.ndarray:
    """Taylor coefficients p^(j)(x)/j! for j <= upto via repeated synthetic division."""
    work = c[::-1].astype(complex).copy()  # descending
    out = []
    for _ in range(upto + 1):
        if len(work) == 0:
            out.append(0j)
            continue
        acc = work[0]
        q = [acc]
        for coef in work[1:]:
            acc = acc * x + coef
            q.append(acc)
        out.append(q[-1])
        work = np.array(q[:-1])
    return np.array(out)


def _taylor_noise(c: np.ndarray, x: complex, upto: int) -> np.ndarray:
    ac = np.abs(c)
    ax = abs(x)
    d = len(c) - 1
    bounds = []
    for j in range(upto + 1):
        total = 0.0
        for i in range(j, d + 1):
            total += math.comb(i, j) * ac[i] * ax ** (i - j)
        bounds.append(total)
    return 4.0 * (d + 1) * _EPS * np.array(bounds)


def _is_numerical_multiple(c: np.ndarray, x: complex, m: int) -> bool:
    t = _taylor(c, x, m - 1)
    noise = _taylor_noise(c, x, m - 1)
    return bool(np.all(np.abs(t) <= noise))


def _cluster(z: np.ndarray, c: np.ndarray, tol: float):
    """Merge approximations of multiple roots.

    A group of ``m`` approximations is merged when the centre refined on the
    ``(m-1)``-th derivative annihilates the first ``m - 1`` Taylor
    coefficients up to rounding noise, and every member lies within twice
    the larger of ``tol**(1/m)`` (relative) and the radius at which the
    ``m``-th Taylor term drops to the noise level.  That term itself has to
    stand well clear of its own noise.  The second radius is the
    spread rounding alone forces on an ``m``-fold root.
    """
    d = len(z)
    unassigned = list(range(d))
    groups = []
    while unassigned:
        i = unassigned[0]
        pts = z[unassigned]
        dist = np.abs(pts - z[i])
        order = np.argsort(dist, kind="stable")
        chosen = [unassigned[order[0]]]
        centre = z[i]
        for m in range(len(order), 1, -1):
            cand = pts[order[:m]]
            base = tol ** (1.0 / m) * max(1.0, abs(cand.mean()))
            spread = np.max(np.abs(cand - cand.mean()))
            if spread > 3.0 * base:
                continue
            # the iterates of a cluster stop unevenly, so their mean is only a
            # rough centre; refine it on the (m-1)-th derivative first
            refined = _newton_polish(c, cand.mean(), m, steps=20)
            t = _taylor(c, refined, m)
            noise = _taylor_noise(c, refined, m)
            natural = (noise[0] / abs(t[m])) ** (1.0 / m) if t[m] != 0 else np.inf
            if np.max(np.abs(cand - refined)) > 2.0 * max(base, natural):
                continue
            # the m-th term must be resolved, otherwise the whole expansion
            # is noise and any grouping would pass
            if abs(t[m]) > 100.0 * noise[m] and np.all(np.abs(t[:m]) <= noise[:m]):
                chosen = [unassigned[k] for k in order[:m]]
                centre = refined
                break
        groups.append((centre, len(chosen)))
        chosen_set = set(chosen)
        unassigned = [k for k in unassigned if k not in chosen_set]
    return groups


def _newton_polish(c: np.ndarray, x: complex, m: int, steps: int = 8, real: bool = False) -> complex:
    """Newton on the (m-1)-th derivative, which has a simple root at an m-fold root."""
    target = c
    for _ in range(m - 1):
        target = target[1:] * np.arange(1, len(target))
    deriv = target[1:] * np.arange(1, len(target))
    cur = complex(x.real, 0.0) if real else complex(x)
    fcur = abs(eval_poly(target, cur))
    for _ in range(steps):
        if fcur == 0.0:
            break
        dval = eval_poly(deriv, cur)
        if dval == 0:
            break
        nxt = cur - eval_poly(target, cur) / dval
        if real:
            nxt = complex(nxt.real, 0.0)
        fn = abs(eval_poly(target, nxt))
        if not fn < fcur:
            break
        cur, fcur = nxt, fn
    return cur


def _symmetrize(groups):
    """Match every root with the nearest conjugate of another root of equal
    multiplicity, or with itself (a real root).

    Greedy on globally sorted distances ``|z_i - conj(z_j)|``; the self cost
    ``2|Im z_i|`` is the distance to the real axis counted twice.  No distance
    threshold is applied: ill-conditioned roots of high-degree polynomials can
    sit far from their exact conjugate partner and must still be paired.
    Returns (reals, upper) where ``upper`` lists one representative per pair.
    """
    vals = np.array([v for v, _ in groups], dtype=complex)
    mults = [m for _, m in groups]
    k = len(vals)
    cost = np.abs(vals[:, None] - vals.conj()[None, :])
    same = np.array(mults)[:, None] == np.array(mults)[None, :]
    cost = np.where(same, cost, np.inf)
    iu, ju = np.triu_indices(k)
    order = np.lexsort((ju, iu, cost[iu, ju]))
    used = np.zeros(k, dtype=bool)
    reals, upper = [], []
    for t in order:
        a, b = int(iu[t]), int(ju[t])
        if used[a] or used[b] or not np.isfinite(cost[a, b]):
            continue
        if a == b:
            reals.append((complex(vals[a].real, 0.0), mults[a]))
            used[a] = True
        else:
            v = (vals[a] + vals[b].conjugate()) / 2.0
            if v.imag < 0:
                v = v.conjugate()
            if v.imag == 0:
                reals.extend([(complex(v.real, 0.0), mults[a])] * 2)
            else:
                upper.append((v, mults[a]))
            used[a] = used[b] = True
    return reals, upper


def roots(
    p: ComplexPolynomial | CoeffSequence | Sequence, tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER
) -> RootSet:
    """All roots of ``p`` with multiplicities.

    Raises :class:`RootFindingError` when the iteration does not converge
    within :data:`MAX_ITER` steps.
    """
    if isinstance(p, CoeffSequence):
        p = ComplexPolynomial.from_sequence(p)
    elif not isinstance(p, ComplexPolynomial):
        p = ComplexPolynomial(p)
    c = p.coeffs
    d = p.degree
    if d < 1:
        raise ValueError("polynomial must have degree >= 1")
    nz = np.nonzero(c)[0]
    zero_mult = int(nz[0])
    q = c[zero_mult:]
    real = p.is_real
    if len(q) == 1:
        return RootSet((), (), zero_mult, (), d)

    z, conv = aberth_batch(q, tol, max_iter)
    z, conv = z[0], conv[0]
    if not np.all(conv):
        res = np.abs(eval_poly(q, z))
        raise RootFindingError(
            f"Aberth iteration did not converge in {max_iter} steps (degree {len(q) - 1})",
            best=z.tolist(),
            residuals=res.tolist(),
        )
    qs = q / np.max(np.abs(q))
    groups = _cluster(z, qs, tol)
    if real:
        reals, upper = _symmetrize(groups)
        items = []
        for v, m in reals:
            items.append((_newton_polish(qs, v, m, real=True), m))
        for v, m in upper:
            w = _newton_polish(qs, v, m)
            if w.imag <= 0:  # polishing must not cross the axis
                w = v
            items.append((w, m))
            items.append((w.conjugate(), m))
    else:
        items = [(_newton_polish(qs, v, m), m) for v, m in groups]
    items.sort(key=lambda t: (t[0].real, t[0].imag))
    values = tuple(complex(v) for v, _ in items)
    mults = tuple(m for _, m in items)
    residuals = tuple(float(abs(eval_poly(c, v))) for v in values)
    return RootSet(values, mults, zero_mult, residuals, d)


def residual_bound(p: ComplexPolynomial, gamma: complex, factor: float = 1e-9) -> float:
    """``factor * sum|c_i| * max(1, |gamma|)**d`` -- the acceptance scale for ``|p(gamma)|``."""
    return factor * float(np.sum(np.abs(p.coeffs))) * max(1.0, abs(gamma)) ** p.degree


class AngleRoot(NamedTuple):
    gamma: complex
    alpha: float


def _flatten(rs) -> list[complex]:
    if isinstance(rs, RootSet):
        return rs.nonzero()
    return [complex(g) for g in rs]


def min_angle_root(rs: RootSet | Iterable[complex], tie_tol: float = 1e-12) -> AngleRoot:
    """Upper half-plane root with the smallest angle to the positive real axis.

    The root 0 and positive real roots are excluded.  Ties (within
    ``tie_tol``) go to the larger modulus, then to the smaller (Re, Im).
    """
    cands = []
    for g in _flatten(rs):
        if g == 0:
            continue
        if g.imag < 0:
            g = g.conjugate()
        if g.imag == 0 and g.real > 0:
            continue
        cands.append((math.atan2(g.imag, g.real), g))
    if not cands:
        raise ValueError("only trivial roots")
    amin = min(a for a, _ in cands)
    near = [(a, g) for a, g in cands if a <= amin + tie_tol]
    a, g = min(near, key=lambda t: (-abs(t[1]), t[1].real, t[1].imag))
    return AngleRoot(g, a)


def elem_sym(rs: RootSet | Iterable[complex]) -> list[complex]:
    """Elementary symmetric values ``e_0 = 1, e_1, ..., e_d`` of all roots
    (zero roots included)."""
    vals = rs.all_roots() if isinstance(rs, RootSet) else [complex(g) for g in rs]
    e = [1 + 0j]
    for g in vals:
        nxt = e + [0j]
        for i in range(len(e), 0, -1):
            nxt[i] += g * e[i - 1]
        e = nxt
    return e


def poly_from_roots(rs: RootSet | Iterable[complex], tol: float = DEFAULT_TOL) -> ComplexPolynomial:
    """Monic polynomial with the given roots.  Imaginary parts at or below
    ``tol`` (relative to ``max(1, |c_i|)``) are set to exactly zero."""
    e = elem_sym(rs)
    d = len(e) - 1
    c = np.array([(-1) ** (d - i) * e[d - i] for i in range(d + 1)], dtype=complex)
    if np.all(np.abs(c.imag) <= tol * np.maximum(1.0, np.abs(c))):
        c = c.real.astype(complex)
    return ComplexPolynomial(c)


def truncated_binomial(n: int, j: int, k: int) -> CoeffSequence:
    """``P^n_{j,k}(z) = sum_{i=j}^{k} C(n, i) z^i`` as an exact sequence."""
    if not (0 <= j < k <= n):
        raise ValueError(f"need 0 <= j < k <= n, got n={n}, j={j}, k={k}")
    return CoeffSequence(n, tuple(binomial(n, i) if j <= i <= k else 0 for i in range(n + 1)), EXACT)


def steiner_from_roots(
    gammas: Iterable[complex], n: int, r: int, s: int, tol: float = DEFAULT_TOL
) -> CoeffSequence:
    """Decide whether ``gammas`` are the roots of a Steiner polynomial of
    degree ``r`` in ``R^n`` with ``dim K = s``; return its monic coefficients.

    Uses the root-side form of the characterization: the elementary
    symmetric values must alternate in sign up to index ``r + s - n``, vanish
    beyond it, and satisfy ``c_{r-i,n} e_i^2 >= e_{i-1} e_{i+1}``.
    """
    gs = [complex(g) for g in gammas]
    if len(gs) != r:
        raise ValueError(f"expected r = {r} roots, got {len(gs)}")
    if not (0 <= r <= n and 0 <= s <= n and r + s >= n):
        raise ValueError(f"invalid dimensions n={n}, r={r}, s={s}")
    n_nonzero = sum(1 for g in gs if abs(g) > tol)
    if n_nonzero != r + s - n:
        raise ValueError(
            f"{n_nonzero} nonzero roots given, but dim K = {s} requires exactly {r + s - n}"
        )
    e = elem_sym(gs)
    scale = max(abs(x) for x in e)
    for i, x in enumerate(e):
        if abs(x.imag) > tol * max(1.0, abs(x)):
            raise SteinerRejection(
                f"e_{i} = {x} is not real: roots are not conjugate-closed", index=i, reason="sign"
            )
    er = [x.real for x in e]
    top = r + s - n
    for i in range(top + 1):
        if (-1) ** i * er[i] <= tol * scale:
            raise SteinerRejection(f"(-1)^{i} e_{i} = {(-1) ** i * er[i]} is not positive", index=i, reason="sign")
    for i in range(top + 1, r + 1):
        if abs(er[i]) > tol * scale:
            raise SteinerRejection(f"e_{i} = {er[i]} should vanish", index=i, reason="sign")
        er[i] = 0.0
    for i in range(1, r):
        c = float(c_coeff(n, r - i))
        lhs = c * er[i] ** 2
        rhs = er[i - 1] * er[i + 1]
        if lhs - rhs < -tol * max(lhs, abs(rhs)):
            raise SteinerRejection(
                f"c_{{{r - i},{n}}} e_{i}^2 = {lhs} < e_{i - 1} e_{i + 1} = {rhs}", index=i, reason="ulc"
            )
    a = [0.0] * (n + 1)
    for i in range(top + 1):
        a[r - i] = (-1) ** i * er[i]
    seq = CoeffSequence(n, tuple(a), NUMERIC)
    validate_steiner(seq, tol)
    return seq


def derivative_steiner(seq: CoeffSequence, tol: float = DEFAULT_TOL) -> CoeffSequence:
    """Derivative, as a Steiner sequence in ambient dimension ``n - 1``."""
    validate_steiner(seq, tol)
    if seq.n < 2:
        raise ValueError("derivative of a 1-dimensional Steiner polynomial has no ambient space")
    out = CoeffSequence(seq.n - 1, tuple((i + 1) * seq.a[i + 1] for i in range(seq.n)), seq.mode)
    validate_steiner(out, tol)
    return out


def antiderivative_cap(seq: CoeffSequence):
    """Largest admissible integration constant ``n a_0^2 / ((n+1) a_1)``
    (infinite when ``a_1 = 0``)."""
    a0, a1 = seq.a[0], seq.a[1]
    if a1 == 0:
        return math.inf
    if seq.mode == EXACT:
        return Fraction(seq.n) * a0 * a0 / ((seq.n + 1) * a1)
    return seq.n * a0 * a0 / ((seq.n + 1) * a1)


def antiderivative_steiner(seq: CoeffSequence, c0=0, tol: float = DEFAULT_TOL) -> CoeffSequence:
    """Antiderivative with constant term ``c0``, as a Steiner sequence in
    ambient dimension ``n + 1``.

    A positive ``c0`` is allowed only for full-dimensional ``K`` (``a_0 > 0``)
    and up to ``n a_0^2 / ((n+1) a_1)``.
    """
    validate_steiner(seq, tol)
    c0 = Fraction(c0) if seq.mode == EXACT else float(c0)
    if c0 < 0:
        raise ValueError("integration constant must be nonnegative")
    if c0 > 0:
        if seq.a[0] == 0:
            raise ValueError("a positive constant needs a_0 > 0 (dim K = n)")
        cap = antiderivative_cap(seq)
        limit = cap if seq.mode == EXACT else cap * (1.0 + tol)
        if c0 > limit:
            raise SteinerRejection(
                f"constant {c0} exceeds the bound n a_0^2/((n+1) a_1) = {cap}", index=0, reason="ulc"
            )
    a = [c0] + [seq.a[i - 1] / i for i in range(1, seq.n + 2)]
    out = CoeffSequence(seq.n + 1, tuple(a), seq.mode)
    validate_steiner(out, tol)
    return out


def reciprocal(seq: CoeffSequence) -> CoeffSequence:
    """Swap the roles of K and E: ``a_i -> a_{n-i}``, nonzero roots ``z -> 1/z``."""
    return CoeffSequence(seq.n, tuple(reversed(seq.a)), seq.mode)


def sequence_roots(seq: CoeffSequence, tol: float = DEFAULT_TOL) -> RootSet:
    """Roots of a Steiner sequence; the zero multiplicity is the support start."""
    lo, _ = support_interval(seq)
    rs = roots(seq, tol)
    assert rs.zero_multiplicity == lo
    return rs
