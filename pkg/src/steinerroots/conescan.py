"""The cones of roots of n-dimensional relative Steiner polynomials.

Every root of such a polynomial, conjugated into the upper half-plane, lies in
a closed convex cone around the non-positive real axis.  The cone is described
by its opening angle ``theta(n)``, measured from the positive real axis: a
point ``z`` of the upper half-plane is in the cone iff ``arg z >= theta(n)``.
The angle is known in closed form for ``n <= 4``.  For larger ``n`` this module
only produces witnesses: explicit Steiner sequences with a root at a small
angle, which bound ``theta(n)`` from above.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from .polyroots import (
    AngleRoot,
    RootFindingError,
    aberth_batch,
    eval_poly,
    min_angle_root,
    roots,
    truncated_binomial,
)
from .ulc_core import (
    EXACT,
    NUMERIC,
    CoeffSequence,
    QuermassTuple,
    SteinerRejection,
    af_equalities,
    binomial,
    is_steiner,
    quermass_from_coeffs,
    validate_steiner,
)

TIE_TOL = 1e-6
STABILITY_THRESHOLD = 1e-9
DEFAULT_SEED = 0x5EED
DEFAULT_SAMPLES = 10**5
SAMPLER_MARGIN = 1e-6
STEP_BOUND = 6.0  # optimizer: |log W_i - log W_{i-1}| <= STEP_BOUND keeps roots resolvable
MAX_SCAN_N = 64
MAX_ACCUMULATION_N = 160

EXACT_ANGLES = {1: math.pi, 2: math.pi, 3: 5 * math.pi / 6, 4: 3 * math.pi / 4}

INSIDE = "inside_certified"
OUTSIDE = "outside_certified"
UNKNOWN = "unknown"

TABLE_SCAN = "table_scan"
OPTIMIZER = "optimizer"


# ---------------------------------------------------------------------------
# truncated binomial scans


@dataclass(frozen=True)
class ScanRow:
    n: int
    j: int
    k: int
    gamma: complex
    alpha: float
    all_minimal: tuple = ()
    residual: float = 0.0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "j": self.j,
            "k": self.k,
            "re_gamma": self.gamma.real,
            "im_gamma": self.gamma.imag,
            "alpha": self.alpha,
            "all_minimal": [list(p) for p in self.all_minimal],
        }


def _family_minimum(n: int, j: int, k: int) -> AngleRoot | None:
    try:
        rs = roots(truncated_binomial(n, j, k))
    except RootFindingError as err:
        raise RootFindingError(f"P^{n}_{{{j},{k}}}: {err}", err.best, err.residuals) from err
    try:
        return min_angle_root(rs)
    except ValueError:
        return None


def scan_family(n: int, j_min: int = 1):
    """Minimal-angle root of every ``P^n_{j,k}`` with ``j_min <= j < k <= n``,
    as a list of ``((j, k), AngleRoot)``."""
    out = []
    for j in range(j_min, n):
        for k in range(j + 1, n + 1):
            ar = _family_minimum(n, j, k)
            if ar is not None:
                out.append(((j, k), ar))
    return out


def table1_scan(n: int, tie_tol: float = TIE_TOL) -> ScanRow:
    """Truncated binomial ``P^n_{j,k}`` (``0 < j < k <= n``) with the root of
    smallest angle.

    ``P^n_{j,k}`` and ``P^n_{n-k,n-j}`` have reciprocal roots and hence equal
    angles, so exact ties are the rule.  Among pairs within ``tie_tol`` of the
    minimum the canonical row takes the root of larger modulus, then the
    smallest ``j``, then the smallest ``k``; all such pairs are recorded.
    """
    if not (3 <= n <= MAX_SCAN_N):
        raise ValueError(f"table scan needs 3 <= n <= {MAX_SCAN_N}, got {n}")
    found = scan_family(n)
    amin = min(ar.alpha for _, ar in found)
    near = sorted(((jk, ar) for jk, ar in found if ar.alpha <= amin + tie_tol), key=lambda t: t[0])
    # modulus ties are decided at the same resolution as angle ties
    best_mod = max(abs(ar.gamma) for _, ar in near)
    (j, k), ar = next(t for t in near if abs(t[1].gamma) >= best_mod - tie_tol)
    seq = truncated_binomial(n, j, k)
    res = float(abs(eval_poly(np.array(seq.as_floats()), ar.gamma)))
    return ScanRow(n, j, k, ar.gamma, ar.alpha, tuple(jk for jk, _ in near), res)


def exact_cone_angle(n: int) -> float:
    """Opening angle of the cone for ``n <= 4``, from its half-plane description."""
    if n not in (2, 3, 4):
        raise ValueError(f"no exact description in scope for n = {n}")
    return EXACT_ANGLES[n]


# ---------------------------------------------------------------------------
# cone estimates and membership


@dataclass(frozen=True)
class Witness:
    j: int | None
    k: int | None
    gamma: complex
    source: str
    sequence: tuple = ()  # coefficients a_0..a_n when not a truncated binomial


@dataclass(frozen=True)
class ConeEstimate:
    n: int
    kind: str  # "exact" or "witnessed"
    theta: float
    witness: Witness | None = None

    def witness_sequence(self) -> CoeffSequence | None:
        w = self.witness
        if w is None:
            return None
        if w.j is not None:
            return truncated_binomial(self.n, w.j, w.k)
        return CoeffSequence(self.n, w.sequence, NUMERIC)

    def to_dict(self) -> dict:
        w = self.witness
        return {
            "n": self.n,
            "kind": self.kind,
            "theta": self.theta,
            "witness": None
            if w is None
            else {
                "j": w.j,
                "k": w.k,
                "gamma": [w.gamma.real, w.gamma.imag],
                "source": w.source,
                "sequence": list(w.sequence),
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ConeEstimate":
        w = d.get("witness")
        wit = None
        if w is not None:
            wit = Witness(w["j"], w["k"], complex(*w["gamma"]), w["source"], tuple(w.get("sequence", ())))
        return cls(int(d["n"]), d["kind"], float(d["theta"]), wit)


def estimate_from_row(row: ScanRow) -> ConeEstimate:
    kind = "exact" if row.n <= 4 else "witnessed"
    theta = EXACT_ANGLES[row.n] if row.n <= 4 else row.alpha
    return ConeEstimate(row.n, kind, theta, Witness(row.j, row.k, row.gamma, TABLE_SCAN))


def build_estimates(n_values) -> dict[int, ConeEstimate]:
    store = {}
    for n in n_values:
        if n <= 2:
            store[n] = ConeEstimate(n, "exact", math.pi, None)
        else:
            store[n] = estimate_from_row(table1_scan(n))
    return store


def save_estimates(store: dict[int, ConeEstimate], path) -> None:
    doc = {str(n): store[n].to_dict() for n in sorted(store)}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_estimates(path) -> dict[int, ConeEstimate]:
    doc = json.loads(Path(path).read_text())
    return {int(k): ConeEstimate.from_dict(v) for k, v in doc.items()}


def monotone_violations(store: dict[int, ConeEstimate]) -> list[int]:
    """Consecutive stored dimensions ``n`` where ``theta(n+1) > theta(n)``."""
    ns = sorted(store)
    return [a for a, b in zip(ns, ns[1:]) if b == a + 1 and store[b].theta > store[a].theta]


@dataclass(frozen=True)
class MembershipVerdict:
    gamma: complex
    n: int
    verdict: str
    rule: str
    certificate: CoeffSequence | None = None
    witness_gamma: complex | None = None

    def to_dict(self) -> dict:
        return {
            "gamma": [self.gamma.real, self.gamma.imag],
            "n": self.n,
            "verdict": self.verdict,
            "rule": self.rule,
            "certificate": None if self.certificate is None else [float(x) for x in self.certificate.a],
            "witness_gamma": None
            if self.witness_gamma is None
            else [self.witness_gamma.real, self.witness_gamma.imag],
        }


def _halfplane_inside(z: complex, n: int) -> bool:
    x, y = z.real, z.imag
    if n <= 2:
        return y == 0 and x <= 0
    if n == 3:
        return x + math.sqrt(3.0) * y <= 0
    return x + y <= 0


def prism_embed(seq: CoeffSequence) -> CoeffSequence:
    """Multiply by ``z``: the same roots plus ``0``, one dimension up
    (``E`` is replaced by the prism over ``E`` of height 1)."""
    out = CoeffSequence(seq.n + 1, (0,) + tuple(seq.a), seq.mode)
    validate_steiner(out)
    return out


def membership(gamma: complex, n: int, estimates: dict[int, ConeEstimate] | None = None) -> MembershipVerdict:
    """Decide whether ``gamma`` lies in the root cone of dimension ``n``.

    Rules in order: the non-positive real axis is inside, the positive real
    axis is outside, ``n <= 4`` uses the exact half-planes, and for ``n >= 5``
    a point at angle at least that of a stored witness is inside by
    convexity.  Nothing is ever certified outside for ``n >= 5``.  A witness
    stored for a smaller dimension is lifted with :func:`prism_embed`.
    """
    g = complex(gamma)
    if g.imag < 0:
        g = g.conjugate()
    if g.imag == 0:
        if g.real <= 0:
            if g.real == 0:
                cert = truncated_binomial(n, 1, n) if n >= 2 else CoeffSequence(1, (0, 1))
            else:
                cert = CoeffSequence(n, (Fraction(-g.real), 1) + (0,) * (n - 1), EXACT)
            return MembershipVerdict(g, n, INSIDE, "nonpositive_real_axis", cert, g)
        return MembershipVerdict(g, n, OUTSIDE, "positive_real_axis")
    if n <= 4:
        inside = _halfplane_inside(g, n)
        rule = f"exact_cone_n{max(n, 2)}"
        return MembershipVerdict(g, n, INSIDE if inside else OUTSIDE, rule)
    stored = [m for m in (estimates or {}) if m <= n and estimates[m].witness is not None]
    if not stored:
        return MembershipVerdict(g, n, UNKNOWN, "no_witness")
    # the smallest stored angle among dimensions m <= n, since R(m) is inside R(n)
    m = min(stored, key=lambda m: (estimates[m].theta, -m))
    est = estimates[m]
    arg = math.atan2(g.imag, g.real)
    if arg >= est.theta:
        cert = est.witness_sequence()
        for _ in range(n - m):
            cert = prism_embed(cert)
        return MembershipVerdict(g, n, INSIDE, f"convexity_witness_n{m}", cert, est.witness.gamma)
    return MembershipVerdict(g, n, UNKNOWN, f"below_witness_n{m}")


# ---------------------------------------------------------------------------
# random ULC sequences


def _log_quermass(rng: np.random.Generator, m: int, count: int) -> np.ndarray:
    """``count`` strictly concave log-profiles of length ``m + 1``."""
    spread = np.exp(rng.uniform(math.log(0.02), math.log(4.0), size=(count, 1)))
    steps = rng.normal(0.0, 1.0, size=(count, m)) * spread
    steps = -np.sort(-steps, axis=1) - SAMPLER_MARGIN * np.arange(m)
    start = rng.normal(0.0, 1.0, size=(count, 1))
    return np.concatenate([start, start + np.cumsum(steps, axis=1)], axis=1)


def _to_sequence(n: int, lo: int, logw: np.ndarray) -> CoeffSequence:
    a = [0.0] * (n + 1)
    for t, lw in enumerate(logw):
        a[lo + t] = binomial(n, lo + t) * math.exp(lw)
    return CoeffSequence(n, tuple(a), NUMERIC)


def random_ulc_sequence(n: int, support: tuple[int, int], seed: int = DEFAULT_SEED) -> CoeffSequence:
    """A random Steiner sequence with positive support exactly ``support``.

    Samples ``log W_i`` with strictly decreasing increments, so
    ``W_i^2 > W_{i-1} W_{i+1}`` holds with a relative margin of about
    ``1e-6`` and the result is accepted in both arithmetic modes.
    """
    lo, hi = support
    if not (0 <= lo < hi <= n):
        raise ValueError(f"support must satisfy 0 <= lo < hi <= n, got {support} for n={n}")
    rng = np.random.default_rng(seed)
    seq = _to_sequence(n, lo, _log_quermass(rng, hi - lo, 1)[0])
    validate_steiner(seq)
    return seq


def random_ulc_batch(n: int, count: int, seed: int = DEFAULT_SEED):
    """``count`` random Steiner sequences with random supports, as a list of
    ``(lo, hi, a)`` with ``a`` a float array of length ``n + 1``."""
    rng = np.random.default_rng([seed, n])
    lo = rng.integers(0, n, size=count)
    hi = lo + 1 + (rng.random(count) * (n - lo)).astype(int)
    out = []
    for m in range(1, n + 1):
        idx = np.nonzero(hi - lo == m)[0]
        if idx.size == 0:
            continue
        logw = _log_quermass(rng, m, idx.size)
        for row, i in zip(logw, idx):
            a = np.zeros(n + 1)
            l = int(lo[i])
            a[l : l + m + 1] = [binomial(n, l + t) for t in range(m + 1)] * np.exp(row)
            out.append((int(i), l, l + m, a))
    out.sort(key=lambda t: t[0])
    return [(l, h, a) for _, l, h, a in out]


# ---------------------------------------------------------------------------
# stability


@dataclass
class StabilityReport:
    n: int
    samples: int
    seed: int
    families_scanned: int
    offenders: list = field(default_factory=list)  # (source, label, root)
    max_real_part: float = -math.inf
    fallbacks: int = 0

    @property
    def weakly_stable(self) -> bool:
        return not self.offenders

    def witness(self, j: int, k: int):
        return [o for o in self.offenders if o[0] == TABLE_SCAN and o[1] == (j, k)]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed,
            "families_scanned": self.families_scanned,
            "max_real_part": self.max_real_part,
            "fallbacks": self.fallbacks,
            "offenders": [
                {"source": s, "label": list(l) if isinstance(l, tuple) else l, "root": [g.real, g.imag]}
                for s, l, g in self.offenders
            ],
        }


def _batch_roots(rows: np.ndarray):
    """Roots of equal-degree rows; rows the batch iteration leaves unconverged
    are redone one at a time with clustering (``None`` marks those)."""
    z, ok = aberth_batch(rows)
    done = ok.all(axis=1)
    return [z[i] if done[i] else None for i in range(len(rows))]


def weak_stability_search(
    n: int, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED, threshold: float = STABILITY_THRESHOLD
) -> StabilityReport:
    """Look for roots with ``Re z > threshold`` among all ``P^n_{j,k}``
    (``0 <= j < k <= n``) and ``samples`` random Steiner sequences."""
    if n < 2:
        raise ValueError("stability search needs n >= 2")
    rep = StabilityReport(n, samples, seed, 0)

    def record(source, label, zs):
        for g in zs:
            g = complex(g)
            rep.max_real_part = max(rep.max_real_part, g.real)
            if g.real > threshold and g.imag >= 0:
                rep.offenders.append((source, label, g))

    for j in range(0, n):
        for k in range(j + 1, n + 1):
            rep.families_scanned += 1
            record(TABLE_SCAN, (j, k), roots(truncated_binomial(n, j, k)).nonzero())

    batch = random_ulc_batch(n, samples, seed)
    by_degree: dict[int, list] = {}
    for idx, (lo, hi, a) in enumerate(batch):
        by_degree.setdefault(hi - lo, []).append((idx, a[lo : hi + 1]))
    for deg in sorted(by_degree):
        items = by_degree[deg]
        rows = np.array([a for _, a in items])
        for (idx, a), zs in zip(items, _batch_roots(rows)):
            if zs is None:
                rep.fallbacks += 1
                zs = roots(list(a)).nonzero()
            record("random", idx, zs)
    rep.offenders.sort(key=lambda o: (o[0] != TABLE_SCAN, str(o[1]), -o[2].real))
    return rep


# ---------------------------------------------------------------------------
# optimizer


@dataclass
class OptimizerResult:
    estimate: ConeEstimate
    sequence: CoeffSequence
    table_alpha: float
    candidates: list = field(default_factory=list)  # (alpha, CoeffSequence) per start

    @property
    def improved(self) -> bool:
        return self.estimate.witness.source == OPTIMIZER


def _sequence_from_steps(n: int, lo: int, steps: np.ndarray) -> np.ndarray:
    logw = np.concatenate([[0.0], np.cumsum(steps)])
    a = np.zeros(n + 1)
    a[lo : lo + len(logw)] = [binomial(n, lo + t) for t in range(len(logw))] * np.exp(logw - logw.max())
    return a


def _angle_of(a: np.ndarray, lo: int, hi: int) -> tuple[float, complex]:
    q = a[lo : hi + 1]
    if hi - lo < 2:
        return math.pi, complex(-q[0] / q[-1]) if len(q) == 2 else complex(-1)
    z, ok = aberth_batch(q[None, :])
    zs = z[0] if ok.all() else np.array(roots(list(q)).nonzero())
    ar = min_angle_root(list(zs))
    return ar.alpha, ar.gamma


def angle_optimizer(
    n: int, restarts: int = 8, seed: int = DEFAULT_SEED, max_iter: int = 400, penalty: float = 10.0
) -> OptimizerResult:
    """Derivative-free search for Steiner sequences with a root at a smaller
    angle than the best truncated binomial.

    Variables are the increments of ``log W_i`` over a support interval;
    feasibility means nonincreasing increments.  Nelder-Mead minimizes the
    minimal root angle of the projected (sorted) point plus a hinge penalty
    on the violation.  Starts: the table row itself (all increments zero)
    and ``restarts`` random feasible points on random supports.  The result
    is never worse than the table row.
    """
    if n < 3:
        raise ValueError("angle optimizer needs n >= 3")
    row = table1_scan(n)
    rng = np.random.default_rng([seed, n])
    starts = [(row.j, row.k, np.zeros(row.k - row.j))]
    for _ in range(restarts):
        lo = int(rng.integers(0, n - 1))
        hi = int(rng.integers(lo + 2, n + 1))
        starts.append((lo, hi, np.diff(_log_quermass(rng, hi - lo, 1)[0])))

    best_alpha, best_gamma = row.alpha, row.gamma
    best_seq = truncated_binomial(n, row.j, row.k)
    source = TABLE_SCAN
    candidates = []
    for lo, hi, x0 in starts:

        def objective(x, lo=lo, hi=hi):
            proj = -np.sort(-np.clip(x, -STEP_BOUND, STEP_BOUND))
            viol = float(np.sum(np.maximum(0.0, np.diff(x))))
            viol += float(np.sum(np.maximum(0.0, np.abs(x) - STEP_BOUND)))
            return _angle_of(_sequence_from_steps(n, lo, proj), lo, hi)[0] + penalty * viol

        res = minimize(objective, x0, method="Nelder-Mead", options={"maxiter": max_iter, "xatol": 1e-10, "fatol": 1e-12})
        steps = -np.sort(-np.clip(res.x, -STEP_BOUND, STEP_BOUND))
        a = _sequence_from_steps(n, lo, steps)
        seq = CoeffSequence(n, tuple(a.tolist()), NUMERIC)
        if not is_steiner(seq):
            continue
        # re-measure with clustering and polishing, not the raw batch iterates
        ar = min_angle_root(roots(seq))
        alpha, gamma = ar.alpha, ar.gamma
        candidates.append((alpha, seq))
        if alpha < best_alpha - 1e-12:
            best_alpha, best_gamma, best_seq, source = alpha, gamma, seq, OPTIMIZER

    if source == TABLE_SCAN:
        wit = Witness(row.j, row.k, row.gamma, TABLE_SCAN)
    else:
        wit = Witness(None, None, best_gamma, OPTIMIZER, tuple(float(x) for x in best_seq.a))
    est = ConeEstimate(n, "witnessed", best_alpha, wit)
    return OptimizerResult(est, best_seq, row.alpha, candidates)


# ---------------------------------------------------------------------------
# small-dimension algebra


SQRT3 = math.sqrt(3.0)


def r3_real_root_compat(a: float, b: float, c: float) -> bool:
    """Whether ``-a +- bi`` and ``-c`` are together the roots of a
    3-dimensional Steiner polynomial.

    Needs ``a >= sqrt(3) b`` (the complex pair must already be in the cone)
    and ``a, b, c >= 0``.  The answer is ``c <= a - sqrt(3) b`` or
    ``c >= (a^2 + b^2) / (a - sqrt(3) b)``.
    """
    if min(a, b, c) < 0:
        raise ValueError("a, b, c must be nonnegative")
    gap = a - SQRT3 * b
    if gap < 0:
        raise ValueError(f"-a + bi = {-a}+{b}i is outside the 3-dimensional cone (a < sqrt(3) b)")
    if c <= gap:
        return True
    if gap == 0:
        return False
    return c >= (a * a + b * b) / gap


def r3_from_roots(a: float, b: float, c: float, tol: float = 1e-12) -> bool:
    """Cross-check of :func:`r3_real_root_compat` via the root-side criterion."""
    from .polyroots import steiner_from_roots

    gammas = [complex(-a, b), complex(-a, -b), complex(-c, 0)]
    # a root within tol of 0 counts as the zero root, as in steiner_from_roots
    s = 3 if c > tol else 2
    try:
        steiner_from_roots(gammas, n=3, r=3, s=s, tol=tol)
    except (SteinerRejection, ValueError):
        return False
    return True


def quartic_inequalities(c: float, d: float) -> tuple[float, float, float]:
    """Values that must be ``>= 0`` for ``(z^2+2z+2)(z^2+cz+d)`` to be a
    4-dimensional Steiner polynomial (ULC rows 3, 2 and 1)."""
    return (
        3 * c * c - 4 * c - 8 * d - 4,
        -(c * c + (d + 2) * c - 2 * (d * d - 5 * d + 4)),
        3 * c * c - 2 * d * c - d * d - 8 * d,
    )


INEQUALITY_NAMES = (
    "3c^2 - 4c - 8d - 4 >= 0",
    "c^2 + (d+2)c - 2(d^2 - 5d + 4) <= 0",
    "3c^2 - 2dc - d^2 - 8d >= 0",
)


def quartic_feasible_grid(grid=None, tol: float = 1e-12) -> list[tuple[float, float]]:
    """Grid points ``(c, d)`` satisfying all three quartic inequalities."""
    if grid is None:
        grid = np.linspace(0.0, 6.0, 601)
    C, D = np.meshgrid(grid, grid, indexing="ij")
    ok = np.ones(C.shape, dtype=bool)
    for v in quartic_inequalities(C, D):
        ok &= v >= -tol
    return [(float(C[i, j]), float(D[i, j])) for i, j in zip(*np.nonzero(ok))]


@dataclass
class BoundaryCertificate:
    case: str  # "quartic" or "cubic"
    certified: bool
    c: float
    d: float
    inequalities: tuple = ()
    violated: tuple = ()
    steiner: bool = True
    af_equalities: tuple = ()
    af_equalities_swapped: tuple = ()
    ratios: tuple = ()
    message: str = ""

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "certified": self.certified,
            "c": self.c,
            "d": self.d,
            "inequalities": list(self.inequalities),
            "violated": list(self.violated),
            "steiner": self.steiner,
            "af_equalities": list(self.af_equalities),
            "af_equalities_swapped": list(self.af_equalities_swapped),
            "ratios": list(self.ratios),
            "message": self.message,
        }


BOUNDARY_ROOT = complex(-1.0, 1.0)


def r4_boundary_certify(seq: CoeffSequence, tol: float = 1e-8) -> BoundaryCertificate:
    """Check a 4-dimensional sequence with root ``-1 + i`` against the only
    two boundary families.

    With ``a_4 > 0`` the sequence factors as ``a_4 (z^2+2z+2)(z^2+cz+d)``
    with ``c = a_3/a_4 - 2`` and ``d = a_0 / (2 a_4)``; the ULC rows reduce
    to three inequalities in ``(c, d)`` whose only common solution is
    ``(2, 0)``.  With ``a_4 = 0`` it factors as ``(z^2+2z+2)(cz+d)`` and the
    ULC rows force ``c = d``.
    """
    if seq.n != 4:
        raise ValueError(f"boundary certification is for n = 4, got n = {seq.n}")
    a = seq.as_floats()
    scale = max(a)
    a = [x / scale for x in a]
    val = abs(eval_poly(np.array(a), BOUNDARY_ROOT))
    if val > tol:
        raise ValueError(f"-1 + i is not a root: |f(-1+i)| = {val:.3g} (relative to max a_i)")
    steiner = is_steiner(seq, tol)
    af, af_sw = (), ()
    if steiner:
        q = quermass_from_coeffs(seq.to_mode(NUMERIC), tol=tol)
        af = tuple(af_equalities(q, tol))
        rq = QuermassTuple(4, tuple(reversed(q.W)), NUMERIC, tol)
        af_sw = tuple(af_equalities(rq, tol))

    if a[4] > 0:
        c = a[3] / a[4] - 2.0
        d = a[0] / (2.0 * a[4])
        vals = quartic_inequalities(c, d)
        violated = tuple(name for name, v in zip(INEQUALITY_NAMES, vals) if v < -tol)
        unique = abs(c - 2.0) <= tol and abs(d) <= tol
        certified = not violated and unique
        msg = "matches the quartic family (c, d) = (2, 0)" if certified else (
            "violates " + "; ".join(violated) if violated else "inequalities hold but (c, d) != (2, 0)"
        )
        return BoundaryCertificate("quartic", certified, c, d, vals, violated, steiner, af, af_sw, (), msg)

    if a[3] <= 0:
        raise ValueError("a sequence with root -1 + i needs degree >= 3")
    c = a[3]
    d = a[0] / 2.0
    W = [x / binomial(4, i) for i, x in enumerate(a)]
    ratios = (W[0] / 2.0, W[1], 2.0 * W[2], 4.0 * W[3])
    equal = abs(c - d) <= tol * max(c, d)
    certified = equal and steiner and all(abs(r - c) <= tol * c for r in ratios)
    violated = () if equal else (("d >= c" if d < c else "c >= d"),)
    msg = "matches the cubic family c = d" if certified else "violates " + "; ".join(violated or ("c = d",))
    return BoundaryCertificate("cubic", certified, c, d, (), violated, steiner, af, af_sw, ratios, msg)


# ---------------------------------------------------------------------------
# accumulation and cap bodies


class AccumulationRow(NamedTuple):
    n: int
    min_distance_to_one: float
    closest_root: complex
    curve_residual: float
    roots_in_disk: int


@dataclass
class AccumulationReport:
    rows: list
    decreasing: bool
    one_on_curve: bool
    one_in_disk: bool

    def to_dict(self) -> dict:
        return {
            "rows": [
                {
                    "n": r.n,
                    "min_distance_to_one": r.min_distance_to_one,
                    "closest_root": [r.closest_root.real, r.closest_root.imag],
                    "curve_residual": r.curve_residual,
                    "roots_in_disk": r.roots_in_disk,
                }
                for r in self.rows
            ],
            "decreasing": self.decreasing,
            "one_on_curve": self.one_on_curve,
            "one_in_disk": self.one_in_disk,
        }


def accumulation_curve_residual(z, ratio: float = 0.5):
    """``|z| - ratio (1-ratio)^(1/ratio - 1) |1+z|^(1/ratio)``."""
    z = np.asarray(z, dtype=complex)
    return np.abs(z) - ratio * (1 - ratio) ** (1 / ratio - 1) * np.abs(1 + z) ** (1 / ratio)


def one_on_half_curve() -> tuple[bool, bool]:
    """Exact check that ``z = 1`` satisfies both accumulation conditions at ratio 1/2."""
    half = Fraction(1, 2)
    lhs = Fraction(1)
    rhs = half * (1 - half) ** (1 / half - 1) * Fraction(2) ** int(1 / half)
    centre = half**2 / (1 - half**2)
    radius = half / (1 - half**2)
    return lhs == rhs, abs(1 - centre) <= radius


def accumulation_check(n_list) -> AccumulationReport:
    """Roots of ``P^n_{0, n//2}`` approaching the point 1 as ``n`` grows."""
    rows = []
    centre, radius = 1.0 / 3.0, 2.0 / 3.0
    for n in n_list:
        if not (2 <= n <= MAX_ACCUMULATION_N):
            raise ValueError(f"accumulation check supports 2 <= n <= {MAX_ACCUMULATION_N}, got {n}")
        try:
            rs = roots(truncated_binomial(n, 0, n // 2))
        except RootFindingError as err:
            raise RootFindingError(f"n = {n}: {err}", err.best, err.residuals) from err
        zs = np.array(rs.nonzero())
        dist = np.abs(zs - 1.0)
        i = int(np.argmin(dist))
        disk = zs[np.abs(zs - centre) <= radius]
        resid = float(np.max(np.abs(accumulation_curve_residual(disk)))) if disk.size else math.nan
        rows.append(AccumulationRow(n, float(dist[i]), complex(zs[i]), resid, int(disk.size)))
    dists = [r.min_distance_to_one for r in rows]
    on_curve, in_disk = one_on_half_curve()
    return AccumulationReport(rows, all(b < a for a, b in zip(dists, dists[1:])), on_curve, in_disk)


def capbody_polynomial(n: int, vol_e=1) -> CoeffSequence:
    """``vol(E) P^n_{1,n}``, the polynomial of a cap body over ``E``."""
    if n < 3:
        raise ValueError("cap body polynomials need n >= 3")
    v = Fraction(vol_e)
    if v <= 0:
        raise ValueError("vol(E) must be positive")
    return truncated_binomial(n, 1, n).scaled(v)


class CapBodyCheck(NamedTuple):
    n: int
    cap_alpha: float
    table_alpha: float
    strictly_inside: bool
    max_real_part: float


def capbody_check(n: int) -> CapBodyCheck:
    """Compare the cap-body angle with the table-scan angle."""
    rs = roots(capbody_polynomial(n))
    cap = min_angle_root(rs)
    row = table1_scan(n)
    return CapBodyCheck(n, cap.alpha, row.alpha, cap.alpha > row.alpha + TIE_TOL, max(g.real for g in rs.nonzero()))
