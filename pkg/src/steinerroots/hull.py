"""Volume of the convex hull of a small point set.

Brute force on purpose: every ``d``-subset of points proposes a hyperplane,
the ones with all points on one closed side are facets, and the volume is the
sum of cones over the facets from the vertex centroid, with each facet's
``(d-1)``-volume computed recursively in its own hyperplane.  This is only
meant for the handful of vertices of a Minkowski sum of two small simplices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

HULL_EXACT = "hull_exact"
MONTE_CARLO = "monte_carlo"
DISSECTION = "dissection"

MC_SEED = 0x5EED
MC_SAMPLES = 10**6
MC_BATCH = 2**16
Z99 = 2.5758293035489004  # two-sided 99% normal quantile


@dataclass(frozen=True)
class VolumeSample:
    lam: float
    volume: float
    method: str
    ci_halfwidth: float = 0.0
    flat: bool = False


def _facets(P: np.ndarray, eps: float):
    """Outward facet hyperplanes ``normal . x <= offset`` of conv(P), deduplicated."""
    v, d = P.shape
    combos = np.array(list(itertools.combinations(range(v), d)))
    base = P[combos[:, 0]]
    spans = P[combos[:, 1:]] - base[:, None, :]  # (C, d-1, d)
    _, sv, vt = np.linalg.svd(spans)
    normals = vt[:, -1, :]
    # the d-1 spanning vectors must be independent
    ok = sv[:, -1] > eps if d > 1 else np.ones(len(combos), bool)
    offsets = np.einsum("ij,ij->i", normals, base)
    dist = P @ normals.T - offsets[None, :]  # (v, C)
    below = np.all(dist <= eps, axis=0)
    above = np.all(dist >= -eps, axis=0)
    facets = {}
    for c in np.nonzero(ok & (below | above))[0]:
        nrm, off, dc = normals[c], offsets[c], dist[:, c]
        if not below[c]:
            nrm, off, dc = -nrm, -off, -dc
        on = frozenset(np.nonzero(np.abs(dc) <= eps)[0].tolist())
        if on not in facets:
            facets[on] = (nrm, off)
    return facets


def _rank(P: np.ndarray, eps: float) -> int:
    if len(P) < 2:
        return 0
    sv = np.linalg.svd(P - P.mean(axis=0), compute_uv=False)
    return int(np.sum(sv > eps))


def _volume(P: np.ndarray) -> float:
    v, d = P.shape
    if d == 1:
        return float(P.max() - P.min())
    scale = max(1.0, float(np.max(np.abs(P - P.mean(axis=0)))))
    eps = 1e-9 * scale
    if v <= d or _rank(P, eps) < d:
        return 0.0
    centre = P.mean(axis=0)
    total = 0.0
    for on, (nrm, off) in _facets(P, eps).items():
        F = P[sorted(on)]
        # orthonormal basis of the facet's hyperplane
        _, _, vt = np.linalg.svd(nrm[None, :])
        basis = vt[1:].T  # (d, d-1)
        coords = (F - F[0]) @ basis
        height = off - float(nrm @ centre)
        total += height * _volume(coords) / d
    return total


def hull_facets(vertices) -> list[tuple[np.ndarray, float]]:
    P = np.asarray(vertices, dtype=float)
    scale = max(1.0, float(np.max(np.abs(P - P.mean(axis=0)))))
    return list(_facets(P, 1e-9 * scale).values())


def contains(vertices, points, tol: float = 1e-9) -> np.ndarray:
    """Whether each of ``points`` lies in conv(vertices) (full-dimensional hulls)."""
    facets = hull_facets(vertices)
    A = np.array([f[0] for f in facets])
    b = np.array([f[1] for f in facets])
    X = np.atleast_2d(np.asarray(points, dtype=float))
    return np.all(X @ A.T <= b + tol * max(1.0, float(np.abs(b).max())), axis=1)


def _monte_carlo(P: np.ndarray, samples: int, seed: int):
    scale = max(1.0, float(np.max(np.abs(P - P.mean(axis=0)))))
    facets = list(_facets(P, 1e-9 * scale).values())
    A = np.array([f[0] for f in facets])
    b = np.array([f[1] for f in facets])
    lo, hi = P.min(axis=0), P.max(axis=0)
    box = float(np.prod(hi - lo))
    hits = 0
    done = 0
    batch = 0
    while done < samples:
        m = min(MC_BATCH, samples - done)
        rng = np.random.default_rng([seed, batch])
        X = lo + (hi - lo) * rng.random((m, P.shape[1]))
        hits += int(np.count_nonzero(np.all(X @ A.T <= b, axis=1)))
        done += m
        batch += 1
    frac = hits / samples
    vol = box * frac
    half = Z99 * box * math.sqrt(max(frac * (1.0 - frac), 1.0 / samples) / samples)
    return vol, half


def hull_volume(
    vertices, lam: float = float("nan"), method: str = "auto", samples: int = MC_SAMPLES, seed: int = MC_SEED
) -> VolumeSample:
    """Volume of conv(vertices).

    ``method="auto"`` uses the exact facet/cone recursion up to dimension 4
    and Monte Carlo with a 99% confidence half-width above that.  A
    lower-dimensional point set has volume 0 and ``flat=True``.
    """
    P = np.asarray(vertices, dtype=float)
    if P.ndim != 2:
        raise ValueError("vertices must be a 2-d array of points")
    d = P.shape[1]
    scale = max(1.0, float(np.max(np.abs(P - P.mean(axis=0))))) if len(P) else 1.0
    if len(P) <= d or _rank(P, 1e-9 * scale) < d:
        m = HULL_EXACT if method in ("auto", HULL_EXACT) else method
        return VolumeSample(lam, 0.0, m, 0.0, flat=True)
    if method == "auto":
        method = HULL_EXACT if d <= 4 else MONTE_CARLO
    if method == HULL_EXACT:
        return VolumeSample(lam, float(_volume(P)), HULL_EXACT)
    if method == MONTE_CARLO:
        vol, half = _monte_carlo(P, samples, seed)
        return VolumeSample(lam, float(vol), MONTE_CARLO, float(half))
    raise ValueError(f"unknown method {method!r}")
