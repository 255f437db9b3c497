"""Dominance predicates, exact hypervolume (m <= 3), and greedy batch selection.

Hypervolume is the Lebesgue measure of the region weakly dominated by a point
set and bounded above by a reference point ``r`` (minimization convention).
Points not strictly below ``r`` in every coordinate enclose no volume and are
ignored rather than rejected.  The 2-objective case is a sort-and-sweep over
the staircase; the 3-objective case sweeps the third objective and maintains
the 2-D staircase incrementally.

``hypervolume`` always reduces its input to the non-dominated subset first.
This makes the incremental greedy selection in :func:`greedy_select`
bit-identical to a naive oracle that recomputes full hypervolumes from
scratch each round, which the test suite exploits.
"""

import bisect
from dataclasses import dataclass

import numpy as np

__all__ = [
    "FrontArchive",
    "Candidate",
    "dominates",
    "strictly_dominates",
    "non_dominated",
    "non_dominated_mask",
    "hypervolume",
    "hvi",
    "greedy_select",
]


@dataclass(frozen=True)
class FrontArchive:
    """Evaluated objective vectors plus the hypervolume reference point.

    The reference point is not required to be dominated by every archive
    point; points beyond it simply contribute zero volume.
    """

    points: np.ndarray  # (N, m), may be empty with shape (0, m)
    reference: np.ndarray  # (m,)


@dataclass(frozen=True)
class Candidate:
    """One proposed evaluation: decision vector, surrogate objective values
    (LCB or posterior mean), and the preference that generated it."""

    x: np.ndarray
    surrogate_objectives: np.ndarray
    source_preference: np.ndarray


def dominates(a: np.ndarray, b: np.ndarray) -> bool:
    """True when ``a`` is no worse than ``b`` everywhere and better somewhere."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("objective vectors must have equal length")
    return bool(np.all(a <= b) and np.any(a < b))


def strictly_dominates(a: np.ndarray, b: np.ndarray) -> bool:
    """True when ``a`` is strictly better than ``b`` in every objective."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("objective vectors must have equal length")
    return bool(np.all(a < b))


def _pairwise_nd_mask(Y: np.ndarray) -> np.ndarray:
    """Exact O(N^2) non-dominated mask, evaluated in memory-bounded chunks."""
    n = len(Y)
    keep = np.ones(n, dtype=bool)
    chunk = max(1, min(n, 64_000_000 // (max(n, 1) * Y.shape[1])))
    for start in range(0, n, chunk):
        block = Y[start : start + chunk]  # (c, m)
        le = np.all(Y[:, None, :] <= block[None, :, :], axis=2)  # (n, c)
        lt = np.any(Y[:, None, :] < block[None, :, :], axis=2)
        keep[start : start + chunk] = ~np.any(le & lt, axis=0)
    return keep


def non_dominated_mask(Y: np.ndarray) -> np.ndarray:
    """Boolean mask of rows not dominated by any other row.

    Duplicate rows never dominate each other, so exact duplicates are all
    retained.  Large inputs are first reduced by a survivor-pool sweep
    (dropping a point dominated by any earlier survivor is safe by
    transitivity), then the exact pairwise check runs on the survivors, so
    the cost is O(N*K) for K survivors rather than O(N^2).
    """
    Y = np.asarray(Y, dtype=float)
    if Y.ndim != 2:
        raise ValueError("expected a 2-D array of objective vectors")
    n = len(Y)
    if n <= 1:
        return np.ones(n, dtype=bool)
    if n <= 4096:
        return _pairwise_nd_mask(Y)
    # Visit likely dominators first so the pool stays small.
    order = np.argsort(Y.sum(axis=1), kind="stable")
    pool: list[np.ndarray] = []  # index chunks of surviving rows
    P = np.empty((0, Y.shape[1]))
    for start in range(0, n, 2048):
        idx = order[start : start + 2048]
        C = Y[idx]
        if len(P):
            le = np.all(P[None, :, :] <= C[:, None, :], axis=2)
            lt = np.any(P[None, :, :] < C[:, None, :], axis=2)
            alive = ~np.any(le & lt, axis=1)
            idx, C = idx[alive], C[alive]
        if len(idx):
            pool.append(idx)
            P = np.vstack([P, C])
    survivors = np.concatenate(pool)
    keep = np.zeros(n, dtype=bool)
    keep[survivors] = _pairwise_nd_mask(Y[survivors])
    return keep


def non_dominated(Y: np.ndarray) -> np.ndarray:
    """Rows of ``Y`` not dominated by any other row, input order preserved."""
    Y = np.asarray(Y, dtype=float)
    if len(Y) == 0:
        return Y.copy()
    return Y[non_dominated_mask(Y)]


def _hv2d(Y: np.ndarray, r: np.ndarray) -> float:
    """Exact 2-D hypervolume of a (possibly dominated) point set below r."""
    if len(Y) == 0:
        return 0.0
    order = np.lexsort((Y[:, 1], Y[:, 0]))
    f1 = Y[order, 0]
    f2 = Y[order, 1]
    ceil = np.concatenate(([r[1]], np.minimum.accumulate(f2)[:-1]))
    return float(np.sum((r[0] - f1) * np.maximum(ceil - f2, 0.0)))


def _hv3d(Y: np.ndarray, r: np.ndarray) -> float:
    """Exact 3-D hypervolume: sweep f3 upward, maintain the 2-D staircase."""
    if len(Y) == 0:
        return 0.0
    order = np.lexsort((Y[:, 1], Y[:, 0], Y[:, 2]))
    P = Y[order]
    r1, r2, r3 = float(r[0]), float(r[1]), float(r[2])
    keys: list[float] = []  # staircase f1 coordinates, ascending
    heights: list[float] = []  # matching f2 values, strictly descending
    area = 0.0
    vol = 0.0
    z_prev = float(P[0, 2])
    for a, b, c in P:
        a, b, c = float(a), float(b), float(c)
        if c > z_prev:
            vol += area * (c - z_prev)
            z_prev = c
        pos = bisect.bisect_left(keys, a)
        if pos > 0 and heights[pos - 1] <= b:
            continue  # dominated in the (f1, f2) plane
        if pos < len(keys) and keys[pos] == a and heights[pos] <= b:
            continue
        # Sweep right over entries the new point supersedes, accumulating
        # the newly dominated area between the old profile and height b.
        j = pos
        cur_x = a
        cur_ceil = heights[pos - 1] if pos > 0 else r2
        delta = 0.0
        while j < len(keys) and heights[j] >= b:
            if keys[j] > cur_x:
                delta += (keys[j] - cur_x) * (cur_ceil - b)
                cur_x = keys[j]
            cur_ceil = heights[j]
            j += 1
        right_x = keys[j] if j < len(keys) else r1
        delta += (right_x - cur_x) * (cur_ceil - b)
        area += delta
        keys[pos:j] = [a]
        heights[pos:j] = [b]
    vol += area * (r3 - z_prev)
    return vol


def hypervolume(Y: np.ndarray, r: np.ndarray) -> float:
    """Exact hypervolume of ``Y`` with respect to reference point ``r``.

    Args:
        Y: (N, m) objective vectors, m in {2, 3}; an empty set has volume 0.
        r: length-m reference point.

    Returns:
        Lebesgue measure of the union of boxes ``[y, r]`` over rows ``y``
        strictly below ``r``; rows at or beyond ``r`` contribute nothing.

    Raises:
        ValueError: when m is not 2 or 3.
    """
    Y = np.asarray(Y, dtype=float)
    r = np.asarray(r, dtype=float)
    if Y.ndim == 1:
        Y = Y.reshape(1, -1) if len(Y) else Y.reshape(0, len(r))
    m = len(r)
    if m not in (2, 3):
        raise ValueError(f"unsupported dimension m={m}; exact HV covers m in {{2, 3}}")
    if len(Y) and Y.shape[1] != m:
        raise ValueError("objective dimension does not match reference point")
    if len(Y) == 0:
        return 0.0
    Y = Y[np.all(Y < r, axis=1)]
    if len(Y) == 0:
        return 0.0
    Y = Y[non_dominated_mask(Y)]
    return _hv2d(Y, r) if m == 2 else _hv3d(Y, r)


def hvi(batch_values: np.ndarray, archive: FrontArchive) -> float:
    """Hypervolume improvement of a batch over an archive (never negative)."""
    batch = np.atleast_2d(np.asarray(batch_values, dtype=float))
    pts = np.asarray(archive.points, dtype=float).reshape(-1, len(archive.reference))
    base = hypervolume(pts, archive.reference)
    joint = hypervolume(np.vstack([pts, batch]), archive.reference)
    return max(joint - base, 0.0)


def greedy_select(
    candidates: list[Candidate], archive: FrontArchive, B: int
) -> list[Candidate]:
    """Select B candidates by sequential greedy hypervolume improvement.

    Each round scores every remaining candidate by the hypervolume
    improvement of its surrogate objectives against the archive plus the
    predicted values of already-selected candidates, then takes the best;
    exact ties fall to the lowest candidate index.

    Args:
        candidates: pool of scored candidates (length >= B).
        archive: evaluated objective values and reference point.
        B: number of candidates to pick.

    Returns:
        The selected candidates in pick order.

    Raises:
        ValueError: when fewer than B candidates are supplied.
    """
    if B < 1:
        raise ValueError("B must be >= 1")
    if len(candidates) < B:
        raise ValueError(f"insufficient candidates: need {B}, have {len(candidates)}")
    r = np.asarray(archive.reference, dtype=float)
    m = len(r)
    pool = np.asarray([c.surrogate_objectives for c in candidates], dtype=float)
    base = np.asarray(archive.points, dtype=float).reshape(-1, m)
    remaining = list(range(len(candidates)))
    chosen: list[int] = []
    for _ in range(B):
        base_hv = hypervolume(base, r)
        # A candidate weakly dominated by the current base (or beyond the
        # reference point) has exactly zero marginal volume; skip the sweep.
        cand = pool[remaining]
        inside = np.all(cand < r, axis=1)
        if len(base):
            le = np.all(base[None, :, :] <= cand[:, None, :], axis=2)
            lt = np.any(base[None, :, :] < cand[:, None, :], axis=2)
            covered = np.any(le & lt, axis=1)
        else:
            covered = np.zeros(len(cand), dtype=bool)
        gains = np.zeros(len(remaining))
        for k, idx in enumerate(remaining):
            if inside[k] and not covered[k]:
                gains[k] = hypervolume(np.vstack([base, pool[idx]]), r) - base_hv
        best = int(np.argmax(gains))  # argmax returns the first (lowest) index on ties
        pick = remaining.pop(best)
        chosen.append(pick)
        base = np.vstack([base, pool[pick]])
    return [candidates[i] for i in chosen]
