"""Benchmark problem registry: evaluators, bounds, reference points, fronts.

All problems are box-constrained minimization problems ``f: [lb, ub]^n -> R^m``
with two or three objectives.  The registry covers three groups:

* ``F1``..``F6`` — six bi-objective problems (n = 6) sharing the front
  ``f2 = 1 - sqrt(f1)`` but with increasingly convoluted Pareto sets: the
  optimal value of each auxiliary variable follows a problem-specific curve
  in ``x1`` (polynomial, trigonometric, or modulated-frequency).
* ``VLMOP1``..``VLMOP3``, ``DTLZ2`` — classic low-dimensional test problems
  with analytically known fronts.
* ``RE-truss``, ``RE-vessel``, ``RE-brake``, ``RE-gear``, ``RE-injector`` —
  real-world engineering design problems.  Constraint violations are folded
  into an extra objective (the convention of the source suite); their fronts
  are not analytic and must be ingested from a CSV file before front-based
  metrics are available (see :func:`load_front_csv`).

Reference points for hypervolume computation are pinned per problem (1.1 x
the empirical nadir of the source suite).
"""

import csv
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ProblemSpec",
    "UnregisteredProblemError",
    "FrontUnavailableError",
    "make_problem",
    "evaluate",
    "true_front",
    "front_at_preferences",
    "load_front_csv",
    "list_problems",
]

BOUNDS_TOL = 1e-12  # slack for floating-point roundoff in bounds checks


class UnregisteredProblemError(ValueError):
    """Raised when a problem name is not in the registry."""


class FrontUnavailableError(RuntimeError):
    """Raised when a front is requested for a problem without one."""


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """Immutable description of one registered problem.

    Attributes:
        name: registry identifier.
        n: decision-space dimension.
        m: number of objectives (2 or 3).
        lower_bounds: length-n lower bounds, problem units.
        upper_bounds: length-n upper bounds, problem units.
        reference_point: length-m hypervolume reference point.
        has_known_front: True when the Pareto front is analytically known.
    """

    name: str
    n: int
    m: int
    lower_bounds: np.ndarray
    upper_bounds: np.ndarray
    reference_point: np.ndarray
    has_known_front: bool


@dataclass(frozen=True)
class _Entry:
    """Registry row: spec constructor arguments plus evaluator callbacks."""

    n: int
    m: int
    lower: tuple
    upper: tuple
    reference: tuple
    evaluator: "callable"
    front: "callable | None" = None  # front(count) -> (count, m) array
    # pref_front(prefs, utopia) -> (P, m) array of scalarization-optimal
    # front points, or None when no matched solver exists.
    pref_front: "callable | None" = None


# ---------------------------------------------------------------------------
# F1-F6: shared outer shape, problem-specific variable-shift curves.
# ---------------------------------------------------------------------------

def _biobjective_shifted(X: np.ndarray, shift_odd, shift_even) -> np.ndarray:
    """Common scaffold for F1-F6.

    The auxiliary variables are split by index parity (j = 2..n, 1-based);
    each group contributes the mean squared deviation from a shift curve
    evaluated at ``(x1, j)``:

        f1 = (1 + s1) * x1
        f2 = (1 + s2) * (1 - sqrt(x1 / (1 + s2)))

    with ``s_g`` the mean of ``(x_j - shift_g(x1, j))**2`` over its group.
    Both objectives are minimized; on the Pareto set s1 = s2 = 0 and the
    front is ``f2 = 1 - sqrt(f1)`` for ``f1`` in [0, 1].
    """
    x1 = X[:, :1]
    n = X.shape[1]
    j_odd = np.arange(3, n + 1, 2, dtype=float)
    j_even = np.arange(2, n + 1, 2, dtype=float)
    y_odd = X[:, 2::2] - shift_odd(x1, j_odd)
    y_even = X[:, 1::2] - shift_even(x1, j_even)
    s1 = np.mean(y_odd**2, axis=1)
    s2 = np.mean(y_even**2, axis=1)
    f1 = (1.0 + s1) * x1[:, 0]
    g2 = 1.0 + s2
    f2 = g2 * (1.0 - np.sqrt(x1[:, 0] / g2))
    return np.column_stack([f1, f2])


def _make_f_problem(shift_odd, shift_even):
    def evaluator(X: np.ndarray) -> np.ndarray:
        return _biobjective_shifted(X, shift_odd, shift_even)

    return evaluator


def _shift_f1(x1, j):
    return (2.0 * x1 - 1.0) ** 2


def _shift_f2(x1, j):
    n = 6.0
    return x1 ** (0.5 * (1.0 + 3.0 * (j - 2.0) / (n - 2.0)))


def _shift_f3(x1, j):
    n = 6.0
    return np.sin(4.0 * np.pi * x1 + j * np.pi / n)


def _shift_f4_odd(x1, j):
    n = 6.0
    return 0.8 * x1 * np.cos(4.0 * np.pi * x1 + j * np.pi / n)


def _shift_f4_even(x1, j):
    n = 6.0
    return 0.8 * x1 * np.sin(4.0 * np.pi * x1 + j * np.pi / n)


def _shift_f5_odd(x1, j):
    n = 6.0
    return 0.8 * x1 * np.cos((4.0 * np.pi * x1 + j * np.pi / n) / 3.0)


def _shift_f6_base(x1, j):
    n = 6.0
    return 0.3 * x1**2 * np.cos(12.0 * np.pi * x1 + 4.0 * j * np.pi / n) + 0.6 * x1


def _shift_f6_odd(x1, j):
    n = 6.0
    return _shift_f6_base(x1, j) * np.cos(6.0 * np.pi * x1 + j * np.pi / n)


def _shift_f6_even(x1, j):
    n = 6.0
    return _shift_f6_base(x1, j) * np.sin(6.0 * np.pi * x1 + j * np.pi / n)


def _front_sqrt(count: int) -> np.ndarray:
    """Shared F1-F6 front: f1 = s^2, f2 = 1 - s for s in [0, 1]."""
    s = np.linspace(0.0, 1.0, count)
    return np.column_stack([s**2, 1.0 - s])


# ---------------------------------------------------------------------------
# Matched front points for preference-based metrics.
# ---------------------------------------------------------------------------

def _tch_curve_front(f_of_t, prefs: np.ndarray, utopia: np.ndarray) -> np.ndarray:
    """Weighted-Tchebycheff minimizers on a parametric bi-objective front.

    ``f_of_t`` maps a parameter array t in [0, 1] to front points with f1
    non-decreasing and f2 non-increasing in t.  For each preference the
    minimizer of ``max_i lam_i (f_i - u_i)`` equalizes the two terms, so it
    is found by vectorized bisection on their difference.
    """
    lam = np.maximum(prefs, 1e-12)
    lo = np.zeros(len(prefs))
    hi = np.ones(len(prefs))
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        f = f_of_t(mid)
        eta = lam[:, 0] * (f[:, 0] - utopia[0]) - lam[:, 1] * (f[:, 1] - utopia[1])
        hi = np.where(eta > 0.0, mid, hi)
        lo = np.where(eta > 0.0, lo, mid)
    return f_of_t(0.5 * (lo + hi))


def _pref_front_sqrt(prefs: np.ndarray, utopia: np.ndarray) -> np.ndarray:
    def f_of_t(t):
        return np.column_stack([t**2, 1.0 - t])

    return _tch_curve_front(f_of_t, prefs, utopia)


def _pref_front_vlmop1(prefs: np.ndarray, utopia: np.ndarray) -> np.ndarray:
    def f_of_t(t):
        return np.column_stack([4.0 * t**2, 4.0 * (1.0 - t) ** 2])

    return _tch_curve_front(f_of_t, prefs, utopia)


def _pref_front_vlmop2(prefs: np.ndarray, utopia: np.ndarray) -> np.ndarray:
    n = 6.0
    inv = 1.0 / np.sqrt(n)

    def f_of_t(t):
        x = (1.0 - 2.0 * t) * inv  # t=0 at the f1-minimizing end
        f1 = 1.0 - np.exp(-n * (x - inv) ** 2)
        f2 = 1.0 - np.exp(-n * (x + inv) ** 2)
        return np.column_stack([f1, f2])

    return _tch_curve_front(f_of_t, prefs, utopia)


def _pref_front_sphere(prefs: np.ndarray, utopia: np.ndarray) -> np.ndarray:
    """Tchebycheff minimizers on the unit-sphere octant (DTLZ2 front).

    Equalizing all terms gives ``f = u + c / lam`` with c the positive root
    of ``||u + c / lam|| = 1``.
    """
    w = 1.0 / np.maximum(prefs, 1e-12)
    a = np.sum(w**2, axis=1)
    b = 2.0 * np.sum(utopia * w, axis=1)
    const = float(np.sum(utopia**2)) - 1.0
    c = (-b + np.sqrt(b**2 - 4.0 * a * const)) / (2.0 * a)
    return utopia + c[:, None] * w


# ---------------------------------------------------------------------------
# VLMOP / DTLZ2 evaluators and fronts.
# ---------------------------------------------------------------------------

def _eval_vlmop1(X: np.ndarray) -> np.ndarray:
    x = X[:, 0]
    return np.column_stack([x**2, (x - 2.0) ** 2])


def _front_vlmop1(count: int) -> np.ndarray:
    s = np.linspace(0.0, 1.0, count)
    return np.column_stack([4.0 * s**2, 4.0 * (1.0 - s) ** 2])


def _eval_vlmop2(X: np.ndarray) -> np.ndarray:
    n = X.shape[1]
    inv = 1.0 / np.sqrt(n)
    f1 = 1.0 - np.exp(-np.sum((X - inv) ** 2, axis=1))
    f2 = 1.0 - np.exp(-np.sum((X + inv) ** 2, axis=1))
    return np.column_stack([f1, f2])


def _front_vlmop2(count: int) -> np.ndarray:
    n = 6.0
    inv = 1.0 / np.sqrt(n)
    t = np.linspace(-inv, inv, count)
    f1 = 1.0 - np.exp(-n * (t - inv) ** 2)
    f2 = 1.0 - np.exp(-n * (t + inv) ** 2)
    return np.column_stack([f1, f2])


def _eval_vlmop3(X: np.ndarray) -> np.ndarray:
    x, y = X[:, 0], X[:, 1]
    r2 = x**2 + y**2
    f1 = 0.5 * r2 + np.sin(r2)
    f2 = (3.0 * x - 2.0 * y + 4.0) ** 2 / 8.0 + (x - y + 1.0) ** 2 / 27.0 + 15.0
    f3 = 1.0 / (r2 + 1.0) - 1.1 * np.exp(-r2)
    return np.column_stack([f1, f2, f3])


_VLMOP3_FRONT_CACHE: list[np.ndarray] = []


def _front_vlmop3(count: int) -> np.ndarray:
    """Non-dominated image of a dense decision grid, evenly subsampled."""
    if not _VLMOP3_FRONT_CACHE:
        from .hv import non_dominated_mask

        g = np.linspace(-3.0, 3.0, 301)
        xx, yy = np.meshgrid(g, g)
        pts = np.column_stack([xx.ravel(), yy.ravel()])
        vals = _eval_vlmop3(pts)
        nd = vals[non_dominated_mask(vals)]
        order = np.lexsort((nd[:, 1], nd[:, 0]))
        _VLMOP3_FRONT_CACHE.append(nd[order])
    nd = _VLMOP3_FRONT_CACHE[0]
    idx = np.linspace(0, len(nd) - 1, min(count, len(nd))).round().astype(int)
    return nd[np.unique(idx)]


def _eval_dtlz2(X: np.ndarray) -> np.ndarray:
    g = np.sum((X[:, 2:] - 0.5) ** 2, axis=1)
    t1 = X[:, 0] * np.pi / 2.0
    t2 = X[:, 1] * np.pi / 2.0
    f1 = (1.0 + g) * np.cos(t1) * np.cos(t2)
    f2 = (1.0 + g) * np.cos(t1) * np.sin(t2)
    f3 = (1.0 + g) * np.sin(t1)
    return np.column_stack([f1, f2, f3])


def _van_der_corput(count: int) -> np.ndarray:
    """Base-2 van der Corput sequence (deterministic low-discrepancy)."""
    out = np.zeros(count)
    for i in range(count):
        k, base, q = i + 1, 0.5, 0.0
        while k:
            q += base * (k & 1)
            k >>= 1
            base *= 0.5
        out[i] = q
    return out


def _front_dtlz2(count: int) -> np.ndarray:
    """Low-discrepancy sample of the unit-sphere octant (area-uniform)."""
    z = (np.arange(count) + 0.5) / count
    phi = 0.5 * np.pi * _van_der_corput(count)
    rho = np.sqrt(1.0 - z**2)
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


# ---------------------------------------------------------------------------
# Engineering problems (constraint violations folded into an objective).
# ---------------------------------------------------------------------------

def _eval_re_truss(X: np.ndarray) -> np.ndarray:
    """Four-bar truss: structural volume vs joint displacement."""
    x1, x2, x3, x4 = X.T
    force, young, length = 10.0, 2.0e5, 200.0
    f1 = length * (2.0 * x1 + np.sqrt(2.0) * x2 + np.sqrt(x3) + x4)
    f2 = (force * length / young) * (
        2.0 / x1 + 2.0 * np.sqrt(2.0) / x2 - 2.0 * np.sqrt(2.0) / x3 + 2.0 / x4
    )
    return np.column_stack([f1, f2])


def _eval_re_vessel(X: np.ndarray) -> np.ndarray:
    """Pressure vessel: total cost vs summed constraint violation.

    Shell and head thicknesses are discrete multiples of 0.0625 in; the
    first two coordinates are rounded to their integer counts.
    """
    d1 = 0.0625 * np.round(X[:, 0])
    d2 = 0.0625 * np.round(X[:, 1])
    r, length = X[:, 2], X[:, 3]
    f1 = (
        0.6224 * d1 * r * length
        + 1.7781 * d2 * r**2
        + 3.1661 * d1**2 * length
        + 19.84 * d1**2 * r
    )
    g1 = d1 - 0.0193 * r
    g2 = d2 - 0.00954 * r
    g3 = np.pi * r**2 * length + (4.0 / 3.0) * np.pi * r**3 - 1296000.0
    f2 = np.maximum(-g1, 0.0) + np.maximum(-g2, 0.0) + np.maximum(-g3, 0.0)
    return np.column_stack([f1, f2])


def _eval_re_brake(X: np.ndarray) -> np.ndarray:
    """Disc brake: mass, stopping time, and summed constraint violation."""
    ri, ro, force, surfaces = X.T
    f1 = 4.9e-5 * (ro**2 - ri**2) * (surfaces - 1.0)
    f2 = 9.82e6 * (ro**2 - ri**2) / (force * surfaces * (ro**3 - ri**3))
    g1 = (ro - ri) - 20.0
    g2 = 0.4 - force / (3.14 * (ro**2 - ri**2))
    g3 = 1.0 - 2.22e-3 * force * (ro**3 - ri**3) / (ro**2 - ri**2) ** 2
    g4 = 2.66e-2 * force * surfaces * (ro**3 - ri**3) / (ro**2 - ri**2) - 900.0
    f3 = (
        np.maximum(-g1, 0.0)
        + np.maximum(-g2, 0.0)
        + np.maximum(-g3, 0.0)
        + np.maximum(-g4, 0.0)
    )
    return np.column_stack([f1, f2, f3])


def _eval_re_gear(X: np.ndarray) -> np.ndarray:
    """Gear train: ratio error, largest tooth count, constraint violation."""
    z = np.round(X)
    f1 = np.abs(6.931 - z[:, 2] * z[:, 3] / (z[:, 0] * z[:, 1]))
    f2 = np.max(z, axis=1)
    f3 = np.maximum(f1 / 6.931 - 0.5, 0.0)
    return np.column_stack([f1, f2, f3])


def _eval_re_injector(X: np.ndarray) -> np.ndarray:
    """Rocket injector response surfaces: face temperature, wall temperature,
    and combustion-length surrogate as cubic polynomials of four normalized
    geometry variables."""
    a, ha, oa, optt = X.T
    f1 = (
        0.692
        + 0.477 * a
        - 0.687 * ha
        - 0.080 * oa
        - 0.0650 * optt
        - 0.167 * a**2
        - 0.0129 * ha * a
        + 0.0796 * ha**2
        - 0.0634 * oa * a
        - 0.0257 * oa * ha
        + 0.0877 * oa**2
        - 0.0521 * optt * a
        + 0.00156 * optt * ha
        + 0.00198 * optt * oa
        + 0.0184 * optt**2
    )
    f2 = (
        0.153
        - 0.322 * a
        + 0.396 * ha
        + 0.424 * oa
        + 0.0226 * optt
        + 0.175 * a**2
        + 0.0185 * ha * a
        - 0.0701 * ha**2
        - 0.251 * oa * a
        + 0.179 * oa * ha
        + 0.0150 * oa**2
        + 0.0134 * optt * a
        + 0.0296 * optt * ha
        + 0.0752 * optt * oa
        + 0.0192 * optt**2
    )
    f3 = (
        0.370
        - 0.205 * a
        + 0.0307 * ha
        + 0.108 * oa
        + 1.019 * optt
        - 0.135 * a**2
        + 0.0141 * ha * a
        + 0.0998 * ha**2
        + 0.208 * oa * a
        - 0.0301 * oa * ha
        - 0.226 * oa**2
        + 0.353 * optt * a
        - 0.0497 * optt * oa
        - 0.423 * optt**2
        + 0.202 * ha * a**2
        - 0.281 * oa * a**2
        - 0.342 * ha**2 * a
        - 0.245 * ha**2 * oa
        + 0.281 * oa**2 * ha
        - 0.184 * optt**2 * a
        - 0.281 * ha * a * oa
    )
    return np.column_stack([f1, f2, f3])


# ---------------------------------------------------------------------------
# Registry.
# ---------------------------------------------------------------------------

_SQRT2 = float(np.sqrt(2.0))

_REGISTRY: dict[str, _Entry] = {
    "F1": _Entry(
        6, 2, (0.0,) * 6, (1.0,) * 6, (1.1, 1.1),
        _make_f_problem(_shift_f1, _shift_f1), _front_sqrt, _pref_front_sqrt,
    ),
    "F2": _Entry(
        6, 2, (0.0,) * 6, (1.0,) * 6, (1.1, 1.1),
        _make_f_problem(_shift_f2, _shift_f2), _front_sqrt, _pref_front_sqrt,
    ),
    "F3": _Entry(
        6, 2, (0.0,) + (-1.0,) * 5, (1.0,) * 6, (1.1, 1.1),
        _make_f_problem(_shift_f3, _shift_f3), _front_sqrt, _pref_front_sqrt,
    ),
    "F4": _Entry(
        6, 2, (0.0,) + (-1.0,) * 5, (1.0,) * 6, (1.1, 1.1),
        _make_f_problem(_shift_f4_odd, _shift_f4_even), _front_sqrt, _pref_front_sqrt,
    ),
    "F5": _Entry(
        6, 2, (0.0,) + (-1.0,) * 5, (1.0,) * 6, (1.1, 1.1),
        _make_f_problem(_shift_f5_odd, _shift_f4_even), _front_sqrt, _pref_front_sqrt,
    ),
    "F6": _Entry(
        6, 2, (0.0,) + (-1.0,) * 5, (1.0,) * 6, (1.1, 1.1),
        _make_f_problem(_shift_f6_odd, _shift_f6_even), _front_sqrt, _pref_front_sqrt,
    ),
    "VLMOP1": _Entry(
        1, 2, (-2.0,), (4.0,), (4.4, 4.4),
        _eval_vlmop1, _front_vlmop1, _pref_front_vlmop1,
    ),
    "VLMOP2": _Entry(
        6, 2, (-2.0,) * 6, (2.0,) * 6, (1.1, 1.1),
        _eval_vlmop2, _front_vlmop2, _pref_front_vlmop2,
    ),
    "VLMOP3": _Entry(
        2, 3, (-3.0, -3.0), (3.0, 3.0), (11.0, 66.0, 1.1),
        _eval_vlmop3, _front_vlmop3, None,
    ),
    "DTLZ2": _Entry(
        6, 3, (0.0,) * 6, (1.0,) * 6, (1.1, 1.1, 1.1),
        _eval_dtlz2, _front_dtlz2, _pref_front_sphere,
    ),
    "RE-truss": _Entry(
        4, 2, (1.0, _SQRT2, _SQRT2, 1.0), (3.0, 3.0, 3.0, 3.0),
        (3175.0065, 0.0400), _eval_re_truss,
    ),
    "RE-vessel": _Entry(
        4, 2, (1.0, 1.0, 10.0, 10.0), (100.0, 100.0, 200.0, 240.0),
        (6437.2649, 1417536.7586), _eval_re_vessel,
    ),
    "RE-brake": _Entry(
        4, 3, (55.0, 75.0, 1000.0, 11.0), (80.0, 110.0, 3000.0, 20.0),
        (5.8374, 3.4412, 27.5), _eval_re_brake,
    ),
    "RE-gear": _Entry(
        4, 3, (12.0,) * 4, (60.0,) * 4, (6.5241, 61.6, 0.3913), _eval_re_gear,
    ),
    "RE-injector": _Entry(
        4, 3, (0.0,) * 4, (1.0,) * 4, (1.0884, 1.0522, 1.0863), _eval_re_injector,
    ),
}

# Approximate fronts ingested at runtime (RE problems), keyed by name.
_INGESTED_FRONTS: dict[str, np.ndarray] = {}


def list_problems() -> list[str]:
    """Names of all registered problems, in registry order."""
    return list(_REGISTRY)


def make_problem(name: str) -> ProblemSpec:
    """Look up a problem by name.

    Args:
        name: registry identifier, e.g. ``"F1"`` or ``"RE-truss"``.

    Returns:
        The immutable :class:`ProblemSpec`.

    Raises:
        UnregisteredProblemError: for unknown names.
    """
    try:
        e = _REGISTRY[name]
    except KeyError:
        known = ", ".join(_REGISTRY)
        raise UnregisteredProblemError(
            f"unregistered problem {name!r}; known problems: {known}"
        ) from None
    return ProblemSpec(
        name=name,
        n=e.n,
        m=e.m,
        lower_bounds=np.asarray(e.lower, dtype=float),
        upper_bounds=np.asarray(e.upper, dtype=float),
        reference_point=np.asarray(e.reference, dtype=float),
        has_known_front=e.front is not None,
    )


def evaluate(problem: ProblemSpec, x: np.ndarray) -> np.ndarray:
    """Evaluate the true objectives at one point or a batch of points.

    Args:
        problem: spec from :func:`make_problem`.
        x: shape (n,) or (N, n) decision vector(s), within bounds up to a
            1e-12 roundoff tolerance.

    Returns:
        Objective values with shape (m,) or (N, m) matching the input rank.

    Raises:
        ValueError: on shape mismatch, non-finite input, or out-of-bounds
            coordinates.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = np.atleast_2d(x)
    if X.shape[1] != problem.n:
        raise ValueError(
            f"{problem.name} expects {problem.n} variables, got {X.shape[1]}"
        )
    if not np.all(np.isfinite(X)):
        raise ValueError("non-finite decision vector")
    lo = problem.lower_bounds - BOUNDS_TOL
    hi = problem.upper_bounds + BOUNDS_TOL
    if np.any(X < lo) or np.any(X > hi):
        raise ValueError(f"decision vector outside the bounds of {problem.name}")
    Y = _REGISTRY[problem.name].evaluator(X)
    return Y[0] if single else Y


def true_front(problem: ProblemSpec, count: int) -> np.ndarray:
    """Sample the known (or ingested approximate) Pareto front.

    Args:
        problem: spec from :func:`make_problem`.
        count: requested number of points.

    Returns:
        (count, m) array of mutually non-dominated front points.  For
        CSV-backed fronts, at most the ingested number of rows is returned
        (evenly spaced after sorting by the first objective).

    Raises:
        FrontUnavailableError: when the problem has no analytic front and no
            CSV front has been ingested via :func:`load_front_csv`.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    e = _REGISTRY[problem.name]
    if e.front is not None:
        return e.front(count)
    if problem.name in _INGESTED_FRONTS:
        pts = _INGESTED_FRONTS[problem.name]
        idx = np.linspace(0, len(pts) - 1, min(count, len(pts))).round().astype(int)
        return pts[np.unique(idx)]
    raise FrontUnavailableError(
        f"front unavailable for {problem.name}: ingest an approximate front "
        f"CSV with load_front_csv() first"
    )


def front_at_preferences(
    problem: ProblemSpec, prefs: np.ndarray, utopia: np.ndarray | None = None
) -> np.ndarray | None:
    """Front points matched to preference vectors, when solvable.

    For problems whose front is a known parametric curve/surface, returns
    the weighted-Tchebycheff minimizer on the true front for each preference
    row.  Metrics that compare a learned front against these points share
    the discretization of the learned front, so the comparison isolates
    model error.  Returns None when no matched solver is registered
    (VLMOP3 and the RE problems).

    Args:
        problem: spec from :func:`make_problem`.
        prefs: (P, m) preference rows (nonnegative, each summing to 1).
        utopia: length-m utopia vector; defaults to the true ideal point
            (the origin for every solvable problem) shifted down by
            ``max(0.1*|ideal|, 1e-6)``.
    """
    e = _REGISTRY[problem.name]
    if e.pref_front is None:
        return None
    if utopia is None:
        utopia = np.full(problem.m, -1e-6)
    prefs = np.atleast_2d(np.asarray(prefs, dtype=float))
    return e.pref_front(prefs, np.asarray(utopia, dtype=float))


def load_front_csv(name: str, path) -> np.ndarray:
    """Ingest an approximate Pareto front for a registered problem.

    The file holds one objective vector per row.  A header is optional; when
    present it must name columns ``f1``, ``f2`` (and ``f3`` for m = 3), and
    any extra columns are ignored.  Dominated rows are filtered out with a
    warning, so exports from other tools need not be perfectly clean.

    Args:
        name: problem the front belongs to.
        path: CSV file path.

    Returns:
        The (N, m) non-dominated front that was registered.

    Raises:
        UnregisteredProblemError: unknown problem name.
        ValueError: malformed file or wrong column count.
    """
    from .hv import non_dominated_mask

    if name not in _REGISTRY:
        known = ", ".join(_REGISTRY)
        raise UnregisteredProblemError(
            f"unregistered problem {name!r}; known problems: {known}"
        )
    m = _REGISTRY[name].m
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise ValueError(f"empty front file: {path}")

    def _as_floats(row):
        try:
            return [float(c) for c in row]
        except ValueError:
            return None

    first = _as_floats(rows[0])
    if first is None:
        header = [c.strip() for c in rows[0]]
        wanted = [f"f{i + 1}" for i in range(m)]
        try:
            cols = [header.index(w) for w in wanted]
        except ValueError:
            raise ValueError(
                f"front file header {header} lacks columns {wanted}"
            ) from None
        data = []
        for r in rows[1:]:
            vals = _as_floats(r)
            if vals is None or len(r) != len(header):
                raise ValueError(f"malformed front row: {r}")
            data.append([vals[c] for c in cols])
    else:
        data = []
        for r in rows:
            vals = _as_floats(r)
            if vals is None or len(vals) != m:
                raise ValueError(
                    f"front rows must have exactly {m} columns for {name}: {r}"
                )
            data.append(vals)
    pts = np.asarray(data, dtype=float)
    if not np.all(np.isfinite(pts)):
        raise ValueError("front file contains non-finite values")
    mask = non_dominated_mask(pts)
    if not mask.all():
        warnings.warn(
            f"{(~mask).sum()} dominated row(s) filtered from {name} front",
            stacklevel=2,
        )
        pts = pts[mask]
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    _INGESTED_FRONTS[name] = pts[order]
    return _INGESTED_FRONTS[name]


def clear_ingested_fronts() -> None:
    """Forget all CSV-ingested fronts (mainly for tests)."""
    _INGESTED_FRONTS.clear()
