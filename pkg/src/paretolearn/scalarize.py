"""Scalarizations of objective vectors under preference weights.

The campaign optimizes the augmented weighted-Tchebycheff value

    g(f | lam) = max_i lam_i * (f_i - u_i)  +  rho * sum_i lam_i * f_i

with utopia point ``u = z* - eps`` held just below the ideal point ``z*``
(componentwise best evaluated value).  The small weighted-sum augmentation
``rho`` removes weakly-optimal-but-dominated minimizers; the plain weighted
sum is provided for completeness and tests but is never used in campaigns
(it can only reach the convex hull of the front).
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "IdealState",
    "check_preference",
    "weight_sum",
    "tch_aug",
    "tch_aug_active",
    "tch_aug_gradient",
    "update_ideal",
    "merge_ideal",
]

RHO = 0.001  # weighted-sum augmentation coefficient
EPSILON_FLOOR = 1e-6  # keeps the utopia point strictly unachievable


@dataclass(frozen=True)
class IdealState:
    """Ideal point bookkeeping for the augmented Tchebycheff scalarization.

    Attributes:
        ideal: componentwise best evaluated objective values z*.
        epsilon: positive utopia offsets; u = ideal - epsilon.
        rho: augmentation coefficient.
    """

    ideal: np.ndarray
    epsilon: np.ndarray
    rho: float

    def __post_init__(self):
        object.__setattr__(self, "ideal", np.asarray(self.ideal, dtype=float))
        object.__setattr__(self, "epsilon", np.asarray(self.epsilon, dtype=float))
        if np.any(self.epsilon <= 0.0):
            raise ValueError("epsilon components must be strictly positive")
        if self.rho <= 0.0:
            raise ValueError("rho must be strictly positive")

    @property
    def utopia(self) -> np.ndarray:
        return self.ideal - self.epsilon


def check_preference(pref: np.ndarray, m: int | None = None) -> np.ndarray:
    """Validate one preference vector: nonnegative, summing to 1 within 1e-9."""
    lam = np.asarray(pref, dtype=float)
    if lam.ndim != 1:
        raise ValueError("preference must be a 1-D weight vector")
    if m is not None and len(lam) != m:
        raise ValueError(f"preference length {len(lam)} != {m}")
    if np.any(lam < 0.0):
        raise ValueError("preference weights must be nonnegative")
    if abs(float(lam.sum()) - 1.0) > 1e-9:
        raise ValueError("preference weights must sum to 1")
    return lam


def weight_sum(f: np.ndarray, pref: np.ndarray) -> float:
    """Weighted sum sum_i lam_i * f_i."""
    f = np.asarray(f, dtype=float)
    lam = np.asarray(pref, dtype=float)
    if f.shape != lam.shape:
        raise ValueError("objective and preference lengths differ")
    return float(np.dot(lam, f))


def tch_aug(f: np.ndarray, pref: np.ndarray, state: IdealState) -> float:
    """Augmented Tchebycheff value of one objective vector.

    Args:
        f: length-m objective values.
        pref: length-m preference weights.
        state: ideal-point snapshot supplying utopia offsets and rho.

    Returns:
        ``max_i lam_i (f_i - u_i) + rho * sum_i lam_i f_i``.
    """
    f = np.asarray(f, dtype=float)
    lam = np.asarray(pref, dtype=float)
    if f.shape != lam.shape:
        raise ValueError("objective and preference lengths differ")
    terms = lam * (f - state.utopia)
    return float(np.max(terms) + state.rho * np.dot(lam, f))


def tch_aug_active(
    F: np.ndarray, prefs: np.ndarray, state: IdealState
) -> tuple[np.ndarray, np.ndarray]:
    """Batched augmented-Tchebycheff values and active max indices.

    Args:
        F: (K, m) objective rows.
        prefs: (K, m) matching preference rows.
        state: ideal-point snapshot.

    Returns:
        (values, active): the scalarized values (K,) and, per row, the index
        achieving the max term (lowest index on exact ties).
    """
    F = np.atleast_2d(np.asarray(F, dtype=float))
    prefs = np.atleast_2d(np.asarray(prefs, dtype=float))
    terms = prefs * (F - state.utopia)
    active = np.argmax(terms, axis=1)
    values = terms[np.arange(len(F)), active] + state.rho * np.sum(prefs * F, axis=1)
    return values, active


def tch_aug_gradient(
    f: np.ndarray, df_dx: np.ndarray, pref: np.ndarray, state: IdealState
) -> np.ndarray:
    """Subgradient of the augmented Tchebycheff value through f(x).

    Uses the active max term (ties broken by lowest objective index):

        d g / dx = lam_a * df_a/dx + rho * sum_i lam_i * df_i/dx

    Args:
        f: length-m objective values at x.
        df_dx: (m, n) Jacobian of f at x.
        pref: length-m preference weights.
        state: ideal-point snapshot.

    Returns:
        Length-n subgradient vector.
    """
    f = np.asarray(f, dtype=float)
    lam = np.asarray(pref, dtype=float)
    J = np.asarray(df_dx, dtype=float)
    if J.shape[0] != len(f):
        raise ValueError("Jacobian rows must match the number of objectives")
    a = int(np.argmax(lam * (f - state.utopia)))
    return lam[a] * J[a] + state.rho * (lam @ J)


def update_ideal(Y: np.ndarray) -> IdealState:
    """Ideal-point snapshot from an archive of evaluated objective vectors.

    z* is the componentwise minimum of the archive; epsilon is
    ``max(0.1 * |z*|, 1e-6)`` per component so the utopia point stays
    strictly unachievable even when an ideal component is zero.

    Raises:
        ValueError: on an empty archive.
    """
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if Y.size == 0:
        raise ValueError("no evaluations: cannot form an ideal point")
    ideal = Y.min(axis=0)
    epsilon = np.maximum(0.1 * np.abs(ideal), EPSILON_FLOOR)
    return IdealState(ideal=ideal, epsilon=epsilon, rho=RHO)


def merge_ideal(state: IdealState, F: np.ndarray) -> IdealState:
    """Dynamic ideal-point update from additional objective values.

    The ideal point tracks the best value seen for each objective, whether
    evaluated or predicted: during set-model training the utopia point must
    run ahead of the evaluated archive, otherwise the scalarization exerts
    no pressure to extend the front beyond the best already-evaluated value
    in any single objective.  Returns ``state`` unchanged when F improves no
    component.
    """
    F = np.atleast_2d(np.asarray(F, dtype=float))
    low = F.min(axis=0)
    if not np.any(low < state.ideal):
        return state
    ideal = np.minimum(state.ideal, low)
    epsilon = np.maximum(0.1 * np.abs(ideal), EPSILON_FLOOR)
    return IdealState(ideal=ideal, epsilon=epsilon, rho=state.rho)
