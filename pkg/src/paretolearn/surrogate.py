"""Independent per-objective Gaussian process regression, Matérn 5/2 kernel.

Inputs are expected in the unit cube (the bundle handles rescaling from
problem bounds); targets are standardized per objective before fitting and
predictions are mapped back to original units.  Hyperparameters (signal
variance, per-dimension lengthscales, noise variance) are fitted by
multi-start Adam ascent on the log marginal likelihood in log-parameter
space.  All posterior quantities have analytic input gradients, which the
Pareto set model trains against.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular

__all__ = [
    "KernelParams",
    "FitConfig",
    "GpModel",
    "SurrogateBundle",
    "IllConditionedError",
    "matern52",
    "fit",
    "fit_bundle",
    "predict",
    "predict_gradient",
    "lcb",
]

NOISE_FLOOR = 1e-6
NOISE_CEILING = 1e-2  # jitter escalation stops here
DEGENERATE_STD = 1e-9  # below this (standardized) the std gradient is zeroed

_SQRT5 = math.sqrt(5.0)

# Box constraints for the fitted log-hyperparameters, wide enough to be
# inactive on well-scaled data but preventing numerical blow-ups.
_LOG_BOUNDS = {
    "signal": (math.log(1e-3), math.log(1e3)),
    "length": (math.log(1e-2), math.log(2e1)),
    "noise": (math.log(NOISE_FLOOR), math.log(1e-1)),
}


class IllConditionedError(RuntimeError):
    """Raised when the Gram matrix cannot be factored even with escalated jitter."""


@dataclass(frozen=True)
class KernelParams:
    """Matérn 5/2 hyperparameters (standardized-target, unit-cube-input scale)."""

    signal_variance: float
    lengthscales: np.ndarray
    noise_variance: float

    def __post_init__(self):
        object.__setattr__(
            self, "lengthscales", np.asarray(self.lengthscales, dtype=float)
        )
        if self.signal_variance <= 0.0 or np.any(self.lengthscales <= 0.0):
            raise ValueError("kernel hyperparameters must be strictly positive")
        if self.noise_variance < NOISE_FLOOR:
            raise ValueError(f"noise variance below the {NOISE_FLOOR} floor")


@dataclass(frozen=True)
class FitConfig:
    """Hyperparameter-fit settings: multi-start Adam on the log-likelihood."""

    n_starts: int = 4
    steps: int = 200
    learning_rate: float = 0.05
    seed: int = 0


@dataclass(frozen=True)
class GpModel:
    """Fitted posterior for one objective.

    ``training_inputs`` are unit-cube normalized, ``training_targets``
    standardized; ``target_mean``/``target_std`` de-standardize predictions.
    ``chol`` is the lower Cholesky factor of K + noise*I and ``alpha`` the
    precomputed solve against the standardized targets.
    """

    kernel: KernelParams
    training_inputs: np.ndarray
    training_targets: np.ndarray
    chol: np.ndarray
    alpha: np.ndarray
    target_mean: float
    target_std: float


def _scaled_sq_dists(A: np.ndarray, B: np.ndarray, ls: np.ndarray) -> np.ndarray:
    d = (A[:, None, :] - B[None, :, :]) / ls
    return np.sum(d * d, axis=2)


def _matern_from_r(r: np.ndarray, signal: float) -> np.ndarray:
    e = np.exp(-_SQRT5 * r)
    return signal * (1.0 + _SQRT5 * r + (5.0 / 3.0) * r * r) * e


def matern52(x: np.ndarray, y: np.ndarray, params: KernelParams) -> float:
    """Matérn 5/2 covariance between two points.

    With scaled distance ``r = sqrt(sum_d ((x_d - y_d) / ls_d)^2)``:

        k = signal * (1 + sqrt(5) r + (5/3) r^2) * exp(-sqrt(5) r)
    """
    x = np.asarray(x, dtype=float).reshape(1, -1)
    y = np.asarray(y, dtype=float).reshape(1, -1)
    r = np.sqrt(_scaled_sq_dists(x, y, params.lengthscales))
    return float(_matern_from_r(r, params.signal_variance)[0, 0])


def _nll_and_grad(theta: np.ndarray, D2: np.ndarray, y: np.ndarray):
    """Negative log marginal likelihood and its gradient in log-parameter space.

    theta = [log signal, log ls_1..n, log noise]; D2 is the (n, N, N) tensor
    of per-dimension squared coordinate differences.  Returns (inf, zeros)
    when the Gram matrix is not positive definite at theta.
    """
    n = D2.shape[0]
    N = len(y)
    signal = math.exp(theta[0])
    ls2 = np.exp(2.0 * theta[1 : 1 + n])
    noise = math.exp(theta[-1])
    r2 = np.tensordot(1.0 / ls2, D2, axes=1)
    r = np.sqrt(np.maximum(r2, 0.0))
    e = np.exp(-_SQRT5 * r)
    M = (1.0 + _SQRT5 * r + (5.0 / 3.0) * r2) * e
    K = signal * M
    K[np.diag_indices_from(K)] += noise
    try:
        L, low = cho_factor(K, lower=True, check_finite=False)
    except np.linalg.LinAlgError:
        return np.inf, np.zeros_like(theta)
    alpha = cho_solve((L, low), y, check_finite=False)
    nll = (
        0.5 * float(y @ alpha)
        + float(np.sum(np.log(np.diag(L))))
        + 0.5 * N * math.log(2.0 * math.pi)
    )
    Kinv = cho_solve((L, low), np.eye(N), check_finite=False)
    A = Kinv - np.outer(alpha, alpha)
    grad = np.empty_like(theta)
    grad[0] = 0.5 * float(np.sum(A * (signal * M)))
    # d k / d log ls_d = signal * (5/3) (1 + sqrt5 r) e * D2_d / ls_d^2
    B = signal * (5.0 / 3.0) * (1.0 + _SQRT5 * r) * e
    AB = A * B
    for d in range(n):
        grad[1 + d] = 0.5 * float(np.sum(AB * D2[d])) / ls2[d]
    grad[-1] = 0.5 * noise * float(np.trace(A))
    return nll, grad


def _clip_theta(theta: np.ndarray) -> np.ndarray:
    n = len(theta) - 2
    lo = np.array([_LOG_BOUNDS["signal"][0]] + [_LOG_BOUNDS["length"][0]] * n
                  + [_LOG_BOUNDS["noise"][0]])
    hi = np.array([_LOG_BOUNDS["signal"][1]] + [_LOG_BOUNDS["length"][1]] * n
                  + [_LOG_BOUNDS["noise"][1]])
    return np.clip(theta, lo, hi)


def fit(X: np.ndarray, y: np.ndarray, config: FitConfig = FitConfig()) -> GpModel:
    """Fit one GP to unit-cube inputs and raw targets.

    Targets are standardized internally; the returned model de-standardizes
    its predictions.  The best hyperparameters across all starts and steps
    are kept, so the final negative log likelihood never exceeds the
    initialization's.

    Args:
        X: (N, n) inputs inside the unit cube (1e-9 tolerance), N >= 2.
        y: length-N finite targets.
        config: multi-start optimizer settings.

    Raises:
        ValueError: bad shapes, out-of-cube inputs, or non-finite targets.
        IllConditionedError: Gram factorization fails after jitter escalation.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if X.ndim != 2 or len(X) != len(y):
        raise ValueError("X must be (N, n) with matching target length")
    if len(y) < 2:
        raise ValueError("need at least two observations to fit")
    if np.any(X < -1e-9) or np.any(X > 1.0 + 1e-9):
        raise ValueError("training inputs must lie in the unit cube")
    if not np.all(np.isfinite(y)):
        raise ValueError("targets must be finite")
    n = X.shape[1]
    y_mean = float(np.mean(y))
    y_std = float(np.std(y))
    y_std = y_std if y_std > 1e-12 else 1.0
    ys = (y - y_mean) / y_std

    diffs = X[:, None, :] - X[None, :, :]
    D2 = np.transpose(diffs * diffs, (2, 0, 1)).copy()

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(config.seed)))
    starts = [np.concatenate(([0.0], np.full(n, math.log(0.5)), [math.log(1e-4)]))]
    for _ in range(max(config.n_starts - 1, 0)):
        starts.append(
            np.concatenate(
                (
                    [rng.uniform(math.log(0.3), math.log(3.0))],
                    rng.uniform(math.log(0.1), math.log(2.0), size=n),
                    [rng.uniform(math.log(1e-6), math.log(1e-2))],
                )
            )
        )

    best_nll, best_theta = np.inf, starts[0]
    for theta0 in starts:
        theta = _clip_theta(theta0.copy())
        m1 = np.zeros_like(theta)
        m2 = np.zeros_like(theta)
        nll, grad = _nll_and_grad(theta, D2, ys)
        if nll < best_nll:
            best_nll, best_theta = nll, theta.copy()
        for step in range(1, config.steps + 1):
            m1 = 0.9 * m1 + 0.1 * grad
            m2 = 0.999 * m2 + 0.001 * grad * grad
            mhat = m1 / (1.0 - 0.9**step)
            vhat = m2 / (1.0 - 0.999**step)
            theta = _clip_theta(
                theta - config.learning_rate * mhat / (np.sqrt(vhat) + 1e-8)
            )
            nll, grad = _nll_and_grad(theta, D2, ys)
            if nll < best_nll:
                best_nll, best_theta = nll, theta.copy()

    signal = math.exp(best_theta[0])
    ls = np.exp(best_theta[1 : 1 + n])
    noise = math.exp(best_theta[-1])

    r = np.sqrt(np.maximum(np.tensordot(1.0 / ls**2, D2, axes=1), 0.0))
    Kbase = _matern_from_r(r, signal)
    while True:
        K = Kbase.copy()
        K[np.diag_indices_from(K)] += noise
        try:
            L, low = cho_factor(K, lower=True, check_finite=False)
            break
        except np.linalg.LinAlgError:
            if noise >= NOISE_CEILING:
                raise IllConditionedError(
                    "ill-conditioned Gram matrix: factorization failed with "
                    f"noise escalated to {noise:g}"
                ) from None
            noise = min(2.0 * max(noise, NOISE_FLOOR), NOISE_CEILING)
    alpha = cho_solve((L, low), ys, check_finite=False)
    return GpModel(
        kernel=KernelParams(signal, ls, noise),
        training_inputs=X,
        training_targets=ys,
        chol=np.tril(L),
        alpha=alpha,
        target_mean=y_mean,
        target_std=y_std,
    )


def _cross_kernel(model: GpModel, Xq: np.ndarray) -> np.ndarray:
    r = np.sqrt(
        _scaled_sq_dists(Xq, model.training_inputs, model.kernel.lengthscales)
    )
    return _matern_from_r(r, model.kernel.signal_variance), r


def predict(model: GpModel, x: np.ndarray) -> tuple:
    """Posterior mean and variance at one point or a batch.

    Returns de-standardized values: mean in objective units, variance in
    squared objective units (latent-function variance, noise excluded).
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    Xq = np.atleast_2d(x)
    Kx, _ = _cross_kernel(model, Xq)
    mean_s = Kx @ model.alpha
    V = solve_triangular(model.chol, Kx.T, lower=True, check_finite=False)
    var_s = np.maximum(model.kernel.signal_variance - np.sum(V * V, axis=0), 0.0)
    mean = mean_s * model.target_std + model.target_mean
    var = var_s * model.target_std**2
    if single:
        return float(mean[0]), float(var[0])
    return mean, var


def predict_gradient(model: GpModel, x: np.ndarray) -> tuple:
    """Gradients of posterior mean and standard deviation at query points.

    Gradients are with respect to the unit-cube input coordinates, in
    de-standardized output units.  Where the posterior standard deviation is
    degenerate (std <= 1e-9 on the standardized scale) the std gradient is
    zero and the degenerate flag is set.

    Args:
        model: fitted GP.
        x: (n,) or (P, n) query points.

    Returns:
        (dmean, dstd, degenerate): shapes (n,), (n,), bool for a single
        point; (P, n), (P, n), (P,) for a batch.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    Xq = np.atleast_2d(x)
    ls = model.kernel.lengthscales
    Kx, r = _cross_kernel(model, Xq)  # (P, N)
    # d k(x, x_j) / d x = -(5/3) * signal * (1 + sqrt5 r) e^{-sqrt5 r}
    #                     * (x - x_j) / ls^2   (smooth at r = 0)
    coef = (
        -(5.0 / 3.0)
        * model.kernel.signal_variance
        * (1.0 + _SQRT5 * r)
        * np.exp(-_SQRT5 * r)
    )  # (P, N)
    diff = (Xq[:, None, :] - model.training_inputs[None, :, :]) / ls**2
    dK = coef[:, :, None] * diff  # (P, N, n)
    dmean_s = np.einsum("pjn,j->pn", dK, model.alpha)

    V = solve_triangular(model.chol, Kx.T, lower=True, check_finite=False)
    var_s = np.maximum(model.kernel.signal_variance - np.sum(V * V, axis=0), 0.0)
    std_s = np.sqrt(var_s)
    Kinv_k = solve_triangular(
        model.chol.T, V, lower=False, check_finite=False
    )  # (N, P)
    dvar_s = -2.0 * np.einsum("pjn,jp->pn", dK, Kinv_k)
    degenerate = std_s <= DEGENERATE_STD
    safe = np.where(degenerate, 1.0, std_s)
    dstd_s = np.where(degenerate[:, None], 0.0, dvar_s / (2.0 * safe[:, None]))

    dmean = dmean_s * model.target_std
    dstd = dstd_s * model.target_std
    if single:
        return dmean[0], dstd[0], bool(degenerate[0])
    return dmean, dstd, degenerate


def lcb(model: GpModel, x: np.ndarray, beta: float = 0.5) -> float | np.ndarray:
    """Lower confidence bound mean - beta * std (beta >= 0, default 1/2)."""
    if beta < 0.0:
        raise ValueError("beta must be nonnegative")
    mean, var = predict(model, x)
    return mean - beta * np.sqrt(var)


@dataclass(frozen=True)
class SurrogateBundle:
    """Per-objective GPs sharing one training design, plus problem bounds.

    The bundle converts between original decision units and the models'
    unit-cube coordinates, so campaign code works in problem units
    throughout.
    """

    models: list
    lower: np.ndarray
    upper: np.ndarray

    @property
    def m(self) -> int:
        return len(self.models)

    @property
    def n(self) -> int:
        return len(self.lower)

    def normalize(self, X: np.ndarray) -> np.ndarray:
        return (np.atleast_2d(np.asarray(X, dtype=float)) - self.lower) / (
            self.upper - self.lower
        )

    def predict(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Posterior means and standard deviations, original units: (P, m) each."""
        Xn = np.clip(self.normalize(X), 0.0, 1.0)
        means, stds = [], []
        for gp in self.models:
            mu, var = predict(gp, Xn)
            means.append(mu)
            stds.append(np.sqrt(var))
        return np.column_stack(means), np.column_stack(stds)

    def predict_gradient(self, X: np.ndarray) -> tuple:
        """Values and input gradients at X (original units).

        Returns:
            (means, stds, dmean, dstd, degenerate) with shapes (P, m),
            (P, m), (P, m, n), (P, m, n), (P, m).  Gradients are with
            respect to the original (un-normalized) decision coordinates.
        """
        Xn = np.clip(self.normalize(X), 0.0, 1.0)
        scale = 1.0 / (self.upper - self.lower)
        means, stds, dmeans, dstds, degen = [], [], [], [], []
        for gp in self.models:
            mu, var = predict(gp, Xn)
            dm, ds, flag = predict_gradient(gp, Xn)
            means.append(mu)
            stds.append(np.sqrt(var))
            dmeans.append(dm * scale)
            dstds.append(ds * scale)
            degen.append(flag)
        return (
            np.column_stack(means),
            np.column_stack(stds),
            np.stack(dmeans, axis=1),
            np.stack(dstds, axis=1),
            np.column_stack(degen),
        )

    def lcb_values(self, X: np.ndarray, beta: float = 0.5) -> np.ndarray:
        """LCB surrogate objective values mean - beta * std, shape (P, m)."""
        means, stds = self.predict(X)
        return means - beta * stds


def fit_bundle(
    X: np.ndarray,
    Y: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    seed: int = 0,
    config: FitConfig | None = None,
) -> SurrogateBundle:
    """Fit one GP per objective column of Y on a shared design X.

    Args:
        X: (N, n) decision vectors in original units.
        Y: (N, m) objective values.
        lower, upper: problem bounds for unit-cube normalization.
        seed: base seed; each objective fits with an independent derived seed.
        config: optional fit settings (seed field is overridden per model).
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    Xn = (np.asarray(X, dtype=float) - lower) / (upper - lower)
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    base = config or FitConfig()
    models = []
    for j in range(Y.shape[1]):
        sub = int(np.random.SeedSequence([seed, j]).generate_state(1)[0])
        cfg = FitConfig(base.n_starts, base.steps, base.learning_rate, sub)
        models.append(fit(np.clip(Xn, 0.0, 1.0), Y[:, j], cfg))
    return SurrogateBundle(models=models, lower=lower, upper=upper)
