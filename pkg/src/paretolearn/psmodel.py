"""The Pareto set model: a preference-to-solution network with manual autodiff.

``h(lam) -> x`` is a fully connected network (m -> 256 -> 256 -> 256 -> n,
rectifier hidden activations) whose output layer is squashed by a logistic
and affinely rescaled into the problem box, so every generated candidate is
feasible by construction.  Forward, backward, and the training loop are
written directly in numpy: the training gradient chains the scalarization
subgradient through the GP posterior's analytic input gradients and the
network Jacobian, with one Adam update per step on the summed per-preference
gradients.
"""

from dataclasses import dataclass

import numpy as np

from . import checkpoint
from .scalarize import merge_ideal, tch_aug_active
from .surrogate import SurrogateBundle

__all__ = [
    "HIDDEN_UNITS",
    "TrainConfig",
    "TrainingDivergedError",
    "ParetoSetModel",
    "sample_preferences",
    "train_psl",
    "save_model",
    "load_model",
]

HIDDEN_UNITS = (256, 256, 256)


class TrainingDivergedError(RuntimeError):
    """Raised when the training loss becomes non-finite."""

    def __init__(self, step: int):
        super().__init__(f"training diverged: non-finite loss at step {step}")
        self.step = step


@dataclass(frozen=True)
class TrainConfig:
    """Pareto-set-model training settings (defaults follow the campaign
    protocol: 1000 steps of 10 sampled preferences, Adam at 1e-3)."""

    steps: int = 1000
    prefs_per_step: int = 10
    learning_rate: float = 1e-3
    lcb_beta: float = 0.5
    lcb_beta_end: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.steps < 0 or self.prefs_per_step < 1 or self.learning_rate <= 0:
            raise ValueError("invalid training configuration")
        if self.lcb_beta_end is not None and self.lcb_beta_end < 0:
            raise ValueError("invalid training configuration")


class ParetoSetModel:
    """Preference-conditioned solution generator with cached forward passes.

    Attributes:
        m, n: preference and decision dimensions.
        lower, upper: decision box the outputs are squashed into.
        layers: list of (weight, bias) pairs, input-major weight matrices.
        problem_name: optional provenance tag embedded in checkpoints.
    """

    def __init__(
        self,
        m: int,
        n: int,
        lower: np.ndarray,
        upper: np.ndarray,
        hidden: tuple = HIDDEN_UNITS,
        rng: np.random.Generator | None = None,
        problem_name: str | None = None,
    ):
        self.m = int(m)
        self.n = int(n)
        self.lower = np.asarray(lower, dtype=float)
        self.upper = np.asarray(upper, dtype=float)
        self.hidden = tuple(int(h) for h in hidden)
        self.problem_name = problem_name
        if rng is None:
            rng = np.random.default_rng()
        dims = [self.m, *self.hidden, self.n]
        self.layers: list[list[np.ndarray]] = []
        for fan_in, fan_out in zip(dims[:-1], dims[1:]):
            bound = 1.0 / np.sqrt(fan_in)
            W = rng.uniform(-bound, bound, size=(fan_in, fan_out))
            b = rng.uniform(-bound, bound, size=fan_out)
            self.layers.append([W, b])
        self._cache = None

    @property
    def parameter_count(self) -> int:
        return sum(W.size + b.size for W, b in self.layers)

    def parameters(self) -> list[np.ndarray]:
        """Flat list of parameter arrays in fixed layer order (views)."""
        out = []
        for W, b in self.layers:
            out.extend([W, b])
        return out

    def forward(self, prefs: np.ndarray) -> np.ndarray:
        """Map preferences to in-bounds decision vectors.

        Accepts a single length-m preference or a (K, m) batch; the result
        matches the input rank.  The intermediate activations are cached for
        a subsequent :meth:`backward` call.
        """
        prefs = np.asarray(prefs, dtype=float)
        single = prefs.ndim == 1
        L = np.atleast_2d(prefs)
        if L.shape[1] != self.m:
            raise ValueError(f"expected {self.m}-dim preferences, got {L.shape[1]}")
        acts = [L]
        h = L
        for W, b in self.layers[:-1]:
            h = np.maximum(h @ W + b, 0.0)
            acts.append(h)
        Wn, bn = self.layers[-1]
        z = h @ Wn + bn
        s = 1.0 / (1.0 + np.exp(-z))
        X = self.lower + (self.upper - self.lower) * s
        self._cache = {"acts": acts, "squash": s, "prefs": L}
        return X[0] if single else X

    def backward(self, upstream: np.ndarray) -> list[np.ndarray]:
        """Parameter gradients of ``sum_k upstream_k . x(lam_k)``.

        Requires a preceding :meth:`forward` call; gradients over the cached
        batch are summed.  Returns arrays matching :meth:`parameters` order.

        Raises:
            RuntimeError: when no forward cache is available.
        """
        if self._cache is None:
            raise RuntimeError(
                "backward called without a cached forward pass for this model"
            )
        upstream = np.atleast_2d(np.asarray(upstream, dtype=float))
        acts = self._cache["acts"]
        s = self._cache["squash"]
        if upstream.shape != (len(acts[0]), self.n):
            raise RuntimeError(
                "upstream gradient shape does not match the cached forward batch"
            )
        delta = upstream * (self.upper - self.lower) * s * (1.0 - s)
        grads: list[np.ndarray] = []
        for i in range(len(self.layers) - 1, -1, -1):
            W, _ = self.layers[i]
            grads.append(delta.sum(axis=0))  # bias
            grads.append(acts[i].T @ delta)  # weight
            if i > 0:
                delta = (delta @ W.T) * (acts[i] > 0.0)
        grads.reverse()
        return grads

    def input_jacobian(self, pref: np.ndarray) -> np.ndarray:
        """Jacobian dx/dlam at one preference, shape (n, m)."""
        lam = np.asarray(pref, dtype=float).reshape(1, -1)
        x = self.forward(lam)  # refresh cache
        del x
        acts = self._cache["acts"]
        s = self._cache["squash"][0]
        J = np.diag((self.upper - self.lower) * s * (1.0 - s)) @ self.layers[-1][0].T
        for i in range(len(self.layers) - 2, -1, -1):
            W, _ = self.layers[i]
            mask = (acts[i + 1][0] > 0.0).astype(float)
            J = (J * mask) @ W.T
        return J


def sample_preferences(m: int, K: int, rng: np.random.Generator) -> np.ndarray:
    """Draw K preference rows: uniform on [0,1]^m, normalized to sum 1.

    All-zero draws (possible only with measure zero, but guarded anyway)
    are redrawn.
    """
    if m < 2 or K < 1:
        raise ValueError("need m >= 2 and K >= 1")
    lam = rng.random((K, m))
    s = lam.sum(axis=1)
    while np.any(s == 0.0):
        redo = s == 0.0
        lam[redo] = rng.random((int(redo.sum()), m))
        s = lam.sum(axis=1)
    return lam / s[:, None]


def train_psl(
    surrogates: SurrogateBundle,
    state,
    config: TrainConfig,
    rng: np.random.Generator | None = None,
) -> ParetoSetModel:
    """Train a fresh Pareto set model against fitted GP surrogates.

    Each step samples ``prefs_per_step`` preferences, scores their generated
    solutions with the augmented Tchebycheff value of the LCB surrogate
    objectives, and applies one Adam update on the summed parameter
    gradients.  The chain runs scalarization -> LCB -> GP input gradients ->
    network backward; degenerate posterior deviations contribute zero
    gradient through the std term.

    Args:
        surrogates: fitted per-objective GPs (supplies m, n, and bounds).
        state: IdealState with the current utopia offsets.
        config: steps/K/learning-rate settings.
        rng: generator for initialization and preference sampling; defaults
            to a Philox stream seeded with ``config.seed``.

    Returns:
        The trained model (the freshly initialized model when steps == 0).

    Raises:
        TrainingDivergedError: non-finite training loss, with the step index.
    """
    if rng is None:
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(config.seed)))
    model = ParetoSetModel(
        m=surrogates.m,
        n=surrogates.n,
        lower=surrogates.lower,
        upper=surrogates.upper,
        rng=rng,
    )
    params = model.parameters()
    m1 = [np.zeros_like(p) for p in params]
    m2 = [np.zeros_like(p) for p in params]
    # Optional linear anneal of the exploration coefficient: starting from
    # lcb_beta spreads the manifold early (the std bonus pulls the mapping
    # past sparsely sampled front regions), finishing at lcb_beta_end
    # removes the optimism bias from the final geometry.
    beta0 = config.lcb_beta
    beta1 = beta0 if config.lcb_beta_end is None else config.lcb_beta_end
    for step in range(1, config.steps + 1):
        beta = beta0 + (beta1 - beta0) * (step - 1) / max(config.steps - 1, 1)
        lam = sample_preferences(model.m, config.prefs_per_step, rng)
        X = model.forward(lam)
        means, stds, dmean, dstd, _ = surrogates.predict_gradient(X)
        fhat = means - beta * stds
        dfhat = dmean - beta * dstd  # (K, m, n)
        # The ideal point is updated dynamically with the best surrogate
        # value seen per objective, so the utopia point keeps pulling the
        # model beyond the evaluated archive (the update is a constant in
        # the gradient).
        state = merge_ideal(state, fhat)
        values, active = tch_aug_active(fhat, lam, state)
        if not np.all(np.isfinite(values)):
            raise TrainingDivergedError(step)
        rows = np.arange(len(lam))
        upstream = (
            lam[rows, active, None] * dfhat[rows, active, :]
            + state.rho * np.einsum("ki,kin->kn", lam, dfhat)
        )
        grads = model.backward(upstream)
        for p, g, a, b in zip(params, grads, m1, m2):
            a *= 0.9
            a += 0.1 * g
            b *= 0.999
            b += 0.001 * g * g
            mhat = a / (1.0 - 0.9**step)
            vhat = b / (1.0 - 0.999**step)
            p -= config.learning_rate * mhat / (np.sqrt(vhat) + 1e-8)
    return model


def save_model(model: ParetoSetModel) -> bytes:
    """Serialize a model to checkpoint bytes (see :mod:`.checkpoint`)."""
    header = {
        "kind": "psmodel",
        "m": model.m,
        "n": model.n,
        "hidden": list(model.hidden),
        "problem": model.problem_name,
    }
    arrays = {"lower": model.lower, "upper": model.upper}
    for i, (W, b) in enumerate(model.layers):
        arrays[f"w{i}"] = W
        arrays[f"b{i}"] = b
    return checkpoint.pack(header, arrays)


def load_model(
    data: bytes,
    expect_n: int | None = None,
    expect_m: int | None = None,
    expect_problem: str | None = None,
) -> ParetoSetModel:
    """Rebuild a model from checkpoint bytes.

    Raises:
        checkpoint.CheckpointError: corrupt container, wrong kind, or a
            mismatch with the expected dimensions/problem.
    """
    header, arrays = checkpoint.unpack(data)
    if header.get("kind") != "psmodel":
        raise checkpoint.CheckpointError(
            f"incompatible checkpoint kind {header.get('kind')!r}"
        )
    m, n = int(header["m"]), int(header["n"])
    hidden = tuple(int(h) for h in header["hidden"])
    if expect_n is not None and n != expect_n:
        raise checkpoint.CheckpointError(
            f"incompatible checkpoint: expected n={expect_n}, found n={n}"
        )
    if expect_m is not None and m != expect_m:
        raise checkpoint.CheckpointError(
            f"incompatible checkpoint: expected m={expect_m}, found m={m}"
        )
    if expect_problem is not None and header.get("problem") != expect_problem:
        raise checkpoint.CheckpointError(
            f"incompatible checkpoint: problem {header.get('problem')!r} != "
            f"{expect_problem!r}"
        )
    model = ParetoSetModel.__new__(ParetoSetModel)
    model.m = m
    model.n = n
    model.hidden = hidden
    model.problem_name = header.get("problem")
    model.lower = arrays["lower"]
    model.upper = arrays["upper"]
    dims = [m, *hidden, n]
    model.layers = []
    for i, (fan_in, fan_out) in enumerate(zip(dims[:-1], dims[1:])):
        try:
            W, b = arrays[f"w{i}"], arrays[f"b{i}"]
        except KeyError:
            raise checkpoint.CheckpointError(f"missing layer {i} arrays") from None
        if W.shape != (fan_in, fan_out) or b.shape != (fan_out,):
            raise checkpoint.CheckpointError(
                f"incompatible checkpoint: layer {i} shape {W.shape} does not "
                f"match architecture {dims}"
            )
        model.layers.append([W, b])
    model._cache = None
    return model
