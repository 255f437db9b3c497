"""Batched optimization campaigns: the outer loop, baselines, and metrics.

One campaign evaluates a Latin-hypercube initial design, then repeats for a
fixed number of iterations: refit the per-objective GPs, refresh the ideal
point, train a fresh Pareto set model against the surrogates, sample a large
candidate set from the model, score it with LCB values, greedily pick a
batch by predicted hypervolume improvement, and evaluate the batch on the
true problem.  Two reference strategies share the budget accounting: a
scrambled-Sobol random search and a model-free variant that optimizes the
scalarization directly in decision space per sampled preference.

Every stochastic phase draws from a counter-based stream keyed by
``(seed, phase, iteration)`` (see :mod:`.seeding`), so runs are exactly
reproducible and resumable from a mid-run checkpoint without serialized
generator state.
"""

import logging
import time
import warnings
from dataclasses import dataclass, field, asdict

import numpy as np
from scipy.stats import qmc

from . import checkpoint, seeding
from .hv import (
    Candidate,
    FrontArchive,
    greedy_select,
    hypervolume,
    non_dominated_mask,
)
from .problems import (
    FrontUnavailableError,
    ProblemSpec,
    evaluate,
    front_at_preferences,
    make_problem,
    true_front,
)
from .psmodel import (
    ParetoSetModel,
    TrainConfig,
    TrainingDivergedError,
    sample_preferences,
    train_psl,
)
from .scalarize import IdealState, tch_aug_active, update_ideal
from .surrogate import SurrogateBundle, fit_bundle

__all__ = [
    "CampaignConfig",
    "CampaignState",
    "CampaignResult",
    "lhs_init",
    "run_campaign",
    "run_baseline",
    "log_hv_difference",
    "export_front",
    "checkpoint_save",
    "checkpoint_resume",
    "save_final_checkpoint",
    "load_final_checkpoint",
]

logger = logging.getLogger(__name__)

# Number of true-front samples used as the reference when tracking the
# log hypervolume difference across iterations.
REFERENCE_FRONT_SIZE = 1000
LOG_HV_FLOOR = 1e-12
DUPLICATE_GUARD = 1e-9  # selected x closer than this to an archive point is skipped

# The post-loop retrain produces the model that is exported, served, and
# checkpointed, so it gets a longer one-off budget than the per-iteration
# retrains (the squashed output approaches the box faces slowly, and the
# exploration bonus is annealed away so the final geometry tracks the
# posterior mean rather than its optimistic envelope).
FINAL_TRAIN_MULTIPLIER = 10
FINAL_BETA_END = 0.0


@dataclass(frozen=True)
class CampaignConfig:
    """Full specification of one campaign (defaults follow the standard
    protocol: 10 initial points plus 20 iterations of batch 5, 1000
    candidates per iteration, LCB beta 1/2)."""

    problem: str
    n_init: int = 10
    n_iterations: int = 20
    batch_size: int = 5
    candidate_count: int = 1000
    lcb_beta: float = 0.5
    refine_candidates: bool = True
    seed: int = 0
    train: TrainConfig = field(default_factory=TrainConfig)

    def __post_init__(self):
        if self.n_init < 2:
            raise ValueError("n_init must be >= 2")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.candidate_count < self.batch_size:
            raise ValueError("candidate_count must be >= batch_size")

    def to_dict(self) -> dict:
        d = asdict(self)
        return d

    @staticmethod
    def from_dict(d: dict) -> "CampaignConfig":
        d = dict(d)
        d["train"] = TrainConfig(**d.get("train", {}))
        return CampaignConfig(**d)


@dataclass
class CampaignState:
    """Mutable campaign snapshot: archive, ideal point, iteration counter."""

    X: np.ndarray
    Y: np.ndarray
    ideal: IdealState
    iteration: int
    seed: int


@dataclass
class CampaignResult:
    """Everything a finished run produces: the RunLog dictionary, the final
    archive state, and the final surrogates/model used for exports."""

    runlog: dict
    state: CampaignState
    model: ParetoSetModel | None
    surrogates: SurrogateBundle | None


def lhs_init(problem: ProblemSpec, N: int, rng: np.random.Generator) -> np.ndarray:
    """Latin hypercube design: one point per axis stratum per dimension."""
    if N < 1:
        raise ValueError("N must be >= 1")
    span = problem.upper_bounds - problem.lower_bounds
    pts = np.empty((N, problem.n))
    for d in range(problem.n):
        perm = rng.permutation(N)
        u = rng.random(N)
        pts[:, d] = problem.lower_bounds[d] + span[d] * (perm + u) / N
    return pts


def log_hv_difference(Y: np.ndarray, problem: ProblemSpec) -> float:
    """Natural log of the hypervolume gap to the reference front sample.

    Computes ``ln(HV(front) - HV(non_dominated(Y)))`` against a fixed
    1000-point front sample; gaps at or below 1e-12 (including the zero or
    slightly negative gaps a dense front archive produces) are clamped to
    ``ln(1e-12)``.

    Raises:
        FrontUnavailableError: when the problem front is not available.
    """
    front = true_front(problem, REFERENCE_FRONT_SIZE)
    r = problem.reference_point
    diff = hypervolume(front, r) - hypervolume(np.atleast_2d(Y), r)
    return float(np.log(max(diff, LOG_HV_FLOOR)))


def _relative_hv_difference(
    pred_points: np.ndarray, problem: ProblemSpec, prefs: np.ndarray
) -> float | None:
    """Relative hypervolume gap of a predicted front vs the true front.

    When the problem supports preference-matched front points, the reference
    front is rendered at the same preferences as the prediction, so both
    point sets share their discretization bias and the gap isolates model
    error.  Falls back to an equally sized generic front sample otherwise;
    returns None when no front is available at all.
    """
    r = problem.reference_point
    matched = front_at_preferences(problem, prefs)
    if matched is None:
        try:
            matched = true_front(problem, len(prefs))
        except FrontUnavailableError:
            return None
    hv_ref = hypervolume(matched, r)
    hv_pred = hypervolume(pred_points, r)
    if hv_ref <= 0.0:
        return None
    return float((hv_ref - hv_pred) / hv_ref)


def export_front(
    model: ParetoSetModel, surrogates: SurrogateBundle, P: int
) -> dict:
    """Sample the learned front: P preferences through model and surrogates.

    The preference sample is drawn from a fixed stream, so the export is a
    pure function of (model, surrogates, P).

    Returns:
        dict with arrays ``preferences`` (P, m), ``x`` (P, n), ``mean`` and
        ``std`` (P, m), boolean ``non_dominated`` per row, and scalars
        ``hv_predicted`` plus ``relative_hv_difference`` (None when the
        problem front is unknown and no CSV front was ingested).
    """
    rng = seeding.stream(0, seeding.EXPORT, 0)
    prefs = sample_preferences(model.m, P, rng)
    X = model.forward(prefs)
    means, stds = surrogates.predict(X)
    nd_mask = non_dominated_mask(means)
    out = {
        "preferences": prefs,
        "x": np.atleast_2d(X),
        "mean": means,
        "std": stds,
        "non_dominated": nd_mask,
        "hv_predicted": None,
        "relative_hv_difference": None,
    }
    if model.problem_name is not None:
        problem = make_problem(model.problem_name)
        out["hv_predicted"] = hypervolume(means[nd_mask], problem.reference_point)
        out["relative_hv_difference"] = _relative_hv_difference(
            means[nd_mask], problem, prefs
        )
    return out


def _filter_near_duplicates(
    Xc: np.ndarray, X_archive: np.ndarray
) -> np.ndarray:
    """Mask of candidate rows farther than the duplicate guard from every
    archive point (re-evaluating a known point would waste budget)."""
    d = np.linalg.norm(Xc[:, None, :] - X_archive[None, :, :], axis=2)
    return d.min(axis=1) > DUPLICATE_GUARD


def _select_batch(
    Xc: np.ndarray,
    values: np.ndarray,
    prefs: np.ndarray,
    state: CampaignState,
    problem: ProblemSpec,
    B: int,
) -> list[Candidate]:
    """Greedy HVI selection with the near-duplicate guard applied."""
    keep = _filter_near_duplicates(Xc, state.X)
    if keep.sum() < B:
        logger.warning(
            "only %d of %d candidates clear the duplicate guard; "
            "allowing near-duplicates this iteration",
            int(keep.sum()),
            len(Xc),
        )
        keep = np.ones(len(Xc), dtype=bool)
    candidates = [
        Candidate(x=Xc[i], surrogate_objectives=values[i], source_preference=prefs[i])
        for i in np.flatnonzero(keep)
    ]
    archive = FrontArchive(points=state.Y, reference=problem.reference_point)
    selected = greedy_select(candidates, archive, B)
    batch = np.asarray([c.x for c in selected])
    dists = np.linalg.norm(batch[:, None, :] - batch[None, :, :], axis=2)
    np.fill_diagonal(dists, np.inf)
    if np.any(dists <= 1e-12):
        logger.warning("selected batch contains near-identical decision vectors")
    return selected


def _train_model_with_retry(
    surrogates: SurrogateBundle,
    ideal: IdealState,
    config: CampaignConfig,
    iteration: int,
    steps_multiplier: int = 1,
    beta_end: float | None = None,
) -> ParetoSetModel:
    train_cfg = TrainConfig(
        steps=config.train.steps * steps_multiplier,
        prefs_per_step=config.train.prefs_per_step,
        learning_rate=config.train.learning_rate,
        lcb_beta=config.lcb_beta,
        lcb_beta_end=beta_end,
        seed=config.train.seed,
    )
    try:
        return train_psl(
            surrogates, ideal, train_cfg,
            rng=seeding.stream(config.seed, seeding.PSL_INIT, iteration),
        )
    except TrainingDivergedError as exc:
        logger.warning("%s; retrying with a fresh initialization", exc)
        return train_psl(
            surrogates, ideal, train_cfg,
            rng=seeding.stream(config.seed, seeding.PSL_RETRY, iteration),
        )


def _iteration_record(
    t: int,
    problem: ProblemSpec,
    state: CampaignState,
    selected: list[Candidate] | None,
    Y_new: np.ndarray,
    timings: dict,
    front_hv: float | None,
) -> dict:
    record = {
        "iteration": t,
        "preferences": None,
        "x": None,
        "surrogate_values": None,
        "true_values": np.asarray(Y_new).tolist(),
        "archive_hv": hypervolume(state.Y, problem.reference_point),
        "log_hv_difference": None,
        "timings": timings,
    }
    if selected is not None:
        record["x"] = [c.x.tolist() for c in selected]
        record["surrogate_values"] = [
            c.surrogate_objectives.tolist() for c in selected
        ]
        if all(c.source_preference is not None for c in selected):
            record["preferences"] = [
                c.source_preference.tolist() for c in selected
            ]
    if front_hv is not None:
        diff = front_hv - record["archive_hv"]
        record["log_hv_difference"] = float(np.log(max(diff, LOG_HV_FLOOR)))
    return record


def _front_hv_or_none(problem: ProblemSpec) -> float | None:
    try:
        front = true_front(problem, REFERENCE_FRONT_SIZE)
    except FrontUnavailableError:
        return None
    return hypervolume(front, problem.reference_point)


def _runlog_header(config: CampaignConfig, strategy: str) -> dict:
    from . import __version__

    return {
        "problem": config.problem,
        "strategy": strategy,
        "seed": config.seed,
        "config": config.to_dict(),
        "code_version": __version__,
    }


def _summarize(
    records: list[dict],
    state: CampaignState,
    problem: ProblemSpec,
    front_hv: float | None,
    rel_hv: float | None,
) -> dict:
    final_hv = hypervolume(state.Y, problem.reference_point)
    summary = {
        "n_evaluations": int(len(state.Y)),
        "final_hv": final_hv,
        "final_log_hv_difference": None,
        "relative_hv_difference": rel_hv,
        "timings": {},
    }
    if front_hv is not None:
        summary["final_log_hv_difference"] = float(
            np.log(max(front_hv - final_hv, LOG_HV_FLOOR))
        )
    if records:
        keys = records[0]["timings"].keys()
        means = {k: float(np.mean([r["timings"][k] for r in records])) for k in keys}
        totals = {k: float(np.sum([r["timings"][k] for r in records])) for k in keys}
        train_s = means.get("psl_train_s", 0.0)
        select_s = means.get("selection_s", 0.0)
        summary["timings"] = {
            "per_iteration_mean_s": means,
            "total_s": totals,
            "train_plus_selection": (
                f"{train_s:.2f} + {select_s:.2f} = {train_s + select_s:.2f}"
            ),
        }
    return summary


def run_campaign(
    config: CampaignConfig | None = None,
    resume_from=None,
    checkpoint_every: int | None = None,
    checkpoint_path=None,
) -> CampaignResult:
    """Run (or resume) a full campaign and return its result bundle.

    Args:
        config: campaign settings; may be omitted when resuming (the
            checkpoint's embedded config is used, and if both are given they
            must agree).
        resume_from: optional mid-run checkpoint path.
        checkpoint_every: save a resumable checkpoint every this many
            iterations (requires ``checkpoint_path``).
        checkpoint_path: where the periodic checkpoint is written.

    Returns:
        CampaignResult with the RunLog dict, final state, and the final
        model/surrogates (refit on the complete archive for exporting).
    """
    prior_records: list[dict] = []
    if resume_from is not None:
        saved_config, state, prior_records = checkpoint_resume(resume_from)
        if config is not None and config.to_dict() != saved_config.to_dict():
            raise checkpoint.CheckpointError(
                "config passed to run_campaign conflicts with the checkpoint's"
            )
        config = saved_config
    if config is None:
        raise ValueError("config is required unless resuming from a checkpoint")
    problem = make_problem(config.problem)
    if resume_from is None:
        X0 = lhs_init(
            problem, config.n_init,
            seeding.stream(config.seed, seeding.INIT_DESIGN, 0),
        )
        Y0 = evaluate(problem, X0)
        state = CampaignState(
            X=X0, Y=Y0, ideal=update_ideal(Y0), iteration=0, seed=config.seed
        )
    front_hv = _front_hv_or_none(problem)
    records = list(prior_records)
    model = None
    surrogates = None
    for t in range(state.iteration + 1, config.n_iterations + 1):
        timings = {}
        tic = time.perf_counter()
        surrogates = fit_bundle(
            state.X, state.Y, problem.lower_bounds, problem.upper_bounds,
            seed=seeding.spawn_seed(config.seed, seeding.GP_FIT, t),
        )
        timings["gp_fit_s"] = time.perf_counter() - tic
        state.ideal = update_ideal(state.Y)

        tic = time.perf_counter()
        model = _train_model_with_retry(surrogates, state.ideal, config, t)
        model.problem_name = problem.name
        timings["psl_train_s"] = time.perf_counter() - tic

        tic = time.perf_counter()
        prefs = sample_preferences(
            problem.m, config.candidate_count,
            seeding.stream(config.seed, seeding.CANDIDATES, t),
        )
        Xc = model.forward(prefs)
        if config.refine_candidates:
            Xc = _refine_candidates(surrogates, state.ideal, prefs, Xc,
                                    problem, config.lcb_beta)
        values = surrogates.lcb_values(Xc, config.lcb_beta)
        selected = _select_batch(Xc, values, prefs, state, problem,
                                 config.batch_size)
        timings["selection_s"] = time.perf_counter() - tic

        tic = time.perf_counter()
        X_new = np.asarray([c.x for c in selected])
        try:
            Y_new = evaluate(problem, X_new)
        except ValueError:
            # Domain failure mid-campaign: leave a resumable snapshot of the
            # pre-batch state behind before aborting.
            if checkpoint_path is not None:
                checkpoint_save(state, checkpoint_path, config, records)
            raise
        timings["evaluation_s"] = time.perf_counter() - tic

        state.X = np.vstack([state.X, X_new])
        state.Y = np.vstack([state.Y, Y_new])
        state.ideal = update_ideal(state.Y)
        state.iteration = t
        records.append(
            _iteration_record(t, problem, state, selected, Y_new, timings, front_hv)
        )
        if checkpoint_every and checkpoint_path and t % checkpoint_every == 0:
            checkpoint_save(state, checkpoint_path, config, records)

    # Final refit on the complete archive so exports and the served model
    # reflect every evaluation, then measure the learned front.
    surrogates = fit_bundle(
        state.X, state.Y, problem.lower_bounds, problem.upper_bounds,
        seed=seeding.spawn_seed(config.seed, seeding.GP_FIT, config.n_iterations + 1),
    )
    state.ideal = update_ideal(state.Y)
    model = _train_model_with_retry(
        surrogates, state.ideal, config, config.n_iterations + 1,
        steps_multiplier=FINAL_TRAIN_MULTIPLIER, beta_end=FINAL_BETA_END,
    )
    model.problem_name = problem.name
    export = export_front(model, surrogates, config.candidate_count)
    runlog = _runlog_header(config, "psl")
    runlog["iterations"] = records
    runlog["summary"] = _summarize(
        records, state, problem, front_hv, export["relative_hv_difference"]
    )
    return CampaignResult(runlog=runlog, state=state, model=model,
                          surrogates=surrogates)


def _scalarization_descent(
    surrogates: SurrogateBundle,
    ideal: IdealState,
    prefs: np.ndarray,
    problem: ProblemSpec,
    rng: np.random.Generator,
    beta: float,
    n_starts: int = 5,
    steps: int = 50,
    step_size: float = 0.05,
) -> tuple[np.ndarray, np.ndarray]:
    """Optimize the scalarized LCB directly in decision space per preference.

    Runs ``n_starts`` random starts of projected adaptive gradient descent
    (unit-cube coordinates) for every preference simultaneously and keeps
    each preference's best final point.

    Returns:
        (X_best, F_best): decision vectors (P, n) and their LCB objective
        values (P, m).
    """
    P = len(prefs)
    span = problem.upper_bounds - problem.lower_bounds
    U = rng.random((n_starts * P, problem.n))
    lam = np.tile(prefs, (n_starts, 1))
    U = _descend_unit_cube(surrogates, ideal, lam, U, problem, beta,
                           steps, step_size)
    X = problem.lower_bounds + span * U
    fhat = surrogates.lcb_values(X, beta)
    values, _ = tch_aug_active(fhat, lam, ideal)
    values = values.reshape(n_starts, P)
    best = np.argmin(values, axis=0)
    idx = best * P + np.arange(P)
    return X[idx], fhat[idx]


def _descend_unit_cube(
    surrogates: SurrogateBundle,
    ideal: IdealState,
    lam: np.ndarray,
    U: np.ndarray,
    problem: ProblemSpec,
    beta: float,
    steps: int,
    step_size: float,
) -> np.ndarray:
    """Projected adaptive gradient descent of the scalarized LCB.

    Each row of ``U`` (unit-cube coordinates) descends the augmented
    Tchebycheff value of the LCB objectives under its own preference row.
    """
    span = problem.upper_bounds - problem.lower_bounds
    m1 = np.zeros_like(U)
    m2 = np.zeros_like(U)
    for step in range(1, steps + 1):
        X = problem.lower_bounds + span * U
        means, stds, dmean, dstd, _ = surrogates.predict_gradient(X)
        fhat = means - beta * stds
        dfhat = dmean - beta * dstd
        _, active = tch_aug_active(fhat, lam, ideal)
        rows = np.arange(len(lam))
        g = (
            lam[rows, active, None] * dfhat[rows, active, :]
            + ideal.rho * np.einsum("ki,kin->kn", lam, dfhat)
        ) * span  # chain to unit-cube coordinates
        m1 = 0.9 * m1 + 0.1 * g
        m2 = 0.999 * m2 + 0.001 * g * g
        mhat = m1 / (1.0 - 0.9**step)
        vhat = m2 / (1.0 - 0.999**step)
        U = np.clip(U - step_size * mhat / (np.sqrt(vhat) + 1e-8), 0.0, 1.0)
    return U


def _refine_candidates(
    surrogates: SurrogateBundle,
    ideal: IdealState,
    prefs: np.ndarray,
    Xc: np.ndarray,
    problem: ProblemSpec,
    beta: float,
    steps: int = 10,
    step_size: float = 0.02,
) -> np.ndarray:
    """Short per-candidate local search on each candidate's scalarization.

    Every sampled solution takes a few projected descent steps against its
    own preference; the refined point replaces the original only where it
    improves the scalarized LCB, so refinement can never make a candidate
    worse under its selection objective.
    """
    span = problem.upper_bounds - problem.lower_bounds
    U0 = (Xc - problem.lower_bounds) / span
    U = _descend_unit_cube(surrogates, ideal, prefs, U0.copy(), problem,
                           beta, steps, step_size)
    X = problem.lower_bounds + span * U
    before, _ = tch_aug_active(surrogates.lcb_values(Xc, beta), prefs, ideal)
    after, _ = tch_aug_active(surrogates.lcb_values(X, beta), prefs, ideal)
    improved = after < before
    return np.where(improved[:, None], X, Xc)


def run_baseline(config: CampaignConfig, strategy: str) -> CampaignResult:
    """Run a reference strategy with the same budget accounting.

    ``sobol-random`` draws every batch from one scrambled Sobol sequence;
    ``scalarization-no-model`` fits the same GPs but optimizes the
    scalarized LCB directly in decision space per sampled preference
    (multi-start gradient descent) instead of training a set model.
    """
    if strategy not in ("sobol-random", "scalarization-no-model"):
        raise ValueError(f"unknown baseline strategy {strategy!r}")
    problem = make_problem(config.problem)
    X0 = lhs_init(
        problem, config.n_init, seeding.stream(config.seed, seeding.INIT_DESIGN, 0)
    )
    Y0 = evaluate(problem, X0)
    state = CampaignState(
        X=X0, Y=Y0, ideal=update_ideal(Y0), iteration=0, seed=config.seed
    )
    front_hv = _front_hv_or_none(problem)
    records: list[dict] = []
    sobol = None
    if strategy == "sobol-random":
        sobol = qmc.Sobol(
            d=problem.n, scramble=True,
            seed=seeding.spawn_seed(config.seed, seeding.SOBOL, 0),
        )
    for t in range(1, config.n_iterations + 1):
        timings = {"gp_fit_s": 0.0, "psl_train_s": 0.0}
        selected = None
        if strategy == "sobol-random":
            tic = time.perf_counter()
            with warnings.catch_warnings():
                # scipy warns for non-power-of-2 draws; balance properties
                # are irrelevant for a random-search reference.
                warnings.simplefilter("ignore", UserWarning)
                u = sobol.random(config.batch_size)
            X_new = problem.lower_bounds + (
                problem.upper_bounds - problem.lower_bounds
            ) * u
            timings["selection_s"] = time.perf_counter() - tic
        else:
            tic = time.perf_counter()
            surrogates = fit_bundle(
                state.X, state.Y, problem.lower_bounds, problem.upper_bounds,
                seed=seeding.spawn_seed(config.seed, seeding.GP_FIT, t),
            )
            timings["gp_fit_s"] = time.perf_counter() - tic
            state.ideal = update_ideal(state.Y)
            tic = time.perf_counter()
            prefs = sample_preferences(
                problem.m, config.candidate_count,
                seeding.stream(config.seed, seeding.CANDIDATES, t),
            )
            Xc, values = _scalarization_descent(
                surrogates, state.ideal, prefs, problem,
                seeding.stream(config.seed, seeding.DIRECT_OPT, t),
                config.lcb_beta,
            )
            selected = _select_batch(Xc, values, prefs, state, problem,
                                     config.batch_size)
            X_new = np.asarray([c.x for c in selected])
            timings["selection_s"] = time.perf_counter() - tic
        tic = time.perf_counter()
        Y_new = evaluate(problem, X_new)
        timings["evaluation_s"] = time.perf_counter() - tic
        state.X = np.vstack([state.X, X_new])
        state.Y = np.vstack([state.Y, Y_new])
        state.ideal = update_ideal(state.Y)
        state.iteration = t
        records.append(
            _iteration_record(t, problem, state, selected, Y_new, timings, front_hv)
        )
    runlog = _runlog_header(config, strategy)
    runlog["iterations"] = records
    runlog["summary"] = _summarize(records, state, problem, front_hv, None)
    return CampaignResult(runlog=runlog, state=state, model=None, surrogates=None)


# ---------------------------------------------------------------------------
# Checkpointing.
# ---------------------------------------------------------------------------

def checkpoint_save(
    state: CampaignState, path, config: CampaignConfig, records: list[dict]
) -> None:
    """Write a resumable mid-run checkpoint (atomic)."""
    header = {
        "kind": "campaign",
        "problem": config.problem,
        "seed": state.seed,
        "iteration": state.iteration,
        "config": config.to_dict(),
        "records": records,
    }
    checkpoint.write_file(path, header, {"X": state.X, "Y": state.Y})


def checkpoint_resume(path) -> tuple[CampaignConfig, CampaignState, list[dict]]:
    """Load a mid-run checkpoint: (config, state, prior iteration records)."""
    header, arrays = checkpoint.read_file(path)
    if header.get("kind") != "campaign":
        raise checkpoint.CheckpointError(
            f"not a campaign checkpoint: kind={header.get('kind')!r}"
        )
    config = CampaignConfig.from_dict(header["config"])
    make_problem(config.problem)  # validates the stored problem name
    X, Y = arrays["X"], arrays["Y"]
    expected = config.n_init + header["iteration"] * config.batch_size
    if len(X) != expected or len(Y) != expected:
        raise checkpoint.CheckpointError(
            f"archive size {len(X)} inconsistent with iteration "
            f"{header['iteration']}"
        )
    state = CampaignState(
        X=X, Y=Y, ideal=update_ideal(Y),
        iteration=int(header["iteration"]), seed=int(header["seed"]),
    )
    return config, state, list(header.get("records", []))


def save_final_checkpoint(result: CampaignResult, path) -> None:
    """Write the end-of-run artifact: model parameters plus the archive.

    The GPs are not stored; they are refit deterministically from the
    archive at load time using the seed recorded in the config.
    """
    if result.model is None:
        raise ValueError("result has no trained model to save")
    model = result.model
    config_dict = result.runlog["config"]
    header = {
        "kind": "final",
        "problem": model.problem_name,
        "m": model.m,
        "n": model.n,
        "hidden": list(model.hidden),
        "config": config_dict,
    }
    arrays = {"lower": model.lower, "upper": model.upper}
    for i, (W, b) in enumerate(model.layers):
        arrays[f"w{i}"] = W
        arrays[f"b{i}"] = b
    arrays["X"] = result.state.X
    arrays["Y"] = result.state.Y
    checkpoint.write_file(path, header, arrays)


def load_final_checkpoint(path):
    """Rebuild (model, surrogates, X, Y, problem, config) from a final
    checkpoint, refitting the GPs on the stored archive."""
    from .psmodel import load_model

    header, arrays = checkpoint.read_file(path)
    if header.get("kind") != "final":
        raise checkpoint.CheckpointError(
            f"not a final checkpoint: kind={header.get('kind')!r}"
        )
    config = CampaignConfig.from_dict(header["config"])
    problem = make_problem(header["problem"])
    model_header = {
        "kind": "psmodel",
        "m": header["m"],
        "n": header["n"],
        "hidden": header["hidden"],
        "problem": header["problem"],
    }
    model_arrays = {"lower": arrays["lower"], "upper": arrays["upper"]}
    for i in range(len(header["hidden"]) + 1):
        model_arrays[f"w{i}"] = arrays[f"w{i}"]
        model_arrays[f"b{i}"] = arrays[f"b{i}"]
    model = load_model(checkpoint.pack(model_header, model_arrays))
    X, Y = arrays["X"], arrays["Y"]
    surrogates = fit_bundle(
        X, Y, problem.lower_bounds, problem.upper_bounds,
        seed=seeding.spawn_seed(config.seed, seeding.GP_FIT,
                                config.n_iterations + 1),
    )
    return model, surrogates, X, Y, problem, config
