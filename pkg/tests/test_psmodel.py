"""Pareto set model tests: manual backprop against finite differences,
preference sampling, training behavior, and checkpoint round-trips."""

import numpy as np
import pytest

from paretolearn import checkpoint
from paretolearn.hv import hypervolume, non_dominated_mask
from paretolearn.problems import evaluate, make_problem
from paretolearn.psmodel import (
    HIDDEN_UNITS,
    ParetoSetModel,
    TrainConfig,
    TrainingDivergedError,
    load_model,
    sample_preferences,
    save_model,
    train_psl,
)
from paretolearn.scalarize import tch_aug, tch_aug_active, update_ideal
from paretolearn.surrogate import fit_bundle

from oracles import fd_jacobian, rel_err


def philox(seed):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def tiny_model(m=2, n=3, hidden=(4,), seed=0, lower=None, upper=None):
    lower = np.zeros(n) if lower is None else np.asarray(lower, float)
    upper = np.ones(n) if upper is None else np.asarray(upper, float)
    return ParetoSetModel(m, n, lower, upper, hidden=hidden, rng=philox(seed))


def f1_surrogates(n_points=40, seed=0):
    problem = make_problem("F1")
    rng = philox(seed)
    X = rng.uniform(
        problem.lower_bounds, problem.upper_bounds, (n_points, problem.n)
    )
    Y = evaluate(problem, X)
    bundle = fit_bundle(
        X, Y, problem.lower_bounds, problem.upper_bounds, seed=seed
    )
    return bundle, update_ideal(Y), Y


class TestSamplePreferences:
    def test_rows_on_simplex(self):
        lam = sample_preferences(3, 500, philox(0))
        assert lam.shape == (500, 3)
        assert np.all(lam >= 0.0)
        np.testing.assert_allclose(lam.sum(axis=1), 1.0, atol=1e-12)

    def test_deterministic(self):
        a = sample_preferences(4, 20, philox(7))
        b = sample_preferences(4, 20, philox(7))
        np.testing.assert_array_equal(a, b)

    def test_component_means_are_balanced(self):
        lam = sample_preferences(2, 100_000, philox(1))
        assert abs(lam[:, 0].mean() - 0.5) < 0.01

    def test_validation(self):
        with pytest.raises(ValueError):
            sample_preferences(1, 5, philox(0))
        with pytest.raises(ValueError):
            sample_preferences(3, 0, philox(0))


class TestForward:
    def test_outputs_inside_bounds(self):
        model = tiny_model(m=3, n=2, lower=[-2.0, 5.0], upper=[2.0, 9.0])
        lam = sample_preferences(3, 200, philox(2))
        X = model.forward(lam)
        assert X.shape == (200, 2)
        assert np.all(X >= model.lower) and np.all(X <= model.upper)

    def test_rank_matches_input(self):
        model = tiny_model()
        single = model.forward(np.array([0.4, 0.6]))
        batch = model.forward(np.array([[0.4, 0.6]]))
        assert single.shape == (3,)
        np.testing.assert_array_equal(batch[0], single)

    def test_default_architecture(self):
        assert HIDDEN_UNITS == (256, 256, 256)
        model = ParetoSetModel(2, 6, np.zeros(6), np.ones(6), rng=philox(0))
        widths = [W.shape for W, _ in model.layers]
        assert widths == [(2, 256), (256, 256), (256, 256), (256, 6)]

    def test_initialization_deterministic(self):
        a = tiny_model(seed=3)
        b = tiny_model(seed=3)
        for (Wa, ba), (Wb, bb) in zip(a.layers, b.layers):
            assert np.array_equal(Wa, Wb) and np.array_equal(ba, bb)

    def test_wrong_preference_width_rejected(self):
        with pytest.raises(ValueError):
            tiny_model(m=2).forward(np.ones((4, 3)) / 3.0)

    def test_input_jacobian_matches_finite_differences(self):
        model = tiny_model(m=3, n=2, hidden=(8, 8), seed=4)
        rng = philox(5)
        checked = 0
        for _ in range(20):
            lam = sample_preferences(3, 1, rng)[0]
            J = model.input_jacobian(lam)
            assert J.shape == (2, 3)
            want = fd_jacobian(lambda z: model.forward(z), lam)
            if rel_err(J, want) < 1e-5:
                checked += 1
        # A rectifier kink within the finite-difference stencil can spoil
        # individual points; the jacobian must agree almost everywhere.
        assert checked >= 18


class TestBackward:
    def test_requires_forward_cache(self):
        with pytest.raises(RuntimeError, match="forward"):
            tiny_model().backward(np.zeros((1, 3)))

    def test_upstream_shape_checked(self):
        model = tiny_model()
        model.forward(sample_preferences(2, 4, philox(6)))
        with pytest.raises(RuntimeError, match="shape"):
            model.backward(np.zeros((3, 3)))

    def test_zero_upstream_gives_zero_gradients(self):
        model = tiny_model()
        model.forward(sample_preferences(2, 5, philox(7)))
        for g in model.backward(np.zeros((5, 3))):
            np.testing.assert_array_equal(g, 0.0)

    def test_matches_finite_differences_over_all_parameters(self):
        # Loss sum_k upstream_k . x(lam_k) with fixed random upstream;
        # central differences taken parameter-by-parameter.
        model = tiny_model(m=2, n=2, hidden=(4,), seed=8)
        lam = sample_preferences(2, 3, philox(9))
        upstream = philox(10).normal(size=(3, 2))

        def loss():
            return float(np.sum(upstream * model.forward(lam)))

        model.forward(lam)
        grads = model.backward(upstream)
        params = model.parameters()
        h = 1e-6
        for p, g in zip(params, grads):
            fd = np.zeros_like(p)
            flat_p, flat_fd = p.reshape(-1), fd.reshape(-1)
            for idx in range(flat_p.size):
                keep = flat_p[idx]
                flat_p[idx] = keep + h
                hi = loss()
                flat_p[idx] = keep - h
                lo = loss()
                flat_p[idx] = keep
                flat_fd[idx] = (hi - lo) / (2.0 * h)
            assert rel_err(g, fd) < 1e-6

    def test_batch_gradient_is_sum_of_rows(self):
        model = tiny_model(m=2, n=3, hidden=(5,), seed=11)
        lam = sample_preferences(2, 4, philox(12))
        upstream = philox(13).normal(size=(4, 3))
        model.forward(lam)
        total = model.backward(upstream)
        per_row = []
        for k in range(4):
            model.forward(lam[k : k + 1])
            per_row.append(model.backward(upstream[k : k + 1]))
        for i, g in enumerate(total):
            np.testing.assert_allclose(
                g, sum(row[i] for row in per_row), rtol=1e-12, atol=1e-15
            )


class TestTrainPsl:
    def test_config_defaults_and_validation(self):
        c = TrainConfig()
        assert (c.steps, c.prefs_per_step, c.learning_rate) == (1000, 10, 1e-3)
        assert c.lcb_beta == 0.5
        assert c.lcb_beta_end is None
        with pytest.raises(ValueError):
            TrainConfig(steps=-1)
        with pytest.raises(ValueError):
            TrainConfig(prefs_per_step=0)
        with pytest.raises(ValueError):
            TrainConfig(learning_rate=0.0)
        with pytest.raises(ValueError):
            TrainConfig(lcb_beta_end=-0.1)

    def test_constant_beta_schedule_matches_fixed_beta(self):
        # Annealing start == end must reproduce the fixed-coefficient path
        # exactly, and a single step always uses the starting coefficient.
        bundle, state, _ = f1_surrogates(n_points=12)
        for steps, end in ((40, 0.5), (1, 0.0)):
            fixed = train_psl(bundle, state, TrainConfig(steps=steps, seed=3))
            annealed = train_psl(
                bundle, state,
                TrainConfig(steps=steps, lcb_beta_end=end, seed=3),
            )
            for (W, b), (Wa, ba) in zip(fixed.layers, annealed.layers):
                assert np.array_equal(W, Wa) and np.array_equal(b, ba)

    def test_annealed_schedule_changes_training(self):
        bundle, state, _ = f1_surrogates(n_points=12)
        fixed = train_psl(bundle, state, TrainConfig(steps=40, seed=3))
        annealed = train_psl(
            bundle, state, TrainConfig(steps=40, lcb_beta_end=0.0, seed=3)
        )
        assert any(
            not np.array_equal(W, Wa)
            for (W, _), (Wa, _) in zip(fixed.layers, annealed.layers)
        )

    def test_zero_steps_returns_fresh_initialization(self):
        bundle, state, _ = f1_surrogates(n_points=12)
        model = train_psl(bundle, state, TrainConfig(steps=0, seed=5))
        reference = ParetoSetModel(
            bundle.m, bundle.n, bundle.lower, bundle.upper, rng=philox(5)
        )
        for (W, b), (Wr, br) in zip(model.layers, reference.layers):
            assert np.array_equal(W, Wr) and np.array_equal(b, br)

    def test_training_reduces_scalarized_objective(self):
        bundle, state, _ = f1_surrogates(n_points=40)
        probe = sample_preferences(2, 256, philox(99))

        def probe_loss(model):
            fhat = bundle.lcb_values(model.forward(probe), beta=0.5)
            values, _ = tch_aug_active(fhat, probe, state)
            return float(values.mean())

        before = probe_loss(train_psl(bundle, state, TrainConfig(steps=0, seed=1)))
        after = probe_loss(
            train_psl(bundle, state, TrainConfig(steps=200, seed=1))
        )
        assert after < before

    def test_deterministic_given_rng(self):
        bundle, state, _ = f1_surrogates(n_points=15)
        cfg = TrainConfig(steps=20, seed=3)
        a = train_psl(bundle, state, cfg, rng=philox(42))
        b = train_psl(bundle, state, cfg, rng=philox(42))
        for (Wa, _), (Wb, _) in zip(a.layers, b.layers):
            assert np.array_equal(Wa, Wb)

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_divergence_reported_with_step(self):
        bundle, state, _ = f1_surrogates(n_points=12)
        with pytest.raises(TrainingDivergedError, match="step") as info:
            train_psl(
                bundle, state, TrainConfig(steps=50, learning_rate=1e200, seed=0)
            )
        assert info.value.step >= 1

    def test_training_gradient_matches_finite_differences(self):
        # The full chain (network -> LCB surrogate -> augmented Tchebycheff)
        # differentiated by hand must match central differences through a
        # tiny network, parameter by parameter.
        bundle, state, _ = f1_surrogates(n_points=20)
        model = ParetoSetModel(
            bundle.m, bundle.n, bundle.lower, bundle.upper, hidden=(4,),
            rng=philox(14),
        )
        lam = sample_preferences(2, 5, philox(15))

        def total_loss():
            X = np.atleast_2d(model.forward(lam))
            fhat = bundle.lcb_values(X, beta=0.5)
            return float(np.sum([tch_aug(f, p, state) for f, p in zip(fhat, lam)]))

        X = model.forward(lam)
        means, stds, dmean, dstd, _ = bundle.predict_gradient(X)
        fhat = means - 0.5 * stds
        _, active = tch_aug_active(fhat, lam, state)
        rows = np.arange(len(lam))
        dfhat = dmean - 0.5 * dstd
        upstream = (
            lam[rows, active, None] * dfhat[rows, active, :]
            + state.rho * np.einsum("ki,kin->kn", lam, dfhat)
        )
        model.forward(lam)
        grads = model.backward(upstream)
        h = 1e-6
        for p, g in zip(model.parameters(), grads):
            fd = np.zeros_like(p)
            flat_p, flat_fd = p.reshape(-1), fd.reshape(-1)
            for idx in range(flat_p.size):
                keep = flat_p[idx]
                flat_p[idx] = keep + h
                hi = total_loss()
                flat_p[idx] = keep - h
                lo = total_loss()
                flat_p[idx] = keep
                flat_fd[idx] = (hi - lo) / (2.0 * h)
            assert rel_err(g, fd) < 1e-4

    def test_trained_front_covers_archive_hypervolume(self):
        problem = make_problem("F1")
        bundle, state, Y = f1_surrogates(n_points=60, seed=2)
        model = train_psl(bundle, state, TrainConfig(steps=400, seed=2))
        prefs = sample_preferences(2, 200, philox(16))
        means, _ = bundle.predict(model.forward(prefs))
        hv_model = hypervolume(
            means[non_dominated_mask(means)], problem.reference_point
        )
        hv_archive = hypervolume(
            Y[non_dominated_mask(Y)], problem.reference_point
        )
        assert hv_model >= 0.9 * hv_archive


class TestSaveLoad:
    def test_round_trip_preserves_everything(self):
        model = tiny_model(m=3, n=2, hidden=(6, 5), seed=17,
                           lower=[-1.0, 0.0], upper=[1.0, 2.0])
        model.problem_name = "VLMOP3"
        data = save_model(model)
        again = load_model(data, expect_n=2, expect_m=3,
                           expect_problem="VLMOP3")
        assert again.hidden == (6, 5)
        for (W, b), (Wr, br) in zip(model.layers, again.layers):
            assert np.array_equal(W, Wr) and np.array_equal(b, br)
        lam = sample_preferences(3, 10, philox(18))
        np.testing.assert_array_equal(model.forward(lam), again.forward(lam))

    def test_serialization_is_deterministic(self):
        model = tiny_model(seed=19)
        assert save_model(model) == save_model(model)

    def test_dimension_and_problem_mismatches(self):
        model = tiny_model(m=2, n=3, seed=20)
        model.problem_name = "F1"
        data = save_model(model)
        with pytest.raises(checkpoint.CheckpointError, match="incompatible"):
            load_model(data, expect_n=4)
        with pytest.raises(checkpoint.CheckpointError, match="incompatible"):
            load_model(data, expect_m=3)
        with pytest.raises(checkpoint.CheckpointError, match="incompatible"):
            load_model(data, expect_problem="F2")

    def test_wrong_kind_and_corrupt_bytes(self):
        with pytest.raises(checkpoint.CheckpointError):
            load_model(checkpoint.pack({"kind": "campaign"}, {}))
        with pytest.raises(checkpoint.CheckpointError):
            load_model(b"garbage not a checkpoint")
