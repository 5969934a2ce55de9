import numpy as np
import pytest

import rmse_elm.recursive as recursive
from rmse_elm.elm import predict, train_elm
from rmse_elm.bench import mse
from rmse_elm.recursive import (
    ElmEnsemble,
    EnsembleConfig,
    member_seed,
    predict_ensemble,
    train_e_gasen,
    train_gasen_elm,
    train_rmse_elm,
    train_simple_ensemble,
)
from rmse_elm.selective import GaConfig, correlation_matrix, ensemble_error
from rmse_elm.synth import make_synthetic_regression


SMALL_GA = GaConfig(population_size=12, generations=10, elitism_count=2, seed=0)


def small_config(**kw):
    base = dict(groups=2, group_size=4, n_hidden=6, activation="sigmoid",
                ga=SMALL_GA, seed=7)
    base.update(kw)
    return EnsembleConfig(**base)


@pytest.fixture(scope="module")
def task():
    ds = make_synthetic_regression(n_samples=80, n_features=3, seed=1, noise_std=0.2)
    return ds.X, ds.y


class TestTrainRmseElm:
    def test_single_model_degenerates_to_plain_elm(self, task):
        X, y = task
        cfg = small_config(groups=1, group_size=1)
        ens = train_rmse_elm(X, y, cfg)
        assert ens.n_members == 1
        solo = train_elm(X, y, cfg.n_hidden, cfg.activation,
                         seed=member_seed(cfg.seed, 0, 0))
        assert np.array_equal(ens.predict(X), predict(solo, X))

    def test_subset_chain(self, task):
        X, y = task
        ens = train_rmse_elm(X, y, small_config())
        all_models = {(g, i) for g in range(2) for i in range(4)}
        pool = set(ens.pool_provenance)
        final = set(ens.provenance)
        assert final <= pool <= all_models
        assert len(final) == ens.n_members >= 1

    def test_zero_threshold_equals_all_model_simple_average(self, task):
        X, y = task
        cfg = small_config(threshold1=0.0, threshold2=0.0)
        ens = train_rmse_elm(X, y, cfg)
        assert ens.n_members == cfg.groups * cfg.group_size
        manual = [
            predict(train_elm(X, y, cfg.n_hidden, cfg.activation,
                              seed=member_seed(cfg.seed, g, i)), X)
            for g in range(cfg.groups)
            for i in range(cfg.group_size)
        ]
        assert np.max(np.abs(ens.predict(X) - np.mean(manual, axis=0))) < 1e-10

    def test_deterministic(self, task):
        X, y = task
        a = train_rmse_elm(X, y, small_config())
        b = train_rmse_elm(X, y, small_config())
        assert a.provenance == b.provenance
        assert np.array_equal(a.predict(X), b.predict(X))

    def test_seed_changes_result(self, task):
        X, y = task
        a = train_rmse_elm(X, y, small_config(seed=1))
        b = train_rmse_elm(X, y, small_config(seed=2))
        assert not np.array_equal(a.predict(X), b.predict(X))

    def test_members_have_distinct_layers(self, task):
        X, y = task
        cfg = small_config(threshold1=0.0, threshold2=0.0)
        ens = train_rmse_elm(X, y, cfg)
        weights = [m.hidden.input_weights for m in ens.members]
        for i in range(len(weights)):
            for j in range(i + 1, len(weights)):
                assert not np.array_equal(weights[i], weights[j])

    def test_identical_learners_keep_whole_group(self, task, monkeypatch):
        # force every member of every group onto the same seed
        X, y = task
        monkeypatch.setattr(recursive, "member_seed", lambda s, g, i: 1234)
        cfg = small_config(groups=1, group_size=5)
        ens = train_rmse_elm(X, y, cfg)
        # uniform chromosome wins all ties, so the full group survives both layers
        assert ens.pool_size == 5
        assert ens.n_members == 5
        single = predict(ens.members[0], X)
        assert np.allclose(ens.predict(X), single, rtol=1e-12, atol=1e-12)

    def test_retrain_pool_draws_fresh_models(self, task):
        X, y = task
        reused = train_rmse_elm(X, y, small_config())
        retrained = train_rmse_elm(X, y, small_config(retrain_pool=True))
        # provenance bookkeeping is preserved but the models are fresh draws
        assert retrained.pool_provenance == reused.pool_provenance
        fresh = retrained.members[0].hidden.input_weights
        originals = [
            train_elm(X, y, 6, "sigmoid", seed=member_seed(7, g, i)).hidden.input_weights
            for (g, i) in retrained.provenance
        ]
        assert not any(np.array_equal(fresh, w) for w in originals)

    def test_validation_fraction_smoke(self, task):
        X, y = task
        ens = train_rmse_elm(X, y, small_config(validation_fraction=0.25))
        assert np.isfinite(ens.predict(X)).all()


class TestEGasen:
    def test_single_group_matches_gasen(self, task):
        X, y = task
        cfg = small_config(groups=1, group_size=6)
        a = train_e_gasen(X, y, cfg)
        b = train_gasen_elm(X, y, n_learners=6, n_hidden=cfg.n_hidden,
                            activation=cfg.activation, ga=cfg.ga, seed=cfg.seed)
        assert a.provenance == b.provenance
        assert np.array_equal(a.predict(X), b.predict(X))

    def test_pool_is_averaged_without_second_selection(self, task):
        X, y = task
        ens = train_e_gasen(X, y, small_config())
        assert set(ens.provenance) == set(ens.pool_provenance)


class TestGasenElm:
    def test_single_learner_is_plain_elm(self, task):
        X, y = task
        ens = train_gasen_elm(X, y, n_learners=1, n_hidden=6, ga=SMALL_GA, seed=3)
        solo = train_elm(X, y, 6, "sigmoid", seed=member_seed(3, 0, 0))
        assert np.array_equal(ens.predict(X), predict(solo, X))

    def test_survivors_subset_of_group(self, task):
        X, y = task
        ens = train_gasen_elm(X, y, n_learners=8, n_hidden=6, ga=SMALL_GA, seed=4)
        assert 1 <= ens.n_members <= 8
        assert set(ens.provenance) <= {(0, i) for i in range(8)}


class TestSimpleEnsemble:
    def test_prediction_is_member_mean(self, task):
        X, y = task
        ens = train_simple_ensemble(X, y, n_learners=5, n_hidden=6, seed=2)
        member_preds = [predict(m, X) for m in ens.members]
        assert np.array_equal(ens.predict(X), np.mean(member_preds, axis=0))

    def test_single_learner_is_plain_elm(self, task):
        X, y = task
        ens = train_simple_ensemble(X, y, n_learners=1, n_hidden=6, seed=2)
        solo = train_elm(X, y, 6, "sigmoid", seed=member_seed(2, 0, 0))
        assert np.array_equal(ens.predict(X), predict(solo, X))

    def test_training_mse_matches_uniform_quadratic_form(self, task):
        # simple-average MSE on the estimation set == sum(C)/N^2
        X, y = task
        ens = train_simple_ensemble(X, y, n_learners=6, n_hidden=6, seed=5)
        preds = [np.ravel(predict(m, X)) for m in ens.members]
        corr = correlation_matrix(preds, y)
        uniform = np.full(6, 1.0 / 6.0)
        direct = mse(ens.predict(X), y)
        assert abs(ensemble_error(uniform, corr) - direct) < 1e-10


class TestPlumbing:
    def test_predict_ensemble_function(self, task):
        X, y = task
        ens = train_simple_ensemble(X, y, n_learners=3, n_hidden=5, seed=0)
        assert np.array_equal(predict_ensemble(ens, X), ens.predict(X))

    def test_member_seeds_distinct(self):
        keys = {member_seed(0, g, i).spawn_key for g in range(4) for i in range(20)}
        assert len(keys) == 80

    def test_ensemble_requires_members(self):
        with pytest.raises(ValueError):
            ElmEnsemble(members=(), provenance=())

    def test_config_validation(self):
        with pytest.raises(ValueError):
            EnsembleConfig(groups=0)
        with pytest.raises(ValueError):
            EnsembleConfig(threshold1=1.5)
        with pytest.raises(ValueError):
            EnsembleConfig(validation_fraction=1.0)
