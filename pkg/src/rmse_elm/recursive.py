"""Two-layer recursive selective ensembles of ELMs, plus the flat baselines.

Layer 1 trains several independent groups of ELMs and runs GA-based
selective ensembling inside each group; the survivors of all groups are
pooled. Layer 2 applies selective ensembling once more to the pool and
averages the final survivors. The flat baselines share the same kernels:
a plain simple-average ensemble, a one-layer selective ensemble, and the
variant whose second layer is a plain average of the pooled survivors.
"""

from dataclasses import dataclass, field

import numpy as np

from .elm import predict, train_elm
from .selective import GaConfig, correlation_matrix, ga_evolve, select_by_threshold

# spawn-key streams so every random draw in a training run has its own
# deterministic, non-overlapping seed derived from the master seed
_MEMBER, _GROUP_GA, _POOL_GA, _RETRAIN, _VAL_SPLIT = range(5)


def member_seed(master_seed, group, index):
    """Deterministic per-model seed stream; distinct for every (group, index)."""
    return np.random.SeedSequence(master_seed, spawn_key=(_MEMBER, group, index))


def _ga_seed(master_seed, stream, group=0):
    return np.random.SeedSequence(master_seed, spawn_key=(stream, group))


@dataclass(frozen=True)
class EnsembleConfig:
    """Settings for the two-layer recursive model.

    `threshold1`/`threshold2` of None mean the reciprocal of the group
    size / realized pool size. `retrain_pool=True` replaces each pooled
    survivor with a freshly drawn ELM of the same shape instead of
    reusing the trained one. `validation_fraction` > 0 holds out that
    share of the training rows for correlation estimation; 0 estimates on
    the training set itself.
    """

    groups: int = 4
    group_size: int = 20
    n_hidden: int = 50
    activation: str = "sigmoid"
    threshold1: float | None = None
    threshold2: float | None = None
    ga: GaConfig = field(default_factory=GaConfig)
    seed: int = 0
    retrain_pool: bool = False
    validation_fraction: float = 0.0

    def __post_init__(self):
        if self.groups < 1 or self.group_size < 1 or self.n_hidden < 1:
            raise ValueError("groups, group_size and n_hidden must be positive")
        for t in (self.threshold1, self.threshold2):
            if t is not None and not 0.0 <= t <= 1.0:
                raise ValueError("thresholds must lie in [0, 1]")
        if not 0.0 <= self.validation_fraction < 1.0:
            raise ValueError("validation_fraction must lie in [0, 1)")


@dataclass(frozen=True)
class ElmEnsemble:
    """A set of trained ELMs combined by simple averaging.

    `provenance` records each member's (group, within-group) origin.
    """

    members: tuple
    provenance: tuple

    def __post_init__(self):
        if len(self.members) < 1:
            raise ValueError("an ensemble needs at least one member")
        if len(self.provenance) != len(self.members):
            raise ValueError("provenance must list one entry per member")
        object.__setattr__(self, "members", tuple(self.members))
        object.__setattr__(self, "provenance", tuple(tuple(p) for p in self.provenance))

    @property
    def n_members(self):
        return len(self.members)

    def predict(self, X):
        preds = [predict(m, X) for m in self.members]
        return np.mean(preds, axis=0)


@dataclass(frozen=True)
class RmseElmEnsemble(ElmEnsemble):
    """Final two-layer ensemble, with the layer-1 pool kept for audit."""

    pool_provenance: tuple = ()
    group_survivor_counts: tuple = ()

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "pool_provenance", tuple(tuple(p) for p in self.pool_provenance))
        object.__setattr__(self, "group_survivor_counts", tuple(self.group_survivor_counts))

    @property
    def pool_size(self):
        return len(self.pool_provenance)


def predict_ensemble(ensemble, X):
    """Arithmetic mean of the member predictions."""
    return ensemble.predict(X)


def _estimation_split(X, y, validation_fraction, master_seed):
    """Rows used for fitting vs rows used to estimate correlations."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.shape[0] < 1 or X.shape[0] != y.shape[0]:
        raise ValueError("X and y must be non-empty with matching row counts")
    if validation_fraction <= 0.0:
        return X, y, X, y
    n = X.shape[0]
    n_val = max(1, int(round(validation_fraction * n)))
    if n_val >= n:
        raise ValueError("validation_fraction leaves no training rows")
    rng = np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(_VAL_SPLIT,)))
    order = rng.permutation(n)
    fit_rows, val_rows = order[n_val:], order[:n_val]
    return X[fit_rows], y[fit_rows], X[val_rows], y[val_rows]


def _train_group(X_fit, y_fit, X_est, n_models, config, group):
    models = []
    preds = []
    for i in range(n_models):
        m = train_elm(
            X_fit,
            y_fit,
            config.n_hidden,
            config.activation,
            seed=member_seed(config.seed, group, i),
        )
        models.append(m)
        preds.append(np.ravel(predict(m, X_est)))
    return models, preds


def _select_group(preds, y_est, config, group, threshold):
    corr = correlation_matrix(preds, np.ravel(y_est))
    weights = ga_evolve(corr, config.ga, seed=_ga_seed(config.seed, _GROUP_GA, group))
    return select_by_threshold(weights, threshold)


def _layer_one(X, y, config):
    X_fit, y_fit, X_est, y_est = _estimation_split(
        X, y, config.validation_fraction, config.seed
    )
    threshold1 = (
        config.threshold1 if config.threshold1 is not None else 1.0 / config.group_size
    )
    pool_models, pool_preds, pool_prov = [], [], []
    counts = []
    for g in range(config.groups):
        models, preds = _train_group(X_fit, y_fit, X_est, config.group_size, config, g)
        chosen = _select_group(preds, y_est, config, g, threshold1)
        counts.append(int(chosen.size))
        for i in chosen:
            pool_models.append(models[i])
            pool_preds.append(preds[i])
            pool_prov.append((g, int(i)))
    return X_fit, y_fit, X_est, y_est, pool_models, pool_preds, pool_prov, counts


def train_rmse_elm(X, y, config=None):
    """Train the two-layer recursive selective ensemble.

    Layer 1: per group, train `group_size` ELMs on distinct derived
    seeds, evolve weights on the group's correlation matrix, keep models
    whose weight reaches threshold1 (default 1/group_size). Layer 2: pool
    all survivors, evolve weights once more over the pool, keep models at
    threshold2 (default 1/pool_size), and average the final survivors.
    Pooled survivors are reused as trained unless config.retrain_pool.
    """
    if config is None:
        config = EnsembleConfig()
    (X_fit, y_fit, X_est, y_est, pool_models, pool_preds, pool_prov, counts) = _layer_one(
        X, y, config
    )

    if config.retrain_pool:
        pool_models, pool_preds = [], []
        for j, prov in enumerate(pool_prov):
            m = train_elm(
                X_fit,
                y_fit,
                config.n_hidden,
                config.activation,
                seed=np.random.SeedSequence(config.seed, spawn_key=(_RETRAIN, j)),
            )
            pool_models.append(m)
            pool_preds.append(np.ravel(predict(m, X_est)))

    pool_size = len(pool_models)
    threshold2 = config.threshold2 if config.threshold2 is not None else 1.0 / pool_size
    corr = correlation_matrix(pool_preds, np.ravel(y_est))
    weights = ga_evolve(corr, config.ga, seed=_ga_seed(config.seed, _POOL_GA))
    chosen = select_by_threshold(weights, threshold2)

    return RmseElmEnsemble(
        members=tuple(pool_models[i] for i in chosen),
        provenance=tuple(pool_prov[i] for i in chosen),
        pool_provenance=tuple(pool_prov),
        group_survivor_counts=tuple(counts),
    )


def train_e_gasen(X, y, config=None):
    """Two-layer variant whose second layer is a plain simple average.

    Layer 1 is identical to train_rmse_elm; the pooled survivors are then
    averaged directly, with no second round of evolution or selection.
    """
    if config is None:
        config = EnsembleConfig()
    (_, _, _, _, pool_models, _, pool_prov, counts) = _layer_one(X, y, config)
    return RmseElmEnsemble(
        members=tuple(pool_models),
        provenance=tuple(pool_prov),
        pool_provenance=tuple(pool_prov),
        group_survivor_counts=tuple(counts),
    )


def train_gasen_elm(
    X,
    y,
    n_learners=20,
    n_hidden=50,
    activation="sigmoid",
    threshold=None,
    ga=None,
    seed=0,
    validation_fraction=0.0,
):
    """One-layer selective ensemble: train, evolve weights, select, average.

    Equivalent to a single group of the recursive model. `threshold`
    defaults to 1/n_learners.
    """
    config = EnsembleConfig(
        groups=1,
        group_size=n_learners,
        n_hidden=n_hidden,
        activation=activation,
        threshold1=threshold,
        ga=ga if ga is not None else GaConfig(),
        seed=seed,
        validation_fraction=validation_fraction,
    )
    (_, _, _, _, pool_models, _, pool_prov, _) = _layer_one(X, y, config)
    return ElmEnsemble(members=tuple(pool_models), provenance=tuple(pool_prov))


def train_simple_ensemble(X, y, n_learners=20, n_hidden=50, activation="sigmoid", seed=0):
    """Simple-average ensemble of independently seeded ELMs (no selection)."""
    if n_learners < 1:
        raise ValueError("n_learners must be positive")
    members = tuple(
        train_elm(X, y, n_hidden, activation, seed=member_seed(seed, 0, i))
        for i in range(n_learners)
    )
    return ElmEnsemble(members=members, provenance=tuple((0, i) for i in range(n_learners)))
