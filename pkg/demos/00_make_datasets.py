"""Materialize the four benchmark tables as CSV files under data/.

The waveform task comes from its defining generator; the other three are
the bundled schema-matched stand-ins. Real UCI tables dropped into data/
under the same file names take precedence everywhere (see data/README.md),
so running this script is only needed for fully offline use of the CLI
and the bench configs.
"""

from pathlib import Path

from rmse_elm import save_csv
from rmse_elm.synth import make_abalone_task, make_housing_task, make_waveform, make_wine_task

OUT = Path(__file__).resolve().parent.parent / "data"

JOBS = [
    ("boston_housing.csv", make_housing_task, dict(seed=0), 400),
    ("abalone.csv", make_abalone_task, dict(seed=0), 2000),
    ("winequality_red.csv", make_wine_task, dict(seed=0), 1065),
    ("waveform.csv", make_waveform, dict(n_samples=5000, seed=0), 3000),
]

for fname, maker, kw, n_train in JOBS:
    ds = maker(**kw)
    path = save_csv(
        ds,
        OUT / fname,
        manifest={
            "generator": f"{maker.__name__}({', '.join(f'{k}={v}' for k, v in kw.items())})",
            "suggested_n_train": n_train,
        },
    )
    print(f"wrote {path}  ({ds.n_samples} rows x {ds.n_features} features, "
          f"target mean {ds.y.mean():.3f})")
