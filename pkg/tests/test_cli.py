import subprocess
import sys

import numpy as np
import pytest

from rmse_elm.cli import EXIT_CONFIG, EXIT_DATA, EXIT_OK, main
from rmse_elm.data import save_csv
from rmse_elm.synth import make_synthetic_regression


@pytest.fixture()
def csv_path(tmp_path):
    ds = make_synthetic_regression(n_samples=80, n_features=3, seed=0, noise_std=0.2)
    return str(save_csv(ds, tmp_path / "syn.csv"))


def run_cli(args):
    return main(args)


class TestTrain:
    def test_plain_elm(self, csv_path, capsys):
        code = run_cli(["train", "--dataset", csv_path, "--hidden", "8", "--seed", "3"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "master seed: 3" in out
        mse_line = [l for l in out.splitlines() if l.startswith("test MSE:")][0]
        assert np.isfinite(float(mse_line.split(":")[1]))

    def test_rmse_elm_prints_layer_counts(self, csv_path, capsys):
        code = run_cli([
            "train", "--dataset", csv_path, "--method", "rmse-elm",
            "--groups", "2", "--group-size", "4", "--hidden", "6",
            "--noise", "1,0.5", "--seed", "1",
        ])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        pool = int([l for l in out.splitlines() if "layer-1 pool size" in l][0].split(":")[1])
        survivors = int([l for l in out.splitlines() if "layer-2 survivors" in l][0].split(":")[1])
        assert 1 <= survivors <= pool <= 8

    def test_synthetic_task_reference(self, capsys):
        code = run_cli(["train", "--dataset", "task:waveform", "--hidden", "8",
                        "--n-train", "200", "--seed", "2"])
        assert code == EXIT_OK
        assert "test MSE" in capsys.readouterr().out

    def test_missing_file_names_path(self, capsys):
        code = run_cli(["train", "--dataset", "/no/such/file.csv"])
        err = capsys.readouterr().err
        assert code == EXIT_DATA
        assert "/no/such/file.csv" in err

    def test_unknown_method_is_config_error(self, csv_path, capsys):
        code = run_cli(["train", "--dataset", csv_path, "--method", "mlp"])
        assert code == EXIT_CONFIG

    def test_unknown_flag_rejected(self, csv_path):
        with pytest.raises(SystemExit) as exc:
            run_cli(["train", "--dataset", csv_path, "--frobnicate"])
        assert exc.value.code == 2


class TestBlend:
    def test_writes_csv_and_manifest(self, csv_path, tmp_path, capsys):
        out_path = tmp_path / "blended.csv"
        code = run_cli([
            "blend", "--dataset", csv_path, "--noise", "2,1,0.5",
            "--seed", "9", "--out", str(out_path),
        ])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "master seed: 9" in out
        assert out_path.exists()
        manifest = (tmp_path / "blended.csv.manifest.txt").read_text()
        assert "noise_seed: 9" in manifest
        assert "2.0, 1.0, 0.5" in manifest

    def test_blend_adds_columns(self, csv_path, tmp_path):
        out_path = tmp_path / "b.csv"
        run_cli(["blend", "--dataset", csv_path, "--noise", "1", "--noise", "0.5",
                 "--out", str(out_path)])
        header = out_path.read_text().splitlines()[0]
        assert header.count(",") == 3 + 2  # 3 features + 2 noise + target


class TestBenchAndReport:
    def write_config(self, tmp_path, csv_path):
        text = f"""
[experiment]
methods = elm, rmse
runs = 2
seed = 5
out_dir = {tmp_path / "reports"}

[ensemble]
groups = 2
group_size = 3
hidden = 6

[ga]
population = 8
generations = 4
elitism = 1

[noise:g2]
variances = 1, 0.5
seed = 3

[dataset:syn]
path = {csv_path}
target = target
n_train = 60
"""
        p = tmp_path / "bench.ini"
        p.write_text(text)
        return p

    def test_bench_then_report(self, csv_path, tmp_path, capsys):
        cfg = self.write_config(tmp_path, csv_path)
        code = run_cli(["bench", "--config", str(cfg)])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "master seed: 5" in out
        reports = tmp_path / "reports"
        assert (reports / "summary.txt").exists()

        code = run_cli(["report", "--records", str(reports / "runrecords.csv"),
                        "--out", str(tmp_path / "rebuilt")])
        assert code == EXIT_OK
        rebuilt = (tmp_path / "rebuilt" / "mse.csv").read_text()
        original = (reports / "mse.csv").read_text()
        assert rebuilt == original

    def test_bench_missing_config(self, capsys):
        code = run_cli(["bench", "--config", "/no/such.ini"])
        assert code == EXIT_CONFIG

    def test_bench_override_seed(self, csv_path, tmp_path, capsys):
        cfg = self.write_config(tmp_path, csv_path)
        code = run_cli(["bench", "--config", str(cfg), "--seed", "99", "--runs", "1",
                        "--out", str(tmp_path / "r2")])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "master seed: 99" in out


class TestEntryPoint:
    def test_module_invocation(self, csv_path):
        proc = subprocess.run(
            [sys.executable, "-m", "rmse_elm.cli", "train", "--dataset", csv_path,
             "--hidden", "6", "--seed", "1"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert "test MSE" in proc.stdout
