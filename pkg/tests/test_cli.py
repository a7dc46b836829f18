import os
import subprocess
import sys

import numpy as np
import pytest

from reservoirq import cli
from reservoirq.data import load_csv

CONFIG_TEXT = """\
dataset = narma
name = narma
train_size = 150
validation_size = 50
model = esqn
reservoir_size = 10
trials = 2
seed = 5
"""


@pytest.fixture()
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def write_config(tmp_path, text=CONFIG_TEXT, name="exp.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestGenerateNarma:
    def test_writes_paired_csvs(self, workdir):
        assert cli.main(["generate-narma", "--n", "120", "--seed", "7",
                         "--out", "series"]) == 0
        inputs = load_csv("series_inputs.csv", column="value")
        targets = load_csv("series_targets.csv", column="value")
        assert len(inputs) == 120 and len(targets) == 120
        assert inputs.values.max() <= 0.5

    def test_rerun_is_byte_identical(self, workdir):
        cli.main(["generate-narma", "--n", "60", "--seed", "3", "--out", "a"])
        cli.main(["generate-narma", "--n", "60", "--seed", "3", "--out", "b"])
        for suffix in ("inputs", "targets"):
            with open(f"a_{suffix}.csv") as fa, open(f"b_{suffix}.csv") as fb:
                assert fa.read() == fb.read()

    def test_zero_count_is_usage_error(self, workdir, capsys):
        with pytest.raises(SystemExit) as info:
            cli.main(["generate-narma", "--n", "0", "--seed", "1", "--out", "x"])
        assert info.value.code == 2
        assert "usage" in capsys.readouterr().err


class TestExperiment:
    def test_runs_and_prints_summary_row(self, workdir, capsys):
        config = write_config(workdir)
        assert cli.main(["experiment", "--config", config]) == 0
        line = capsys.readouterr().out.strip()
        fields = line.split()
        assert fields[0] == "narma" and fields[1] == "esqn"
        assert 0.0 <= float(fields[2]) < 10.0
        assert fields[3].startswith("±")
        for name in ("results.csv", "summary.csv", "trace.csv"):
            assert os.path.exists(name)

    def test_single_trial_omits_interval(self, workdir, capsys):
        config = write_config(workdir, CONFIG_TEXT.replace("trials = 2", "trials = 1"))
        assert cli.main(["experiment", "--config", config]) == 0
        assert len(capsys.readouterr().out.strip().split()) == 3
        with open("summary.csv") as fh:
            assert fh.readlines()[1].split(",")[4] == ""

    def test_missing_config_fails_with_diagnostic(self, workdir, capsys):
        assert cli.main(["experiment", "--config", "nowhere.cfg"]) == 1
        err = capsys.readouterr().err
        assert err.startswith("error:") and err.count("\n") == 1

    def test_seed_override_changes_outputs(self, workdir, capsys):
        config = write_config(workdir)
        cli.main(["experiment", "--config", config])
        first = capsys.readouterr().out
        cli.main(["experiment", "--config", config, "--seed", "99"])
        second = capsys.readouterr().out
        assert first != second

    def test_outputs_reingestible(self, workdir):
        config = write_config(workdir)
        cli.main(["experiment", "--config", config])
        nmse_column = load_csv("results.csv", column="nmse")
        assert len(nmse_column) == 2
        trace_targets = load_csv("trace.csv", column="target")
        trace_preds = load_csv("trace.csv", column="prediction")
        assert len(trace_targets) == len(trace_preds) == 50
        assert np.all(np.isfinite(trace_preds.values))


class TestSweep:
    def test_writes_sweep_csv(self, workdir, capsys):
        config = write_config(workdir)
        assert cli.main(["sweep", "--config", config, "--sizes", "5,10"]) == 0
        out_lines = capsys.readouterr().out.strip().splitlines()
        assert len(out_lines) == 2
        assert out_lines[0].split()[0] == "5"
        with open("sweep.csv") as fh:
            lines = fh.read().splitlines()
        assert lines[0] == "reservoir_size,mean_nmse,ci_halfwidth"
        assert len(lines) == 3

    def test_malformed_sizes_is_usage_error(self, workdir, capsys):
        config = write_config(workdir)
        with pytest.raises(SystemExit) as info:
            cli.main(["sweep", "--config", config, "--sizes", "5,banana"])
        assert info.value.code == 2
        assert "malformed" in capsys.readouterr().err

    def test_single_size_matches_experiment(self, workdir, capsys):
        config = write_config(workdir)
        cli.main(["experiment", "--config", config])
        experiment_line = capsys.readouterr().out.strip()
        cli.main(["sweep", "--config", config, "--sizes", "10"])
        sweep_line = capsys.readouterr().out.strip()
        assert sweep_line == f"10 {experiment_line}"


class TestSolveRandnn:
    def test_chain_fixture(self, workdir, capsys, fixture_root):
        spec = os.path.join(fixture_root, "randnn_chain.txt")
        assert cli.main(["solve-randnn", "--spec", spec]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert float(lines[0]) == pytest.approx(0.5, abs=1e-9)
        assert float(lines[1]) == pytest.approx(0.25, abs=1e-9)
        assert lines[2] == "stable true"

    def test_unstable_spec_reports_false(self, workdir, capsys, tmp_path):
        path = tmp_path / "hot.txt"
        path.write_text("1\n2.0\n0.0\n1.0\n0.0\n0.0\n")
        assert cli.main(["solve-randnn", "--spec", str(path)]) == 0
        assert capsys.readouterr().out.strip().splitlines()[-1] == "stable false"

    def test_missing_spec_fails(self, workdir, capsys):
        assert cli.main(["solve-randnn", "--spec", "missing.txt"]) == 1
        assert "error:" in capsys.readouterr().err


class TestUsage:
    def test_unknown_flag_rejected(self, workdir, capsys):
        with pytest.raises(SystemExit) as info:
            cli.main(["generate-narma", "--n", "5", "--out", "x", "--frobnicate"])
        assert info.value.code == 2

    def test_unknown_subcommand_rejected(self, workdir):
        with pytest.raises(SystemExit) as info:
            cli.main(["dance"])
        assert info.value.code == 2

    def test_console_entry_point(self, tmp_path):
        proc = subprocess.run([sys.executable, "-m", "reservoirq.cli", "--help"],
                              capture_output=True, text=True, cwd=tmp_path)
        assert proc.returncode == 0
        for command in ("generate-narma", "experiment", "sweep", "solve-randnn"):
            assert command in proc.stdout
