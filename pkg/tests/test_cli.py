"""End-to-end command-line behavior and the exit-status contract."""

import math
import os

from semolab.cli import main


def run_cli(*argv):
    return main(list(argv))


class TestRun:
    def test_basic_run_writes_outputs(self, tmp_path, capsys):
        out = tmp_path / "exp"
        code = run_cli("run", "--benchmark", "cocz", "--n", "16",
                       "--alg", "gsemo", "--trials", "5", "--seed", "7",
                       "--out", str(out))
        assert code == 0
        trials = (out / "trials.csv").read_text().splitlines()
        assert trials[0] == ("benchmark,n,k,algorithm,variant,seed,"
                             "runtime_evals,runtime_iters,censored")
        assert len(trials) == 6
        assert (out / "trajectories.csv").exists()
        assert (out / "resolved-config.txt").exists()
        assert "5 trials" in capsys.readouterr().out

    def test_rerun_byte_identical(self, tmp_path):
        args = ("run", "--benchmark", "omm", "--n", "8", "--alg", "semo",
                "--trials", "4", "--seed", "3")
        a, b = tmp_path / "a", tmp_path / "b"
        assert run_cli(*args, "--out", str(a)) == 0
        assert run_cli(*args, "--out", str(b)) == 0
        assert (a / "trials.csv").read_bytes() == (b / "trials.csv").read_bytes()
        assert (a / "trajectories.csv").read_bytes() \
            == (b / "trajectories.csv").read_bytes()

    def test_odd_cocz_size_rejected(self, tmp_path, capsys):
        code = run_cli("run", "--benchmark", "cocz", "--n", "31",
                       "--out", str(tmp_path / "x"))
        assert code == 2
        assert "even" in capsys.readouterr().err

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text("# smoke config\nbenchmark=omm\nn=8,10\nalg=gsemo\n"
                       "trials=2\nseed=5\nout=unused\n")
        out = tmp_path / "run"
        code = run_cli("run", "--config", str(cfg), "--trials", "3",
                       "--out", str(out))
        assert code == 0
        lines = (out / "trials.csv").read_text().splitlines()
        assert len(lines) == 1 + 3 * 2  # flag override wins over file
        resolved = (out / "resolved-config.txt").read_text()
        assert "trials=3" in resolved and "benchmark=omm" in resolved

    def test_config_file_errors_are_line_precise(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("benchmark=omm\nnot a pair\n")
        code = run_cli("run", "--config", str(cfg), "--out",
                       str(tmp_path / "x"))
        assert code == 2
        assert "bad.cfg:2" in capsys.readouterr().err

    def test_unknown_config_key(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("benchmark=omm\nn=8\npopulation=9\n")
        code = run_cli("run", "--config", str(cfg), "--out",
                       str(tmp_path / "x"))
        assert code == 2
        assert "population" in capsys.readouterr().err

    def test_missing_required_settings(self, tmp_path, capsys):
        assert run_cli("run", "--out", str(tmp_path / "x")) == 2
        assert "benchmark" in capsys.readouterr().err

    def test_unwritable_output_dir(self, tmp_path, capsys):
        target = tmp_path / "file"
        target.write_text("occupied")
        code = run_cli("run", "--benchmark", "omm", "--n", "8",
                       "--out", str(target))
        assert code == 2

    def test_jobs_flag_preserves_outputs(self, tmp_path):
        args = ("run", "--benchmark", "cocz", "--n", "8", "--trials", "4",
                "--seed", "2")
        a, b = tmp_path / "a", tmp_path / "b"
        assert run_cli(*args, "--jobs", "1", "--out", str(a)) == 0
        assert run_cli(*args, "--jobs", "2", "--out", str(b)) == 0
        assert (a / "trials.csv").read_bytes() == (b / "trials.csv").read_bytes()

    def test_interior_init_flag(self, tmp_path, capsys):
        code = run_cli("run", "--benchmark", "ojzj", "--n", "10", "--k", "2",
                       "--trials", "2", "--interior-init", "on",
                       "--max-iters", "500", "--out", str(tmp_path / "o"))
        assert code == 0
        code = run_cli("run", "--benchmark", "cocz", "--n", "8",
                       "--interior-init", "on", "--out", str(tmp_path / "c"))
        assert code == 2
        assert "ojzj" in capsys.readouterr().err


class TestOracle:
    def test_cocz_match(self, capsys):
        assert run_cli("oracle", "--benchmark", "cocz", "--n", "8") == 0
        out = capsys.readouterr().out
        assert "MATCH" in out and "5 points" in out

    def test_omm_match(self, capsys):
        assert run_cli("oracle", "--benchmark", "omm", "--n", "12") == 0
        assert "13 points" in capsys.readouterr().out

    def test_ojzj_match(self, capsys):
        assert run_cli("oracle", "--benchmark", "ojzj", "--n", "10",
                       "--k", "2") == 0
        assert "MATCH" in capsys.readouterr().out

    def test_oversized_refused(self, capsys):
        assert run_cli("oracle", "--benchmark", "omm", "--n", "24") == 2
        assert "refuses" in capsys.readouterr().err


class TestReport:
    def make_run(self, tmp_path, *extra):
        out = tmp_path / "run"
        code = run_cli("run", "--benchmark", "cocz", "--n", "16",
                       "--alg", "gsemo", "--variant", "modified",
                       "--trials", "4", "--seed", "1",
                       "--checkpoint", "border:n2_log:0.001",
                       "--out", str(out), *extra)
        assert code == 0
        return out

    def test_modified_run_auto_suites(self, tmp_path, capsys):
        out = self.make_run(tmp_path)
        code = run_cli("report", "--out", str(out))
        assert code in (0, 1)  # verdicts are data-dependent at this tiny size
        assert (out / "report.csv").exists()
        assert (out / "summary.txt").exists()
        text = capsys.readouterr().out
        assert "front_spread" in text and "border_distance" in text

    def test_report_without_run_is_diagnosed(self, tmp_path, capsys):
        code = run_cli("report", "--out", str(tmp_path / "nothing"))
        assert code == 2
        assert "resolved-config" in capsys.readouterr().err

    def test_missing_trials_file_diagnosed(self, tmp_path, capsys):
        out = self.make_run(tmp_path)
        os.remove(out / "trials.csv")
        code = run_cli("report", "--out", str(out))
        assert code == 2
        assert "trials.csv" in capsys.readouterr().err

    def test_empty_trials_file_diagnosed(self, tmp_path, capsys):
        out = self.make_run(tmp_path)
        header = (out / "trials.csv").read_text().splitlines()[0]
        (out / "trials.csv").write_text(header + "\n")
        code = run_cli("report", "--out", str(out))
        assert code == 2
        assert "no data" in capsys.readouterr().err

    def test_equivalence_suite_and_negative_control(self, tmp_path, capsys):
        out = self.make_run(tmp_path)
        code = run_cli("report", "--out", str(out), "--suite", "equivalence",
                       "--equiv-n", "6", "--equiv-steps", "10",
                       "--equiv-trials", "800")
        assert code == 0
        code = run_cli("report", "--out", str(out), "--suite", "equivalence",
                       "--equiv-n", "6", "--equiv-steps", "10",
                       "--equiv-trials", "800", "--equiv-offset", "-1")
        assert code == 1  # broken slot range must fail the suite
        assert "FAIL" in capsys.readouterr().out


class TestBounds:
    def test_witt(self, capsys):
        assert run_cli("bounds", "witt", "--phases", "0.5,0.5",
                       "--lam", "4") == 0
        out = capsys.readouterr().out
        assert f"{math.exp(-0.5):.6f}"[:8] in out or "0.606530" in out

    def test_witt_lambda_zero(self, capsys):
        assert run_cli("bounds", "witt", "--phases", "0.25", "--lam", "0") == 0
        out = capsys.readouterr().out
        assert "upper_tail=1" in out and "lower_tail=1" in out

    def test_chernoff(self, capsys):
        assert run_cli("bounds", "chernoff", "--mean", "50",
                       "--delta", "0.5") == 0
        assert f"{math.exp(-6.25):.8g}" in capsys.readouterr().out

    def test_sandwich(self, capsys):
        assert run_cli("bounds", "sandwich", "--family", "inv",
                       "--alpha", "2", "--beta", "100") == 0
        out = capsys.readouterr().out
        assert "lower=" in out and "upper=" in out

    def test_malformed_inputs(self, capsys):
        assert run_cli("bounds", "witt", "--phases", "0.5,nope",
                       "--lam", "1") == 2
        assert run_cli("bounds", "chernoff", "--mean", "10",
                       "--delta", "1.5") == 2

    def test_usage_error_exit_code(self):
        assert run_cli("bounds") == 2
        assert run_cli("definitely-not-a-command") == 2
