import io
import json

import pytest

from lcslab.cli import main


def run_cli(argv):
    out = io.StringIO()
    code = main(argv, stdout=out)
    return code, out.getvalue()


class TestLcsCommand:
    def test_paper_style_example(self):
        code, out = run_cli(["lcs", "--x", "000000", "--y", "100101"])
        assert code == 0
        assert out.strip().split("\n")[-1] == "3"

    def test_alphabet_inferred_from_both(self):
        code, out = run_cli(["lcs", "--x", "000", "--y", "222"])
        assert code == 0
        assert "k=3" in out

    def test_missing_argument(self):
        code, _ = run_cli(["lcs", "--x", "000"])
        assert code == 2

    def test_json_format(self):
        code, out = run_cli(["lcs", "--x", "0101", "--y", "0101", "--format", "json"])
        payload = json.loads(out)
        assert payload["lcs_length"] == 4


class TestHeaderEcho:
    def test_gaps_header_has_resolved_config(self):
        code, out = run_cli(
            ["gaps", "--k", "2", "--ell", "6", "--n", "40", "--trials", "3", "--seed", "5"]
        )
        assert code == 0
        header = out.split("\n")[1]
        for token in ("k=2", "n=40", "ell=6", "trials=3", "seed=5"):
            assert token in header

    def test_events_header_has_derived_quantities(self):
        code, out = run_cli(
            ["events", "--k", "2", "--d", "50", "--trials", "3", "--seed", "1"]
        )
        assert code == 0
        header = out.split("\n")[1]
        assert "ell=22" in header
        assert "d_alpha=10" in header

    def test_derived_ell_echoed_without_override(self):
        code, out = run_cli(["gaps", "--k", "2", "--d", "50", "--trials", "2"])
        assert code == 0
        assert "ell=22" in out.split("\n")[1]


class TestPrecedence:
    def test_flag_beats_config_file(self, tmp_path):
        cfg = tmp_path / "lab.cfg"
        cfg.write_text("trials = 7\nseed = 9\n")
        code, out = run_cli(
            ["gaps", "--k", "2", "--ell", "4", "--n", "20", "--config", str(cfg), "--trials", "3"]
        )
        assert code == 0
        assert "trials=3" in out
        assert "seed=9" in out

    def test_env_beats_file_not_flag(self, tmp_path, monkeypatch):
        cfg = tmp_path / "lab.cfg"
        cfg.write_text("trials = 7\n")
        monkeypatch.setenv("LCSLAB_TRIALS", "5")
        code, out = run_cli(
            ["gaps", "--k", "2", "--ell", "4", "--n", "20", "--config", str(cfg)]
        )
        assert code == 0 and "trials=5" in out
        code, out = run_cli(
            ["gaps", "--k", "2", "--ell", "4", "--n", "20", "--config", str(cfg), "--trials", "2"]
        )
        assert code == 0 and "trials=2" in out

    def test_missing_config_uses_builtins(self):
        code, out = run_cli(["gaps", "--k", "2", "--ell", "4", "--n", "20", "--trials", "2"])
        assert code == 0
        assert "block_mode=inserted" in out

    def test_unknown_key_named(self, tmp_path, capsys):
        cfg = tmp_path / "lab.cfg"
        cfg.write_text("spam = 1\n")
        code, _ = run_cli(["gaps", "--config", str(cfg), "--trials", "2"])
        assert code == 2
        assert "spam" in capsys.readouterr().err

    def test_malformed_line_has_line_number(self, tmp_path, capsys):
        cfg = tmp_path / "lab.cfg"
        cfg.write_text("trials = 2\nnot a pair\n")
        code, _ = run_cli(["gaps", "--config", str(cfg)])
        assert code == 2
        assert ":2:" in capsys.readouterr().err


class TestExitCodes:
    def test_unknown_flag(self):
        code, _ = run_cli(["gaps", "--frobnicate", "1"])
        assert code == 2

    def test_invalid_range(self, capsys):
        code, _ = run_cli(["events", "--k", "2", "--alpha", "0.9", "--beta", "0.8", "--trials", "2"])
        assert code == 2
        assert "alpha" in capsys.readouterr().err

    def test_unknown_subcommand(self):
        code, _ = run_cli(["frobnicate"])
        assert code == 2


class TestReproducibility:
    GAPS = ["gaps", "--k", "2", "--ell", "6", "--n", "60", "--trials", "8",
            "--seed", "11", "--per-trial"]

    def test_identical_reruns(self):
        first = run_cli(self.GAPS)
        second = run_cli(self.GAPS)
        assert first == second

    def test_jobs_do_not_change_stdout(self):
        base = run_cli(self.GAPS)
        forked = run_cli(self.GAPS + ["--jobs", "2"])
        assert base == forked

    def test_gamma_rerun_identical(self):
        argv = ["gamma", "--k", "3", "--n", "80", "--trials", "10", "--seed", "2"]
        assert run_cli(argv) == run_cli(argv)

    def test_events_jobs_invariant(self):
        argv = ["events", "--k", "3", "--d", "40", "--trials", "6", "--seed", "4"]
        assert run_cli(argv) == run_cli(argv + ["--jobs", "3"])


class TestFormats:
    def test_csv_floats_use_six_decimals(self):
        code, out = run_cli(["gamma", "--k", "2", "--n", "50", "--trials", "4", "--seed", "1"])
        assert code == 0
        row = out.strip().split("\n")[-1].split(",")
        for cell in (row[0], row[1], *row[3:]):
            assert len(cell.split(".")[1]) == 6

    def test_json_gaps_payload(self):
        code, out = run_cli(
            ["gaps", "--k", "2", "--ell", "4", "--n", "20", "--trials", "3",
             "--seed", "2", "--format", "json"]
        )
        payload = json.loads(out)
        assert payload["summary"]["ell"] == 4
        assert len(payload["trials"]) == 3

    def test_curve_output(self):
        code, out = run_cli(
            ["curve", "--k", "1", "--n", "60", "--p-grid=-0.2:0.2:0.2",
             "--trials", "2", "--seed", "0"]
        )
        assert code == 0
        assert "p,value,trials,hoeff_lo,hoeff_hi,norm_lo,norm_hi" in out
        assert "# p_m_hat=0.000000" in out

    def test_condition3_output(self):
        code, out = run_cli(["condition3", "--k", "1", "--n", "100", "--trials", "3"])
        assert code == 0
        assert "inconclusive" in out

    def test_delta_output(self):
        code, out = run_cli(
            ["delta", "--k", "2", "--ell", "4", "--n", "20", "--trials", "3", "--seed", "2"]
        )
        assert code == 0
        data_row = out.strip().split("\n")[-1]
        # Gap statistics are absent in delta rows.
        assert ",,," in data_row


class TestOracleCheck:
    def test_runs_clean(self):
        code, out = run_cli(["oracle-check", "--trials", "25", "--seed", "6"])
        assert code == 0
        assert out.count("PASS") == 2
