import json
import os
from pathlib import Path

import pytest

jsonschema = pytest.importorskip("jsonschema")

from delinscap.cli import main, load_series_config, _parse_grid

SCHEMA_DIR = Path(__file__).resolve().parents[1] / "src" / "delinscap" / "schemas"


def _schema(name):
    return json.loads((SCHEMA_DIR / name).read_text())


def _validate(payload, schema_name):
    jsonschema.validate(payload, _schema(schema_name))


class TestBoundCommand:
    def test_deletion_identity(self, tmp_path, capsys):
        out = tmp_path / "b.json"
        assert main(["bound", "--channel", "deletion", "--d", "0", "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        _validate(payload, "bound_report.schema.json")
        assert payload["bound_bits"] == pytest.approx(1.0, abs=1e-6)
        assert payload["gamma_star"] == pytest.approx(0.5, abs=1e-3)

    def test_insertion_reports_both_bounds(self, tmp_path):
        out = tmp_path / "b.json"
        assert main(["bound", "--channel", "insertion", "--i", "0.1", "--alpha", "1",
                     "--tol", "1e-4", "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        _validate(payload, "bound_report.schema.json")
        assert set(payload["bounds"]) == {"lb1", "lb2"}
        assert payload["bound_bits"] == max(b["bound_bits"] for b in payload["bounds"].values())

    def test_delins_full_term_table(self, tmp_path):
        out = tmp_path / "b.json"
        assert main(["bound", "--channel", "delins", "--d", "0.1", "--i", "0.1",
                     "--alpha", "0.8", "--tol", "1e-4", "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        _validate(payload, "bound_report.schema.json")
        assert 0.0 < payload["bound_bits"] < 1.0
        names = {t["name"] for t in payload["bounds"]["lb"]["terms"]}
        assert {"source_entropy", "comp_insertion_penalty", "deleted_runs_penalty",
                "run_length_penalty", "insertion_ambiguity_credit"} <= names

    def test_incoherent_flags_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["bound", "--channel", "deletion", "--i", "0.1", "--d", "0.2"])
        assert exc.value.code == 2

    def test_missing_required_param(self):
        with pytest.raises(SystemExit) as exc:
            main(["bound", "--channel", "insertion", "--i", "0.1"])
        assert exc.value.code == 2

    def test_paper_closed_forms_flag(self, tmp_path):
        out_a = tmp_path / "a.json"
        out_b = tmp_path / "b.json"
        common = ["bound", "--channel", "deletion", "--d", "0.2", "--gamma", "0.6"]
        assert main(common + ["--out", str(out_a)]) == 0
        assert main(common + ["--paper-closed-forms", "--out", str(out_b)]) == 0
        a = json.loads(out_a.read_text())
        b = json.loads(out_b.read_text())
        assert a["bound_bits"] != b["bound_bits"]
        names = {t["name"] for t in b["bounds"]["lb"]["terms"]}
        assert "deleted_runs_penalty_printed_form" in names

    def test_flag_rejected_off_deletion(self):
        with pytest.raises(SystemExit) as exc:
            main(["bound", "--channel", "delins", "--d", "0.1", "--i", "0.1",
                  "--alpha", "0.5", "--paper-closed-forms"])
        assert exc.value.code == 2


class TestSweepCommand:
    def test_deletion_grid_has_19_rows(self, tmp_path):
        out = tmp_path / "del.csv"
        assert main(["sweep", "--channel", "deletion", "--d", "0:0.9:0.05",
                     "--tol", "1e-3", "--out", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 1 + 19
        header = lines[0].split(",")
        assert header[:6] == ["channel", "d", "i", "alpha", "gamma_star", "bound"]
        first = lines[1].split(",")
        assert float(first[5]) == pytest.approx(1.0, abs=1e-6)

    def test_insertion_columns(self, tmp_path):
        out = tmp_path / "ins.csv"
        assert main(["sweep", "--channel", "insertion", "--i", "0.1,0.2",
                     "--alpha", "0.8", "--tol", "1e-3", "--out", str(out)]) == 0
        header = out.read_text().splitlines()[0]
        for col in ("lb1", "lb2", "lb_max"):
            assert col in header.split(",")

    def test_byte_identical_reruns(self, tmp_path):
        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        args = ["sweep", "--channel", "delins", "--d", "0.1", "--i", "0.05,0.1",
                "--alpha", "0.8", "--tol", "1e-3"]
        assert main(args + ["--out", str(out_a)]) == 0
        assert main(args + ["--out", str(out_b)]) == 0
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_rfc4180_line_endings(self, tmp_path):
        out = tmp_path / "d.csv"
        main(["sweep", "--channel", "deletion", "--d", "0.1", "--tol", "1e-3", "--out", str(out)])
        assert b"\r\n" in out.read_bytes()


class TestSimulateCommand:
    def test_structure_and_schema(self, tmp_path):
        out = tmp_path / "sim.json"
        assert main(["simulate", "--channel", "delins", "--d", "0.15", "--i", "0.15",
                     "--alpha", "0.8", "--gamma", "0.5", "--n", "9", "--seed", "7",
                     "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        _validate(payload, "simulation.schema.json")
        assert len(payload["x"]) == 9
        assert len(payload["y"]) == payload["m"]
        assert len(payload["s_counts"]) == payload["m"] + 1
        assert len(payload["i_flags"]) == payload["m"]
        assert len(payload["pattern"]) == 9

    def test_identity_channel_round_trip(self, tmp_path):
        out = tmp_path / "sim.json"
        assert main(["simulate", "--channel", "delins", "--d", "0", "--i", "0",
                     "--alpha", "1", "--gamma", "0.6", "--n", "20", "--seed", "3",
                     "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert payload["y"] == payload["x"]
        assert payload["y_flipped"] == payload["x"]

    def test_determinism(self, tmp_path):
        args = ["simulate", "--channel", "deletion", "--d", "0.3", "--gamma", "0.5",
                "--n", "40", "--seed", "11"]
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(args + ["--out", str(a)])
        main(args + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestVerifyCommand:
    def test_reductions_suite(self, tmp_path):
        out = tmp_path / "v.json"
        assert main(["verify", "reductions", "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        _validate(payload, "verification.schema.json")
        assert payload["passed"] is True

    def test_truncation_suite(self, tmp_path):
        out = tmp_path / "v.json"
        assert main(["verify", "truncation", "--out", str(out)]) == 0
        _validate(json.loads(out.read_text()), "verification.schema.json")

    def test_mc_suite_report_shape(self, tmp_path):
        # short chains may miss the full-length tolerances; only the report
        # contract is asserted here (the acceptance suite runs 1e6 steps)
        out = tmp_path / "v.json"
        code = main(["verify", "mc", "--steps", "5e4", "--seed", "7", "--out", str(out)])
        payload = json.loads(out.read_text())
        _validate(payload, "verification.schema.json")
        assert code == (0 if payload["passed"] else 1)
        assert {c["name"] for c in payload["checks"]} >= {"hI_vs_limit", "hT_vs_limit",
                                                          "HS2_vs_series", "stationary_iy_tv"}


class TestSeriesConfigEnv:
    def test_round_trip(self, tmp_path, monkeypatch):
        cfg_file = tmp_path / "series.cfg"
        cfg_file.write_text("tail_epsilon = 1e-10\nr_max_cap=2000\n# comment\nk_max_cap=3000\n")
        monkeypatch.setenv("DELINSCAP_SERIES_CONFIG", str(cfg_file))
        cfg = load_series_config()
        assert cfg.tail_epsilon == 1e-10
        assert cfg.r_max_cap == 2000
        assert cfg.k_max_cap == 3000

    def test_unknown_key_rejected(self, tmp_path, monkeypatch):
        cfg_file = tmp_path / "series.cfg"
        cfg_file.write_text("bogus=1\n")
        monkeypatch.setenv("DELINSCAP_SERIES_CONFIG", str(cfg_file))
        with pytest.raises(ValueError):
            load_series_config()

    def test_cli_uses_env_config(self, tmp_path, monkeypatch):
        cfg_file = tmp_path / "series.cfg"
        cfg_file.write_text("tail_epsilon=1e-9\n")
        monkeypatch.setenv("DELINSCAP_SERIES_CONFIG", str(cfg_file))
        out = tmp_path / "b.json"
        assert main(["bound", "--channel", "deletion", "--d", "0.1", "--gamma", "0.6",
                     "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert payload["series_config"]["tail_epsilon"] == 1e-9


def test_grid_spec_parsing():
    assert _parse_grid("0.3") == [0.3]
    assert _parse_grid("0.8,1.0") == [0.8, 1.0]
    vals = _parse_grid("0:0.9:0.05")
    assert len(vals) == 19
    assert vals[0] == 0.0 and vals[-1] == pytest.approx(0.9, abs=1e-12)
    with pytest.raises(ValueError):
        _parse_grid("0:1:0:9")
    with pytest.raises(ValueError):
        _parse_grid("0:1:-0.1")
