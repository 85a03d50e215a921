import json
from pathlib import Path

from jsonschema import Draft202012Validator

from qkclab import encode, state_to_json, zero_state
from qkclab.cli import main
from qkclab.statevec import ROT, X, apply_gate

SCHEMA = json.loads(
    (Path(__file__).resolve().parent.parent / "docs" / "output_schema.json").read_text()
)
VALIDATOR = Draft202012Validator(SCHEMA)


def run_cli(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr().out
    return rc, out


def validate(obj):
    VALIDATOR.validate(obj)


class TestKplan:
    def test_frozen_value(self, capsys):
        rc, out = run_cli(capsys, "kplan", "--n", "4", "--alpha", "0.01", "--epsilon", "0.25")
        assert rc == 0
        record = json.loads(out)
        assert record["k"] == 975
        validate(record)

    def test_epsilon_out_of_range_is_usage_error(self, capsys):
        rc, _ = run_cli(capsys, "kplan", "--n", "2", "--alpha", "0.05", "--epsilon", "0.6")
        assert rc == 2

    def test_alpha_one_is_usage_error(self, capsys):
        rc, _ = run_cli(capsys, "kplan", "--n", "2", "--alpha", "1", "--epsilon", "0.25")
        assert rc == 2


class TestEstimate:
    def test_classical_zeros(self, capsys):
        rc, out = run_cli(capsys, "estimate", "--classical", "00", "--n", "2", "--max-len", "12")
        assert rc == 0
        record = json.loads(out)
        assert record["best"]["total"] == 1
        assert record["status"] == "ok"
        validate(record)

    def test_program_target_gets_penalty_zero(self, capsys):
        prog = encode([X(0)], 1)
        arg = f"{prog.length}:{prog.value:x}"
        rc, out = run_cli(
            capsys, "estimate", "--target-program", arg, "--n", "1", "--max-len", "10"
        )
        assert rc == 0
        record = json.loads(out)
        assert record["best"]["penalty"] == 0
        assert record["best"]["total"] == 7
        validate(record)

    def test_no_finite_estimate_exit_code(self, capsys):
        rc, out = run_cli(capsys, "estimate", "--classical", "1", "--n", "1", "--max-len", "1")
        assert rc == 3
        record = json.loads(out)
        assert record["status"] == "no_finite_estimate"
        assert record["best"] is None
        validate(record)

    def test_conditional_caps_the_estimate(self, capsys):
        cond = encode([X(0)], 1)
        rc, out = run_cli(
            capsys,
            "estimate", "--classical", "1", "--n", "1", "--max-len", "12",
            "--conditional", f"{cond.length}:{cond.value:x}",
        )
        assert rc == 0
        record = json.loads(out)
        assert record["best"]["total"] == 6
        validate(record)

    def test_sampled_mode(self, capsys):
        rc, out = run_cli(
            capsys,
            "estimate", "--classical", "00", "--n", "2", "--max-len", "10",
            "--sampled", "--alpha", "0.05", "--epsilon", "0.25", "--seed", "7",
        )
        assert rc == 0
        record = json.loads(out)
        assert record["mode"] == "sampled"
        assert record["plan"]["k"] >= 554
        assert 1.0 <= record["best"]["estimate"] <= 2.0
        validate(record)

    def test_statefile_round_trip(self, capsys, tmp_path):
        state = apply_gate(zero_state(1), ROT(0))
        path = tmp_path / "state.json"
        path.write_text(json.dumps(state_to_json(state)))
        rc, out = run_cli(
            capsys, "estimate", "--statefile", str(path), "--n", "1", "--max-len", "8"
        )
        assert rc == 0
        record = json.loads(out)
        assert record["best"]["total"] == 3
        validate(record)

    def test_malformed_statefile_is_usage_error(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        rc, _ = run_cli(capsys, "estimate", "--statefile", str(path), "--n", "1")
        assert rc == 2

    def test_dimension_mismatch_is_usage_error(self, capsys):
        rc, _ = run_cli(capsys, "estimate", "--classical", "01", "--n", "1")
        assert rc == 2

    def test_exactly_one_target_required(self, capsys):
        rc, _ = run_cli(capsys, "estimate", "--n", "2")
        assert rc == 2


class TestProgramTools:
    def test_enumerate_one_bit(self, capsys):
        rc, out = run_cli(capsys, "enumerate", "--max-len", "1", "--n", "2")
        assert rc == 0
        lines = out.strip().splitlines()
        assert len(lines) == 1
        assert json.loads(lines[0])["bits"] == "1"

    def test_decode_header_only(self, capsys):
        rc, out = run_cli(capsys, "decode", "--bits", "1", "--n", "2")
        assert rc == 0
        record = json.loads(out)
        assert record["decodable"] is True
        assert record["gates"] == []
        validate(record)

    def test_decode_reports_undecodable(self, capsys):
        rc, out = run_cli(capsys, "decode", "--bits", "0101010", "--n", "2")
        assert rc == 0
        record = json.loads(out)
        assert record["decodable"] is False
        validate(record)

    def test_encode_decode_round_trip(self, capsys):
        rc, out = run_cli(capsys, "encode", "--gates", "X:0,CNOT:0:1,ROT:1", "--n", "2")
        assert rc == 0
        encoded = json.loads(out)
        validate(encoded)
        rc, out = run_cli(capsys, "decode", "--bits", encoded["bits"], "--n", "2")
        record = json.loads(out)
        assert record["gates"] == ["X:0", "CNOT:0:1", "ROT:1"]

    def test_encode_rejects_bad_index(self, capsys):
        rc, _ = run_cli(capsys, "encode", "--gates", "X:5", "--n", "2")
        assert rc == 2

    def test_encode_rejects_bad_token(self, capsys):
        rc, _ = run_cli(capsys, "encode", "--gates", "HADAMARD:0", "--n", "2")
        assert rc == 2


class TestReports:
    def test_census_files_and_verdict(self, capsys, tmp_path):
        rc, out = run_cli(
            capsys,
            "census", "--n", "2", "--c", "1", "--max-len", "12",
            "--out-dir", str(tmp_path), "--cache-dir", str(tmp_path / "cache"),
        )
        assert rc == 0
        summary = json.loads(out)
        assert summary["verdict"] is True
        for path in summary["files"]:
            assert Path(path).exists()
        report = json.loads(Path(summary["files"][0]).read_text())
        validate(report)
        manifest = json.loads(Path(summary["files"][2]).read_text())
        validate(manifest)

    def test_census_reruns_are_byte_identical(self, capsys, tmp_path):
        args = (
            "census", "--n", "2", "--c", "1", "--max-len", "10",
            "--out-dir", str(tmp_path), "--cache-dir", str(tmp_path / "cache"),
        )
        rc, out1 = run_cli(capsys, *args)
        files = json.loads(out1)["files"]
        first = [Path(f).read_bytes() for f in files]
        rc, out2 = run_cli(capsys, *args)
        second = [Path(f).read_bytes() for f in files]
        assert out1 == out2
        assert first == second

    def test_consistency_csv(self, capsys, tmp_path):
        rc, out = run_cli(
            capsys, "consistency", "--n", "2", "--max-len", "12", "--out-dir", str(tmp_path)
        )
        assert rc == 0
        summary = json.loads(out)
        assert summary["max_gap"] == 0
        csv_lines = Path(summary["files"][1]).read_text().strip().splitlines()
        assert len(csv_lines) == 5  # header + one row per classical string
        for line in csv_lines[1:]:
            gap = int(line.rsplit(",", 1)[1])
            assert gap >= 0
        report = json.loads(Path(summary["files"][0]).read_text())
        validate(report)

    def test_subadd_report(self, capsys, tmp_path):
        px = encode([ROT(0)], 1)
        rc, out = run_cli(
            capsys,
            "subadd", "--px", f"{px.length}:{px.value:x}", "--py", "1:1",
            "--max-len", "16", "--out-dir", str(tmp_path),
        )
        assert rc == 0
        summary = json.loads(out)
        assert summary["conclusive"] is True
        assert summary["slack"] >= 0
        report = json.loads(Path(summary["files"][0]).read_text())
        validate(report)

    def test_subadd_rejects_undecodable_program(self, capsys, tmp_path):
        rc, _ = run_cli(
            capsys,
            "subadd", "--px", "7:55", "--py", "1:1",
            "--max-len", "16", "--out-dir", str(tmp_path),
        )
        assert rc == 2


class TestConfig:
    def test_config_file_sets_defaults(self, capsys, tmp_path):
        cfg = tmp_path / "lab.cfg"
        cfg.write_text("max_len = 8\nn = 1\nseed = 3  # comment\n")
        rc, out = run_cli(
            capsys, "estimate", "--classical", "0", "--config", str(cfg)
        )
        assert rc == 0
        record = json.loads(out)
        assert record["config"]["max_len"] == 8
        assert record["config"]["n"] == 1
        assert record["config"]["seed"] == 3

    def test_flags_override_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "lab.cfg"
        cfg.write_text("max_len = 8\n")
        rc, out = run_cli(
            capsys, "estimate", "--classical", "00", "--n", "2",
            "--config", str(cfg), "--max-len", "10",
        )
        record = json.loads(out)
        assert record["config"]["max_len"] == 10

    def test_unknown_config_key_is_usage_error(self, capsys, tmp_path):
        cfg = tmp_path / "lab.cfg"
        cfg.write_text("wibble = 3\n")
        rc, _ = run_cli(capsys, "estimate", "--classical", "00", "--config", str(cfg))
        assert rc == 2

    def test_cache_dir_env_override(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("QKCLAB_CACHE_DIR", str(tmp_path / "envcache"))
        rc, out = run_cli(capsys, "estimate", "--classical", "00", "--n", "2", "--max-len", "8")
        assert rc == 0
        record = json.loads(out)
        assert record["config"]["cache_dir"] == str(tmp_path / "envcache")
        assert (tmp_path / "envcache").exists()

    def test_estimate_reruns_identical(self, capsys):
        args = ("estimate", "--classical", "00", "--n", "2", "--max-len", "10",
                "--sampled", "--seed", "5")
        _, out1 = run_cli(capsys, *args)
        _, out2 = run_cli(capsys, *args)
        assert out1 == out2
