import json

import pytest
from pydantic import ValidationError

from src.cli import EXIT_OK, EXIT_USAGE, RunConfig, build_parser, execute, run


def run_json(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out else None


class TestRunConfig:
    def test_normalizes_algebra(self):
        cfg = RunConfig(command="cartan", algebra=" g2^1 ")
        assert cfg.algebra == "g2^1"
        assert cfg.format == "json" and cfg.workers == 1

    @pytest.mark.parametrize("kwargs", [
        {"command": "cartan", "algebra": "z9^1"},
        {"command": "cartan", "algebra": "a2^1", "pair": (0, 1)},
        {"command": "coaction", "algebra": "a2^1"},
        {"command": "verify", "algebra": "a2^1", "pair": (0, 0)},
        {"command": "verify", "algebra": "a2^1", "pair": (0, 5)},
        {"command": "verify", "algebra": "a2^1", "variant": "mirror"},
        {"command": "verify", "algebra": "a2^1", "format": "html"},
        {"command": "verify", "algebra": "a2^1", "workers": 0},
    ])
    def test_rejected(self, kwargs):
        with pytest.raises(ValidationError):
            RunConfig(**kwargs)

    def test_parser_defaults(self):
        args = build_parser().parse_args(["verify", "a2^1"])
        assert args.variant == "std" and args.format == "json" and args.pair is None


class TestExitCodes:
    def test_cartan(self, capsys):
        code, data = run_json(capsys, ["cartan", "a2^1"])
        assert code == EXIT_OK
        assert data["schemaVersion"] == 1
        assert data["command"] == "cartan"
        assert data["result"]["links"][0]["kind"] == "Simple"
        assert data["passed"] is True

    @pytest.mark.parametrize("argv", [
        ["cartan", "z9^1"],
        ["cartan", "b2^1"],
        ["frobnicate", "a2^1"],
        ["coaction", "a2^1"],
        ["verify", "a2^1", "--pair", "1", "1"],
        ["classify", "a2^1", "--format", "pdf"],
        ["cartan"],
    ])
    def test_usage_errors(self, capsys, argv):
        assert run(argv) == EXIT_USAGE
        captured = capsys.readouterr()
        assert captured.out == ""
        assert captured.err

    def test_usage_message_names_the_problem(self, capsys):
        run(["cartan", "e9^1"])
        assert "e6^1, e7^1, e8^1" in capsys.readouterr().err

    def test_classify_without_table(self, capsys):
        code, data = run_json(capsys, ["classify", "a1^1"])
        assert code == EXIT_OK
        assert data["result"]["families"][0]["tags"] == {"w0": "FREE", "w1": "FREE"}

    def test_verify_single_pair(self, capsys):
        code, data = run_json(capsys, ["verify", "a2^1", "--pair", "0", "1"])
        assert code == EXIT_OK
        assert [p["pair"] for p in data["pairs"]] == [[0, 1]]
        assert data["oracle"] is None
        assert "execution_time" not in data["pairs"][0]

    def test_verbose_adds_timing(self, capsys):
        code, data = run_json(capsys, ["cartan", "a2^1", "--verbose"])
        assert code == EXIT_OK
        assert "execution_time" in data["result"]


class TestExecute:
    def test_verify_a11_runs_the_oracle(self):
        payload, code = execute(RunConfig(command="verify", algebra="a1^1"))
        assert code == EXIT_OK
        assert payload["oracle"]["holds"]
        assert len(payload["pairs"]) == 1

    def test_coaction_payload(self):
        payload, code = execute(RunConfig(command="coaction", algebra="a2^1", pair=(0, 1)))
        assert code == EXIT_OK
        assert payload["result"]["residualZero"]

    def test_report_payload(self):
        payload, code = execute(RunConfig(command="report", algebra="a1^1"))
        assert code == EXIT_OK
        assert list(payload) == ["command", "algebra", "verify", "bar", "coaction", "cartan", "classify",
                                 "oracle", "passed"]
        assert payload["bar"] == [{"pair": [0, 1], "symmetric": True, "passed": True}]
        assert payload["coaction"][0]["residualZero"]
        assert payload["oracle"]["holds"]


class TestReportCommand:
    @pytest.mark.parametrize("fmt,marker", [("text", "overall: PASS"), ("latex", r"\subsection*{Families}")])
    def test_dossier(self, capsys, fmt, marker):
        assert run(["report", "a1^1", "--format", fmt]) == EXIT_OK
        out = capsys.readouterr().out
        assert marker in out
        assert "a1" in out


class TestDeterminism:
    def test_worker_count_does_not_change_output(self, capsys):
        run(["verify", "a2^1", "--workers", "1"])
        single = capsys.readouterr().out
        run(["verify", "a2^1", "--workers", "2"])
        parallel = capsys.readouterr().out
        assert single == parallel
        assert [p["pair"] for p in json.loads(single)["pairs"]] == [[0, 1], [0, 2], [1, 2]]

    def test_repeated_runs_match(self, capsys):
        run(["classify", "f4^1"])
        first = capsys.readouterr().out
        run(["classify", "f4^1"])
        assert capsys.readouterr().out == first


# one algebra per boundary-condition list
BOUNDARY_TYPES = ["a1^1", "a2^1", "b3^1", "c2^1", "d4^1", "e6^1", "f4^1", "g2^1", "a2^2", "a4^2", "a5^2", "d3^2",
                  "e6^2", "d4^3"]


class TestGoldens:
    @pytest.mark.parametrize("algebra", BOUNDARY_TYPES)
    def test_cartan_text(self, capsys, golden, algebra):
        assert run(["cartan", algebra, "--format", "text"]) == EXIT_OK
        golden(f"cartan_{algebra.replace('^', '_')}.txt", capsys.readouterr().out)

    @pytest.mark.parametrize("argv,name", [
        (["cartan", "d4^3", "--format", "latex"], "cartan_d4_3.tex"),
        (["classify", "a4^2", "--format", "text"], "classify_a4_2.txt"),
        (["classify", "c3^1"], "classify_c3_1.json"),
        (["verify", "a2^1", "--pair", "0", "1", "--format", "text"], "verify_a2_1.txt"),
        (["coaction", "a1^1", "--pair", "0", "1", "--format", "text"], "coaction_a1_1.txt"),
    ])
    def test_report_text(self, capsys, golden, argv, name):
        assert run(argv) == EXIT_OK
        golden(name, capsys.readouterr().out)


class TestBoundaryTypes:
    @pytest.mark.slow
    @pytest.mark.parametrize("algebra", BOUNDARY_TYPES)
    def test_report_passes(self, capsys, algebra):
        code, payload = run_json(capsys, ["report", algebra])
        assert code == EXIT_OK
        assert payload["passed"]
        assert all(entry["passed"] for entry in payload["verify"])
        assert all(entry["symmetric"] for entry in payload["bar"])
        assert all(entry["residualZero"] for entry in payload["coaction"])
        if algebra != "a1^1":
            assert payload["classify"]["unmatchedPaperFamilies"] == []
