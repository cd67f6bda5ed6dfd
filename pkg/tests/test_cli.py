import json

import pytest

from rankstability.cli import main
from rankstability.errors import BoundViolation
from rankstability.liealg import almostrep_from_text


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def strip_timing(text: str) -> dict:
    # JSON report is the first chunk; CSV (if any) follows after the closing brace
    depth = 0
    end = None
    for i, ch in enumerate(text):
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                end = i + 1
                break
    report = json.loads(text[:end])
    report.pop("timing", None)
    return report


def test_verma_defect_csv(capsys):
    code, out, _ = run_cli(
        capsys, "verma", "defect", "--algebra", "sl2", "--lambda", "1/2", "--n", "4,8"
    )
    assert code == 0
    assert "n,dim,defect,bound,pass" in out
    assert "4,5,1/5,1/2,True" in out
    assert "8,9,1/9,1/4,True" in out


def test_deterministic_output_modulo_timing(capsys):
    args = ["rolli", "certify", "--preset", "diag_involution", "--n", "6",
            "--field", "rational", "--seed", "9", "--conjugates", "2"]
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert strip_timing(out1) == strip_timing(out2)


def test_threads_env_does_not_change_output(capsys, monkeypatch):
    args = ["verma", "defect", "--lambda", "1/2", "--n", "4,6,8"]
    code1, out1, _ = run_cli(capsys, *args)
    monkeypatch.setenv("RSL_THREADS", "3")
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert strip_timing(out1) == strip_timing(out2)


def test_compress_check_json_lines(capsys):
    code, out, _ = run_cli(
        capsys, "compress", "check", "--n", "6", "--k", "4", "--trials", "2",
        "--field", "gf7", "--seed", "1"
    )
    assert code == 0
    lines = [json.loads(l) for l in out.splitlines() if l.startswith("{") and '"law"' in l and '"cases"' not in l]
    per_trial = [l for l in lines if "trial" in l]
    assert len(per_trial) == 6  # three laws per trial
    for rec in per_trial:
        assert {"n", "k", "lhs", "rhs", "pass"} <= set(rec)
        assert rec["pass"] is True


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verma", "defect"])  # missing --lambda and --n
    assert exc.value.code == 2
    code, _, err = run_cli(capsys, "verma", "defect", "--lambda", "bogus", "--n", "4")
    assert code == 2
    assert "error" in err


def test_unreadable_config_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "sweep", "--config", "/nonexistent.json")
    assert code == 2
    assert "error" in err


def test_bound_violation_reports_diagnostics(capsys, monkeypatch):
    import rankstability.cli as cli_mod

    args = cli_mod.build_parser().parse_args(
        ["rolli", "defect", "--preset", "diag_involution", "--n", "4"]
    )

    def explode(_):
        raise BoundViolation("synthetic failure", details={"matrix": "1 1 rational\n0\n"})

    monkeypatch.setattr(args, "func", explode, raising=False)
    monkeypatch.setattr(cli_mod, "build_parser", lambda: _FakeParser(args))
    code = cli_mod.main([])
    captured = capsys.readouterr()
    assert code == 3
    assert "BOUND VIOLATION" in captured.err
    assert "matrix" in captured.err


class _FakeParser:
    def __init__(self, args):
        self._args = args

    def parse_args(self, argv):
        return self._args


def test_sweep_runs_batch(tmp_path, capsys):
    config = {
        "runs": [
            {"command": "verma.defect", "options": {"lam": "1/2", "n": "4"}},
            {"command": "rolli.defect", "options": {"preset": "diag_involution", "n": 4}},
        ]
    }
    path = tmp_path / "sweep.json"
    path.write_text(json.dumps(config))
    code, out, _ = run_cli(capsys, "sweep", "--config", str(path))
    assert code == 0
    report = strip_timing(out)
    assert report["pass"] is True
    assert len(report["runs"]) == 2
    assert report["config"]["echo"] == config


def test_out_prefix_writes_files(tmp_path, capsys):
    prefix = str(tmp_path / "report")
    code, out, _ = run_cli(
        capsys, "--out", prefix, "verma", "defect", "--lambda", "1/2", "--n", "4"
    )
    assert code == 0
    data = json.loads((tmp_path / "report.json").read_text())
    assert data["pass"] is True
    csv_text = (tmp_path / "report.csv").read_text()
    assert csv_text.splitlines()[0] == "n,dim,defect,bound,pass"


def test_verma_build_serialization_roundtrip(tmp_path, capsys):
    rep_path = str(tmp_path / "rep.txt")
    code, out, _ = run_cli(
        capsys, "verma", "build", "--lambda", "1/2", "--n", "3", "--rep-out", rep_path
    )
    assert code == 0
    rep = almostrep_from_text(open(rep_path).read())
    assert rep.dim == 4
    assert rep.meta["n"] == 3
