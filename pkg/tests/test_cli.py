import json
import logging
from fractions import Fraction

import pytest

from qverify.cli import main, parse_range
from qverify.config import DEFAULT_TIMEOUT, SolverConfig, get_debug_flag, load_settings
from qverify.errors import ConfigError
from qverify.parser import parse_heyvl

QV_KEYS = ["QV_SOLVER", "QV_TIMEOUT", "QV_JOBS", "QV_EREAL_ENCODING", "QV_UNFOLD_DEPTH", "QV_DEBUG"]


@pytest.fixture
def clean_env(monkeypatch):
    for key in QV_KEYS:
        monkeypatch.delenv(key, raising=False)
    return monkeypatch


# -----------------------------
# Configuration
# -----------------------------
def test_default_settings(clean_env):
    settings = load_settings()
    assert settings.solver.command == ("z3", "-in", "-smt2")
    assert settings.solver.timeout == DEFAULT_TIMEOUT
    assert settings.jobs == 1
    assert settings.log_level == logging.WARNING


def test_settings_from_environment(clean_env):
    clean_env.setenv("QV_SOLVER", "cvc5 --lang smt2")
    clean_env.setenv("QV_TIMEOUT", "2.5")
    clean_env.setenv("QV_EREAL_ENCODING", "datatype")
    clean_env.setenv("QV_DEBUG", "yes")
    settings = load_settings()
    assert settings.solver.command == ("cvc5", "--lang", "smt2")
    assert settings.solver.timeout == 2.5
    assert settings.solver.ereal_encoding == "datatype"
    assert get_debug_flag() and settings.log_level == logging.DEBUG


@pytest.mark.parametrize(
    "key, value",
    [("QV_TIMEOUT", "soon"), ("QV_TIMEOUT", "-1"), ("QV_JOBS", "0"), ("QV_EREAL_ENCODING", "interval")],
)
def test_bad_configuration(clean_env, capsys, key, value):
    clean_env.setenv(key, value)
    with pytest.raises(ConfigError):
        load_settings()
    assert main(["oracle", "missing.pgcl"]) == 3
    assert "❌ configuration" in capsys.readouterr().out


def test_overrides_skip_unset_values():
    cfg = SolverConfig().with_overrides(command="cvc5 --lang smt2", timeout=None, prune=False)
    assert cfg.command == ("cvc5", "--lang", "smt2")
    assert cfg.timeout == DEFAULT_TIMEOUT
    assert cfg.prune is False


# -----------------------------
# Oracle
# -----------------------------
@pytest.mark.parametrize(
    "spec, parsed",
    [
        ("x=0..3", ("x", [0, 1, 2, 3])),
        ("b=false,true", ("b", [False, True])),
        ("p=0,1/2,1", ("p", [0, Fraction(1, 2), 1])),
    ],
)
def test_parse_range(spec, parsed):
    assert parse_range(spec) == parsed


@pytest.mark.parametrize("spec", ["x", "=0..2", "x=a..b", "x=1,half"])
def test_bad_range(spec):
    with pytest.raises(ConfigError):
        parse_range(spec)


def test_oracle_prints_expectations(clean_env, benchmarks, capsys):
    ranges = [arg for v in "abcr" for arg in ("--range", f"{v}=0..0")]
    assert main(["oracle", str(benchmarks / "die.pgcl"), *ranges]) == 0
    out = capsys.readouterr().out
    assert "wp" in out and "21/8" in out


def test_oracle_with_custom_post(clean_env, benchmarks, capsys):
    args = ["oracle", str(benchmarks / "kind2.pgcl"), "--range", "x=0..2", "--post", "x + 1", "--calc", "ert"]
    assert main(args) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].split() == ["x", "ert"]
    # one guard check and one assignment per step, plus the final guard
    assert [line.split() for line in lines[1:]] == [["0", "2"], ["1", "4"], ["2", "6"]]


def test_oracle_needs_every_range(clean_env, benchmarks, capsys):
    assert main(["oracle", str(benchmarks / "die.pgcl"), "--range", "a=0..1"]) == 3
    assert "no --range for b, c, r" in capsys.readouterr().out


def test_oracle_rejects_heyvl(clean_env, benchmarks, capsys):
    assert main(["oracle", str(benchmarks / "ex.heyvl")]) == 3
    assert capsys.readouterr().out.startswith("❌")


# -----------------------------
# Verify
# -----------------------------
def test_parse_errors_exit_with_error(clean_env, tmp_path, capsys):
    bad = tmp_path / "bad.heyvl"
    bad.write_text("proc f(x: UInt) -> ()\n    pre x\n{\n    assert ) x\n}\n", encoding="utf-8")
    assert main(["verify", str(bad), str(tmp_path / "absent.heyvl")]) == 3
    out = capsys.readouterr().out
    assert f"❌ {bad}:4:" in out
    assert "absent.heyvl" in out


def test_missing_solver_is_an_error(clean_env, benchmarks, tmp_path, capsys):
    target = tmp_path / "heyvl"
    args = ["verify", str(benchmarks / "die.pgcl"), "--solver", "qv-no-such-solver", "--emit-heyvl", str(target)]
    assert main(args) == 3
    assert "solver executable not found" in capsys.readouterr().out
    program = parse_heyvl((target / "die.heyvl").read_text(encoding="utf-8"))
    assert list(program.procs) == ["die_wp", "die_wlp"]


@pytest.mark.solver
def test_verify_reports_verdicts(clean_env, benchmarks, capsys):
    code = main(["verify", str(benchmarks / "ex.heyvl"), str(benchmarks / "foo_bar.heyvl")])
    out = capsys.readouterr().out
    assert code == 1
    assert "✅ proc ex: verified" in out
    assert "❌ proc bar: refuted" in out
    assert "2/3 verified" in out


@pytest.mark.solver
def test_verify_json_and_smt_files(clean_env, benchmarks, tmp_path, capsys):
    smt = tmp_path / "smt"
    code = main(["verify", "--json", "--emit-smt", str(smt), str(benchmarks / "die.pgcl")])
    payload = json.loads(capsys.readouterr().out)
    assert code == payload["exit_code"] == 0
    assert payload["cwp_bound"] == {str(benchmarks / "die.pgcl"): "7/2"}
    assert sorted(p.name for p in smt.iterdir()) == ["die.die_wlp.smt2", "die.die_wp.smt2"]


@pytest.mark.solver
@pytest.mark.parametrize("name", ["die.pgcl", "ost.pgcl"])
def test_emitted_smt_is_byte_identical_across_runs(clean_env, benchmarks, tmp_path, capsys, name):
    runs = [tmp_path / "first", tmp_path / "second"]
    for target in runs:
        main(["verify", "--emit-smt", str(target), str(benchmarks / name)])
    capsys.readouterr()
    first, second = ({p.name: p.read_bytes() for p in run.iterdir()} for run in runs)
    assert first and first == second
