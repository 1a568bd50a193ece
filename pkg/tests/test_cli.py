import json
import os
import subprocess
import sys

import pytest

from bubblestar.cli import EXIT_INCOMPLETE, EXIT_OK, EXIT_REFUTED, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_construct(capsys, tmp_path):
    code, out, _ = run(capsys, "construct", "--n", "3")
    assert code == EXIT_OK
    assert len([ln for ln in out.splitlines() if not ln.startswith("#")]) == 9
    code, out, _ = run(capsys, "construct", "--n", "2")
    assert [ln for ln in out.splitlines() if not ln.startswith("#")] == ["0 1"]
    dot = tmp_path / "g.dot"
    assert run(capsys, "construct", "--n", "4", "--format", "dot", "--out", str(dot))[0] == EXIT_OK
    code, out, _ = run(capsys, "mp", "--graph", str(dot))
    assert code == EXIT_OK and "mp(BS_4) = 5" in out
    assert run(capsys, "construct", "--n", "3", "--format", "cert")[0] == EXIT_USAGE


def test_mp_and_smp(capsys):
    code, out, _ = run(capsys, "mp", "--n", "3")
    assert code == EXIT_OK and "mp(BS_3) = 3" in out
    code, out, _ = run(capsys, "smp", "--n", "3")
    assert code == EXIT_OK and "smp(BS_3) = 2" in out


def test_mp_enumerate_all_bs4(capsys):
    code, out, _ = run(capsys, "mp", "--n", "4", "--enumerate-all")
    assert code == EXIT_OK
    assert "optimal sets: 24, all trivial: yes" in out


def test_mp_budget_incomplete(capsys):
    code, out, _ = run(capsys, "mp", "--n", "4", "--budget", "10")
    assert code == EXIT_INCOMPLETE and "incomplete" in out


def test_mp_writes_certificate(capsys, tmp_path):
    path = tmp_path / "mp3.json"
    code, _, _ = run(capsys, "mp", "--n", "3", "--out", str(path))
    assert code == EXIT_OK
    cert = json.loads(path.read_text())
    assert cert["claim_id"] == "mp/n=3" and cert["verdict"] == "verified"
    assert run(capsys, "validate", str(path))[0] == EXIT_OK


def test_check(capsys):
    code, out, _ = run(capsys, "check", "{a,f,g}", "--n", "3")
    assert code == EXIT_OK and "precludes" in out
    code, out, _ = run(capsys, "check", "{g,h,p}")
    assert code == EXIT_REFUTED and "surviving matching {a,c,e}" in out
    code, out, _ = run(capsys, "check", "{123,231}")
    assert code == EXIT_OK
    code, out, _ = run(capsys, "check", "{(1234,2134), 1234-1324}")
    assert code == EXIT_REFUTED and "(" in out


@pytest.mark.parametrize("literal", ["{a,,f}", "a,f,g", "{z}", "{(123,123)}", "{123-213-312}", "{1234}"])
def test_check_malformed_literal(capsys, literal):
    code, _, err = run(capsys, "check", literal, "--n", "3")
    assert code == EXIT_USAGE and err


def test_aliases_need_bs3(capsys):
    assert run(capsys, "check", "{a}", "--n", "4")[0] == EXIT_USAGE


def test_certify_and_validate(capsys, tmp_path):
    path = tmp_path / "c.json"
    code, _, err = run(capsys, "certify", "cross-edges", "--n", "4", "--out", str(path))
    assert code == EXIT_OK and "verified" in err
    code, out, _ = run(capsys, "validate", str(path))
    assert code == EXIT_OK and "verified" in out
    assert run(capsys, "validate", str(path), "--n", "5")[0] == EXIT_REFUTED
    code, out, _ = run(capsys, "certify", "bs3-table")
    assert code == EXIT_OK and json.loads(out)["claim_id"] == "bs3-table"
    assert run(capsys, "certify", "nonsense", "--n", "3")[0] == EXIT_USAGE
    assert run(capsys, "certify", "regularity")[0] == EXIT_USAGE
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert run(capsys, "validate", str(bad))[0] == EXIT_USAGE


def test_certify_incomplete(capsys):
    assert run(capsys, "certify", "smp", "--n", "4", "--budget", "3")[0] == EXIT_INCOMPLETE


def test_hampath(capsys, tmp_path):
    code, out, _ = run(capsys, "hampath", "1234", "2134", "--n", "4")
    assert code == EXIT_OK
    labels = out.split()
    assert labels[0] == "1234" and labels[-1] == "2134" and len(set(labels)) == 24
    code, out, _ = run(capsys, "hampath", "1234", "2314", "--n", "4")
    assert code == EXIT_REFUTED and "parity-obstruction" in out
    assert run(capsys, "hampath", "1234", "1234", "--n", "4")[0] == EXIT_USAGE
    cert = tmp_path / "h.json"
    assert run(capsys, "hampath", "123", "213", "--n", "3", "--out", str(cert))[0] == EXIT_OK
    assert run(capsys, "validate", str(cert))[0] == EXIT_OK


def test_usage_errors(capsys):
    assert run(capsys, "mp")[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == EXIT_USAGE
    assert run(capsys, "mp", "--n", "12")[0] == EXIT_USAGE
    assert run(capsys, "construct", "--n", "4", "--generators", "1-2 1-2")[0] == EXIT_USAGE


def test_custom_generators(capsys):
    code, out, _ = run(capsys, "mp", "--n", "4", "--generators", "1-2 1-3 1-4")
    assert code == EXIT_OK and "= 3" in out


def test_output_independent_of_threads(capsys):
    outs = [run(capsys, "mp", "--n", "3", "--exhaustive", "--threads", t)[1] for t in ("1", "2")]
    assert outs[0] == outs[1]


def test_console_script_and_env_threads(tmp_path):
    env = dict(os.environ, BUBBLESTAR_THREADS="2")
    proc = subprocess.run(
        [sys.executable, "-m", "bubblestar.cli", "mp", "--n", "3", "--exhaustive"],
        capture_output=True, text=True, env=env, check=False,
    )
    assert proc.returncode == 0 and "mp(BS_3) = 3" in proc.stdout
    from bubblestar.preclusion import default_threads

    os.environ["BUBBLESTAR_THREADS"] = "3"
    try:
        assert default_threads() == 3
    finally:
        del os.environ["BUBBLESTAR_THREADS"]
