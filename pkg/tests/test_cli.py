"""End-to-end CLI tests: exit codes, stdout format, JSON reports, env overrides.

Everything here goes through ``main(argv)`` with the in-process transport,
so no server and no subprocesses are involved.
"""

import json

import pytest

from qmeq.cli import _parse_case_spec, main


@pytest.fixture(scope="module")
def walk4_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("machines") / "walk4_H.qmm"
    assert main(["gen-walk", "--size", "4", "-o", str(path)]) == 0
    return str(path)


def test_gen_walk_writes_named_file(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert main(["gen-walk", "--size", "2", "--coin", "Y"]) == 0
    out = capsys.readouterr().out
    assert "wrote walk2_Y.qmm" in out
    text = (tmp_path / "walk2_Y.qmm").read_text()
    assert text.startswith("# walk machine")
    assert "dims 2 4" in text


def test_gen_walk_to_stdout(capsys):
    assert main(["gen-walk", "--size", "2", "-o", "-"]) == 0
    assert "dims 2 4" in capsys.readouterr().out


def test_check_not_equivalent(walk4_path, capsys):
    code = main(
        ["check", walk4_path, walk4_path, "--state1", "0c0p", "--state2", "0c2p"]
    )
    captured = capsys.readouterr()
    assert code == 1
    assert "verdict: not-equivalent" in captured.out
    assert "witness: +00 / 000" in captured.out
    assert "p1: 0.5" in captured.out
    assert "p2: 0\n" in captured.out
    assert "gap: 0.5" in captured.out
    assert "elapsed" in captured.err
    assert "elapsed" not in captured.out


def test_check_equivalent(walk4_path, capsys):
    code = main(
        ["check", walk4_path, walk4_path, "--state1", "phic0p", "--state2", "phic2p"]
    )
    captured = capsys.readouterr()
    assert code == 0
    assert "verdict: equivalent" in captured.out
    assert "witness" not in captured.out


def test_check_stdout_deterministic(walk4_path, capsys):
    argv = ["check", walk4_path, walk4_path, "--state1", "0c0p", "--state2", "0c2p"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    second = capsys.readouterr().out
    assert first == second


def test_check_json_report(walk4_path, tmp_path, capsys):
    report = tmp_path / "report.json"
    code = main(
        [
            "check",
            walk4_path,
            walk4_path,
            "--state1",
            "0c0p",
            "--state2",
            "0c2p",
            "--json",
            str(report),
        ]
    )
    assert code == 1
    body = json.loads(report.read_text())
    assert body["verdict"] == "not-equivalent"
    assert body["witness"]["inputs"] == ["+", "0", "0"]
    assert body["schema_version"] == 1
    assert body["elapsed_s"] >= 0.0
    capsys.readouterr()


def test_check_json_to_stdout(walk4_path, capsys):
    code = main(
        [
            "check",
            walk4_path,
            walk4_path,
            "--state1",
            "phic0p",
            "--state2",
            "phic2p",
            "--json",
            "-",
        ]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith("{")
    assert "verdict: equivalent" in out


def test_no_early_abort_matches(walk4_path, capsys):
    code = main(
        [
            "check",
            walk4_path,
            walk4_path,
            "--state1",
            "0c0p",
            "--state2",
            "0c2p",
            "--no-early-abort",
        ]
    )
    captured = capsys.readouterr()
    assert code == 1
    assert "witness: +00 / 000" in captured.out


def test_tolerance_env_flips_verdict(walk4_path, monkeypatch, capsys):
    monkeypatch.setenv("QMEQ_TOL", "100")
    code = main(
        ["check", walk4_path, walk4_path, "--state1", "0c0p", "--state2", "0c2p"]
    )
    assert code == 0
    assert "verdict: equivalent" in capsys.readouterr().out


@pytest.mark.parametrize("bad", ["abc", "-1", "0"])
def test_bad_tolerance_env(walk4_path, monkeypatch, capsys, bad):
    monkeypatch.setenv("QMEQ_TOL", bad)
    code = main(
        ["check", walk4_path, walk4_path, "--state1", "0c0p", "--state2", "0c2p"]
    )
    assert code == 2
    assert "QMEQ_TOL" in capsys.readouterr().err


def test_missing_file_is_usage_error(capsys):
    code = main(["check", "no-such.qmm", "also-missing.qmm", "--state1", "a", "--state2", "b"])
    assert code == 2
    assert "cannot read" in capsys.readouterr().err


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.qmm"
    bad.write_text("dims 2\n")
    code = main(["check", str(bad), str(bad), "--state1", "a", "--state2", "b"])
    assert code == 2
    assert "error [parse]" in capsys.readouterr().err


def test_resource_error_exit_code(tmp_path, capsys):
    huge = tmp_path / "huge.qmm"
    huge.write_text("dims 100 100\noutcomes a\nunitary\n")
    code = main(["check", str(huge), str(huge), "--state1", "a", "--state2", "b"])
    assert code == 3
    assert "error [resource]" in capsys.readouterr().err


def test_unknown_state_exit_code(walk4_path, capsys):
    code = main(["check", walk4_path, walk4_path, "--state1", "nope", "--state2", "0c0p"])
    assert code == 2
    assert "error [usage]" in capsys.readouterr().err


def test_oracle_check_cli(walk4_path, capsys):
    code = main(
        [
            "oracle-check",
            walk4_path,
            walk4_path,
            "--state1",
            "0c0p",
            "--state2",
            "0c2p",
            "--max-len",
            "3",
        ]
    )
    captured = capsys.readouterr()
    assert code == 1
    assert "verdict: not-equivalent (experiments up to length 3)" in captured.out
    assert "witness: +00 / 000" in captured.out
    assert "nodes examined: 584" in captured.out


def test_simulate_deterministic_output(walk4_path, capsys):
    argv = [
        "simulate",
        walk4_path,
        "--state",
        "0c0p",
        "--inputs",
        "+ 0 0",
        "--shots",
        "1000",
        "--seed",
        "3",
    ]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    assert "inputs: +00" in first
    assert "shots: 1000" in first
    counts = {
        line.split()[0]: int(line.split()[1])
        for line in first.splitlines()
        if line.startswith("  ")
    }
    assert sum(counts.values()) == 1000
    assert counts["000"] == pytest.approx(500, abs=80)


def test_selftest_subset(capsys):
    code = main(["selftest", "--cases", "1,6"])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out.count("[PASS]") == 2
    assert "2/2 cases passed" in captured.out
    assert "case 1: size 4" in captured.out


def test_parse_case_spec():
    assert _parse_case_spec("1-3") == [1, 2, 3]
    assert _parse_case_spec("1,2,7") == [1, 2, 7]
    assert _parse_case_spec("4") == [4]
    with pytest.raises(Exception, match="bad case"):
        _parse_case_spec("x")
    with pytest.raises(Exception, match="no cases"):
        _parse_case_spec(",")


def test_selftest_bad_case_index(capsys):
    code = main(["selftest", "--cases", "99"])
    assert code == 2
    assert "case" in capsys.readouterr().err
