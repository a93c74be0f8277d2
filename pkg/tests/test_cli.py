import json
import subprocess
import sys

import pytest

from siftbound.cli import EXIT_DATA, EXIT_FAIL, EXIT_OK, EXIT_USAGE, dispatch


def run(capsys, *argv):
    code = dispatch(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_usage_errors(capsys):
    assert run(capsys, "bogus")[0] == EXIT_USAGE
    assert run(capsys)[0] == EXIT_USAGE
    assert run(capsys, "sift", "--x", "100")[0] == EXIT_USAGE
    assert run(capsys, "rbound", "--beta", "0")[0] == EXIT_USAGE


def test_zeros_without_data(capsys):
    code, _, err = run(capsys, "zeros", "--kind", "chi3")
    assert code == EXIT_DATA and "data required" in err


def test_json_is_byte_identical(capsys):
    a = run(capsys, "constants")[1]
    b = run(capsys, "constants", "--format", "json")[1]
    assert a == b
    d = json.loads(a)
    assert "timestamp" not in d["meta"] and d["meta"]["command"] == "constants"


def test_timestamp_flag(capsys):
    code, out, _ = run(capsys, "rbound", "--beta", "8", "--timestamp")
    assert code == EXIT_OK and "timestamp" in json.loads(out)["meta"]


def test_global_flags_after_subcommand(capsys):
    a = run(capsys, "--format", "text", "rbound", "--beta", "9")[1]
    b = run(capsys, "rbound", "--beta", "9", "--format", "text")[1]
    assert a == b and "bound_beta_plus_3" in a


def test_rbound_and_mg(capsys):
    d = json.loads(run(capsys, "rbound", "--beta", "8")[1])["result"]
    assert d["bound_beta_plus_3"] == 199
    d = json.loads(run(capsys, "mg", "--x", "10", "--exact")[1])["result"]
    assert d["mg"] == 2.0


def test_sift(capsys):
    code, out, _ = run(capsys, "sift", "--x", "60", "--w", "5", "--sign", "+")
    assert code == EXIT_OK and json.loads(out)["result"]["survivors"] == 7


def test_chains_lines(capsys, tmp_path):
    code, out, err = run(capsys, "chains", "--lo", "7", "--hi", "100", "--verify")
    lines = out.strip().splitlines()
    assert code == EXIT_OK and len(lines) == 22
    assert [json.loads(l)["p"] for l in lines][:3] == [7, 11, 13]
    assert json.loads(err.strip().splitlines()[-1])["unresolved"] == []


def test_factor(capsys):
    d = json.loads(run(capsys, "factor", "57")[1])["result"]
    assert d["factors"] == [["3", 1], ["19", 1]] and d["smallest_p3"] == 19


def test_entry_point():
    r = subprocess.run([sys.executable, "-m", "siftbound.cli", "rbound", "--beta", "8"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["result"]["bound_beta_plus_3"] == 199


def test_constants_reports_printed_mismatch(capsys):
    # two printed ladder values differ from the recursion, so the exit code is 1
    code, out, _ = run(capsys, "constants")
    d = json.loads(out)["result"]
    assert code == EXIT_FAIL
    off = sorted(k for k, v in d["printed_comparison"].items() if not v["ok"])
    assert off == ["C2+", "C2-"] and "sources" in d
