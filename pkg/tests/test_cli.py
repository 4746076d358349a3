import json
import subprocess
import sys

import pytest

from secureic.cli import main

SWAP_PLAIN = "(1|-),(2|3),(3|2);(e|-)"
SWAP_EVE = "(1|-),(2|3),(3|2);(e|1)"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_enumerate_text(capsys):
    code, out, _ = run(capsys, "enumerate", "3", "--feasible")
    assert code == 0
    assert len(out.strip().splitlines()) == 20


def test_enumerate_json_n4(capsys):
    code, out, _ = run(capsys, "enumerate", "4", "--feasible", "--format", "json")
    assert code == 0
    assert len(json.loads(out)) == 833


def test_enumerate_bad_n(capsys):
    code, _, err = run(capsys, "enumerate", "7")
    assert code == 2 and "error" in err


def test_outer_secure(capsys):
    code, out, _ = run(capsys, "outer", SWAP_EVE, "--bound", "secure")
    assert code == 0 and out.strip() == "R_2 = R_3; R_1 + R_3 <= 1"


def test_outer_nonsecure(capsys):
    code, out, _ = run(capsys, "outer", SWAP_PLAIN, "--bound", "nonsecure")
    assert code == 0 and out.strip() == "R_1 + R_2 <= 1; R_1 + R_3 <= 1"


def test_outer_infeasible(capsys):
    code, _, _ = run(capsys, "outer", SWAP_PLAIN, "--bound", "secure")
    assert code == 3


def test_outer_parse_error(capsys):
    code, _, err = run(capsys, "outer", "(1|1);(e|-)")
    assert code == 2 and "cannot parse" in err


def test_outer_json_schema(capsys):
    code, out, _ = run(capsys, "outer", SWAP_EVE, "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert set(data) == {"problem", "bound", "constraints", "vertices"}


def test_json_is_deterministic(capsys):
    _, a, _ = run(capsys, "outer", SWAP_EVE, "--bound", "h", "--format", "json")
    _, b, _ = run(capsys, "outer", SWAP_EVE, "--bound", "h", "--format", "json")
    assert a == b


def test_inner_narrow_config(capsys):
    code, out, _ = run(capsys, "inner", SWAP_EVE, "--config", "1:1;2:1,2;3:1,3")
    assert code == 0
    assert "conflict" in out.lower()
    code, out, _ = run(capsys, "inner", SWAP_EVE, "--config", "1:1;2:1,2;3:1,3", "--key", "on")
    assert code == 0 and "R_2 = R_3; R_1 + R_3 <= 1" in out


def test_inner_bad_config(capsys):
    code, _, _ = run(capsys, "inner", SWAP_EVE, "--config", "1:2;2:2;3:3")
    assert code == 2


def test_capacity_single(capsys):
    code, out, _ = run(capsys, "capacity", SWAP_EVE, "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["status"] == "MATCHED_WITH_KEY"
    for k in ("problem", "status", "outer", "inner", "config", "conflict_witness"):
        assert k in data


def test_capacity_infeasible(capsys):
    code, out, _ = run(capsys, "capacity", SWAP_PLAIN)
    assert code == 3 and "INFEASIBLE" in out


def test_capacity_usage(capsys):
    assert run(capsys, "capacity")[0] == 2
    assert run(capsys, "capacity", SWAP_EVE, "--table")[0] == 2
    assert run(capsys, "capacity", "--sweep", "5")[0] == 2


def test_capacity_table(capsys):
    code, out, _ = run(capsys, "capacity", "--sweep", "3", "--table")
    assert code == 0
    assert "20/20 rows match" in out
    assert "unmatched: 0" in out


def test_verify_code(capsys):
    code, out, _ = run(capsys, "verify-code", SWAP_EVE, "--lengths", "1,1,1", "--output", "x1",
                       "--output", "x2+x3", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["secure"] and data["decodable"]
    assert data["rates"] == ["1/2", "1/2", "1/2"]


def test_verify_code_bad(capsys):
    code, _, _ = run(capsys, "verify-code", SWAP_EVE, "--lengths", "1,1", "--output", "x1")
    assert code == 2


def test_gh_check(capsys):
    code, out, _ = run(capsys, "gh-check", SWAP_EVE)
    assert code == 0 and out.startswith("1/1")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "secureic", "enumerate", "2", "--feasible"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.strip() == "(1|2),(2|1);(e|-)"
