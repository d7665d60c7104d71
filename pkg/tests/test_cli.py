import io
import subprocess
import sys

import pytest

from inducedprob.cli import run
from inducedprob.dsl import render
from inducedprob.scenarios import build


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_query_two_dice():
    code, out, _ = call("query", "two-dice", "p_s6_given_B")
    assert code == 0
    assert out == "P(s6 | B) = 2/11\n"


def test_query_tsv_decimal():
    code, out, _ = call("query", "thirder", "p_H_given_A", "--format", "tsv", "--decimal")
    assert out == "p_H_given_A\t1/3\t0.333333\n"


def test_eval_lists_all_queries():
    code, out, _ = call("eval", "grumpy", "--format", "tsv")
    assert code == 0
    rows = dict(line.split("\t") for line in out.splitlines())
    assert rows["p_H_given_A"] == "1/3"
    assert rows["p_Tu_H"] == "1/4"
    assert len(rows) == len(build("grumpy").queries)


def test_table_two_dice():
    code, out, _ = call("table", "two-dice")
    assert code == 0
    assert "Table 1" in out and "Table 2" in out
    assert "C''_B" in out
    assert "differs in 7 entries" in out


def test_table_tsv_other_scenario():
    code, out, _ = call("table", "thirder", "--format", "tsv")
    assert code == 0
    assert "A\t3/4" in out


def test_check_all_passes():
    code, out, _ = call("check", "all")
    assert code == 0
    assert "FAIL" not in out


def test_check_failure_exit_one(tmp_path):
    text = render(build("halfer")).replace("query p_W := P(W) in g expect 1", "query p_W := P(W) in g expect 1/2")
    p = tmp_path / "bad.psc"
    p.write_text(text)
    code, out, _ = call("check", str(p))
    assert code == 1
    assert "FAIL  p_W" in out


def test_parse_error_exit_two(tmp_path):
    p = tmp_path / "broken.psc"
    p.write_text("scenario s\nspace CoinToss uniform { H, T }\nspace Wake { a }\nmap g : CoinToss -> Wake { H -> a }\n")
    code, out, err = call("eval", str(p))
    assert code == 2
    assert out == ""
    assert f"{p}:4:1: error: map g is not total over CoinToss" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("frobnicate", "halfer"),
        ("eval", "monty-hall"),
        ("eval", "halfer", "--trials", "0"),
        ("eval", "halfer", "--seed", "-3"),
        ("query", "halfer"),
        ("query", "halfer", "nope"),
        ("table", "all"),
        ("check", "protocol"),
        ("eval", "missing.psc"),
        ("check", "groisman", "--n", "50"),
    ],
)
def test_usage_errors(argv):
    code, _, err = call(*argv)
    assert code == 2
    assert err.startswith("inducedprob: error:")


def test_export_round_trip(tmp_path):
    p = tmp_path / "thirder.psc"
    assert call("export", "thirder", "-o", str(p))[0] == 0
    code, out, _ = call("query", str(p), "p_T_given_A")
    assert out == "P(T | A) = 2/3\n"


def test_simulate_deterministic():
    a = call("simulate", "halfer", "--seed", "5", "--trials", "5000")
    b = call("simulate", "halfer", "--seed", "5", "--trials", "5000", "--partitions", "4")
    assert a == b
    assert a[1].startswith("# halfer: seed=5 trials=5000")


def test_simulate_tsv():
    code, out, _ = call("simulate", "thirder", "--format", "tsv", "--trials", "2000")
    first = out.splitlines()[0].split("\t")
    assert first[0] == "p_HMo_A" and len(first) == 5


def test_compare_passes():
    code, out, _ = call("compare", "grumpy", "--seed", "7", "--trials", "200000")
    assert code == 0
    assert "# 0 queries beyond 4 sigma" in out


def test_compare_groisman_large_n():
    code, out, _ = call("compare", "groisman", "--n", "100", "--trials", "100000")
    assert code == 0
    assert "limit 1/3" in out


def test_simulate_protocol():
    code, out, _ = call("simulate", "protocol", "--trials", "1000", "--seed", "1")
    assert code == 0
    assert "awakenings in Heads" in out


def test_module_entry_point_byte_identical():
    cmd = [sys.executable, "-m", "inducedprob", "eval", "two-dice", "--decimal"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b
    assert b"p_s6_given_B" in a
