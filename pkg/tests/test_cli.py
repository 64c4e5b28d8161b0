import json
import math
import subprocess
import sys

import jsonschema
import pytest

from treedist.cli import BENCH_SCHEMA, STATS_SCHEMA, main, run_bench


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as stop:  # argparse usage errors
        code = stop.code
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("argv, code, text", [
    (["--alg", "auto", "a", "a"], 0, "0"),
    (["--alg", "bounded", "--k", "0", "a(b)", "a"], 2, "exceeds 0"),
    (["--alg", "klein", "1(2(3),4,5(6))", "1(2(3),4,5(6))"], 0, "0"),
    (["--alg", "zs", "a(b,c)", "a(b,d)"], 0, "1"),
    (["--alg", "oracle", "a(b(c))", "a"], 0, "2"),
    (["--alg", "bounded", "--k", "3", "a(b(c))", "a"], 0, "2"),
])
def test_compute_plain(capsys, argv, code, text):
    got, out, _ = run(capsys, "compute", *argv)
    assert got == code and out.strip() == text


@pytest.mark.parametrize("alg", ["oracle", "zs", "klein", "bounded", "auto"])
def test_compute_json_validates(capsys, alg):
    extra = ["--k", "1"] if alg == "bounded" else []
    code, out, _ = run(capsys, "compute", "--json", "--alg", alg, *extra, "a(b,c(d))", "a(c(d),e)")
    doc = json.loads(out)
    jsonschema.validate(doc, STATS_SCHEMA)
    assert doc["alg"] == alg and doc["n1"] == 4 and doc["n2"] == 4
    if alg == "bounded":
        assert code == 2 and doc["exceeds"] and doc["distance"] is None
    else:
        assert code == 0 and doc["distance"] == 2
    if alg in ("oracle", "zs"):
        assert doc["states_expanded"] is None
    else:
        assert doc["states_expanded"] > 0


def test_auto_reports_final_k(capsys):
    _, out, _ = run(capsys, "compute", "--json", "--alg", "auto", "a(b,c(d))", "a(c(d),e)")
    assert json.loads(out)["k"] == 2


@pytest.mark.parametrize("argv", [
    ["--alg", "zs", "a(b", "a"],
    ["--alg", "bounded", "a", "a"],
    ["--alg", "bounded", "--k", "-1", "a", "a"],
    ["--alg", "oracle", "a(b,c,d,e,f,g,h)", "a(b,c,d,e,f,g,h,i)"],
    ["--alg", "nope", "a", "a"],
])
def test_compute_input_errors(capsys, argv):
    code, out, err = run(capsys, "compute", *argv)
    assert code == 1 and out == "" and "error" in err


def test_parse_error_names_file_and_offset(capsys, tmp_path):
    bad = tmp_path / "bad.tree"
    bad.write_text("x(y,)\n")
    code, _, err = run(capsys, "compute", "--files", str(bad), str(bad))
    assert code == 1 and "bad.tree" in err and "byte 4" in err


def test_files_flag_and_inline_precedence(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "t1").write_text("a(b,c)")
    (tmp_path / "t2").write_text("a(b)")
    code, out, _ = run(capsys, "compute", "--files", "--alg", "zs", "t1", "t2")
    assert (code, out.strip()) == (0, "1")
    # without --files a name that parses is an inline one-node tree
    code, out, err = run(capsys, "compute", "--alg", "zs", "t1", "t2")
    assert (code, out.strip()) == (0, "1") and "--files" in err
    # a path that does not parse falls back to the file
    (tmp_path / "my tree").write_text("a(b,c)")
    code, out, _ = run(capsys, "compute", "--alg", "zs", "my tree", "a(b,c)")
    assert (code, out.strip()) == (0, "0")


def test_missing_file(capsys):
    code, _, err = run(capsys, "compute", "--files", "/nonexistent/x", "a")
    assert code == 1 and "/nonexistent/x" in err


def test_gen_outputs(capsys):
    code, out, _ = run(capsys, "gen", "--seed", "3", "--n", "12")
    assert code == 0 and len(out.splitlines()) == 1
    code, out2, _ = run(capsys, "gen", "--seed", "3", "--n", "12", "--edits", "2")
    lines = out2.splitlines()
    assert len(lines) == 2 and lines[0] == out.strip()
    code, out, _ = run(capsys, "gen", "--seed", "3", "--n", "12", "--edits", "2", "--json")
    doc = json.loads(out)
    assert doc["t1"] == lines[0] and doc["t2"] == lines[1] and doc["edits_applied"] <= 2
    code, _, err = run(capsys, "gen", "--n", "0")
    assert code == 1


def test_bench_single_row():
    report = run_bench([256], [4], 1, seed=7)
    jsonschema.validate(report, BENCH_SCHEMA)
    (row,) = report["rows"]
    b = row["bounded"]
    counters = ("states_expanded", "memo_hits", "pruned_size_rule", "pruned_lu_rule",
                "pruned_ru_rule")
    assert all(b[c] >= 0 for c in counters)
    # root event plus four children per memoized state
    assert sum(b[c] for c in counters) % 4 == 1
    assert row["agree"] is True and row["klein"]["distance"] == b["distance"]
    for key in ("states_ratio", "f1_ratio", "f2_ratio"):
        assert all(math.isfinite(v) for v in report["aggregate"][key].values())


def test_bench_rows_agree_and_guards():
    report = run_bench([1, 2, 40], [0, 1, 3], 2, seed=1)
    jsonschema.validate(report, BENCH_SCHEMA)
    assert len(report["rows"]) == 18
    assert all(row["agree"] for row in report["rows"])


def test_bench_klein_cap():
    report = run_bench([50], [2], 1, seed=1, klein_max_n=10)
    assert report["rows"][0]["klein"] is None and report["rows"][0]["agree"] is None


def strip_times(report):
    for row in report["rows"]:
        for part in ("bounded", "klein"):
            if row[part]:
                row[part]["wall_time_ns"] = 0
    return report


def test_bench_parallel_matches_serial():
    serial = run_bench([30, 60], [2, 4], 2, seed=5)
    parallel = run_bench([30, 60], [2, 4], 2, seed=5, jobs=2)
    assert strip_times(serial) == strip_times(parallel)


def test_console_script_exit_codes():
    cmd = [sys.executable, "-m", "treedist.cli", "compute", "--alg", "bounded", "--k", "0",
           "a(b)", "a"]
    proc = subprocess.run(cmd, capture_output=True, text=True, encoding="utf-8")
    assert proc.returncode == 2 and proc.stdout.strip() == "exceeds 0"
    proc = subprocess.run([sys.executable, "-m", "treedist.cli", "bench", "--sizes", "20",
                           "--ks", "2", "--seed", "3"], capture_output=True, text=True)
    assert proc.returncode == 0
    jsonschema.validate(json.loads(proc.stdout), BENCH_SCHEMA)
