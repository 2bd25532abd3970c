import csv
import subprocess
import sys
from collections import defaultdict

import pytest

from slimsell import bench, cli


def read(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def run(tmp_path, *args):
    out = tmp_path / "out"
    rc = cli.main(["run", *args, "--out", str(out)])
    return rc, out


def test_run_path_example(tmp_path):
    rc, out = run(tmp_path, "--graph", "path:n=4", "-C", "2", "--sigma", "1")
    assert rc == 0
    it = read(out / "iterations.csv")
    assert len(it) == 4
    assert [int(r["iteration"]) for r in it] == [1, 2, 3, 4]
    summary = read(out / "summary.csv")
    assert len(summary) == 1 and summary[0]["verified"] == "1"


def test_schema_and_round_trip(tmp_path):
    rc, out = run(tmp_path, "--graph", "er:n=60,d=4,seed=2", "-C", "4", "--sigma", "1,n",
                  "--semiring", "tropical,selmax", "--root", "random:2", "--slimwork", "on",
                  "--slimchunk", "2", "--repeat", "2")
    assert rc == 0
    it, summary = read(out / "iterations.csv"), read(out / "summary.csv")
    assert list(it[0]) == bench.ITERATION_COLUMNS
    assert list(summary[0]) == bench.SUMMARY_COLUMNS
    text_cols = {"graph_id", "layout", "semiring", "schedule", "sigma"}
    for row in it + summary:
        for k, v in row.items():
            if k in text_cols or v == "":
                continue
            val = float(v)
            assert str(int(val)) == v or repr(float(v)) == v or f"{val:.1f}" == v
    # totals are sums of the per-iteration times of the same group
    per_group = defaultdict(int)
    for r in it:
        key = (r["C"], r["sigma"], r["semiring"], r["root"])
        per_group[key] += int(r["elapsed_ns"])
    for s in summary:
        assert int(s["total_elapsed_ns"]) == per_group[(s["C"], s["sigma"], s["semiring"], s["root"])]
        assert int(s["repeats"]) == 2
    assert len(summary) == 2 * 2 * 2


def test_sigma_sweep_groups(tmp_path):
    rc, out = run(tmp_path, "--graph", "kron:scale=5,ef=4", "-C", "2", "--sigma", "1,2,4")
    assert rc == 0
    assert len(read(out / "summary.csv")) == 3


def test_sell_layout_run(tmp_path):
    rc, out = run(tmp_path, "--graph", "kron:scale=5,ef=4", "--layout", "slimsell,sell",
                  "--semiring", "boolean,real")
    assert rc == 0
    assert {r["layout"] for r in read(out / "summary.csv")} == {"slimsell", "sell"}


@pytest.mark.parametrize("fault", ["layout", "pad"])
def test_corruption_exits_2(tmp_path, fault, capsys):
    rc, out = run(tmp_path, "--graph", "kron:scale=6,ef=4,seed=1", "--layout", "sell", "-C", "4",
                  "--root", "random:2", "--inject-fault", fault)
    assert rc == 2
    assert "verification failed" in capsys.readouterr().err


def test_verify_off_skips_oracle(tmp_path):
    rc, out = run(tmp_path, "--graph", "kron:scale=6,ef=4,seed=1", "--layout", "sell", "--verify", "off",
                  "--inject-fault", "pad", "-C", "4", "--semiring", "selmax")
    assert rc == 0
    assert read(out / "summary.csv")[0]["verified"] == ""


@pytest.mark.parametrize("args", [
    ["--graph", "/nonexistent/file.txt"],
    ["--graph", "path:n=4", "--semiring", "maxplus"],
    ["--graph", "path:n=4", "--repeat", "0"],
    ["--graph", "path:n=4", "--root", "9"],
    ["--graph", "path:n=4", "-C", "0"],
])
def test_config_errors_exit_1(tmp_path, args, capsys):
    rc, _ = run(tmp_path, *args)
    assert rc == 1
    assert "error" in capsys.readouterr().err


def test_bad_input_file_exit_1(tmp_path):
    bad = tmp_path / "g.txt"
    bad.write_text("0 1\nnot an edge\n")
    assert cli.main(["storage", "--graph", str(bad)]) == 1


def test_storage_path(tmp_path, capsys):
    rc = cli.main(["storage", "--graph", "path:n=4", "-C", "2", "--sigma", "1,n", "--out", str(tmp_path)])
    assert rc == 0
    rows = read(tmp_path / "storage.csv")
    assert [int(r["slimsell_cells"]) for r in rows] == [12, 10]
    assert len({r["al_cells"] for r in rows}) == 1
    assert list(rows[0]) == bench.STORAGE_COLUMNS
    assert "slimsell_cells" in capsys.readouterr().out


def test_storage_kronecker_ratio(tmp_path):
    rows = bench.storage("kron:scale=14,ef=16,seed=1", [8], ["n"], stream=open("/dev/null", "w"))
    assert float(rows[0]["ratio_slimsell_sellcs"]) <= 0.55


def test_dump(tmp_path, capsys):
    assert cli.main(["dump", "--graph", "path:n=4", "-C", "2"]) == 0
    out = capsys.readouterr().out
    assert out.count("chunk ") == 2 and "val" not in out
    assert cli.main(["dump", "--graph", "path:n=4", "-C", "2", "--layout", "sell"]) == 0
    assert "val" in capsys.readouterr().out
    empty = tmp_path / "e.txt"
    empty.write_text("H 4\n")
    assert cli.main(["dump", "--graph", str(empty), "-C", "2"]) == 0
    assert "cl: 0 0" in capsys.readouterr().out


def test_selftest_fault_exits_2(capsys):
    assert cli.main(["selftest", "--inject-fault", "pad"]) == 2
    assert "FAIL oracle-equivalence" in capsys.readouterr().out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "slimsell", "selftest"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert proc.stdout.count("ok ") == 4
