import csv
import io
import json
import subprocess
import sys

import pytest

from divsearch.cli import BOUNDS_HEADER, ExperimentManifest, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_layers_n15(capsys):
    code, out, _ = run(capsys, "layers", "--n", "15", "--format", "json")
    assert code == 0
    assert json.loads(out)[0] == {"base": 1, "rows": [[1, 2, 4, 8], [3, 6, 12], [9]]}


def test_layers_text(capsys):
    code, out, _ = run(capsys, "layers", "--n", "15")
    assert code == 0 and "L_1" in out and " 9" in out


def test_layers_n1(capsys):
    _, out, _ = run(capsys, "layers", "--n", "1", "--format", "json")
    assert json.loads(out) == [{"base": 1, "rows": [[1]]}]


def test_layers_base_filter(capsys):
    # the fifth row is just 81, since 162 > 144
    _, out, _ = run(capsys, "layers", "--n", "144", "--base", "1", "--format", "json")
    assert [len(r) for r in json.loads(out)[0]["rows"]] == [8, 6, 5, 3, 1]


def test_layers_invalid(capsys):
    with pytest.raises(SystemExit):
        main(["layers", "--n", "0"])
    code, _, err = run(capsys, "layers", "--n", "10", "--base", "3")
    assert code == 2 and "base" in err


def test_bounds_csv(capsys):
    code, out, _ = run(capsys, "bounds", "--n-list", "4,15,1000")
    assert code == 0
    assert out.splitlines()[0] == ",".join(BOUNDS_HEADER)
    rows = {int(r["n"]): r for r in csv.DictReader(io.StringIO(out))}
    assert rows[4]["f_rs1"] == "3"
    assert rows[15]["s2"] == "12"
    assert rows[1000]["r_s2"] == "0.764000"


def test_bounds_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    manifest = ExperimentManifest(n_list=[100, 2000, 10])
    path = tmp_path / "m.json"
    path.write_text(manifest.dump())
    assert main(["bounds", "--manifest", str(path), "--out", str(a)]) == 0
    assert main(["bounds", "--manifest", str(path), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert [line.split(",")[0] for line in a.read_text().splitlines()[1:]] == ["10", "100", "2000"]


def test_manifest_round_trip(tmp_path):
    m = ExperimentManifest(n_list=[5], seeds=[1, 2])
    path = tmp_path / "m.json"
    path.write_text(m.dump())
    assert ExperimentManifest.load(path) == m


def test_verify_structural(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "structural", "--n-max", "5000")
    assert code == 0 and json.loads(out)["passed"]


def test_verify_all_small(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "all", "--n-max", "150")
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert set(report["suites"]) == {"structural", "essential", "quotient", "witness"}


def test_duel_examples(capsys, tmp_path):
    code, out, _ = run(capsys, "duel", "--n", "100", "--regime", "rs1", "--algo", "table")
    assert code == 0 and json.loads(out)["comparisons"] >= 75
    trace = tmp_path / "t.jsonl"
    code, out, _ = run(capsys, "duel", "--n", "1", "--regime", "rs2", "--algo", "chains",
                       "--trace", str(trace))
    assert json.loads(out)["comparisons"] == 1
    assert json.loads(trace.read_text()) == {"q": 1, "a": "LT"}


def test_exact(capsys, tmp_path):
    code, out, _ = run(capsys, "exact", "--n-max", "8", "--emit-trees", str(tmp_path))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0] == {"n": "1", "tau": "1", "lower": "1", "upper": "1"}
    assert all(int(r["lower"]) <= int(r["tau"]) <= int(r["upper"]) for r in rows)
    assert json.loads((tmp_path / "tree_1.json").read_text())["q"] == 1


def test_exact_over_cap(capsys):
    code, _, err = run(capsys, "exact", "--n-max", "13")
    assert code == 2 and "cap" in err


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--n-list", "50", "--seed", "3")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert {r["algo"] for r in rows} == {"chains", "table"}
    assert all(int(r["max_cmp"]) <= int(r["budget"]) for r in rows)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "divsearch", "bounds", "--n-list", "15"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[1] == "15,13,12,12,12,12,0.800000,0.800000"
