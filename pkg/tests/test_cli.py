import json
import os
import subprocess
import sys

import pytest

from frstab.cli import EXIT_BOUND, EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from frstab.fr import tabulate_on_fe
from frstab.functors import AdditiveFunctor, ConstantFunctor
from frstab.homology.abelian import Presented
from frstab.homology.matrix import IntMatrix


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("argv", [
    ["trees", "--n", "3"],
    ["fr-h1", "--groups", "Z2,S3,Z3"],
    ["degree", "--group", "Z3"],
    ["relations", "--groups", "S3,Z2,Z3"],
    ["stabilizers", "--groups", "Z3,Z2"],
    ["stabilizers", "--groups", "S3,Z2"],
    ["dec-pira", "--n", "2", "--trials", "3"],
    ["stability", "--groups", "Z2", "--max-n", "4"],
])
def test_commands_pass(argv, capsys):
    code, out, _ = run(argv, capsys)
    assert code == EXIT_OK
    assert out.rstrip().endswith("verdict: pass")


@pytest.mark.parametrize("argv", [
    [],
    ["nope"],
    ["trees"],
    ["trees", "--n", "0"],
    ["fr-h1", "--groups", "Q9"],
    ["fr-h1", "--groups", "missing_table.txt"],
    ["fr-h1"],
    ["degree", "--groups", "Z2,Z3"],
    ["stability", "--groups", "Z2,Z2,Z3", "--subfamily", "1,9"],
    ["trees", "--n", "3", "--format", "yaml"],
])
def test_usage_errors(argv, capsys):
    assert run(argv, capsys)[0] == EXIT_USAGE


@pytest.mark.parametrize("argv", [
    ["trees", "--n", "9"],
    ["fr-h1", "--groups", "Z2,Z2,Z2,Z2,Z2"],
    ["stability", "--groups", "Z2", "--max-n", "8"],
    ["stability", "--groups", "Z8", "--max-n", "2"],
])
def test_resource_bounds(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == EXIT_BOUND
    assert "resource bound" in err


def test_failing_check_exits_one(tmp_path, capsys):
    labels = (1, 2)
    T = tabulate_on_fe(AdditiveFunctor({e: Presented(1) for e in labels}), labels)
    f = next(f for f in T.morphisms() if f.source == f.target and f.is_everywhere_defined() and T.value(f.source).ngens)
    # the identity sent to zero: still a homomorphism, no longer a functor
    n = T.value(f.source).ngens
    T.actions[f.key()] = (f, IntMatrix([[0] * n for _ in range(n)], n))
    path = tmp_path / "broken.json"
    path.write_text(T.to_json())
    code, out, _ = run(["dec-pira", "--n", "2", "--functor", str(path), "--format", "json"], capsys)
    assert code == EXIT_FAIL
    rep = json.loads(out)["reports"][0]
    assert rep["verdict"] == "fail" and rep["witnesses"]


def test_functor_replay(tmp_path, capsys):
    labels = (1, 2, 3)
    path = tmp_path / "const.json"
    path.write_text(tabulate_on_fe(ConstantFunctor(), labels).to_json())
    code, out, _ = run(["dec-pira", "--n", "3", "--functor", str(path), "--format", "json"], capsys)
    assert code == EXIT_OK
    rep = json.loads(out)["reports"][1]
    assert rep["lhs"][0]["str"] == rep["rhs"]["str"] == "Z"


def test_unreadable_functor_is_usage_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{")
    assert run(["dec-pira", "--n", "2", "--functor", str(path)], capsys)[0] == EXIT_USAGE


def test_group_table_file(tmp_path, capsys):
    path = tmp_path / "c3.txt"
    path.write_text("order 3\n0 1 2\n1 2 0\n2 0 1\n")
    code, out, _ = run(["fr-h1", "--groups", f"{path},Z2", "--format", "json"], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["reports"][0]["lhs"]["str"] == "Z/6"


def test_json_report_shape(capsys):
    code, out, _ = run(["fr-h1", "--groups", "Z2,Z2", "--format", "json"], capsys)
    obj = json.loads(out)
    assert obj["verdict"] == "pass" and obj["command"] == "fr-h1"
    for r in obj["reports"]:
        assert set(r) == {"statement", "instance", "lhs", "rhs", "verdict", "witnesses"}
    assert obj["config"]["backend"] in ("cython", "python")


def test_reruns_are_byte_identical(tmp_path, capsys):
    outs = []
    for k in range(2):
        p = tmp_path / f"r{k}.json"
        assert run(["dec-pira", "--n", "2", "--trials", "4", "--seed", "7", "--format", "json", "--out", str(p)], capsys)[0] == EXIT_OK
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_jobs_do_not_change_output(capsys):
    base = run(["stabilizers", "--groups", "Z2,Z3,Z2", "--format", "json"], capsys)[1]
    par = run(["stabilizers", "--groups", "Z2,Z3,Z2", "--format", "json", "--jobs", "2"], capsys)[1]
    strip = lambda s: {k: v for k, v in json.loads(s).items() if k != "config"}
    assert strip(base) == strip(par)


def test_stability_writes_csv_table(tmp_path, capsys):
    p = tmp_path / "stab.json"
    code, _, _ = run(["stability", "--groups", "Z3", "--max-n", "3", "--format", "json", "--out", str(p)], capsys)
    assert code == EXIT_OK
    lines = p.with_suffix(".csv").read_text().splitlines()
    assert lines[0].startswith("group,n,H1,map_to,flag,iso")
    assert lines[1].startswith("Z3,1,Z/2,2,mono")
    assert len(lines) == 4


def test_csv_format_for_reports(capsys):
    code, out, _ = run(["relations", "--groups", "Z2,Z2", "--format", "csv"], capsys)
    assert code == EXIT_OK
    assert out.splitlines()[0] == "statement,instance,lhs,rhs,verdict"


def test_subfamily_report(capsys):
    code, out, _ = run(["stability", "--groups", "Z2,Z2,Z2,Z2,Z2,Z3", "--subfamily", "1,2,3,4,6", "--format", "json"], capsys)
    assert code == EXIT_OK
    rep = json.loads(out)["reports"][0]
    assert rep["lhs"] == rep["rhs"] == "(Z/2)^4"


def test_module_entry_point_and_memory_limit():
    env = dict(os.environ, FRSTAB_MAX_MEMORY_MB="2048")
    p = subprocess.run([sys.executable, "-m", "frstab", "trees", "--n", "2"], capture_output=True, text=True, env=env)
    assert p.returncode == EXIT_OK
    env["FRSTAB_MAX_MEMORY_MB"] = "lots"
    p = subprocess.run([sys.executable, "-m", "frstab", "trees", "--n", "2"], capture_output=True, text=True, env=env)
    assert p.returncode == EXIT_USAGE


def test_exit_fail_constant():
    assert (EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BOUND) == (0, 1, 2, 3)
