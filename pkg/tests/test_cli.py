from __future__ import annotations

import json
import subprocess
import sys

import pytest

from approxcat.cli import main
from approxcat.graphs import ColoredGraph, path
from approxcat.io import write_graph


@pytest.fixture
def graphs(tmp_path):
    p4 = path(4)
    files = {
        "p4": p4,
        "p4b": p4.relabel([2, 0, 3, 1]),
        "k3k1": ColoredGraph(4, [(0, 1), (1, 2), (0, 2)]),
    }
    out = {}
    for name, g in files.items():
        out[name] = str(tmp_path / f"{name}.json")
        write_graph(g, out[name])
    out["dir"] = tmp_path
    return out


def test_ac_nonisomorphic(graphs, capsys):
    assert main(["ac", graphs["p4"], graphs["k3k1"], "--primes", "5"]) == 0
    assert "verdict: nonisomorphic" in capsys.readouterr().out


def test_ac_isomorphic_with_witness_and_json(graphs, capsys):
    js = graphs["dir"] / "r.json"
    assert main(["ac", graphs["p4"], graphs["p4b"], "--primes", "5,7", "--emit-json", str(js)]) == 0
    rep = json.loads(js.read_text())
    assert rep["verdict"] == "isomorphic-with-witness"
    assert rep["parameters"]["primes"] == [5, 7]


def test_ac_is_deterministic(graphs):
    reports = []
    for i in range(2):
        js = graphs["dir"] / f"r{i}.json"
        main(["ac", graphs["p4"], graphs["p4b"], "--seed", "3", "--emit-json", str(js)])
        rep = json.loads(js.read_text())
        rep.pop("elapsed_s")
        reports.append(rep)
    assert reports[0] == reports[1]


def test_exit_codes(graphs, tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 2\n0 1\n")
    assert main(["ac", graphs["p4"], str(bad)]) == 2
    assert "bad.txt:3:1" in capsys.readouterr().err
    assert main(["ac", graphs["p4"], str(tmp_path / "missing.json")]) == 2
    assert main(["ac", graphs["p4"], graphs["p4b"], "--primes", "4"]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["ac"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1


def test_wl_and_oracle(graphs, capsys):
    assert main(["wl", graphs["p4"], graphs["k3k1"]]) == 0
    assert "verdict: nonisomorphic" in capsys.readouterr().out
    assert main(["oracle", graphs["p4"], graphs["p4b"]]) == 0
    assert "witness" in capsys.readouterr().out


def test_cfi_gen_and_wl_blind_spot(tmp_path, capsys):
    prefix = str(tmp_path / "k33")
    assert main(["cfi-gen", "K33", "--out", prefix]) == 0
    a = json.loads((tmp_path / "k33_untwisted.json").read_text())
    b = json.loads((tmp_path / "k33_twisted.json").read_text())
    assert a["n"] == b["n"] == 60
    capsys.readouterr()
    assert main(["wl", prefix + "_untwisted.json", prefix + "_twisted.json", "-k", "1"]) == 0
    assert "verdict: inconclusive" in capsys.readouterr().out


def test_cfi_pair_through_ac(tmp_path, capsys):
    prefix = str(tmp_path / "k4")
    main(["cfi-gen", "K4", "--out", prefix])
    capsys.readouterr()
    assert main(["ac", prefix + "_untwisted.json", prefix + "_twisted.json", "-d", "3",
                 "--primes", "2"]) == 0
    assert "verdict: nonisomorphic" in capsys.readouterr().out


def test_demo_gm(capsys):
    assert main(["demo-gm", "-p", "7", "-d", "5"]) == 0
    out = capsys.readouterr().out
    assert "dim Hom_d = 0" in out and "dim Hom_d = 2" in out


def test_functor_and_formula(graphs, capsys):
    assert main(["functor", "dual(tensor(lin:p1, lin:p1))", graphs["p4"], graphs["k3k1"]]) in (0, 1)
    capsys.readouterr()
    assert main(["functor", "comp(lin:eval, tensor(lin:q, full:U))", graphs["p4"], "--trace"]) == 0
    assert "dim" in capsys.readouterr().out
    assert main(["functor", "tensor(lin:q, lin:q)", graphs["p4"]]) == 1
    assert main(["formula", "(exists x2 (E x1 x2))", graphs["p4"], graphs["k3k1"]]) == 0
    assert main(["formula", "(exists x2", graphs["p4"]]) == 1


def test_console_entry_point(graphs):
    r = subprocess.run([sys.executable, "-m", "approxcat.cli", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and "0.1.0" in r.stdout
