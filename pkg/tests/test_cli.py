import json
import subprocess
import sys

import pytest

from hecke_forge import cli

SP6_PROJECTOR = {
    "group": {"kind": "sp", "n": 6}, "Omega": [[0, 0], [1, 2], [3, 3]],
    "j0": 2, "j1": 3, "p": 5, "q": 11,
    "components": [{"kind": "unramified", "params": ["2", "7", "4"]},
                   {"kind": "steinberg", "params": ["9", "22"]}]}

LEDGER = {"group": {"kind": "so-odd", "n": 3}, "degree": 2,
          "places": [{"kind": "above_p", "h0": 1, "l": 4, "f": 2},
                     {"kind": "infinite", "h0": 3}, {"kind": "infinite", "h0": 1}],
          "h0_global": 0, "h0_twist": 1, "h1_sperp_twist": 2}


def run(*argv):
    return cli.dispatch(list(argv))


def ok(*argv):
    code, out, err = run(*argv)
    assert code == 0, err
    return json.loads(out)


def test_weyl_order_example():
    out = ok("weyl", "order", "--kind", "sp", "--n", "4")
    assert out["order"] == out["formula"] == 8


def test_satake_eigenvalue_example():
    assert ok("satake", "eig", "--kind", "so-odd", "--n", "3", "--q", "3", "--chi", "3") == \
        {"value": "6"}


def test_weyl_element_with_negative_window():
    out = ok("weyl", "element", "--kind", "sp", "--n", "4", "--w=-1,2")
    assert out["length"] == 1 and out["inverse"] == [-1, 2]


def test_divisibility_witness():
    out = ok("satake", "divisibility", "--kind", "sp", "--n", "6", "--n0", "2",
             "--chi", "2,3,7", "--q", "5")
    assert out["witness"] == {"s": [1, 2], "diagonal": "6/25"}
    assert out["factorwise_divides"] and not out["literal_divides"]


def test_projector_payload():
    out = ok("projector", "run", "--json", json.dumps(SP6_PROJECTOR))
    assert out["checks"]["steinberg_annihilated"] and out["alpha_bar"] == 2


def test_ledger_payload_and_sign():
    out = ok("ledger", "report", "--json", json.dumps(LEDGER))
    assert out["euler_chi_S"] == out["euler_chi_S_closed"] == out["alternating_sum"]
    assert out["euler_chi_S_literal"] != out["euler_chi_S"]


def test_congruence_flags():
    out = ok("congruence", "tate", "--p", "3", "--f", "0,-27,1", "--a", "0")
    assert (out["c0"], out["c1"], out["equal"]) == (3, 3, True)


def test_oracle_and_split_and_adequacy():
    assert ok("oracle", "order", "--kind", "sp", "--n", "2", "--q", "3") == \
        {"order": 24, "formula": 24}
    assert ok("oracle", "jset", "--kind", "sp", "--n", "6", "--I", "1", "--q", "3")["enumerated"] == 27
    out = ok("split", "random", "--p", "11", "--e", "2", "--N", "4", "--b-pairs", "1")
    assert out["result"]["dims"] == [2, 2]
    out = ok("adequacy", "conditions", "--p", "11", "--N", "2")
    assert out["verdict"] == "adequate-by-lemma"


def test_validation_exit_code():
    code, out, err = run("weyl", "element", "--kind", "sp", "--n", "4", "--w=1,2", "--theta", "x")
    assert code == 2 and err.startswith("invalid input: --theta")
    code, _, err = run("ledger", "report")
    assert code == 2 and "payload" in err
    code, _, err = run("projector", "run", "--json", json.dumps({**SP6_PROJECTOR, "extra": 1}))
    assert code == 2 and "extra" in err
    code, _, err = run("ledger", "report", "--json", "{not json")
    assert code == 2


def test_guard_exit_code(monkeypatch):
    code, _, err = run("oracle", "order", "--kind", "sp", "--n", "6", "--q", "3")
    assert code == 3 and err.startswith("guard violation")
    monkeypatch.setenv("HECKE_FORGE_GUARDS", json.dumps({"oracle_max_n": 6}))
    code, _, _ = run("weyl", "order", "--kind", "sp", "--n", "4")
    assert code == 3                       # override needs acknowledgement
    assert run("weyl", "order", "--kind", "sp", "--n", "4", "--guard-override")[0] == 0


def test_precondition_exit_code():
    payload = {"p": 7, "form": {"kind": "A'", "m": 1},
               "rho": [[[[1, 1], [0, 1]], [[1, 0], [0, -1]]]]}
    code, out, err = run("split", "descend", "--json", json.dumps(payload))
    assert code == 2
    assert "witness" in json.loads(out) and err.startswith("precondition failed")


def test_output_is_deterministic():
    argv = ["split", "random", "--p", "13", "--e", "2", "--N", "5", "--b-pairs", "2",
            "--seed", "9"]
    assert run(*argv) == run(*argv)
    argv = ["weyl", "cosets", "--kind", "so-odd", "--n", "7"]
    assert run(*argv) == run(*argv)


def test_every_public_function_is_reachable():
    audit = cli.coverage_audit()
    assert audit["unreached"] == {}
    assert audit["reached"] > 50


def test_selftest_report(tmp_path):
    code, out, _ = run("selftest", "--only", "1,6,7,10", "--report", str(tmp_path))
    results = {r["number"]: r["passed"] for r in json.loads(out)["criteria"]}
    assert results[1] and results[10]
    assert code == (0 if all(results.values()) else 1)
    names = {p.name for p in tmp_path.iterdir()}
    assert {"runtimes.png", "projector_checks.png", "divisibility.png", "report.txt"} <= names
    text = (tmp_path / "report.txt").read_text()
    assert "criterion  1 [PASS]" in text
    assert f"{sum(results.values())}/4 criteria passed" in text


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hecke_forge.cli", "weyl", "order",
                           "--kind", "so-odd", "--n", "5"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["order"] == 8
