"""The twelve acceptance criteria at full size, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline;
they are printed even without ``-s``.
"""
import random

import pytest

from hecke_forge import acceptance, satake

LEVEL = "full"


@pytest.mark.parametrize("number", [c[0] for c in acceptance.CRITERIA],
                         ids=[f"c{c[0]:02d}-{c[1].lower().replace(' ', '-')}"
                              for c in acceptance.CRITERIA])
def test_criterion(number, capsys):
    res = acceptance.run_criterion(number, LEVEL)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.detail
    assert res.within_budget, f"{res.seconds:.1f}s over the {res.budget}s budget"


def test_wrong_normalisation_is_caught(monkeypatch):
    # negative control: shifting the q-power must break the coherence criteria
    orig = satake._qpow
    monkeypatch.setattr(satake, "_qpow", lambda q, k: orig(q, k + 1))
    assert not acceptance.c3_satake_coherence("fast", random.Random(0))[0]
    assert not acceptance.c4_oracle_formula("fast", random.Random(0))[0]


def test_ledger_with_literal_sign_is_caught(monkeypatch):
    from hecke_forge import defledger
    orig = defledger.local_euler_sum
    monkeypatch.setattr(defledger, "local_euler_sum", lambda inp, literal=False: orig(inp, True))
    assert not acceptance.run_criterion(10, "fast").passed
