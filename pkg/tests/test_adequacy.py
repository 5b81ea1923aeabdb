import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hecke_forge import adequacy as A, config, galsplit as G
from hecke_forge.acceptance import monomial_generators
from hecke_forge.errors import GuardError, ValidationError

SL2_GENS = {5: [[[1, 1], [0, 1]], [[0, 4], [1, 0]]], 11: [[[1, 1], [0, 1]], [[0, 10], [1, 0]]]}


@pytest.mark.parametrize("p,order,h1", [(5, 120, 1), (11, 1320, 0)])
def test_sl2_adjoint_cohomology(p, order, h1):
    grp = A.close_group(SL2_GENS[p], p)
    assert len(grp) == order
    mod = A.adjoint_module(grp, G.standard_form("A'", 1))
    assert mod.dim == 3
    assert A.h0_module(grp, mod) == 0
    assert A.h1_finite(grp, mod) == h1


def test_cyclic_p_group_trivial_coefficients():
    grp = A.close_group([[[1, 1], [0, 1]]], 5)
    assert len(grp) == 5
    assert A.hom_to_kappa(grp) == 1
    assert A.h1_finite(grp, A.trivial_module(grp)) == 1
    assert A.cyclic_h1(grp, A.trivial_module(grp)) == 1


def test_cyclic_group_of_order_prime_to_p():
    grp = A.close_group([[[2, 0], [0, 4]]], 7)   # order 3
    assert A.hom_to_kappa(grp) == 0
    assert A.cyclic_h1(grp, A.adjoint_module(grp)) == 0


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 3), (2, 5), (3, 3), (2, 7), (3, 5)]), st.integers(0, 10 ** 6))
def test_cyclic_formula_agrees(np_, seed):
    n, p = np_
    rng = random.Random(seed)
    while True:
        g = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
        if round(np.linalg.det(np.array(g))) % p:
            break
    grp = A.close_group([g], p)
    for mod in (A.adjoint_module(grp), A.trivial_module(grp, 2)):
        assert A.h1_finite(grp, mod) == A.cyclic_h1(grp, mod)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.sampled_from([5, 7, 11]), st.integers(0, 10 ** 6), st.booleans())
def test_coprime_order_vanishing_and_reynolds(n, p, seed, alt):
    rng = random.Random(seed)
    alt = alt and n % 2 == 0
    form = G.standard_form("A'", n // 2) if alt else G.standard_form("A", n)
    grp = A.close_group(monomial_generators(n, alt, p, rng, 2), p)
    if len(grp) % p == 0:
        return
    mod = A.adjoint_module(grp, form)
    assert A.h1_finite(grp, mod) == 0
    # invariants are the image of the averaging operator when p does not divide |H|
    assert A.h0_module(grp, mod) == A.reynolds_rank(grp, mod)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 3), st.sampled_from([5, 7]), st.integers(0, 10 ** 6))
def test_condition4_kernel_matches_cyclic_search(n, p, seed):
    rng = random.Random(seed)
    grp = A.close_group(monomial_generators(n, False, p, rng, 2), p)
    mod = A.adjoint_module(grp, G.standard_form("A", n))
    res = A.condition4(grp, mod)
    assert res["cyclic"] is not None
    assert res["holds_all"] == res["cyclic"]["holds"]


def test_trace_pairing_with_identity():
    grp = A.close_group([[[2, 0], [0, 4]]], 7)
    res = A.trace_pairing_check(grp, [np.eye(2, dtype=np.int64)])
    assert res["holds"] and res["witness"]["trace"] in (1, 2)
    with pytest.raises(ValidationError):
        A.trace_pairing_check(grp, [np.zeros((2, 2), dtype=np.int64)])


def test_eigen_projectors_sum_to_identity():
    g = np.array([[2, 1], [0, 4]])
    pis = A.eigen_projectors(g, 7)
    assert set(pis) == {2, 4}
    assert np.array_equal(sum(pis.values()) % 7, np.eye(2, dtype=np.int64))


def test_condition4_needs_split_charpolys():
    grp = A.close_group(SL2_GENS[5], 5)
    rep = A.adequacy_report(grp, G.standard_form("A'", 1))
    assert rep["condition4"]["holds_all"] is None and "error" in rep["condition4"]
    assert not rep["big"]
    assert A.group_hypotheses(grp) == {"absolutely_irreducible": True, "eigenvalues_split": False}


@pytest.mark.parametrize("n", range(1, 9))
def test_sufficient_conditions_boundary(n):
    t = 2 * (n + 1)
    assert A.sufficient_conditions(t, n, True, True)["verdict"] == "adequate-by-lemma"
    assert A.sufficient_conditions(t - 1, n, True, True)["verdict"] == "inconclusive"
    assert A.sufficient_conditions(t + 5, n, False, True)["verdict"] == "inconclusive"
    assert A.sufficient_conditions(t + 5, n, True, False)["verdict"] == "inconclusive"


def test_close_group_validation():
    with pytest.raises(ValidationError):
        A.close_group([[[1, 0], [0, 1]]], 6)
    with pytest.raises(ValidationError):
        A.close_group([[[1, 1], [1, 1]]], 5)
    with pytest.raises(ValidationError):
        A.close_group([], 5)
    with pytest.raises(GuardError):
        A.close_group(SL2_GENS[11], 11, guard=100)
    config.reset_guards()
