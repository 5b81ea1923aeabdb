import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hecke_forge import laurent, parahoric as P, upoly, weyl
from hecke_forge.errors import ValidationError
from hecke_forge.weyl import IntervalPartition as IP


def test_projector_factor_residual():
    f = upoly.from_roots([2, 3, 1, 1])
    res = P.projector_factor(f, 2, 1, 1, 5)
    assert res.targets == (2, 3)
    assert res.R == upoly.from_roots([2, 3], 5)
    assert res.Q == upoly.from_roots([1, 1], 5)
    assert res.r == 1 and res.coprime and not res.degenerate
    assert upoly.mul(res.R, res.Q, 5) == upoly.trim(f, 5)


def test_projector_factor_hensel_lift():
    roots = [7, 28, 6, 11, 52]            # residues 2, 3, 1, 1, 2 modulo 5
    res = P.projector_factor(upoly.from_roots(roots), 2, 1, 1, 5, 3)
    assert res.R == upoly.from_roots([7, 28, 52], 125)
    assert res.Q == upoly.from_roots([6, 11], 125)
    assert not res.coprime                  # the two targets have unequal multiplicity
    rr, qr = P.factor_roots(roots, 2, 1, 1, 5)
    assert sorted(rr) == [7, 28, 52] and sorted(qr) == [6, 11]


def test_projector_factor_degenerate_tie():
    # a^2 = a^-2 but a != a^-1: a = 2 modulo 5, k = 2
    res = P.projector_factor(upoly.from_roots([4, 4, 1]), 2, 2, 2, 5)
    assert res.degenerate


def test_frobenius_profile():
    assert P.frobenius_profile_check({2: 2, 3: 2, 4: 1}, 2, 5)["verdict"] == "type1"
    assert P.frobenius_profile_check({2: 2, 3: 2, 4: 1}, 2, 5)["alpha_bar"] == 2
    # Sp carries an extra fixed eigenvalue 1
    sp = P.frobenius_profile_check([1, 1, 1, 2, 3], 1, 5, is_sp=True)
    assert sp["verdict"] == "type2" and sp["alpha_bar"] == 1
    assert P.frobenius_profile_check([2, 3, 4], 2, 5)["verdict"] == "invalid"
    with pytest.raises(ValidationError):
        P.frobenius_profile_check([0, 1], 1, 5)


@pytest.mark.parametrize("kind,n", [("so-odd", 7), ("sp", 6), ("so-even-split", 8)])
def test_a_matrix_and_jacquet_set(kind, n):
    desc = weyl.make_group(kind, n)
    ns = desc.n_s
    for om in weyl.all_partitions(ns):
        for th in weyl.all_partitions(ns):
            reps = weyl.double_coset_reps(desc, om, th)
            assert P.invariant_dim(desc, om, th) == len(reps)
            for w in reps:
                a = P.a_matrix(w.window, om, th)
                assert [sum(r) for r in a] == [hi - lo + 1 for lo, hi in om.blocks]
                assert [sum(c) for c in zip(*a)] == [hi - lo + 1 for lo, hi in th.blocks]
            jac = {w.window for w in P.jacquet_w_set(desc, om, th)}
            assert jac <= {w.window for w in reps}
            if th == IP.singletons(ns):
                assert len(jac) == len(reps)


def test_invariant_dim_with_local_dims():
    desc = weyl.make_group("sp", 4)
    om, th = IP(((0, 0), (1, 2))), IP.singletons(2)
    reps = weyl.double_coset_reps(desc, om, th)
    assert P.invariant_dim(desc, om, th, lambda j, w: 2) == len(reps) * 4
    with pytest.raises(ValidationError):
        P.invariant_dim(desc, om, th, {})


def test_v_operator_jacquet_model():
    desc = weyl.make_group("sp", 4)
    om = IP(((0, 0), (1, 2)))
    psi = [Fraction(2), Fraction(3)]
    mod = P.build_ps_module(desc, IP.singletons(2), psi, 7)
    assert mod.dim == 8 and not mod.warnings
    diag = P.v_operator(mod, om, 2, 1)
    for w, v in diag.items():
        winv = weyl._inverse(w)
        vals = [psi[x - 1] if x > 0 else 1 / psi[-x - 1] for x in winv]
        assert v == sum(vals)
    with pytest.raises(ValidationError):
        P.v_operator(mod, om, 3, 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda i: st.tuples(
    st.just(i), st.integers(1, i),
    st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool),
             min_size=i, max_size=i))))
def test_iwahori_sum_model_matches_brute_force(data):
    # sum over k-subsets with all sign choices, divided by the S_k reordering
    i, k, vals = data
    brute = Fraction(0)
    for signs in itertools.product((1, -1), repeat=i):
        xs = [v if s > 0 else 1 / v for v, s in zip(vals, signs)]
        for perm in itertools.permutations(range(i)):
            brute += math.prod((xs[perm[t]] for t in range(k)), start=Fraction(1))
    brute /= math.factorial(k)
    # brute counts ordered k-tuples (each unordered subset k! (i-k)! times) over 2^i signs
    want = Fraction(math.factorial(i - k) * 2 ** (i - k)) * \
        laurent.elem_sym(k, [v + 1 / v for v in vals])
    assert brute == want
    assert P.w_k_j_size(i, k) == math.factorial(i) * 2 ** i // math.factorial(k)


def test_block_constancy_warnings():
    th = IP(((0, 0), (1, 2)))
    assert P.block_constancy_warnings(th, [2, 3])
    assert not P.block_constancy_warnings(th, [2, 2])
    assert P.block_constancy_warnings(IP(((0, 1), (2, 2))), [2, 5])


def test_datum_validation():
    desc = weyl.make_group("sp", 4)
    om = IP(((0, 0), (1, 2)))
    with pytest.raises(ValidationError):
        P.ParahoricDatum(desc, om, 2, 1, 5, 7)       # q not 1 mod p
    with pytest.raises(ValidationError):
        P.ParahoricDatum(desc, om, 2, 2, 5, 11)
    with pytest.raises(ValidationError):
        P.ParahoricDatum(desc, om, 2, 1, 2, 11)
    with pytest.raises(ValidationError):
        # the block containing 0 must be {0} unless j1 = 1
        P.ParahoricDatum(desc, IP(((0, 1), (2, 2))), 1, 2, 5, 11)


def test_projector_rank_one_model():
    # Sp_2, Omega = {0}|{1}: the image is two-dimensional, the invariants are one-dimensional
    desc = weyl.make_group("sp", 2)
    dat = P.ParahoricDatum(desc, IP(((0, 0), (1, 1))), 2, 1, 3, 7)
    rep = P.apply_projector(dat, [P.Component("unramified", (Fraction(2),))])
    assert rep.image_dim == 2
    assert rep.unramified_invariant_dim == 1
    assert not rep.checks["image_dim_equals_invariant_dim"]
    assert rep.checks["distinguished_nonzero"]


def test_projector_mixed_scenario():
    desc = weyl.make_group("sp", 6)
    om = IP(((0, 0), (1, 2), (3, 3)))
    dat = P.ParahoricDatum(desc, om, 2, 3, 5, 11)
    comps = [P.Component("unramified", (Fraction(2), Fraction(7), Fraction(4)), om),
             P.Component("steinberg", (Fraction(9), Fraction(22)))]
    rep = P.apply_projector(dat, comps).to_json()
    assert rep["alpha_bar"] == 2
    assert rep["checks"]["steinberg_annihilated"]
    assert rep["checks"]["distinguished_nonzero"]
    assert rep["checks"]["induced_map_injective"]
    assert not rep["checks"]["image_dim_equals_invariant_dim"]
    unr = rep["components"][0]
    assert set(map(tuple, unr["support"])) < set(map(tuple, unr["w_prime"]))


def test_projector_rejects_mismatched_spectra():
    desc = weyl.make_group("sp", 4)
    dat = P.ParahoricDatum(desc, IP(((0, 0), (1, 2))), 2, 1, 5, 11)
    comps = [P.Component("unramified", (Fraction(2), Fraction(2))),
             P.Component("steinberg", (Fraction(4),))]
    with pytest.raises(ValidationError):
        P.apply_projector(dat, comps)
    with pytest.raises(ValidationError):
        P.apply_projector(dat, [])
