import itertools
import math
from collections import deque

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hecke_forge import weyl
from hecke_forge.errors import GuardError, ValidationError
from hecke_forge.weyl import IntervalPartition as IP


def bfs_lengths(desc):
    """Word length in the Coxeter generators by breadth-first search."""
    gens = [g.window for g in weyl.generators(desc)]
    start = tuple(range(1, desc.n_s + 1))
    dist = {start: 0}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for g in gens:
            v = weyl._compose(w, g)
            if v not in dist:
                dist[v] = dist[w] + 1
                queue.append(v)
    return dist


GROUPS = [("so-odd", n) for n in (3, 5, 7, 9)] + [("so-even-split", n) for n in (4, 6, 8)] + \
         [("sp", n) for n in (2, 4, 6)] + [("so-even-quasi", n) for n in (4, 6)]


@pytest.mark.parametrize("kind,n", GROUPS)
def test_length_is_word_length(kind, n):
    desc = weyl.make_group(kind, n)
    dist = bfs_lengths(desc)
    elems = weyl.enumerate_group(desc)
    assert len(dist) == len(elems)
    for w in elems:
        assert weyl.length(w) == dist[w.window]


@pytest.mark.parametrize("ns", range(1, 6))
def test_orders(ns):
    assert weyl.group_order(ns, "B") == 2 ** ns * math.factorial(ns)
    assert weyl.group_order(ns, "D") == 2 ** (ns - 1) * math.factorial(ns)


def test_make_group_kinds():
    assert weyl.make_group("sp", 4).n_s == 2
    assert weyl.make_group("so-odd", 7).n_s == 3
    # the quasi-split torus drops one coordinate
    assert weyl.make_group("so-even-quasi", 6).n_s == 2
    assert weyl.make_group("so-even-quasi", 6).weyl_flavor == "D"
    assert weyl.make_group("so-even-split", 6).weyl_flavor == "D"
    with pytest.raises(ValidationError):
        weyl.make_group("sp", 3)
    with pytest.raises(ValidationError):
        weyl.make_group("gl", 3)


def test_enumeration_guard():
    with pytest.raises(GuardError):
        weyl.enumerate_group(weyl.make_group("so-odd", 19))


@pytest.mark.parametrize("kind,n", [("so-odd", 7), ("so-even-split", 8), ("sp", 6)])
def test_coset_counts(kind, n):
    desc = weyl.make_group(kind, n)
    total = len(weyl.enumerate_group(desc))
    for th in weyl.all_partitions(desc.n_s):
        reps = weyl.min_coset_reps(desc, th)
        par = weyl.parabolic_subgroup(desc, th)
        assert len(reps) * len(par) == total
        # Poincare polynomials factor: W(q) = W^Theta(q) W_Theta(q)
        for q in (2, 3):
            full = sum(q ** weyl.length(w) for w in weyl.enumerate_group(desc))
            sub = sum(q ** weyl.length(u) for u in par)
            assert weyl.poincare_sum(desc, th, q) * sub == full


def brute_double_cosets(desc, omega, theta):
    left = weyl.parabolic_subgroup(desc, omega)
    right = weyl.parabolic_subgroup(desc, theta)
    seen, count = set(), 0
    for w in weyl.enumerate_group(desc):
        if w.window in seen:
            continue
        count += 1
        for u in left:
            for v in right:
                seen.add(weyl._compose(weyl._compose(u.window, w.window), v.window))
    return count


@pytest.mark.parametrize("kind,n", [("so-odd", 7), ("so-even-split", 6), ("so-even-split", 8)])
def test_double_coset_reps_against_orbits(kind, n):
    desc = weyl.make_group(kind, n)
    for om in weyl.all_partitions(desc.n_s):
        for th in weyl.all_partitions(desc.n_s):
            reps = weyl.double_coset_reps(desc, om, th)
            assert len(reps) == brute_double_cosets(desc, om, th)
            assert len({r.window for r in reps}) == len(reps)


@pytest.mark.parametrize("flavor,kind", [("B", "so-odd"), ("D", "so-even-split")])
@pytest.mark.parametrize("ns", [1, 2, 3])
def test_coset_matrix_bijection_small(flavor, kind, ns):
    desc = weyl.make_group(kind, 2 * ns + 1 if flavor == "B" else 2 * ns)
    for om in weyl.all_partitions(ns):
        for th in weyl.all_partitions(ns):
            mats = {}
            for w in weyl.matrix_domain(desc, om, th):
                m = weyl.coset_matrix(desc, w, om, th)
                assert m not in mats
                mats[m] = w
                assert weyl.matrix_to_rep(desc, m, om, th) == w
                assert weyl.CosetMatrix.from_json(m.to_json()) == m
                assert not weyl.matrix_violations(desc, m, om, th)
            assert set(weyl.admissible_matrices(desc, om, th)) == set(mats)


def test_coset_matrix_separates_signed_pair():
    # the (b, a) pair alone cannot tell these two representatives apart
    desc = weyl.make_group("so-odd", 5)
    om = IP(((0, 0), (1, 2)))
    th = IP.singletons(2)
    m1 = weyl.coset_matrix(desc, weyl.SignedPermutation((-1, 2)), om, th)
    m2 = weyl.coset_matrix(desc, weyl.SignedPermutation((2, -1)), om, th)
    assert m1.literal_key() == m2.literal_key()
    assert m1 != m2


def test_partition_json_and_errors():
    p = IP.from_json([[0, 1], [2, 3]])
    assert p.to_json() == [[0, 1], [2, 3]]
    assert p.n_s == 3 and p.q == 2
    with pytest.raises(ValidationError) as exc:
        IP.from_json([[0, 1], [3, 3]], field="Omega")
    assert exc.value.field == "Omega"
    with pytest.raises(ValidationError):
        IP.from_json([[0, 1]], n_s=3)
    with pytest.raises(ValidationError):
        IP.from_json("garbage")


def test_signed_permutation_validation():
    with pytest.raises(ValidationError):
        weyl.SignedPermutation((1, 1))
    with pytest.raises(ValidationError):
        weyl.SignedPermutation((-1, 2), "D")


def signed_perms(ns):
    return st.permutations(list(range(1, ns + 1))).flatmap(
        lambda perm: st.lists(st.booleans(), min_size=ns, max_size=ns).map(
            lambda signs: tuple(-x if s else x for x, s in zip(perm, signs))))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6).flatmap(lambda ns: st.tuples(signed_perms(ns), signed_perms(ns))))
def test_length_axioms(pair):
    u, w = (weyl.SignedPermutation(x) for x in pair)
    assert weyl.length(w) == weyl.length(weyl.invert(w))
    uw = weyl.group_op(u, w)
    assert abs(weyl.length(u) - weyl.length(w)) <= weyl.length(uw) <= weyl.length(u) + weyl.length(w)
    assert weyl.group_op(w, weyl.invert(w)) == weyl.identity(w.n_s)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5).flatmap(
    lambda ns: st.tuples(signed_perms(ns), st.sets(st.integers(0, ns - 1)))))
def test_parabolic_factor_is_length_additive(data):
    window, theta_set = data
    ns = len(window)
    desc = weyl.make_group("so-odd", 2 * ns + 1)
    th = IP.from_theta(ns, sorted(theta_set))
    w = weyl.SignedPermutation(window)
    rep, par = weyl.parabolic_factor(desc, w, th)
    assert weyl.group_op(rep, par) == w
    assert weyl.length(rep) + weyl.length(par) == weyl.length(w)
