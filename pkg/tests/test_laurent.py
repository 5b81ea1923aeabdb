from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hecke_forge import laurent, weyl
from hecke_forge.errors import ValidationError
from hecke_forge.laurent import LaurentPoly

Q = sympy.Symbol("q", positive=True)


def to_sympy(p: LaurentPoly):
    zs = sympy.symbols(f"Z1:{p.nz + 1}")
    out = 0
    for e, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for z, k in zip(zs, e[:-1]):
            term *= z ** k
        out += term * Q ** sympy.Rational(e[-1], 2)
    return sympy.expand(out)


def polys(nz=2):
    mono = st.tuples(st.lists(st.integers(-3, 3), min_size=nz, max_size=nz),
                     st.integers(-4, 4), st.integers(-5, 5).filter(bool))
    return st.lists(mono, max_size=4).map(
        lambda ms: sum((LaurentPoly.monomial(nz, z, Fraction(h, 2), c) for z, h, c in ms),
                       LaurentPoly.const(nz, 0)))


@settings(max_examples=100, deadline=None)
@given(polys(), polys())
def test_ring_operations_match_sympy(a, b):
    assert to_sympy(a + b) == sympy.expand(to_sympy(a) + to_sympy(b))
    assert to_sympy(a - b) == sympy.expand(to_sympy(a) - to_sympy(b))
    assert to_sympy(a * b) == sympy.expand(to_sympy(a) * to_sympy(b))


@settings(max_examples=60, deadline=None)
@given(polys(), st.lists(st.integers(-3, 3), min_size=2, max_size=2), st.integers(-3, 3))
def test_division_by_monomial(a, z, h):
    m = LaurentPoly.monomial(2, z, h)
    assert (a / m) * m == a
    assert m.inverse() * m == LaurentPoly.const(2, 1)


@settings(max_examples=60, deadline=None)
@given(polys(), st.fractions(min_value=-5, max_value=5).filter(bool),
       st.fractions(min_value=-5, max_value=5).filter(bool),
       st.sampled_from([Fraction(1, 2), Fraction(2), Fraction(3)]))
def test_eval_matches_sympy(a, z1, z2, qh):
    val = a.eval([z1, z2], q=qh * qh, q_half=qh)
    ref = to_sympy(a).subs({sympy.Symbol("Z1"): sympy.Rational(z1.numerator, z1.denominator),
                            sympy.Symbol("Z2"): sympy.Rational(z2.numerator, z2.denominator),
                            Q: sympy.Rational(qh.numerator, qh.denominator) ** 2})
    assert sympy.simplify(ref - sympy.Rational(val.numerator, val.denominator)) == 0


def test_eval_needs_half_power():
    p = LaurentPoly.q(1, Fraction(1, 2))
    with pytest.raises(ValidationError):
        p.eval([1], q=4)
    assert p.eval([1], q=4, q_half=2) == 2


def test_non_monomial_inverse_rejected():
    p = LaurentPoly.z(1, 1) + 1
    with pytest.raises(ValidationError):
        p.inverse()


@pytest.mark.parametrize("kind,n", [("so-odd", 5), ("so-odd", 7), ("sp", 6), ("so-even-split", 6),
                                    ("so-even-split", 8), ("so-even-quasi", 8)])
def test_orbit_sum_by_brute_force(kind, n):
    desc = weyl.make_group(kind, n)
    ns = desc.n_s
    zs = [LaurentPoly.z(ns, i + 1) for i in range(ns)]
    for j in range(1, ns + 1):
        ej = laurent.elem_sym(j, zs)
        total = LaurentPoly.const(ns, 0)
        for w in weyl.enumerate_group(desc):
            total = total + ej.z_act(w.window)
        assert total == laurent.orbit_sum(desc, j)


@pytest.mark.parametrize("nz,j", [(1, 1), (2, 1), (2, 2), (3, 2), (4, 3)])
def test_signed_subset_sum_is_product_expansion(nz, j):
    # sum over j-subsets of prod (Z_i + Z_i^-1)
    zs = [LaurentPoly.z(nz, i + 1) for i in range(nz)]
    assert laurent.signed_subset_sum(nz, j) == laurent.elem_sym(j, [z + z.inverse() for z in zs])


coeffs = st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=6), max_size=5)


@settings(max_examples=150, deadline=None)
@given(coeffs)
def test_fold_unfold_roundtrip(lower):
    pt = tuple(lower) + (Fraction(1),)
    p = laurent.unfold(pt)
    assert laurent.is_palindromic(p)
    assert laurent.fold(p) == tuple(Fraction(c) for c in pt)


def test_unfold_degree_one_and_two():
    # X + 1/X = t  <->  X^2 - t X + 1
    assert laurent.unfold((Fraction(-3), 1)) == (1, -3, 1)
    # (X+1/X)^2 + b (X+1/X) + c  ->  X^4 + b X^3 + (c+2) X^2 + b X + 1
    assert laurent.unfold((Fraction(5), Fraction(2), 1)) == (1, 2, 7, 2, 1)
    with pytest.raises(ValidationError):
        laurent.fold((1, 2, 3))
