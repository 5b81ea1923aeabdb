import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hecke_forge import congruence as C, upoly
from hecke_forge.errors import GuardError, ValidationError


def vp(x: int, p: int) -> int:
    if x == 0:
        return 10 ** 9
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


@pytest.mark.parametrize("p,f,a,want", [
    (3, (0, 1), 0, 0),                     # O itself
    (3, (0, -27, 1), 0, 3),                # x^2 - p^3 x
    (5, upoly.from_roots([1, 26]), 1, 2),  # roots congruent modulo p^2
    (2, upoly.from_roots([0, 8, 1]), 0, 3),
])
def test_fixed_examples(p, f, a, want):
    rep = C.tate_check(C.MonogenicAlgebra.make(p, f), a)
    assert rep["c0"] == rep["c1"] == want
    assert rep["equal"] and rep["precision"] == 8


def test_fiber_product():
    assert C.fiber_product_numbers(4) == {"c0": 4, "c1": 4, "equal": True,
                                          "presentation": "fiber-product"}
    with pytest.raises(ValidationError):
        C.fiber_product_numbers(-1)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.lists(st.integers(-500, 500), min_size=1, max_size=5))
def test_against_integer_oracle(p, roots):
    # for f = prod (x - r) over Z, h(a) = prod_{i > 0} (a - r_i) exactly
    a = roots[0]
    exact = 1
    for r in roots[1:]:
        exact *= a - r
    assume(vp(exact, p) < 8)
    alg = C.MonogenicAlgebra.make(p, upoly.from_roots(roots))
    assert C.congruence_number(alg, a) == vp(exact, p)
    x = sympy.Symbol("x")
    deriv = sympy.diff(sympy.prod([x - r for r in roots]), x).subs(x, a)
    assert C.differential_number(alg, a) == vp(int(deriv), p)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([3, 5]), st.lists(st.integers(0, 3 ** 8), min_size=1, max_size=4),
       st.integers(0, 10 ** 6))
def test_translation_invariance(p, roots, c):
    alg = C.MonogenicAlgebra.make(p, upoly.from_roots(roots))
    a = roots[0]
    try:
        before = C.tate_check(alg, a)
    except ValidationError:
        return
    after = C.tate_check(C.translate(alg, c), a + c)
    assert (before["c0"], before["c1"]) == (after["c0"], after["c1"])


def test_precision_and_validation():
    with pytest.raises(ValidationError):
        C.MonogenicAlgebra.make(3, (1, 2))             # not monic
    with pytest.raises(GuardError):
        C.MonogenicAlgebra.make(3, (0, 1), 17)
    alg = C.MonogenicAlgebra.make(3, upoly.from_roots([0, 0]))
    with pytest.raises(ValidationError):
        C.tate_check(alg, 0)                           # double root
    with pytest.raises(ValidationError):
        C.tate_check(alg, 1)                           # not a root
