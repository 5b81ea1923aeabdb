"""Satake images, unramified Hecke eigenvalues and the V-operator spectrum.

Scalars (``q`` and the ``chi_i``) may be Fractions or :class:`LaurentPoly`
monomials, so every identity can be checked numerically or symbolically.

Normalisation.  The orbit-sum Satake image ``q^E * sum_{sigma in W} e_j(sigma Z)``
is proportional to ``q^E * sum_{I,J}`` of signed ``j``-subset monomials only up
to a group-order factor, and in type D at ``j = n_s`` not proportional at all.
:func:`satake_image` therefore defaults to the ``sum_{I,J}`` form, which is the
one the eigenvalue formula evaluates to; ``literal=True`` gives the orbit sum.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import laurent, upoly
from .errors import ValidationError
from .laurent import LaurentPoly
from .weyl import GroupDescriptor


def _check_j(desc: GroupDescriptor, j: int) -> None:
    if not isinstance(j, int) or not 1 <= j <= desc.n_s:
        raise ValidationError(f"j={j} outside 1..{desc.n_s}", "j")


def _exact(x):
    return Fraction(x) if isinstance(x, (int, str)) else x


def _inv(x):
    if x == 0:
        raise ValidationError("scalar must be invertible", "chi")
    return 1 / x


def _qpow(q, k: int):
    q = _exact(q)
    return q ** k if k >= 0 else _inv(q) ** (-k)


def _check_chi(desc: GroupDescriptor, chi: Sequence) -> list:
    chi = [_exact(c) for c in chi]
    if len(chi) != desc.n_s:
        raise ValidationError(f"need {desc.n_s} values, got {len(chi)}", "chi")
    for i, c in enumerate(chi):
        if c == 0:
            raise ValidationError("characters must be invertible", f"chi[{i}]")
    return chi


# ---------------------------------------------------------------------------


def satake_image(desc: GroupDescriptor, j: int, literal: bool = False) -> LaurentPoly:
    """Image of the ``j``-th spherical generator in ``Q[q^±][Z^±]^W``."""
    _check_j(desc, j)
    ns = desc.n_s
    body = laurent.orbit_sum(desc, j) if literal else laurent.signed_subset_sum(ns, j)
    return LaurentPoly.q(ns, desc.satake_exponent_base(j)) * body


def satake_normalisation(desc: GroupDescriptor, j: int) -> Fraction | None:
    """Scalar ``c`` with ``literal image = c * normalised image``, or None if none exists."""
    _check_j(desc, j)
    ns = desc.n_s
    if desc.weyl_flavor == "B":
        return Fraction(math.factorial(ns) * 2 ** (ns - j))
    if j < ns:
        return Fraction(math.factorial(ns) * 2 ** (ns - j - 1))
    return None


def unramified_eigenvalue(desc: GroupDescriptor, chi: Sequence, q, j: int):
    """Eigenvalue of the ``j``-th spherical operator on the unramified line.

    ``q^E(j) * sum over j-subsets I and J ⊂ I of prod_J x_i prod_{I-J} x_i^{-1}``
    with ``x_i = chi_i / q``.
    """
    _check_j(desc, j)
    chi = _check_chi(desc, chi)
    q = _exact(q)
    x = [c * _inv(q) for c in chi]
    xinv = [_inv(v) for v in x]
    total = 0
    for subset in itertools.combinations(range(desc.n_s), j):
        for mask in range(1 << j):
            term = 1
            for bit, i in enumerate(subset):
                term = term * (x[i] if mask >> bit & 1 else xinv[i])
            total = total + term
    return _qpow(q, desc.satake_exponent_base(j)) * total


def charpoly_exponent(desc: GroupDescriptor, j: int) -> int:
    """``D(j)`` in the folded characteristic polynomial."""
    ns = desc.n_s
    base = ns * (ns + 1) // 2 if desc.is_sp else ns * (ns - 1) // 2
    return base - (j + ns - desc.n) * j


@dataclass(frozen=True)
class PalindromicPair:
    """``P(X) = X^r Ptilde(X + 1/X)``; coefficient tuples, lowest degree first."""

    P: tuple
    Ptilde: tuple

    def to_json(self) -> dict:
        return {"P": [_scalar_json(c) for c in self.P],
                "Ptilde": [_scalar_json(c) for c in self.Ptilde]}


def _scalar_json(c):
    if isinstance(c, LaurentPoly):
        return c.to_json()
    return str(Fraction(c))


def hecke_char_poly(desc: GroupDescriptor, t_values: Sequence, q) -> PalindromicPair:
    """Characteristic polynomial of ``V`` from the spherical eigenvalues ``t^{(j)}``."""
    ns = desc.n_s
    if len(t_values) != ns:
        raise ValidationError(f"need {ns} eigenvalues t^(1..{ns}), got {len(t_values)}",
                              "t_values")
    q = _exact(q)
    coeffs = [0] * (ns + 1)
    coeffs[ns] = Fraction(1)
    for j in range(1, ns + 1):
        coeffs[ns - j] = (-1) ** j * _qpow(q, -charpoly_exponent(desc, j)) * _exact(t_values[j - 1])
    ptilde = upoly.trim(coeffs)
    return PalindromicPair(laurent.unfold(ptilde), ptilde)


def eigen_char_poly(desc: GroupDescriptor, chi: Sequence, q) -> PalindromicPair:
    """:func:`hecke_char_poly` fed with the unramified eigenvalues of ``chi``."""
    t = [unramified_eigenvalue(desc, chi, q, j) for j in range(1, desc.n_s + 1)]
    return hecke_char_poly(desc, t, q)


def charpoly_consistency(desc: GroupDescriptor, chi: Sequence, q) -> dict:
    """Check that ``x_i + 1/x_i`` are the roots of ``Ptilde`` (``x_i = chi_i / q``).

    Mismatches are reported rather than silently renormalised.
    """
    chi = _check_chi(desc, chi)
    pair = eigen_char_poly(desc, chi, q)
    q = _exact(q)
    bad = []
    for i, c in enumerate(chi):
        x = c * _inv(q)
        if upoly.evaluate(pair.Ptilde, x + _inv(x)) != 0:
            bad.append(i + 1)
    return {"consistent": not bad, "failing_indices": bad}


# ---------------------------------------------------------------------------
# V-operator on the U_0-level invariants


def v_representatives(desc: GroupDescriptor, n0: int) -> list[tuple[int, ...]]:
    """Representatives ``s``: ordered choices of ``n0`` distinct indices."""
    if not 1 <= n0 <= desc.n_s:
        raise ValidationError(f"n_0={n0} outside 1..{desc.n_s}", "n0")
    return list(itertools.permutations(range(1, desc.n_s + 1), n0))


def v_operator_diagonal(desc: GroupDescriptor, n0: int, s: Sequence[int], chi: Sequence, q):
    """Diagonal entry ``prod_{i <= n0} chi_{s(i)} q^{-1}`` of the triangular V-matrix."""
    s = tuple(s)
    if len(s) != n0 or len(set(s)) != n0 or not all(1 <= x <= desc.n_s for x in s):
        raise ValidationError(f"{s} is not {n0} distinct indices in 1..{desc.n_s}", "s")
    chi = _check_chi(desc, chi)
    qi = _inv(_exact(q))
    out = 1
    for x in s:
        out = out * chi[x - 1] * qi
    return out


def v_divisibility(desc: GroupDescriptor, n0: int, chi: Sequence, q) -> dict:
    """Does the V-spectrum's characteristic polynomial divide ``P^e``?

    ``e = n0 (n_s-1)!/(n_s-n0)!``.  Two readings are tested: the literal one,
    whose roots are the products ``prod chi_{s(i)}/q``, and the factor-wise
    one, where each ``chi_{s(i)}/q`` contributes its own linear factor.
    """
    ns = desc.n_s
    reps = v_representatives(desc, n0)
    chi = _check_chi(desc, chi)
    e = n0 * math.factorial(ns - 1) // math.factorial(ns - n0)
    big_p = eigen_char_poly(desc, chi, q).P
    target = upoly.power(big_p, e)
    literal = upoly.from_roots(v_operator_diagonal(desc, n0, s, chi, q) for s in reps)
    qi = _inv(_exact(q))
    factorwise = upoly.from_roots(chi[x - 1] * qi for s in reps for x in s)
    lit_rem = upoly.divmod_monic(target, literal)[1]
    fac_rem = upoly.divmod_monic(target, factorwise)[1]
    witness = None
    if lit_rem:
        roots = {(s, v_operator_diagonal(desc, n0, s, chi, q)) for s in reps}
        for s, v in sorted(roots, key=lambda t: t[0]):
            if upoly.evaluate(big_p, v) != 0:
                witness = {"s": list(s), "diagonal": str(v)}
                break
    return {"exponent": e, "count": len(reps), "literal_divides": not lit_rem,
            "factorwise_divides": not fac_rem, "witness": witness}
