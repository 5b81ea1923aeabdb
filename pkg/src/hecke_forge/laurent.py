"""Exact Laurent polynomials in ``Z_1..Z_m`` and a formal ``q``.

Coefficients are Fractions.  The exponent of ``q`` is stored in half units so
that ``q^{1/2}`` (the square root of the modulus character) can appear in
intermediate expressions; :meth:`LaurentPoly.q_exponents_integral` checks that
a final result is free of it.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Mapping, Sequence

from . import upoly
from .errors import ValidationError


class LaurentPoly:
    __slots__ = ("nz", "terms")

    def __init__(self, nz: int, terms: Mapping[tuple[int, ...], Fraction] | None = None):
        self.nz = nz
        clean = {}
        for e, c in (terms or {}).items():
            if len(e) != nz + 1:
                raise ValidationError(f"exponent {e} has wrong length for {nz} variables")
            c = Fraction(c)
            if c:
                clean[tuple(e)] = c
        self.terms: dict[tuple[int, ...], Fraction] = clean

    # -- constructors ---------------------------------------------------
    @classmethod
    def const(cls, nz: int, c) -> "LaurentPoly":
        return cls(nz, {(0,) * (nz + 1): Fraction(c)})

    @classmethod
    def z(cls, nz: int, i: int, power: int = 1) -> "LaurentPoly":
        """``Z_i^power`` with ``1 <= i <= nz``."""
        e = [0] * (nz + 1)
        e[i - 1] = power
        return cls(nz, {tuple(e): 1})

    @classmethod
    def q(cls, nz: int, power=1) -> "LaurentPoly":
        """``q^power``; half-integer powers allowed."""
        half = Fraction(power) * 2
        if half.denominator != 1:
            raise ValidationError("q-exponents must be multiples of 1/2")
        return cls(nz, {(0,) * nz + (int(half),): 1})

    @classmethod
    def monomial(cls, nz: int, z_exps: Sequence[int], q_power=0, coeff=1) -> "LaurentPoly":
        half = Fraction(q_power) * 2
        return cls(nz, {tuple(z_exps) + (int(half),): coeff})

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.nz != self.nz:
                raise ValidationError("Laurent polynomials in different variable sets")
            return other
        return LaurentPoly.const(self.nz, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(self.nz, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.nz, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(self.nz, out)

    __rmul__ = __mul__

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def inverse(self) -> "LaurentPoly":
        if not self.is_monomial():
            raise ValidationError("only monomials are invertible")
        (e, c), = self.terms.items()
        return LaurentPoly(self.nz, {tuple(-x for x in e): 1 / c})

    def __truediv__(self, other):
        if isinstance(other, LaurentPoly):
            return self * other.inverse()
        return self * (1 / Fraction(other))

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = LaurentPoly.const(self.nz, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.nz == other.nz and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.const(self.nz, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nz, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            mono = [f"Z{i + 1}^{x}" if x != 1 else f"Z{i + 1}"
                    for i, x in enumerate(e[:-1]) if x]
            if e[-1]:
                qe = Fraction(e[-1], 2)
                mono.append("q" if qe == 1 else f"q^{qe}")
            parts.append(f"{c}" + ("*" + "*".join(mono) if mono else ""))
        return " + ".join(parts)

    # -- structure ------------------------------------------------------
    def q_exponents_integral(self) -> bool:
        return all(e[-1] % 2 == 0 for e in self.terms)

    def z_act(self, window: Sequence[int]) -> "LaurentPoly":
        """Substitute ``Z_i -> Z_{|w(i)|}^{sign w(i)}``."""
        out: dict = {}
        for e, c in self.terms.items():
            ne = [0] * (self.nz + 1)
            ne[-1] = e[-1]
            for i, x in enumerate(e[:-1]):
                if x:
                    t = window[i]
                    ne[abs(t) - 1] += x if t > 0 else -x
            key = tuple(ne)
            out[key] = out.get(key, 0) + c
        return LaurentPoly(self.nz, out)

    def eval(self, z_values: Sequence, q=None, q_half=None):
        """Exact substitution.  ``q_half`` is needed only for odd half-powers."""
        if len(z_values) != self.nz:
            raise ValidationError(f"need {self.nz} Z-values, got {len(z_values)}", "assignment")
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for i, x in enumerate(e[:-1]):
                if x:
                    term = term * _power(z_values[i], x, f"Z{i + 1}")
            if e[-1]:
                if e[-1] % 2 == 0:
                    if q is None:
                        raise ValidationError("q is required", "assignment")
                    term = term * _power(q, e[-1] // 2, "q")
                else:
                    if q_half is None:
                        raise ValidationError("q_half is required for half-integer q-powers",
                                              "assignment")
                    term = term * _power(q_half, e[-1], "q_half")
            total = total + term
        return total

    def to_json(self) -> list[dict]:
        out = []
        for e in sorted(self.terms):
            qe = Fraction(e[-1], 2)
            out.append({"exponents": list(e[:-1]) + [qe.numerator if qe.denominator == 1
                                                      else str(qe)],
                        "coeff": str(self.terms[e])})
        return out


def _power(x, k: int, name: str):
    if k < 0:
        if x == 0:
            raise ValidationError(f"{name} must be invertible for a negative exponent", name)
        if isinstance(x, int):
            x = Fraction(x)
        return (1 / x) ** (-k)
    return x ** k


def elem_sym(j: int, values: Sequence):
    """Elementary symmetric polynomial ``e_j``; ``e_0 = 1``."""
    values = list(values)
    if not 0 <= j <= len(values):
        raise ValidationError(f"j={j} outside 0..{len(values)}", "j")
    e = [1] + [0] * j
    for v in values:
        for k in range(j, 0, -1):
            e[k] = e[k] + e[k - 1] * v
    return e[j]


def signed_subset_sum(nz: int, j: int) -> LaurentPoly:
    """``sum over I (|I| = j) and J ⊂ I of prod_J Z_i prod_{I-J} Z_i^{-1}``."""
    terms: dict = {}
    for subset in itertools.combinations(range(nz), j):
        for signs in itertools.product((1, -1), repeat=j):
            e = [0] * (nz + 1)
            for i, s in zip(subset, signs):
                e[i] = s
            terms[tuple(e)] = terms.get(tuple(e), 0) + 1
    return LaurentPoly(nz, terms)


def orbit_sum(desc, j: int) -> LaurentPoly:
    """``sum over sigma in W^s of e_j(sigma Z)``, taken literally.

    Each signed ``j``-subset monomial occurs with a multiplicity fixed by the
    group; in type D with ``j = n_s`` only monomials with an even number of
    inverted variables occur.  Brute-force expansion is in the test-suite.
    """
    ns = desc.n_s
    if not 1 <= j <= ns:
        raise ValidationError(f"j={j} outside 1..{ns}", "j")
    terms: dict = {}
    if desc.weyl_flavor == "B":
        mult = math.factorial(ns) * 2 ** (ns - j)
    elif j < ns:
        mult = math.factorial(ns) * 2 ** (ns - j - 1)
    else:
        mult = math.factorial(ns)
    for subset in itertools.combinations(range(ns), j):
        for signs in itertools.product((1, -1), repeat=j):
            if desc.weyl_flavor == "D" and j == ns and signs.count(-1) % 2:
                continue
            e = [0] * (ns + 1)
            for i, s in zip(subset, signs):
                e[i] = s
            terms[tuple(e)] = mult
    return LaurentPoly(ns, terms)


# ---------------------------------------------------------------------------
# palindromic fold / unfold


def _exact(c):
    # ints and strings become Fractions; ring elements such as LaurentPoly pass through
    return Fraction(c) if isinstance(c, (int, str)) else c


def is_palindromic(p: Sequence) -> bool:
    return tuple(p) == tuple(reversed(p))


def unfold(ptilde: Sequence) -> tuple:
    """``P(X) = X^r Ptilde(X + 1/X)`` for monic ``Ptilde`` of degree ``r``.

    Coefficient tuples are lowest degree first.
    """
    pt = upoly.trim(_exact(c) for c in ptilde)
    if not pt or pt[-1] != 1:
        raise ValidationError("Ptilde must be monic", "Ptilde")
    r = len(pt) - 1
    out: tuple = ()
    for k, c in enumerate(pt):
        # X^{r-k} (X^2 + 1)^k
        term = (0,) * (r - k) + upoly.power((1, 0, 1), k)
        out = upoly.add(out, upoly.scale(term, c))
    return out


def fold(p: Sequence) -> tuple:
    """Inverse of :func:`unfold`, by triangular elimination from the top.

    Coefficients may be rationals or any exact ring elements (for instance
    :class:`LaurentPoly`), since only ring operations are used.
    """
    p = upoly.trim(_exact(c) for c in p)
    deg = len(p) - 1
    if deg < 0 or deg % 2 or p[-1] != 1:
        raise ValidationError("P must be monic of even degree", "P")
    if not is_palindromic(p):
        raise ValidationError("P is not palindromic", "P")
    r = deg // 2
    rem = list(p)
    coeffs = [0] * (r + 1)
    for k in range(r, -1, -1):
        c = rem[r + k] if r + k < len(rem) else 0
        coeffs[k] = c
        if c != 0:
            term = (0,) * (r - k) + upoly.power((1, 0, 1), k)
            for i, t in enumerate(term):
                rem[i] = rem[i] - c * t
    if any(x != 0 for x in rem):
        raise ValidationError("P is not of the form X^r Ptilde(X + 1/X)", "P")
    return tuple(coeffs)
