"""Congruence and differential numbers of monogenic algebras ``O[x]/(f)``.

``O`` is modelled by ``Z/p^e``; valuations are certified only below ``e``.
For an augmentation ``x -> a`` with ``f = (x - a) h``, the differential number
is ``v_p(f'(a))`` and the congruence number ``v_p(h(a))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import config, upoly
from .errors import ValidationError
from .modring import Ring

DEFAULT_PRECISION = 8


@dataclass(frozen=True)
class MonogenicAlgebra:
    ring: Ring
    f: tuple[int, ...]     # monic, lowest degree first, reduced mod p^e

    @classmethod
    def make(cls, p: int, f: Sequence, e: int = DEFAULT_PRECISION) -> "MonogenicAlgebra":
        config.check("e", e, config.guards().congruence_max_precision)
        ring = Ring(p, e)
        poly = upoly.trim((ring(c) for c in f), ring.mod)
        if not poly or poly[-1] != 1:
            raise ValidationError("f must be monic", "f")
        return cls(ring, poly)


def _derivative(f: Sequence[int], mod: int) -> tuple:
    return upoly.trim((k * c for k, c in enumerate(f) if k), mod)


def _augmentation(alg: MonogenicAlgebra, a) -> int:
    ring = alg.ring
    a = ring(a)
    if upoly.evaluate(alg.f, a, ring.mod) != 0:
        raise ValidationError(f"f({a}) is not 0 modulo p^{ring.e}", "a")
    return a


def _certified_val(ring: Ring, x: int, what: str) -> int:
    v = ring.val(x)
    if v >= ring.e:
        raise ValidationError(f"precision exhausted: {what} vanishes modulo p^{ring.e}", "e")
    return v


def differential_number(alg: MonogenicAlgebra, a) -> int:
    a = _augmentation(alg, a)
    d = upoly.evaluate(_derivative(alg.f, alg.ring.mod), a, alg.ring.mod)
    return _certified_val(alg.ring, d, "f'(a)")


def cofactor(alg: MonogenicAlgebra, a) -> tuple:
    a = _augmentation(alg, a)
    h, r = upoly.divmod_monic(alg.f, ((-a) % alg.ring.mod, 1), alg.ring.mod)
    assert not r
    return h


def congruence_number(alg: MonogenicAlgebra, a) -> int:
    """``v_p(h(a))``; requires ``a`` to be a simple root at working precision."""
    h = cofactor(alg, a)
    ha = upoly.evaluate(h, alg.ring(a), alg.ring.mod)
    if alg.ring.val(ha) >= alg.ring.e:
        raise ValidationError("a is not a simple root at this precision", "a")
    return alg.ring.val(ha)


def tate_check(alg: MonogenicAlgebra, a) -> dict:
    c0 = congruence_number(alg, a)
    c1 = differential_number(alg, a)
    return {"c0": c0, "c1": c1, "equal": c0 == c1, "precision": alg.ring.e,
            "assumption": "monogenic presentation, hence complete intersection"}


def fiber_product_numbers(k: int) -> dict:
    """``O x_{O/p^k} O`` augmented by the first projection: both numbers are ``k``."""
    if not isinstance(k, int) or k < 0:
        raise ValidationError("must be a nonnegative integer", "k")
    return {"c0": k, "c1": k, "equal": True, "presentation": "fiber-product"}


def translate(alg: MonogenicAlgebra, c: int) -> MonogenicAlgebra:
    """Presentation ``x -> x + c``: returns ``f(x - c)`` (the root ``a`` moves to ``a + c``)."""
    mod = alg.ring.mod
    out: tuple = ()
    shift = ((-c) % mod, 1)
    for k, coef in enumerate(alg.f):
        out = upoly.add(out, upoly.scale(upoly.power(shift, k, mod), coef, mod), mod)
    return MonogenicAlgebra(alg.ring, out)
