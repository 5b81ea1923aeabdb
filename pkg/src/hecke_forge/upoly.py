"""Dense univariate polynomials as coefficient tuples, lowest degree first.

Coefficients are Fractions (``mod=None``) or integers reduced modulo ``mod``.
Only division by monic polynomials is offered, which is exact over any
commutative ring and is all the package needs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Poly = tuple


def _red(c, mod):
    return c % mod if mod else c


def trim(p: Iterable, mod: int | None = None) -> Poly:
    p = [_red(c, mod) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def degree(p: Poly) -> int:
    return len(p) - 1  # -1 for the zero polynomial


def add(p: Poly, r: Poly, mod=None) -> Poly:
    n = max(len(p), len(r))
    return trim(((p[i] if i < len(p) else 0) + (r[i] if i < len(r) else 0) for i in range(n)), mod)


def sub(p: Poly, r: Poly, mod=None) -> Poly:
    return add(p, tuple(-c for c in r), mod)


def scale(p: Poly, c, mod=None) -> Poly:
    return trim((c * x for x in p), mod)


def mul(p: Poly, r: Poly, mod=None) -> Poly:
    if not p or not r:
        return ()
    out = [0] * (len(p) + len(r) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(r):
            out[i + j] += a * b
    return trim(out, mod)


def power(p: Poly, k: int, mod=None) -> Poly:
    out: Poly = (1,)
    for _ in range(k):
        out = mul(out, p, mod)
    return out


def product(polys: Iterable[Poly], mod=None) -> Poly:
    out: Poly = (1,)
    for p in polys:
        out = mul(out, p, mod)
    return out


def from_roots(roots: Iterable, mod=None) -> Poly:
    """Monic ``prod (X - r)``."""
    return product(((-r, 1) for r in roots), mod)


def divmod_monic(p: Poly, d: Poly, mod=None) -> tuple[Poly, Poly]:
    d = trim(d, mod)
    if not d or d[-1] != 1:
        raise ValueError("divisor must be monic")
    rem = list(trim(p, mod))
    dd = len(d) - 1
    if len(rem) - 1 < dd:
        return (), tuple(rem)
    quo = [0] * (len(rem) - dd)
    for k in range(len(rem) - 1, dd - 1, -1):
        c = _red(rem[k], mod)
        if c == 0:
            continue
        quo[k - dd] = c
        for i, dc in enumerate(d):
            rem[k - dd + i] = _red(rem[k - dd + i] - c * dc, mod)
    return trim(quo, mod), trim(rem[:dd], mod)


def evaluate(p: Poly, x, mod=None):
    acc = 0 * x
    for c in reversed(p):
        acc = _red(acc * x + c, mod)
    return acc


def matrix_evaluate(p: Poly, m, mod=None):
    """``p(M)`` for a square numpy-free matrix given as a list of lists."""
    n = len(m)
    acc = [[0] * n for _ in range(n)]
    for c in reversed(p):
        acc = [[_red(sum(acc[i][k] * m[k][j] for k in range(n)) + (c if i == j else 0), mod)
                for j in range(n)] for i in range(n)]
    return acc


def reverse(p: Poly, deg: int | None = None) -> Poly:
    """``X^deg p(1/X)``."""
    deg = degree(p) if deg is None else deg
    padded = list(p) + [0] * (deg + 1 - len(p))
    return tuple(reversed(padded))


def as_fractions(p: Sequence) -> Poly:
    return trim(Fraction(c) for c in p)


def to_strings(p: Poly) -> list[str]:
    return [str(Fraction(c)) for c in p]
