"""Arithmetic and linear algebra over ``Z/p^e`` (``e = 1`` is the field ``F_p``).

Matrices are lists of lists of Python ints reduced into ``[0, p^e)``.  Sizes
are small (guarded at 12), so plain Python keeps every step exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import upoly
from .errors import ValidationError

Matrix = list  # list[list[int]]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Ring:
    """``Z/p^e``."""

    p: int
    e: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValidationError(f"p={self.p} is not prime", "p")
        if self.e < 1:
            raise ValidationError("precision must be at least 1", "e")

    @property
    def mod(self) -> int:
        return self.p ** self.e

    @property
    def is_field(self) -> bool:
        return self.e == 1

    def __call__(self, x) -> int:
        """Reduce an int, Fraction or residue string into the ring."""
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ValidationError(f"{x} is not p-integral for p={self.p}")
            return x.numerator * pow(x.denominator, -1, self.mod) % self.mod
        return int(x) % self.mod

    def is_unit(self, x: int) -> bool:
        return x % self.p != 0

    def inv(self, x: int) -> int:
        if not self.is_unit(x):
            raise ValidationError(f"{x} is not a unit modulo {self.mod}")
        return pow(x, -1, self.mod)

    def val(self, x: int) -> int:
        """p-adic valuation of a residue, capped at ``e`` for zero."""
        x %= self.mod
        if x == 0:
            return self.e
        v = 0
        while x % self.p == 0:
            x //= self.p
            v += 1
        return v

    def residue(self, x: int) -> int:
        return x % self.p

    # -- matrices -------------------------------------------------------
    def mat(self, rows) -> Matrix:
        return [[self(x) for x in r] for r in rows]

    def eye(self, n: int) -> Matrix:
        return [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def zeros(self, r: int, c: int) -> Matrix:
        return [[0] * c for _ in range(r)]

    def matmul(self, a: Matrix, b: Matrix) -> Matrix:
        m = self.mod
        bt = list(zip(*b))
        return [[sum(x * y for x, y in zip(row, col)) % m for col in bt] for row in a]

    def matadd(self, a: Matrix, b: Matrix, sign: int = 1) -> Matrix:
        m = self.mod
        return [[(x + sign * y) % m for x, y in zip(r, s)] for r, s in zip(a, b)]

    def scal(self, c: int, a: Matrix) -> Matrix:
        return [[c * x % self.mod for x in r] for r in a]

    @staticmethod
    def transpose(a: Matrix) -> Matrix:
        return [list(r) for r in zip(*a)]

    def det(self, a: Matrix) -> int:
        """Determinant of the integer lifts (Bareiss), reduced; exact over ``Z/p^e``."""
        return bareiss_det(a) % self.mod

    def matinv(self, a: Matrix) -> Matrix:
        n = len(a)
        m = self.mod
        aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(a)]
        for c in range(n):
            piv = next((r for r in range(c, n) if self.is_unit(aug[r][c])), None)
            if piv is None:
                raise ValidationError("matrix is not invertible over the ring")
            aug[c], aug[piv] = aug[piv], aug[c]
            inv = self.inv(aug[c][c])
            aug[c] = [x * inv % m for x in aug[c]]
            for r in range(n):
                if r != c and aug[r][c]:
                    f = aug[r][c]
                    aug[r] = [(x - f * y) % m for x, y in zip(aug[r], aug[c])]
        return [r[n:] for r in aug]

    def column_space_basis(self, a: Matrix) -> tuple[Matrix, bool]:
        """Columns forming a basis of the column span, and whether it is free.

        Elimination uses unit pivots only.  The span is a free direct summand
        exactly when the reduction terminates with a zero remainder; otherwise
        ``free`` is False (the module has torsion or is not a summand).
        """
        rows = len(a)
        cols = len(a[0]) if rows else 0
        m = self.mod
        work = [list(r) for r in a]
        chosen: list[int] = []
        used_rows: list[int] = []
        for c in range(cols):
            piv = next((r for r in range(rows) if r not in used_rows and self.is_unit(work[r][c])),
                       None)
            if piv is None:
                continue
            inv = self.inv(work[piv][c])
            for cc in range(cols):
                if cc != c and work[piv][cc]:
                    f = work[piv][cc] * inv % m
                    for r in range(rows):
                        work[r][cc] = (work[r][cc] - f * work[r][c]) % m
            chosen.append(c)
            used_rows.append(piv)
        free = all(work[r][c] == 0 for r in range(rows) for c in range(cols) if c not in chosen)
        basis = [[a[r][c] for c in chosen] for r in range(rows)]
        return basis, free


def bareiss_det(a: Matrix) -> int:
    """Exact integer determinant by fraction-free elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            sw = next((r for r in range(k + 1, n) if m[r][k]), None)
            if sw is None:
                return 0
            m[k], m[sw] = m[sw], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# ---------------------------------------------------------------------------
# linear algebra over F_p (row-echelon based)


def rref_mod_p(a: Matrix, p: int) -> tuple[Matrix, list[int]]:
    rows = [[x % p for x in r] for r in a]
    ncols = len(rows[0]) if rows else 0
    pivcols: list[int] = []
    r0 = 0
    for c in range(ncols):
        piv = next((r for r in range(r0, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[r0], rows[piv] = rows[piv], rows[r0]
        inv = pow(rows[r0][c], -1, p)
        rows[r0] = [x * inv % p for x in rows[r0]]
        for r in range(len(rows)):
            if r != r0 and rows[r][c]:
                f = rows[r][c]
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[r0])]
        pivcols.append(c)
        r0 += 1
        if r0 == len(rows):
            break
    return rows[:r0], pivcols


def rank_mod_p(a: Matrix, p: int) -> int:
    if not a:
        return 0
    return len(rref_mod_p(a, p)[1])


def nullspace_mod_p(a: Matrix, p: int, ncols: int | None = None) -> list[list[int]]:
    """Basis of ``{x : a x = 0}`` over F_p."""
    ncols = ncols if ncols is not None else (len(a[0]) if a else 0)
    if not a:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    red, piv = rref_mod_p(a, p)
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, pc in enumerate(piv):
            v[pc] = -red[r][f] % p
        out.append(v)
    return out


# ---------------------------------------------------------------------------
# polynomials over F_p and Hensel lifting


def poly_xgcd_mod_p(a: Sequence[int], b: Sequence[int], p: int):
    """``(g, s, t)`` with ``s a + t b = g`` monic gcd over F_p."""
    r0, r1 = upoly.trim(a, p), upoly.trim(b, p)
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        inv = pow(r1[-1], -1, p)
        monic = upoly.scale(r1, inv, p)
        qt, rem = upoly.divmod_monic(r0, monic, p)
        qt = upoly.scale(qt, inv, p)
        r0, r1 = r1, rem
        s0, s1 = s1, upoly.sub(s0, upoly.mul(qt, s1, p), p)
        t0, t1 = t1, upoly.sub(t0, upoly.mul(qt, t1, p), p)
    if not r0:
        return (), s0, t0
    inv = pow(r0[-1], -1, p)
    return upoly.scale(r0, inv, p), upoly.scale(s0, inv, p), upoly.scale(t0, inv, p)


def hensel_lift(f: Sequence[int], g: Sequence[int], h: Sequence[int], p: int, e: int):
    """Lift ``f ≡ g h (mod p)`` with ``g`` monic and ``gcd(g, h) = 1`` to ``mod p^e``."""
    mod = p ** e
    f = upoly.trim(f, mod)
    g = upoly.trim(g, p)
    h = upoly.trim(h, p)
    gcd, s, t = poly_xgcd_mod_p(g, h, p)
    if gcd != (1,):
        raise ValidationError("factors are not coprime modulo p")
    pk = p
    for _ in range(1, e):
        err = upoly.sub(f, upoly.mul(g, h), mod)
        if any(c % pk for c in err):  # pragma: no cover - invariant of the loop
            raise AssertionError("Hensel invariant broken")
        delta = upoly.trim((c // pk for c in err), p)
        quo, rem = upoly.divmod_monic(upoly.mul(t, delta, p), g, p)
        b = upoly.add(upoly.mul(s, delta, p), upoly.mul(quo, h, p), p)
        g = upoly.add(g, upoly.scale(rem, pk), mod)
        h = upoly.add(h, upoly.scale(b, pk), mod)
        pk *= p
    return g, h


def resultant_mod(a: Sequence[int], b: Sequence[int], ring: Ring) -> int:
    """Resultant via the Sylvester determinant."""
    a = upoly.trim(a, ring.mod)
    b = upoly.trim(b, ring.mod)
    da, db = len(a) - 1, len(b) - 1
    if da < 0 or db < 0:
        return 0
    if da == 0:
        return pow(a[0], db, ring.mod)
    if db == 0:
        return pow(b[0], da, ring.mod)
    n = da + db
    syl = []
    for i in range(db):
        syl.append([0] * i + list(reversed(a)) + [0] * (n - da - 1 - i))
    for i in range(da):
        syl.append([0] * i + list(reversed(b)) + [0] * (n - db - 1 - i))
    return ring.det(syl)
