"""Bilinear forms, Frobenius splittings of form-compatible matrices, and the
inner-derivation / dual-number descent used to lift representations.

Matrices are lists of lists of ints reduced into a :class:`~hecke_forge.modring.Ring`
(``Z/p^e``); forms are stored with integer entries and reduced on use.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import config, upoly
from .errors import PreconditionReport, ValidationError
from .modring import Ring, bareiss_det, nullspace_mod_p, rank_mod_p, resultant_mod, rref_mod_p
from .weyl import GroupDescriptor, Kind

SYMMETRIC = "symmetric"
ALTERNATING = "alternating"


@dataclass(frozen=True)
class BilinearForm:
    matrix: tuple[tuple[int, ...], ...]
    symmetry: str

    def __post_init__(self):
        n = len(self.matrix)
        if any(len(r) != n for r in self.matrix):
            raise ValidationError("form matrix must be square", "form")
        sign = 1 if self.symmetry == SYMMETRIC else -1
        if self.symmetry not in (SYMMETRIC, ALTERNATING):
            raise ValidationError(f"unknown symmetry {self.symmetry!r}", "form.symmetry")
        for i in range(n):
            for j in range(n):
                if self.matrix[i][j] != sign * self.matrix[j][i]:
                    raise ValidationError(f"matrix is not {self.symmetry}", "form")

    @property
    def size(self) -> int:
        return len(self.matrix)

    def over(self, ring: Ring) -> list[list[int]]:
        lam = ring.mat(self.matrix)
        if not ring.is_unit(ring.det(lam)):
            raise ValidationError(f"form is degenerate modulo {ring.p}", "form")
        return lam

    def to_json(self) -> dict:
        return {"matrix": [list(r) for r in self.matrix], "symmetry": self.symmetry}


def _antidiag(m: int) -> list[list[int]]:
    return [[1 if i + j == m - 1 else 0 for j in range(m)] for i in range(m)]


def standard_form(kind: str, m: int, u: int | None = None) -> BilinearForm:
    """``A_m`` (``kind="A"``), ``A'_{2m}`` (``"A'"``) or ``A_m^eta`` (``"eta"``).

    For ``eta`` the middle 2x2 block of ``A_m`` (``m`` even) becomes ``diag(1, -u)``.
    """
    if not isinstance(m, int) or m < 1:
        raise ValidationError(f"m={m} must be a positive integer", "m")
    if kind == "A":
        return BilinearForm(tuple(map(tuple, _antidiag(m))), SYMMETRIC)
    if kind == "A'":
        a = _antidiag(m)
        rows = [[0] * m + a[i] for i in range(m)] + [[-x for x in a[i]] + [0] * m
                                                     for i in range(m)]
        return BilinearForm(tuple(map(tuple, rows)), ALTERNATING)
    if kind == "eta":
        if m % 2 or m < 2:
            raise ValidationError("the quasi-split form needs an even size", "m")
        if u is None or u == 0:
            raise ValidationError("a unit u is required", "u")
        a = _antidiag(m)
        h = m // 2
        a[h - 1][h], a[h][h - 1] = 0, 0
        a[h - 1][h - 1], a[h][h] = 1, -u
        return BilinearForm(tuple(map(tuple, a)), SYMMETRIC)
    raise ValidationError(f"unknown form kind {kind!r}", "kind")


def group_form(desc: GroupDescriptor, u: int = 2) -> BilinearForm:
    """The form whose special isometry group is ``G`` itself (``n x n``)."""
    if desc.kind is Kind.SP:
        return standard_form("A'", desc.n // 2)
    if desc.kind is Kind.SO_EVEN_QUASI:
        return standard_form("eta", desc.n, u)
    return standard_form("A", desc.n)


def lie_algebra_basis(form: BilinearForm, p: int) -> list[list[list[int]]]:
    """Basis over F_p of ``{X : X^t L + L X = 0}``."""
    n = form.size
    lam = Ring(p).mat(form.matrix)
    rows = []
    for a in range(n):
        for b in range(n):
            # (X^t L + L X)_{ab} = sum_k X_{ka} L_{kb} + L_{ak} X_{kb}
            r = [0] * (n * n)
            for k in range(n):
                r[k * n + a] += lam[k][b]
                r[k * n + b] += lam[a][k]
            rows.append([x % p for x in r])
    basis = nullspace_mod_p(rows, p, n * n)
    return [[v[i * n:(i + 1) * n] for i in range(n)] for v in basis]


# ---------------------------------------------------------------------------
# isometries


def _check_square(m, size: int, name: str) -> None:
    if len(m) != size or any(len(r) != size for r in m):
        raise ValidationError(f"expected a {size}x{size} matrix", name)


def check_isometry(m, form: BilinearForm, ring: Ring) -> bool:
    """Exact test of ``M^t L M = L``."""
    _check_square(m, form.size, "M")
    lam = ring.mat(form.matrix)
    m = ring.mat(m)
    return ring.matmul(ring.matmul(ring.transpose(m), lam), m) == lam


def random_isometry(form: BilinearForm, ring: Ring, rng: random.Random, tries: int = 50):
    """Cayley transform ``(1 - X)^{-1}(1 + X)`` of a random Lie algebra element."""
    n = form.size
    lam = form.over(ring)
    lam_inv = ring.matinv(lam)
    for _ in range(tries):
        y = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                v = rng.randrange(ring.mod)
                if form.symmetry == SYMMETRIC:
                    if i != j:
                        y[i][j], y[j][i] = v, -v % ring.mod
                else:
                    y[i][j] = y[j][i] = v
        x = ring.matmul(lam_inv, y)
        one = ring.eye(n)
        try:
            inv = ring.matinv(ring.matadd(one, x, -1))
        except ValidationError:
            continue
        g = ring.matmul(inv, ring.matadd(one, x))
        assert check_isometry(g, form, ring)
        return g
    raise ValidationError("could not sample an isometry (1 - X never invertible)")


# ---------------------------------------------------------------------------
# characteristic polynomials and splitting


def charpoly(m, ring: Ring) -> tuple[int, ...]:
    """``det(X - M)`` modulo ``p^e`` via exact integer interpolation of the lift."""
    n = len(m)
    xs = list(range(n + 1))
    ys = [bareiss_det([[(x if i == j else 0) - m[i][j] for j in range(n)] for i in range(n)])
          for x in xs]
    coeffs: tuple = ()
    for k, xk in enumerate(xs):
        basis: tuple = (Fraction(1),)
        denom = 1
        for i, xi in enumerate(xs):
            if i != k:
                basis = upoly.mul(basis, (-xi, 1))
                denom *= xk - xi
        coeffs = upoly.add(coeffs, upoly.scale(basis, Fraction(ys[k], denom)))
    out = []
    for c in coeffs:
        c = Fraction(c)
        assert c.denominator == 1
        out.append(int(c) % ring.mod)
    return upoly.trim(out, ring.mod)


def is_palindromic_factor(f: Sequence[int], ring: Ring) -> bool:
    """``X^d f(1/X) = f(0) f(X)`` with ``f(0)`` a unit: roots closed under inversion."""
    f = upoly.trim(f, ring.mod)
    if not f or not ring.is_unit(f[0]):
        return False
    return upoly.trim(upoly.reverse(f), ring.mod) == upoly.scale(f, f[0], ring.mod)


@dataclass
class SplitResult:
    basis_s: list            # N x r, columns span s = im B(M)
    basis_psi: list          # N x (N - r), columns span psi = im A(M)
    gram_s: list
    gram_psi: list
    charpoly_s: tuple
    charpoly_psi: tuple
    checks: dict = field(default_factory=dict)

    @property
    def dims(self) -> tuple[int, int]:
        return (len(self.basis_s[0]) if self.basis_s and self.basis_s[0] else 0,
                len(self.basis_psi[0]) if self.basis_psi and self.basis_psi[0] else 0)

    def to_json(self) -> dict:
        def cols(b):
            return [[str(b[r][c]) for r in range(len(b))] for c in range(len(b[0]) if b else 0)]
        return {"s": cols(self.basis_s), "psi": cols(self.basis_psi),
                "dims": list(self.dims), "gram_s": [[str(x) for x in r] for r in self.gram_s],
                "gram_psi": [[str(x) for x in r] for r in self.gram_psi],
                "charpoly_s": [str(c) for c in self.charpoly_s],
                "charpoly_psi": [str(c) for c in self.charpoly_psi], "checks": self.checks}


def _hcat(a, b, rows: int):
    return [list(a[r] if a else []) + list(b[r] if b else []) for r in range(rows)]


def _cols(mat, idx):
    return [[mat[r][c] for c in idx] for r in range(len(mat))]


def split_by_factor(m, form: BilinearForm, a_poly, b_poly, ring: Ring) -> SplitResult:
    """Split ``M`` along ``charpoly = A * B``: ``s = im B(M)``, ``psi = im A(M)``."""
    n = form.size
    config.check("N", n, config.guards().max_matrix_size)
    config.check("e", ring.e, config.guards().max_precision)
    _check_square(m, n, "M")
    m = ring.mat(m)
    lam = form.over(ring)
    if not check_isometry(m, form, ring):
        raise ValidationError("M does not preserve the form", "M")
    a_poly = upoly.trim((ring(c) for c in a_poly), ring.mod)
    b_poly = upoly.trim((ring(c) for c in b_poly), ring.mod)
    for name, f in (("A", a_poly), ("B", b_poly)):
        if not f or f[-1] != 1:
            raise ValidationError("factor must be monic", name)
    chi = charpoly(m, ring)
    if upoly.mul(a_poly, b_poly, ring.mod) != chi:
        raise ValidationError("A * B is not the characteristic polynomial of M", "A,B")
    res = resultant_mod(a_poly, b_poly, ring)
    if not ring.is_unit(res):
        raise ValidationError(f"factors are not coprime (resultant {res} is not a unit)", "A,B")
    for name, f in (("A", a_poly), ("B", b_poly)):
        if not is_palindromic_factor(f, ring):
            raise ValidationError("roots are not closed under inversion", name)

    bm = upoly.matrix_evaluate(b_poly, m, ring.mod)
    am = upoly.matrix_evaluate(a_poly, m, ring.mod)
    s_basis, s_free = ring.column_space_basis(bm)
    p_basis, p_free = ring.column_space_basis(am)
    if not (s_free and p_free):
        raise PreconditionReport("a summand is not a free direct summand",
                                 {"s_free": s_free, "psi_free": p_free})
    r_s = len(s_basis[0]) if s_basis and s_basis[0] else 0
    r_p = len(p_basis[0]) if p_basis and p_basis[0] else 0
    if r_s + r_p != n:
        raise PreconditionReport(f"summand ranks {r_s} + {r_p} != {n}")
    frame = _hcat(s_basis, p_basis, n)
    frame_inv = ring.matinv(frame)
    coords = ring.matmul(frame_inv, ring.matmul(m, frame))
    stable = all(coords[i][j] == 0 for i in range(n) for j in range(n)
                 if (i < r_s) != (j < r_s))
    if not stable:
        raise PreconditionReport("summands are not M-stable")
    cross = ring.matmul(ring.matmul(ring.transpose(bm), lam), am)
    orthogonal = all(x == 0 for r in cross for x in r)
    if not orthogonal:
        raise PreconditionReport("summands are not orthogonal")

    def gram(basis, r):
        if r == 0:
            return []
        return ring.matmul(ring.matmul(ring.transpose(basis), lam), basis)

    g_s, g_p = gram(s_basis, r_s), gram(p_basis, r_p)
    for name, g, basis, r in (("s", g_s, s_basis, r_s), ("psi", g_p, p_basis, r_p)):
        if r and not ring.is_unit(ring.det(g)):
            # witness: a basis vector of the summand in the radical modulo p
            ker = nullspace_mod_p(g, ring.p, r)
            vec = [sum(basis[i][k] * ker[0][k] for k in range(r)) % ring.mod for i in range(n)]
            raise PreconditionReport(f"restricted form on {name} is degenerate",
                                     {"summand": name, "vector": vec})
    block_s = [row[:r_s] for row in coords[:r_s]]
    block_p = [row[r_s:] for row in coords[r_s:]]
    cs = charpoly(block_s, ring) if r_s else (1,)
    cp = charpoly(block_p, ring) if r_p else (1,)
    recombined = upoly.mul(cs, cp, ring.mod) == chi
    if not recombined:
        raise PreconditionReport("restricted characteristic polynomials do not recombine")
    return SplitResult(s_basis, p_basis, g_s, g_p, cs, cp,
                       {"stable": stable, "orthogonal": orthogonal,
                        "nondegenerate": True, "recombined": recombined,
                        "resultant": res})


def diagonal_torus_element(values: Sequence[int], n: int, ring: Ring) -> list[list[int]]:
    """``diag(a_1..a_m [,1], a_m^{-1}..a_1^{-1})`` preserving any anti-diagonal form."""
    m = n // 2
    if len(values) != m:
        raise ValidationError(f"need {m} values", "values")
    d = [ring(v) for v in values]
    inv = [ring.inv(v) for v in d]
    diag = d + ([1] if n % 2 else []) + inv[::-1]
    return [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)]


def random_split_instance(form: BilinearForm, ring: Ring, rng: random.Random, b_pairs=1):
    """A conjugated torus element with distinct residual eigenvalue pairs.

    Returns ``(M, A, B)`` where ``B`` collects the first ``b_pairs`` pairs
    ``(X - a)(X - 1/a)`` and ``A`` the rest (with ``X - 1`` for odd size).
    """
    n = form.size
    m = n // 2
    p = ring.p
    pool = [a for a in range(2, p - 1) if a * a % p != 1]
    chosen: list[int] = []
    rng.shuffle(pool)
    for a in pool:
        if len(chosen) == m:
            break
        if all(a != c and a * c % p != 1 for c in chosen):
            chosen.append(a)
    if len(chosen) < m:
        raise ValidationError(f"p={p} too small for {m} distinct eigenvalue pairs", "p")
    vals = [a + p * rng.randrange(ring.mod // p) for a in chosen]
    d = diagonal_torus_element(vals, n, ring)
    g = random_isometry(form, ring, rng)
    mat = ring.matmul(ring.matmul(g, d), ring.matinv(g))
    pairs = [upoly.from_roots([ring(v), ring.inv(ring(v))], ring.mod) for v in vals]
    b = upoly.product(pairs[:b_pairs], ring.mod)
    a = upoly.product(pairs[b_pairs:], ring.mod)
    if n % 2:
        a = upoly.mul(a, (ring.mod - 1, 1), ring.mod)
    return mat, a, b


# ---------------------------------------------------------------------------
# derivations and descent from dual numbers


def _elem(n: int, i: int, j: int):
    return [[1 if (r, c) == (i, j) else 0 for c in range(n)] for r in range(n)]


def _mm(a, b, p):
    return Ring(p).matmul(a, b)


def _sub(a, b, p):
    return [[(x - y) % p for x, y in zip(r, s)] for r, s in zip(a, b)]


def _add(a, b, p):
    return [[(x + y) % p for x, y in zip(r, s)] for r, s in zip(a, b)]


def inner_derivation_table(b, p: int) -> dict:
    """``{(i, j): B E_ij - E_ij B}`` for all elementary matrices."""
    n = len(b)
    return {(i, j): _sub(_mm(b, _elem(n, i, j), p), _mm(_elem(n, i, j), b, p), p)
            for i in range(n) for j in range(n)}


def inner_derivation_matrix(phi: Mapping, n: int, p: int):
    """``A = sum_j phi(E_{j1}) E_{1j}`` with ``phi(a) = A a - a A`` verified.

    ``phi`` maps 0-based pairs ``(i, j)`` to ``phi(E_ij)``; the derivation rule
    ``phi(E_ij E_kl) = E_ij phi(E_kl) + phi(E_ij) E_kl`` is validated first.
    """
    table = {}
    for i in range(n):
        for j in range(n):
            if (i, j) not in phi:
                raise ValidationError(f"missing phi(E_{i + 1}{j + 1})", "phi")
            v = [[int(x) % p for x in r] for r in phi[(i, j)]]
            _check_square(v, n, f"phi[{i},{j}]")
            table[(i, j)] = v
    zero = [[0] * n for _ in range(n)]
    for (i, j), pij in table.items():
        eij = _elem(n, i, j)
        for (k, l), pkl in table.items():
            lhs = table[(i, l)] if j == k else zero
            rhs = _add(_mm(eij, pkl, p), _mm(pij, _elem(n, k, l), p), p)
            if lhs != rhs:
                raise ValidationError(f"derivation rule fails on E_{i + 1}{j + 1} * "
                                      f"E_{k + 1}{l + 1}", "phi")
    a = zero
    for j in range(n):
        a = _add(a, _mm(table[(j, 0)], _elem(n, 0, j), p), p)
    for (i, j), v in table.items():
        e = _elem(n, i, j)
        assert _sub(_mm(a, e, p), _mm(e, a, p), p) == v
    return a


def _vec(m):
    return [x for r in m for x in r]


def _solve_mod_p(cols: list[list[int]], target: list[int], p: int) -> list[int]:
    """Coefficients ``c`` with ``sum c_k cols[k] = target`` (columns independent)."""
    k = len(cols)
    aug = [[cols[c][r] for c in range(k)] + [target[r]] for r in range(len(target))]
    red, piv = rref_mod_p(aug, p)
    if k in piv:
        raise ValidationError("target outside the span")
    sol = [0] * k
    for row, pc in zip(red, piv):
        sol[pc] = row[k]
    return sol


def algebra_span_words(gens: Sequence, p: int, limit: int = 10000):
    """Breadth-first products of generators; returns words whose images form a basis
    of the generated algebra, as ``(word, residual image)`` pairs."""
    n = len(gens[0])
    ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    basis: list[tuple[tuple[int, ...], list]] = [((), ident)]
    rows = [_vec(ident)]
    frontier = [((), ident)]
    seen = 0
    while frontier and len(basis) < n * n:
        nxt = []
        for word, mat in frontier:
            for gi, g in enumerate(gens):
                cand = _mm(mat, g, p)
                seen += 1
                if seen > limit:
                    return basis
                if rank_mod_p(rows + [_vec(cand)], p) > len(rows):
                    rows.append(_vec(cand))
                    basis.append((word + (gi,), cand))
                    nxt.append((word + (gi,), cand))
        frontier = nxt
    return basis


def _dual_mul(x, y, p):
    (a0, a1), (b0, b1) = x, y
    return _mm(a0, b0, p), _add(_mm(a0, b1, p), _mm(a1, b0, p), p)


def descend_dual_numbers(rho: Sequence, form: BilinearForm, p: int) -> dict:
    """Conjugate a form-preserving representation over ``F_p[eps]`` back to ``F_p``.

    ``rho`` lists generator images as pairs ``(rho0, rho1)`` meaning
    ``rho0 + rho1 eps``.  Returns ``A'`` and ``g = 1 + A' eps`` with
    ``g^t L g = L`` and ``g^{-1} rho g = rho0``.
    """
    if p == 2 or not Ring(p).is_field:
        raise ValidationError("need an odd prime", "p")
    n = form.size
    lam = form.over(Ring(p))
    gens = [([[int(x) % p for x in r] for r in g0], [[int(x) % p for x in r] for r in g1])
            for g0, g1 in rho]
    for k, (g0, g1) in enumerate(gens):
        _check_square(g0, n, f"rho[{k}][0]")
        _check_square(g1, n, f"rho[{k}][1]")
        # (g0 + g1 eps)^t L (g0 + g1 eps) = L
        t0 = _mm(_mm(Ring.transpose(g0), lam, p), g0, p)
        t1 = _add(_mm(_mm(Ring.transpose(g1), lam, p), g0, p),
                  _mm(_mm(Ring.transpose(g0), lam, p), g1, p), p)
        if t0 != lam or any(x for r in t1 for x in r):
            raise ValidationError("generator does not preserve the form", f"rho[{k}]")
    words = algebra_span_words([g[0] for g in gens], p)
    if len(words) < n * n:
        raise PreconditionReport("residual image does not span the full matrix algebra",
                                 {"span_dim": len(words)})
    ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    zero = [[0] * n for _ in range(n)]
    lifted = []
    for word, _ in words:
        acc = (ident, zero)
        for gi in word:
            acc = _dual_mul(acc, gens[gi], p)
        lifted.append(acc)
    cols = [_vec(x[0]) for x in lifted]
    phi = {}
    for i in range(n):
        for j in range(n):
            coeffs = _solve_mod_p(cols, _vec(_elem(n, i, j)), p)
            v = zero
            for c, (_, l1) in zip(coeffs, lifted):
                if c:
                    v = _add(v, [[c * x % p for x in r] for r in l1], p)
            phi[(i, j)] = v
    try:
        a = inner_derivation_matrix(phi, n, p)
    except ValidationError as exc:
        raise PreconditionReport(f"epsilon-part is not a derivation ({exc})") from None
    for k, (g0, g1) in enumerate(gens):
        if _sub(_mm(a, g0, p), _mm(g0, a, p), p) != g1:
            raise PreconditionReport("traces not in the residue field: epsilon-part is "
                                     "not inner on a generator", {"generator": k})
    lam_inv = Ring(p).matinv(lam)
    corr = _mm(lam_inv, _add(_mm(Ring.transpose(a), lam, p), _mm(lam, a, p), p), p)
    b = corr[0][0]
    if corr != [[b if i == j else 0 for j in range(n)] for i in range(n)]:
        raise PreconditionReport("form correction is not scalar", {"matrix": corr})
    half_b = b * pow(2, -1, p) % p
    a_prime = _sub(a, [[half_b if i == j else 0 for j in range(n)] for i in range(n)], p)
    g = (ident, a_prime)
    g_inv = (ident, [[-x % p for x in r] for r in a_prime])
    gt_l_g = _add(_mm(Ring.transpose(a_prime), lam, p), _mm(lam, a_prime, p), p)
    assert not any(x for r in gt_l_g for x in r), "g is not an isometry"
    conj = []
    for g0, g1 in gens:
        c0, c1 = _dual_mul(_dual_mul(g_inv, (g0, g1), p), g, p)
        assert not any(x for r in c1 for x in r), "conjugate is not residual"
        conj.append(c0)
    return {"A_prime": a_prime, "A": a, "b": b, "g": g, "conjugated": conj,
            "span_words": [list(w) for w, _ in words]}


def twisted_representation(rho_bar: Sequence, b, p: int):
    """``rho = rho_bar + (B rho_bar - rho_bar B) eps`` for each generator."""
    return [(g, _sub(_mm(b, g, p), _mm(g, b, p), p)) for g in rho_bar]
