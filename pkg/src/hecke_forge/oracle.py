"""Brute-force ground truth.

* enumeration of the finite classical groups ``G(F_q)`` for tiny ``n, q``;
* flag counts ``#G/P_Theta`` against Weyl Poincare sums;
* the index of ``U ς U`` for the level subgroups ``U_0, U_1`` by residue counting;
* the spherical operator on the unramified line, summed over the explicit
  coset representatives ``J(I, J)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import config
from .errors import ValidationError
from .galsplit import BilinearForm, group_form
from .modring import bareiss_det, is_prime
from .weyl import GroupDescriptor, IntervalPartition, Kind, poincare_sum


# ---------------------------------------------------------------------------
# finite classical groups


@dataclass
class FiniteClassicalGroup:
    desc: GroupDescriptor
    form: BilinearForm
    q: int
    elements: np.ndarray        # shape (count, n, n), entries in [0, q)

    def __len__(self) -> int:
        return len(self.elements)


def classical_order(desc: GroupDescriptor, q: int) -> int:
    """Order of ``G(F_q)`` from the standard product formulas (det 1 subgroup)."""
    m = desc.n // 2
    if desc.kind is Kind.SP:
        out = q ** (m * m)
        for i in range(1, m + 1):
            out *= q ** (2 * i) - 1
        return out
    if desc.kind is Kind.SO_ODD:
        out = q ** (m * m)
        for i in range(1, m + 1):
            out *= q ** (2 * i) - 1
        return out
    eps = 1 if desc.kind is Kind.SO_EVEN_SPLIT else -1
    out = q ** (m * (m - 1)) * (q ** m - eps)
    for i in range(1, m):
        out *= q ** (2 * i) - 1
    return out


def _check_oracle_size(n: int, q: int) -> None:
    g = config.guards()
    config.check("n", n, g.oracle_max_n)
    config.check("q", q, g.oracle_max_q)
    if not is_prime(q) or q == 2:
        raise ValidationError(f"q={q} must be an odd prime", "q")


def enumerate_points(desc: GroupDescriptor, q: int, u: int = 2) -> FiniteClassicalGroup:
    """All ``M`` over ``F_q`` with ``M^t L M = L`` and ``det M = 1``.

    Columns are chosen one at a time; a candidate column ``v`` must pair with
    every earlier column ``c_k`` as ``c_k^t L v = L_{k, j}`` and with itself as
    ``v^t L v = L_{j, j}``.
    """
    n = desc.n
    _check_oracle_size(n, q)
    form = group_form(desc, u)
    lam = np.array(form.matrix, dtype=np.int64) % q
    vecs = np.array(list(itertools.product(range(q), repeat=n)), dtype=np.int64)
    lam_v = (vecs @ lam.T) % q            # row k: L v_k
    self_pair = np.einsum("ij,ij->i", vecs, lam_v) % q

    found: list[np.ndarray] = []

    def rec(cols: list[int]):
        j = len(cols)
        if j == n:
            m = vecs[cols].T
            if bareiss_det(m.tolist()) % q == 1:
                found.append(m.copy())
            return
        mask = self_pair == lam[j, j]
        for k, c in enumerate(cols):
            # c^t L v = (L^t c) . v
            lt_c = (lam.T @ vecs[c]) % q
            mask &= (vecs @ lt_c) % q == lam[k, j]
            # v^t L c = L_{j,k}
            mask &= (lam_v[c] @ vecs.T) % q == lam[j, k]
        for idx in np.nonzero(mask)[0]:
            rec(cols + [int(idx)])

    rec([])
    elements = np.array(found, dtype=np.int64).reshape(-1, n, n)
    return FiniteClassicalGroup(desc, form, q, elements)


def row_levels(desc: GroupDescriptor, theta: IntervalPartition) -> list[int]:
    """Position of each matrix row in the block-upper-triangular pattern of ``P_Theta``.

    Row ``r <= n_s`` carries the label ``n_s + 1 - r`` and its mirror row the
    same label; rows whose label lies in the block of 0 (and the middle rows)
    form the central block.
    """
    n, ns = desc.n, desc.n_s
    nb = len(theta.blocks)
    levels = [nb - 1] * n
    for r in range(ns):
        label = ns - r
        b = theta.block_of(label)
        if b:
            levels[r] = nb - 1 - b
            levels[n - 1 - r] = nb - 1 + b
    return levels


def parabolic_mask(group: FiniteClassicalGroup, theta: IntervalPartition) -> np.ndarray:
    lv = np.array(row_levels(group.desc, theta))
    below = lv[:, None] > lv[None, :]
    return ~np.any(group.elements[:, below] != 0, axis=1)


def flag_count(group: FiniteClassicalGroup, theta: IntervalPartition) -> dict:
    """``#G / #P_Theta`` against ``sum_{W^Theta} q^length``."""
    if theta.n_s != group.desc.n_s:
        raise ValidationError("partition has the wrong rank", "theta")
    p_size = int(parabolic_mask(group, theta).sum())
    g_size = len(group)
    if g_size % p_size:
        raise AssertionError("parabolic order does not divide the group order")
    expected = poincare_sum(group.desc, theta, group.q)
    return {"group_order": g_size, "parabolic_order": p_size, "flags": g_size // p_size,
            "poincare": int(expected), "agree": g_size // p_size == expected}


def count_double_cosets(group: FiniteClassicalGroup, theta: IntervalPartition,
                        omega: IntervalPartition) -> int:
    """``#P_Omega \\ G / P_Theta``: label the cosets ``g P_Theta``, then count the
    ``P_Omega`` orbits on the labels."""
    q = group.q
    els = group.elements
    key = {m.tobytes(): i for i, m in enumerate(els)}
    p_theta = els[parabolic_mask(group, theta)]
    p_omega = els[parabolic_mask(group, omega)]
    label = np.full(len(els), -1, dtype=np.int64)
    reps = []
    for i in range(len(els)):
        if label[i] >= 0:
            continue
        for m in np.einsum("ij,kjl->kil", els[i], p_theta) % q:
            label[key[m.tobytes()]] = len(reps)
        reps.append(i)
    seen = np.zeros(len(reps), dtype=bool)
    count = 0
    for c, i in enumerate(reps):
        if seen[c]:
            continue
        count += 1
        for m in np.einsum("kij,jl->kil", p_omega, els[i]) % q:
            seen[label[key[m.tobytes()]]] = True
    return count


# ---------------------------------------------------------------------------
# U_0 / U_1 double cosets


def varsigma_valuations(n: int, j: int) -> list[int]:
    """Valuations of ``diag(ϖ 1_j, 1_{n-2j}, ϖ^{-1} 1_j)``."""
    if not 1 <= j <= n // 2:
        raise ValidationError(f"j={j} outside 1..{n // 2}", "j")
    return [1] * j + [0] * (n - 2 * j) + [-1] * j


def _level_pattern(n: int, n0: int):
    """Block index of each row and position inside the outer blocks."""
    if not 1 <= n0 <= n // 2:
        raise ValidationError(f"n_0={n0} outside 1..{n // 2}", "n0")
    return [0] * n0 + [1] * (n - 2 * n0) + [2] * n0


def _entry_bound(u_kind: str, n: int, n0: int, m: int, s: int, t: int):
    """(lower valuation bound, congruent-to-one flag) for entry ``(s, t)`` of ``U``."""
    blk = _level_pattern(n, n0)
    if blk[s] > blk[t]:
        return m, False
    if blk[s] == blk[t] and blk[s] != 1:
        if s > t:
            return m, False
        if s == t:
            return 0, u_kind == "U1"
    return 0, False


def _entry_index_bruteforce(u_kind, n, n0, m, s, t, vals, q) -> int:
    """Ratio of residue counts modulo ``q^(m+2)`` for one entry."""
    prec = m + 2
    mod = q ** prec
    base, one = _entry_bound(u_kind, n, n0, m, s, t)
    shift = vals[s] - vals[t]

    def val(x):
        if x == 0:
            return prec
        v = 0
        while x % q == 0:
            x //= q
            v += 1
        return v

    def ok(x, extra):
        if s == t:
            if one:
                return (x - 1) % (q ** m) == 0
            return x % q != 0
        return val(x) >= base + extra

    full = sum(1 for x in range(mod) if ok(x, 0))
    inter = sum(1 for x in range(mod) if ok(x, 0) and ok(x, max(0, shift)))
    assert full % inter == 0
    return full // inter


def _check_u(u_kind: str, m: int):
    if u_kind not in ("U0", "U1"):
        raise ValidationError(f"unknown level subgroup {u_kind!r}", "U_kind")
    if m not in (1, 2):
        raise ValidationError("m must be 1 or 2", "m")


def double_coset_index(u_kind: str, n: int, j: int, n0: int, m: int, q: int) -> int:
    """``[U : U ∩ ς U ς^{-1}]`` in the matrix model, by per-entry residue counting.

    ``U`` is block upper triangular modulo ``ϖ^m`` with block sizes
    ``(n_0, n - 2 n_0, n_0)`` and Borel (``U0``) or unipotent (``U1``) outer
    diagonal blocks.  Both ``U`` and the intersection are cut out by entrywise
    valuation conditions, so the index is a product over entries.
    """
    _check_u(u_kind, m)
    config.check("n", n, 2 * config.guards().oracle_max_n)
    vals = varsigma_valuations(n, j)
    _level_pattern(n, n0)
    out = 1
    for s in range(n):
        for t in range(n):
            out *= _entry_index_bruteforce(u_kind, n, n0, m, s, t, vals, q)
    return out


def double_coset_index_whole(u_kind: str, n: int, j: int, n0: int, m: int, q: int,
                             limit: int = 2_000_000) -> int:
    """Same index from whole matrices modulo ``q^(m+2)`` (only for tiny ``n``).

    Counts invertible residue matrices in ``U`` and in ``U ∩ ς U ς^{-1}``; both
    contain the principal congruence subgroup of level ``m + 2``.
    """
    _check_u(u_kind, m)
    prec = m + 2
    mod = q ** prec
    if mod ** (n * n) > limit:
        raise ValidationError("whole-matrix enumeration too large", "n")
    vals = varsigma_valuations(n, j)
    blk = _level_pattern(n, n0)
    qm = q ** m

    def in_u(g):
        for s in range(n):
            for t in range(n):
                x = g[s][t]
                if blk[s] > blk[t] or (blk[s] == blk[t] != 1 and s > t):
                    if x % qm:
                        return False
                elif s == t and blk[s] != 1 and u_kind == "U1" and (x - 1) % qm:
                    return False
        return True

    total = inter = 0
    for flat in itertools.product(range(mod), repeat=n * n):
        g = [flat[r * n:(r + 1) * n] for r in range(n)]
        if bareiss_det(g) % q == 0 or not in_u(g):
            continue
        total += 1
        # conj = ς^{-1} g ς has entries ϖ^{v_t - v_s} g_st and must lie in U
        conj = []
        good = True
        for s in range(n):
            row = []
            for t in range(n):
                d = vals[t] - vals[s]
                x = g[s][t]
                if d < 0:
                    if x % q ** (-d):
                        good = False
                        break
                    x //= q ** (-d)
                else:
                    x *= q ** d
                row.append(x % qm)
            if not good:
                break
            conj.append(row)
        if good and in_u(conj):
            inter += 1
    assert total % inter == 0
    return total // inter


def representative_count(n: int, j: int, n0: int, q: int) -> int:
    """``#I`` for the explicit representative sets: off-diagonal blocks ``k < l``,
    plus the split outer diagonal blocks when ``j < n_0``.  The middle block
    ``b_22`` is held fixed by the sets."""
    vals = varsigma_valuations(n, j)
    blk = _level_pattern(n, n0)
    e = 0
    for s in range(n):
        for t in range(s + 1, n):
            if blk[s] < blk[t] or (blk[s] == blk[t] != 1):
                e += max(0, vals[s] - vals[t])
    return q ** e


def index_formula(n: int, j: int) -> int:
    """Exponent ``sum_{s<t} (v_s - v_t)`` of the full index."""
    vals = varsigma_valuations(n, j)
    return sum(max(0, vals[s] - vals[t]) for s in range(n) for t in range(s + 1, n))


# ---------------------------------------------------------------------------
# coset representatives J(I, J) for the spherical operators


@dataclass(frozen=True)
class JEntry:
    part: str        # "J1" or "J2"
    row: int         # 1-based matrix position
    col: int
    residues: str    # "X" (mod ϖ) or "Y" (mod ϖ^2)

    @property
    def log_size(self) -> int:
        return 1 if self.residues == "X" else 2


def _check_ij(desc: GroupDescriptor, subset_i, subset_j):
    ns = desc.n_s
    big_i = tuple(sorted(subset_i))
    big_j = tuple(sorted(subset_j))
    if not set(big_i) <= set(range(1, ns + 1)) or len(set(big_i)) != len(big_i):
        raise ValidationError(f"I={big_i} is not a subset of 1..{ns}", "I")
    if not set(big_j) <= set(big_i):
        raise ValidationError("J must be a subset of I", "J")
    return big_i, big_j


def jset_entries(desc: GroupDescriptor, subset_i, subset_j) -> list[JEntry]:
    """Free entries of the representatives ``g_1 g_2`` with their residue sets.

    ``J1``: entries ``(i, l)`` with ``i < l <= n_s`` (``Y`` if ``i ∈ J, l ∉ J``;
    ``X`` if ``i ∉ I, l ∈ I``) and the middle columns in rows ``i ∈ I``.
    ``J2``: entries ``(i, n + 1 - l)`` with ``Y`` for ``i < l`` both in ``J``, and
    ``X`` for ``i ∉ I`` with ``l ∈ I`` or with ``l ∉ I, l > i``.
    """
    big_i, big_j = _check_ij(desc, subset_i, subset_j)
    n, ns = desc.n, desc.n_s
    out = []
    for i in range(1, ns + 1):
        for l in range(i + 1, ns + 1):
            if i in big_j and l not in big_j:
                out.append(JEntry("J1", i, l, "Y"))
            elif i not in big_i and l in big_i:
                out.append(JEntry("J1", i, l, "X"))
        if i in big_i:
            for c in range(ns + 1, n - ns + 1):
                out.append(JEntry("J1", i, c, "X"))
    for i in range(1, ns + 1):
        for l in range(1, ns + 1):
            col = n + 1 - l
            if i < l and i in big_j and l in big_j:
                out.append(JEntry("J2", i, col, "Y"))
            elif i not in big_i and (l in big_i or (l > i and l not in big_i)):
                out.append(JEntry("J2", i, col, "X"))
    assert len({(e.row, e.col) for e in out}) == len(out)
    return out


def jset_log_count(desc: GroupDescriptor, subset_i, subset_j) -> int:
    """``log_q #J(I, J)`` from the entry pattern."""
    return sum(e.log_size for e in jset_entries(desc, subset_i, subset_j))


def jset_log_count_closed(desc: GroupDescriptor, subset_i, subset_j,
                          corrected: bool = True) -> int:
    """The closed-form exponent; ``corrected=False`` evaluates the literal formula,
    whose last sum lacks the ``+k`` that the entry count requires."""
    big_i, big_j = _check_ij(desc, subset_i, subset_j)
    n, ns = desc.n, desc.n_s
    s, t = len(big_i), len(big_j)
    rest = [x for x in range(1, ns + 1) if x not in big_i]
    v = t * (t - 1) + (ns - s) * s + (ns - s) * (ns - s - 1) // 2 + (n - 2 * ns) * s
    v += 2 * sum(ns - big_j[k - 1] - (t - k) for k in range(1, t + 1))
    v += sum(ns - rest[k - 1] - (ns - s) + (k if corrected else 0)
             for k in range(1, ns - s + 1))
    return v


def enumerate_jset(desc: GroupDescriptor, subset_i, subset_j, q: int, limit: int = 10 ** 6):
    """Iterate over the residue tuples of the free entries (brute force)."""
    entries = jset_entries(desc, subset_i, subset_j)
    sizes = [q ** e.log_size for e in entries]
    if math.prod(sizes) > limit:
        raise ValidationError("representative set too large to enumerate", "I")
    return itertools.product(*(range(s) for s in sizes))


def phi_exponent(desc: GroupDescriptor, subset_i, subset_j, literal: bool = False) -> Fraction:
    """q-exponent of ``phi(b)`` on ``J(I, J)``.

    The reconciled value is ``-(n_s + 1 - l)`` per ``l ∈ J`` and ``+(n_s + 1 - l)``
    per ``l ∈ I - J``; ``literal=True`` uses ``(n_s - 2(l - 1) + n_s + 1)/2``,
    which is a half-integer.
    """
    big_i, big_j = _check_ij(desc, subset_i, subset_j)
    ns = desc.n_s
    out = Fraction(0)
    for l in big_i:
        a = Fraction(ns - 2 * (l - 1) + ns + 1, 2) if literal else Fraction(ns + 1 - l)
        out += -a if l in big_j else a
    return out


def spherical_coset_sum(desc: GroupDescriptor, j: int, chi: Sequence, q, literal: bool = False):
    """``(T^(j) phi)(1)`` summed over the representatives ``J(I, J)``.

    Scalars may be Fractions or :class:`~hecke_forge.laurent.LaurentPoly`
    monomials.  The symplectic case carries an extra ``q^{n_s}`` from the
    modulus character; ``literal=True`` drops it and uses the literal
    closed form and ``phi`` exponent (the result then generally differs).
    """
    from .laurent import LaurentPoly

    ns = desc.n_s
    config.check("n_s", ns, config.guards().max_ns)
    if not 1 <= j <= ns:
        raise ValidationError(f"j={j} outside 1..{ns}", "j")
    if len(chi) != ns:
        raise ValidationError(f"need {ns} values", "chi")
    chi = [Fraction(c) if isinstance(c, (int, str)) else c for c in chi]
    q = Fraction(q) if isinstance(q, (int, str)) else q

    def qpow(e: Fraction):
        if e.denominator != 1:
            if isinstance(q, LaurentPoly):
                return LaurentPoly.q(q.nz, e) if q == LaurentPoly.q(q.nz) else None
            return None
        e = int(e)
        return q ** e if e >= 0 else (1 / q) ** (-e)

    total = 0
    for big_i in itertools.combinations(range(1, ns + 1), j):
        for t in range(j + 1):
            for big_j in itertools.combinations(big_i, t):
                if literal:
                    e = Fraction(jset_log_count_closed(desc, big_i, big_j, corrected=False))
                    e += phi_exponent(desc, big_i, big_j, literal=True)
                else:
                    e = Fraction(jset_log_count(desc, big_i, big_j))
                    e += phi_exponent(desc, big_i, big_j)
                    if desc.is_sp:
                        e += ns
                factor = qpow(e)
                if factor is None:
                    raise ValidationError("half-integral q-power needs a symbolic q", "q")
                term = factor
                for l in big_i:
                    term = term * (chi[l - 1] if l in big_j else 1 / chi[l - 1])
                total = total + term
    return total
