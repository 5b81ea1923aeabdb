"""Signed-permutation Weyl groups of types B and D.

Elements act on ``{0, ±1, ..., ±n_s}``, fix 0 and commute with negation; an
element is stored through its window ``(w(1), ..., w(n_s))``.  Composition is
ordinary composition of maps, ``group_op(u, w)(i) = u(w(i))``.

Parabolic conventions used throughout the package:

* a subset Theta of ``{0, ..., n_s-1}`` is carried as an
  :class:`IntervalPartition` of ``{0, ..., n_s}``;
* ``W_Theta`` acts on *positions*, so ``W^Theta`` (:func:`min_coset_reps`) is
  the set of minimal elements of the left cosets ``w W_Theta``.  These are the
  windows that increase along every Theta-block, with ``w(0) = 0`` prepended
  for the block containing 0;
* ``W_Omega`` acts on *values*, so ``^Omega W^Theta``
  (:func:`double_coset_reps`) is the set of minimal elements of the double
  cosets ``W_Omega w W_Theta``: ``w`` increases on Theta-blocks of positions
  and ``w^{-1}`` increases on Omega-blocks of values.

In type D the parabolic subgroup is ``W_Theta(B) ∩ D``.  It is the standard
parabolic generated by the D-simple reflections inside Theta, where the
D-reflection ``[-2, -1, 3, ...]`` belongs to Theta exactly when 0 and 1 do.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from . import config
from .errors import ValidationError


class Kind(str, enum.Enum):
    SO_ODD = "SOodd"
    SO_EVEN_SPLIT = "SOevenSplit"
    SO_EVEN_QUASI = "SOevenQuasi"
    SP = "Sp"


KIND_ALIASES = {
    "so-odd": Kind.SO_ODD,
    "so-even-split": Kind.SO_EVEN_SPLIT,
    "so-even-quasi": Kind.SO_EVEN_QUASI,
    "sp": Kind.SP,
}


def parse_kind(text: str | Kind) -> Kind:
    if isinstance(text, Kind):
        return text
    key = str(text)
    if key in KIND_ALIASES:
        return KIND_ALIASES[key]
    for k in Kind:
        if k.value == key or k.name == key:
            return k
    raise ValidationError(
        f"unknown group kind {text!r}; expected one of {sorted(KIND_ALIASES)}", "kind")


@dataclass(frozen=True)
class GroupDescriptor:
    kind: Kind
    n: int

    @property
    def is_sp(self) -> bool:
        return self.kind is Kind.SP

    @property
    def n_s(self) -> int:
        r = self.n // 2
        return r - 1 if self.kind is Kind.SO_EVEN_QUASI else r

    @property
    def N(self) -> int:
        """Size of the matrices in the C-dual group."""
        return self.n + 1 if self.is_sp else 2 * (self.n // 2)

    @property
    def weyl_flavor(self) -> str:
        return "D" if self.kind in (Kind.SO_EVEN_SPLIT, Kind.SO_EVEN_QUASI) else "B"

    def satake_exponent_base(self, j: int) -> int:
        """q-exponent E(j) in front of the j-th Satake image."""
        ns = self.n_s
        base = ns * (ns + 1) // 2 if self.is_sp else ns * (ns - 1) // 2
        return base + (self.n - ns - j) * j

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "n": self.n, "n_s": self.n_s, "N": self.N,
                "weyl_flavor": self.weyl_flavor}


def make_group(kind: str | Kind, n: int) -> GroupDescriptor:
    kind = parse_kind(kind)
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValidationError("must be an integer", "n")
    if n < 2:
        raise ValidationError(f"n={n} is too small (need n >= 2)", "n")
    if kind is Kind.SO_ODD:
        if n % 2 == 0:
            raise ValidationError(f"SOodd needs odd n, got {n}", "n")
        if n < 3:
            raise ValidationError("SOodd needs n >= 3", "n")
    else:
        if n % 2:
            raise ValidationError(f"{kind.value} needs even n, got {n}", "n")
        if kind is Kind.SO_EVEN_QUASI and n < 4:
            raise ValidationError("SOevenQuasi needs n >= 4", "n")
    return GroupDescriptor(kind, n)


# --------------------------------------------------------------------------
# elements


@dataclass(frozen=True, order=True)
class SignedPermutation:
    window: tuple[int, ...]
    flavor: str = "B"

    def __post_init__(self):
        w = tuple(int(x) for x in self.window)
        object.__setattr__(self, "window", w)
        n = len(w)
        if sorted(abs(x) for x in w) != list(range(1, n + 1)):
            raise ValidationError(f"{list(w)} is not a signed permutation of 1..{n}", "window")
        if self.flavor not in ("B", "D"):
            raise ValidationError(f"unknown flavor {self.flavor!r}", "flavor")
        if self.flavor == "D" and sum(x < 0 for x in w) % 2:
            raise ValidationError(f"{list(w)} has an odd number of negative entries", "window")

    @property
    def n_s(self) -> int:
        return len(self.window)

    def __call__(self, i: int) -> int:
        return _apply(self.window, i)

    def __repr__(self) -> str:
        return f"[{','.join(map(str, self.window))}]"


def _apply(w: Sequence[int], i: int) -> int:
    if i == 0:
        return 0
    return w[i - 1] if i > 0 else -w[-i - 1]


def _compose(u: Sequence[int], w: Sequence[int]) -> tuple[int, ...]:
    return tuple(_apply(u, x) for x in w)


def _inverse(w: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(w)
    for i, x in enumerate(w, start=1):
        inv[abs(x) - 1] = i if x > 0 else -i
    return tuple(inv)


def identity(n_s: int, flavor: str = "B") -> SignedPermutation:
    return SignedPermutation(tuple(range(1, n_s + 1)), flavor)


def group_op(u: SignedPermutation, w: SignedPermutation) -> SignedPermutation:
    if u.n_s != w.n_s or u.flavor != w.flavor:
        raise ValidationError("elements have different rank or flavor")
    return SignedPermutation(_compose(u.window, w.window), u.flavor)


def invert(w: SignedPermutation) -> SignedPermutation:
    return SignedPermutation(_inverse(w.window), w.flavor)


def _length(w: Sequence[int], flavor: str) -> int:
    n = len(w)
    inv = nsp = 0
    for i in range(n):
        for j in range(i + 1, n):
            if w[i] > w[j]:
                inv += 1
            if w[i] + w[j] < 0:
                nsp += 1
    if flavor == "B":
        return inv + nsp + sum(1 for x in w if x < 0)
    return inv + nsp


def length(w: SignedPermutation) -> int:
    """Coxeter length, via the signed inversion statistic."""
    return _length(w.window, w.flavor)


def generators(desc: GroupDescriptor) -> list[SignedPermutation]:
    """``[s_0, s_1, ..., s_{n_s-1}]``; type D of rank 1 has none."""
    ns, fl = desc.n_s, desc.weyl_flavor
    return [SignedPermutation(g, fl) for g in _generator_windows(ns, fl)]


def _generator_windows(ns: int, flavor: str) -> list[tuple[int, ...]]:
    base = list(range(1, ns + 1))
    out = []
    if flavor == "B":
        s0 = base.copy()
        s0[0] = -1
        out.append(tuple(s0))
    elif ns >= 2:
        s0 = base.copy()
        s0[0], s0[1] = -2, -1
        out.append(tuple(s0))
    for i in range(1, ns):
        s = base.copy()
        s[i - 1], s[i] = s[i], s[i - 1]
        out.append(tuple(s))
    return out


# --------------------------------------------------------------------------
# partitions


@dataclass(frozen=True)
class IntervalPartition:
    """Consecutive blocks ``[lo, hi]`` covering ``{0, ..., n_s}``."""

    blocks: tuple[tuple[int, int], ...]

    def __post_init__(self):
        blocks = tuple((int(lo), int(hi)) for lo, hi in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if not blocks:
            raise ValidationError("partition has no blocks", "blocks")
        expect = 0
        for k, (lo, hi) in enumerate(blocks):
            if lo != expect or hi < lo:
                raise ValidationError(
                    f"block {k} = [{lo},{hi}] does not continue a cover of I(0,n_s)",
                    f"blocks[{k}]")
            expect = hi + 1

    @property
    def n_s(self) -> int:
        return self.blocks[-1][1]

    @property
    def q(self) -> int:
        return len(self.blocks)

    @property
    def sizes(self) -> tuple[int, ...]:
        """``#I_j``; the first block counts the index 0."""
        return tuple(hi - lo + 1 for lo, hi in self.blocks)

    @property
    def theta(self) -> frozenset[int]:
        return frozenset(i for lo, hi in self.blocks for i in range(lo, hi))

    def block_of(self, i: int) -> int:
        """0-based index of the block containing ``|i|``."""
        i = abs(i)
        for k, (lo, hi) in enumerate(self.blocks):
            if lo <= i <= hi:
                return k
        raise ValidationError(f"{i} is outside I(0,{self.n_s})")

    def members(self, k: int) -> range:
        lo, hi = self.blocks[k]
        return range(lo, hi + 1)

    @classmethod
    def from_theta(cls, n_s: int, theta: Iterable[int]) -> "IntervalPartition":
        theta = set(theta)
        bad = [t for t in theta if not 0 <= t < n_s]
        if bad:
            raise ValidationError(f"entries {sorted(bad)} not in {{0..{n_s - 1}}}", "theta")
        blocks, lo = [], 0
        for i in range(n_s + 1):
            if i not in theta:
                blocks.append((lo, i))
                lo = i + 1
        return cls(tuple(blocks))

    @classmethod
    def singletons(cls, n_s: int) -> "IntervalPartition":
        return cls.from_theta(n_s, ())

    @classmethod
    def whole(cls, n_s: int) -> "IntervalPartition":
        return cls.from_theta(n_s, range(n_s))

    @classmethod
    def from_json(cls, data, n_s: int | None = None, field: str = "partition"):
        try:
            blocks = tuple((int(lo), int(hi)) for lo, hi in data)
        except (TypeError, ValueError):
            raise ValidationError("expected a list of [lo, hi] pairs", field) from None
        try:
            part = cls(blocks)
        except ValidationError as exc:
            raise ValidationError(str(exc), field) from None
        if n_s is not None and part.n_s != n_s:
            raise ValidationError(f"covers I(0,{part.n_s}) but n_s={n_s}", field)
        return part

    def to_json(self) -> list[list[int]]:
        return [[lo, hi] for lo, hi in self.blocks]


def all_partitions(n_s: int) -> list[IntervalPartition]:
    return [IntervalPartition.from_theta(n_s, t)
            for r in range(n_s + 1) for t in itertools.combinations(range(n_s), r)]


def parabolic_generator_indices(theta: IntervalPartition, flavor: str) -> frozenset[int]:
    """Indices ``i`` of the simple reflections generating ``W_Theta``."""
    th = theta.theta
    if flavor == "B":
        return frozenset(th)
    out = {i for i in th if i >= 1}
    if 0 in th and 1 in th:
        out.add(0)
    return frozenset(out)


# --------------------------------------------------------------------------
# enumeration


class WeylGroup:
    """All elements of ``W`` in lexicographic window order, with descent data.

    Right descents of ``w`` at ``s_i`` (i >= 1): ``w(i) > w(i+1)``; at the B
    reflection ``s_0``: ``w(1) < 0``; at the D reflection: ``w(1) + w(2) < 0``.
    """

    def __init__(self, n_s: int, flavor: str):
        self.n_s, self.flavor = n_s, flavor
        elems = []
        for perm in itertools.permutations(range(1, n_s + 1)):
            for signs in itertools.product((1, -1), repeat=n_s):
                if flavor == "D" and signs.count(-1) % 2:
                    continue
                elems.append(tuple(s * x for s, x in zip(signs, perm)))
        elems.sort()
        self.elements: list[tuple[int, ...]] = elems
        self.index = {w: k for k, w in enumerate(elems)}
        self._rdes: list[int] | None = None
        self._ldes: list[int] | None = None

    def _descent_mask(self, w: Sequence[int]) -> int:
        m = 0
        if self.flavor == "B":
            if w[0] < 0:
                m |= 1
        elif self.n_s >= 2 and w[0] + w[1] < 0:
            m |= 1
        for i in range(1, self.n_s):
            if w[i - 1] > w[i]:
                m |= 1 << i
        return m

    @property
    def right_descents(self) -> list[int]:
        if self._rdes is None:
            self._rdes = [self._descent_mask(w) for w in self.elements]
        return self._rdes

    @property
    def left_descents(self) -> list[int]:
        if self._ldes is None:
            self._ldes = [self._descent_mask(_inverse(w)) for w in self.elements]
        return self._ldes

    def __len__(self) -> int:
        return len(self.elements)


@lru_cache(maxsize=32)
def weyl_group(n_s: int, flavor: str) -> WeylGroup:
    config.check("n_s", n_s, config.guards().max_ns)
    return WeylGroup(n_s, flavor)


def group_order(n_s: int, flavor: str) -> int:
    full = 2 ** n_s * math.factorial(n_s)
    return full if flavor == "B" else full // 2


def enumerate_group(desc: GroupDescriptor) -> list[SignedPermutation]:
    g = weyl_group(desc.n_s, desc.weyl_flavor)
    return [SignedPermutation(w, desc.weyl_flavor) for w in g.elements]


def _mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def _check_partition(desc: GroupDescriptor, part: IntervalPartition, name: str) -> None:
    if not isinstance(part, IntervalPartition):
        raise ValidationError("expected an IntervalPartition", name)
    if part.n_s != desc.n_s:
        raise ValidationError(f"covers I(0,{part.n_s}) but n_s={desc.n_s}", name)


def min_coset_reps(desc: GroupDescriptor, theta: IntervalPartition) -> list[SignedPermutation]:
    """``W^Theta``: minimal-length elements of the cosets ``w W_Theta``."""
    _check_partition(desc, theta, "Theta")
    fl = desc.weyl_flavor
    g = weyl_group(desc.n_s, fl)
    m = _mask(parabolic_generator_indices(theta, fl))
    return [SignedPermutation(w, fl) for w, d in zip(g.elements, g.right_descents) if not d & m]


def double_coset_reps(desc: GroupDescriptor, omega: IntervalPartition,
                      theta: IntervalPartition) -> list[SignedPermutation]:
    """``^Omega W^Theta``: minimal elements of the double cosets ``W_Omega w W_Theta``."""
    _check_partition(desc, omega, "Omega")
    _check_partition(desc, theta, "Theta")
    fl = desc.weyl_flavor
    g = weyl_group(desc.n_s, fl)
    mt = _mask(parabolic_generator_indices(theta, fl))
    mo = _mask(parabolic_generator_indices(omega, fl))
    return [SignedPermutation(w, fl)
            for w, r, l in zip(g.elements, g.right_descents, g.left_descents)
            if not r & mt and not l & mo]


def parabolic_subgroup(desc: GroupDescriptor, theta: IntervalPartition) -> list[SignedPermutation]:
    """All elements of ``W_Theta``, generated from its simple reflections."""
    fl = desc.weyl_flavor
    gens = [g for i, g in enumerate(_generator_windows(desc.n_s, fl))
            if _generator_label(i, desc.n_s, fl) in parabolic_generator_indices(theta, fl)]
    seen = {tuple(range(1, desc.n_s + 1))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                x = _compose(w, s)
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
        frontier = nxt
    return [SignedPermutation(w, fl) for w in sorted(seen)]


def _generator_label(pos: int, n_s: int, flavor: str) -> int:
    # position in _generator_windows -> simple reflection index
    if flavor == "D" and n_s < 2:
        return pos + 1
    return pos


def poincare_sum(desc: GroupDescriptor, theta: IntervalPartition, q) -> object:
    """``sum over W^Theta of q^length``; ``q`` may be any ring element."""
    total = 0 * q
    for w in min_coset_reps(desc, theta):
        total = total + q ** length(w)
    return total


def parabolic_factor(desc: GroupDescriptor, w: SignedPermutation,
                     theta: IntervalPartition) -> tuple[SignedPermutation, SignedPermutation]:
    """Return ``(w^Theta, w_Theta)`` with ``w = w^Theta o w_Theta``."""
    reps = {r.window for r in min_coset_reps(desc, theta)}
    for u in parabolic_subgroup(desc, theta):
        cand = _compose(w.window, _inverse(u.window))
        if cand in reps:
            return SignedPermutation(cand, w.flavor), u
    raise AssertionError("coset without a minimal representative")  # pragma: no cover


# --------------------------------------------------------------------------
# coset matrices


@dataclass(frozen=True)
class CosetMatrix:
    """Matrix avatar of a double-coset representative.

    ``a[i][j] = #(I_i^Omega ∩ |w(I_j^Theta)|)`` and ``b[i]`` counts the values
    of ``I_i^Omega`` reached from a negative position.  ``a_neg[i][j]`` splits
    ``b`` by Theta-block; the pair ``(b, a)`` alone does not determine ``w``.
    """

    b: tuple[int, ...]
    a: tuple[tuple[int, ...], ...]
    a_neg: tuple[tuple[int, ...], ...]

    def literal_key(self) -> tuple:
        return self.b, self.a

    def to_json(self) -> dict:
        return {"b": list(self.b), "a": [list(r) for r in self.a],
                "a_neg": [list(r) for r in self.a_neg]}

    @classmethod
    def from_json(cls, data) -> "CosetMatrix":
        try:
            a = tuple(tuple(int(x) for x in row) for row in data["a"])
            a_neg = tuple(tuple(int(x) for x in row) for row in data["a_neg"])
        except (KeyError, TypeError, ValueError):
            raise ValidationError("expected integer matrices 'a' and 'a_neg'", "matrix") from None
        b = tuple(sum(r) for r in a_neg)
        if "b" in data and tuple(int(x) for x in data["b"]) != b:
            raise ValidationError("b must equal the row sums of a_neg", "matrix.b")
        return cls(b, a, a_neg)


def is_b_minimal(w: Sequence[int], omega: IntervalPartition, theta: IntervalPartition) -> bool:
    """Minimal in its B-double coset: increasing on blocks of positions and values."""
    full = (0,) + tuple(w)
    for lo, hi in theta.blocks:
        for p in range(lo, hi):
            if full[p] >= full[p + 1]:
                return False
    inv = (0,) + _inverse(w)
    for lo, hi in omega.blocks:
        for x in range(lo, hi):
            if inv[x] >= inv[x + 1]:
                return False
    return True


def matrix_domain(desc: GroupDescriptor, omega: IntervalPartition,
                  theta: IntervalPartition) -> list[SignedPermutation]:
    """Domain of :func:`coset_matrix`.

    Type B: ``^Omega W^Theta``.  Type D: the B-minimal representatives with an
    even number of sign changes.
    """
    _check_partition(desc, omega, "Omega")
    _check_partition(desc, theta, "Theta")
    fl = desc.weyl_flavor
    if fl == "B":
        return double_coset_reps(desc, omega, theta)
    gb = weyl_group(desc.n_s, "B")
    mt = _mask(parabolic_generator_indices(theta, "B"))
    mo = _mask(parabolic_generator_indices(omega, "B"))
    return [SignedPermutation(w, "D")
            for w, r, l in zip(gb.elements, gb.right_descents, gb.left_descents)
            if not r & mt and not l & mo and sum(x < 0 for x in w) % 2 == 0]


def coset_matrix(desc: GroupDescriptor, w: SignedPermutation, omega: IntervalPartition,
                 theta: IntervalPartition) -> CosetMatrix:
    _check_partition(desc, omega, "Omega")
    _check_partition(desc, theta, "Theta")
    if w.n_s != desc.n_s:
        raise ValidationError(f"element has rank {w.n_s}, group has n_s={desc.n_s}", "w")
    if not is_b_minimal(w.window, omega, theta):
        raise ValidationError(f"{w!r} is not minimal in its double coset", "w")
    qo, qt = omega.q, theta.q
    a = [[0] * qt for _ in range(qo)]
    a_neg = [[0] * qt for _ in range(qo)]
    a[0][0] = 1  # the index 0
    for p in range(1, desc.n_s + 1):
        x = w(p)
        i, j = omega.block_of(x), theta.block_of(p)
        a[i][j] += 1
        if x < 0:
            a_neg[i][j] += 1
    b = tuple(sum(r) for r in a_neg)
    return CosetMatrix(b, tuple(map(tuple, a)), tuple(map(tuple, a_neg)))


def matrix_violations(desc: GroupDescriptor, m: CosetMatrix, omega: IntervalPartition,
                      theta: IntervalPartition) -> list[str]:
    """Why ``m`` is not in the admissible set; empty when it is."""
    qo, qt = omega.q, theta.q
    out = []
    if len(m.a) != qo or any(len(r) != qt for r in m.a):
        return [f"a must be {qo}x{qt}"]
    if len(m.a_neg) != qo or any(len(r) != qt for r in m.a_neg):
        return [f"a_neg must be {qo}x{qt}"]
    for i in range(qo):
        for j in range(qt):
            if m.a_neg[i][j] < 0 or m.a_neg[i][j] > m.a[i][j]:
                out.append(f"need 0 <= a_neg[{i}][{j}] <= a[{i}][{j}]")
    for i, s in enumerate(omega.sizes):
        if sum(m.a[i]) != s:
            out.append(f"row {i} of a must sum to #I^Omega_{i} = {s}")
    for j, s in enumerate(theta.sizes):
        if sum(m.a[i][j] for i in range(qo)) != s:
            out.append(f"column {j} of a must sum to #I^Theta_{j} = {s}")
    if any(m.a_neg[0]) or any(r[0] for r in m.a_neg):
        out.append("the blocks containing 0 admit no sign changes")
    if m.a[0][0] < 1:
        out.append("a[0][0] must count the index 0")
    if tuple(sum(r) for r in m.a_neg) != m.b:
        out.append("b must equal the row sums of a_neg")
    if desc.weyl_flavor == "D" and sum(m.b) % 2:
        out.append("type D needs an even number of sign changes")
    return out


def matrix_to_rep(desc: GroupDescriptor, m: CosetMatrix, omega: IntervalPartition,
                  theta: IntervalPartition) -> SignedPermutation:
    _check_partition(desc, omega, "Omega")
    _check_partition(desc, theta, "Theta")
    bad = matrix_violations(desc, m, omega, theta)
    if bad:
        raise ValidationError("; ".join(bad), "matrix")
    qo = omega.q
    # Fill each Theta-block left to right: negative values first, from the
    # highest Omega-block down, then positive values from the lowest block up.
    slots: dict[int, tuple[int, int]] = {}  # position -> (omega block, sign)
    for j in range(theta.q):
        plan = []
        for i in reversed(range(qo)):
            plan += [(i, -1)] * m.a_neg[i][j]
        for i in range(qo):
            plan += [(i, 1)] * (m.a[i][j] - m.a_neg[i][j])
        positions = list(theta.members(j))
        if j == 0:
            plan.remove((0, 1))
            positions.remove(0)
        for p, slot in zip(positions, plan):
            slots[p] = slot
    window = [0] * desc.n_s
    for i in range(qo):
        values = [x for x in omega.members(i) if x != 0]
        neg = sorted((p for p, (k, s) in slots.items() if k == i and s < 0), reverse=True)
        pos = sorted(p for p, (k, s) in slots.items() if k == i and s > 0)
        for x, p in zip(values, neg + pos):
            window[p - 1] = -x if p in neg else x
    return SignedPermutation(tuple(window), desc.weyl_flavor)


def admissible_matrices(desc: GroupDescriptor, omega: IntervalPartition,
                        theta: IntervalPartition) -> list[CosetMatrix]:
    """Enumerate the combinatorial matrix set directly from its defining conditions."""
    qo, qt = omega.q, theta.q
    rows, cols = omega.sizes, theta.sizes
    out = []
    cells = [(i, j) for i in range(qo) for j in range(qt)]

    def rec(k, a, an, rrem, crem):
        if k == len(cells):
            if any(rrem) or any(crem):
                return
            b = tuple(sum(r) for r in an)
            if desc.weyl_flavor == "D" and sum(b) % 2:
                return
            out.append(CosetMatrix(b, tuple(map(tuple, a)), tuple(map(tuple, an))))
            return
        i, j = cells[k]
        hi = min(rrem[i], crem[j])
        lo = 1 if (i, j) == (0, 0) else 0
        if j == qt - 1:
            lo = max(lo, rrem[i])   # last column closes the row
        for v in range(lo, hi + 1):
            negs = range(0, v + 1) if i and j else range(0, 1)
            for nv in negs:
                a[i][j], an[i][j] = v, nv
                rrem[i] -= v
                crem[j] -= v
                rec(k + 1, a, an, rrem, crem)
                rrem[i] += v
                crem[j] += v
        a[i][j] = an[i][j] = 0

    rec(0, [[0] * qt for _ in range(qo)], [[0] * qt for _ in range(qo)], list(rows), list(cols))
    return out
