"""Parahoric invariants, V-operators and the Taylor–Wiles projector.

Smooth representations are modelled through their parahoric-invariant spaces
with diagonal Hecke data.  Conventions:

* ``W_Theta`` acts on positions and ``W_Omega`` on values, so the basis of
  ``Ind_{P_Theta}^G(...)^{p_Omega}`` is ``double_coset_reps(desc, Omega, Theta)``.
* The character attached to position ``l`` in the component of ``w`` is
  ``psi_{w^{-1}(l)}`` (with ``psi_{-i} = psi_i^{-1}``).  This is
  ``psi_{w(l)}`` for a right action, rewritten for left composition.
* Block indices ``j`` are 1-based; block 1 contains 0.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from . import modring, upoly
from .errors import ValidationError
from .laurent import elem_sym
from .weyl import (GroupDescriptor, IntervalPartition, _inverse, double_coset_reps,
                   min_coset_reps)


def _block_size(omega: IntervalPartition, j: int) -> int:
    """``i_j^Omega``: number of nonzero indices in block ``j`` (1-based)."""
    lo, hi = omega.blocks[j - 1]
    return hi - lo + 1 - (1 if lo == 0 else 0)


def _block_indices(omega: IntervalPartition, j: int) -> list[int]:
    return [x for x in omega.members(j - 1) if x != 0]


def a_matrix(w: Sequence[int], omega: IntervalPartition, theta: IntervalPartition) -> list[list[int]]:
    """``a_{i,j} = #(I_i^Omega ∩ |w(I_j^Theta)|)`` without any minimality assumption."""
    a = [[0] * theta.q for _ in range(omega.q)]
    a[0][0] = 1
    for pos in range(1, len(w) + 1):
        a[omega.block_of(abs(w[pos - 1]))][theta.block_of(pos)] += 1
    return a


# ---------------------------------------------------------------------------
# dimensions and Jacquet sets


def invariant_dim(desc: GroupDescriptor, omega: IntervalPartition, theta: IntervalPartition,
                  local_dims: Mapping | Callable | None = None) -> int:
    """``sum over w in ^Omega W^Theta of prod_j dim pi_j^{p_j^w}``.

    ``local_dims`` is a callable ``(j, window) -> int`` or a mapping keyed by
    ``(j, window)``; None means every local dimension is 1.
    """
    reps = double_coset_reps(desc, omega, theta)
    total = 0
    for w in reps:
        prod = 1
        for j in range(1, omega.q + 1):
            if local_dims is None:
                d = 1
            elif callable(local_dims):
                d = local_dims(j, w.window)
            else:
                key = (j, w.window)
                if key not in local_dims:
                    raise ValidationError(f"no local dimension for block {j} at {list(w.window)}",
                                          "local_dims")
                d = local_dims[key]
            if not isinstance(d, int) or d < 0:
                raise ValidationError("local dimensions must be nonnegative integers", "local_dims")
            prod *= d
        total += prod
    return total


def jacquet_w_set(desc: GroupDescriptor, omega: IntervalPartition,
                  theta: IntervalPartition) -> list:
    """``S``: representatives whose a-matrix has every entry at most 1.

    The entry for the index 0 is excluded, since 0 is fixed by every element.
    """
    out = []
    for w in double_coset_reps(desc, omega, theta):
        a = a_matrix(w.window, omega, theta)
        a[0][0] -= 1
        if all(x <= 1 for row in a for x in row):
            out.append(w)
    return out


# ---------------------------------------------------------------------------
# Iwahori-level principal series


@dataclass(frozen=True)
class IwahoriPSModule:
    desc: GroupDescriptor
    theta: IntervalPartition
    basis: tuple[tuple[int, ...], ...]
    psi: tuple
    q: object
    warnings: tuple[str, ...] = ()

    @property
    def dim(self) -> int:
        return len(self.basis)

    def psi_at(self, i: int):
        return self.psi[i - 1] if i > 0 else 1 / self.psi[-i - 1]

    def x_eigenvalue(self, w: Sequence[int], l: int):
        """Eigenvalue of ``X_l`` on ``phi_w``."""
        return self.psi_at(_inverse(w)[l - 1])


def _exact(x):
    return Fraction(x) if isinstance(x, (int, str)) else x


def block_constancy_warnings(theta: IntervalPartition, psi: Sequence) -> list[str]:
    out = []
    for b, (lo, hi) in enumerate(theta.blocks):
        vals = [psi[i - 1] for i in range(max(lo, 1), hi + 1)]
        if len(set(vals)) > 1:
            out.append(f"psi is not constant on Theta-block {b + 1}")
        if lo == 0 and any(v != 1 / v for v in vals):
            out.append("psi must satisfy psi = psi^-1 on the block containing 0")
    return out


def build_ps_module(desc: GroupDescriptor, theta: IntervalPartition, psi: Sequence,
                    q) -> IwahoriPSModule:
    psi = tuple(_exact(x) for x in psi)
    if len(psi) != desc.n_s:
        raise ValidationError(f"need {desc.n_s} values, got {len(psi)}", "psi")
    if any(x == 0 for x in psi):
        raise ValidationError("psi values must be invertible", "psi")
    basis = tuple(w.window for w in min_coset_reps(desc, theta))
    return IwahoriPSModule(desc, theta, basis, psi, _exact(q),
                           tuple(block_constancy_warnings(theta, psi)))


def w_k_j_size(i: int, k: int) -> int:
    """``#W_k^j = i! 2^i / k!``."""
    return math.factorial(i) * 2 ** i // math.factorial(k)


def v_eigenvalue(psi_at: Callable[[int], object], w: Sequence[int], omega: IntervalPartition,
                 j: int, k: int, model: str = "jacquet"):
    """Eigenvalue of ``V_k^j`` on the component of ``w``.

    ``jacquet``: ``e_k`` of the block's characters (the semi-simplified Jacquet
    action).  ``iwahori_sum``: the sum over ``W_k^j = S_k \\ (S_i ⋊ (Z/2)^i)`` of
    products of ``X`` eigenvalues, which equals
    ``(i-k)! 2^(i-k) e_k(psi + psi^-1)`` over the block.
    """
    i = _block_size(omega, j)
    if not 1 <= k <= i:
        raise ValidationError(f"k={k} outside 1..{i} for block {j}", "k")
    winv = _inverse(w)
    vals = [psi_at(winv[l - 1]) for l in _block_indices(omega, j)]
    if model == "jacquet":
        return elem_sym(k, vals)
    if model == "iwahori_sum":
        return math.factorial(i - k) * 2 ** (i - k) * elem_sym(k, [v + 1 / v for v in vals])
    raise ValidationError(f"unknown model {model!r}", "model")


def v_operator(module: IwahoriPSModule, omega: IntervalPartition, j: int, k: int,
               model: str = "jacquet") -> dict:
    """Diagonal of ``V_k^j`` on the module basis, keyed by window."""
    if not 1 <= j <= omega.q:
        raise ValidationError(f"block index {j} outside 1..{omega.q}", "j")
    if model == "jacquet" and omega.blocks[0][1] > 0 and j == 1:
        raise ValidationError("the block containing 0 must be {0} for the jacquet model", "Omega")
    return {w: v_eigenvalue(module.psi_at, w, omega, j, k, model) for w in module.basis}


# ---------------------------------------------------------------------------
# the polynomial P-hat and its factorisation


def phat_roots(root_data: Sequence, size: int, k: int) -> list:
    """``e_k`` over every ``size``-subset of root indices, with multiplicity."""
    root_data = list(root_data)
    if size > len(root_data):
        raise ValidationError(f"block of size {size} exceeds {len(root_data)} roots", "Omega")
    if not 1 <= k <= size:
        raise ValidationError(f"k={k} outside 1..{size}", "k")
    return [elem_sym(k, [root_data[i] for i in sub])
            for sub in itertools.combinations(range(len(root_data)), size)]


def phat_poly(root_data: Sequence, omega: IntervalPartition, j: int, k: int) -> tuple:
    """Monic polynomial whose roots are :func:`phat_roots` for block ``j``."""
    return upoly.from_roots(phat_roots(root_data, _block_size(omega, j), k))


def frobenius_roots(desc: GroupDescriptor, params: Sequence) -> list:
    """``{x, x^-1}`` for each parameter, plus the fixed root 1 for Sp."""
    out = []
    for x in params:
        x = _exact(x)
        out += [x, 1 / x]
    if desc.is_sp:
        out.append(Fraction(1))
    return out


@dataclass(frozen=True)
class FactorResult:
    R: tuple
    Q: tuple
    r: int
    targets: tuple[int, ...]
    degenerate: bool
    coprime: bool

    def to_json(self) -> dict:
        return {"R": list(self.R), "Q": list(self.Q), "r": self.r, "targets": list(self.targets),
                "degenerate": self.degenerate, "coprime": self.coprime}


def _targets(alpha_bar: int, i_j: int, k: int, p: int) -> tuple[tuple[int, ...], bool]:
    c = math.comb(i_j, k)
    a = alpha_bar % p
    if a == 0:
        raise ValidationError("alpha_bar must be a unit", "alpha_bar")
    t1 = c * pow(a, k, p) % p
    t2 = c * pow(a, -k, p) % p
    degenerate = t1 == t2 and a != pow(a, -1, p)
    return tuple(sorted({t1, t2})), degenerate


def projector_factor(phat: Sequence, alpha_bar: int, i_j: int, k: int, p: int,
                     e: int = 1) -> FactorResult:
    """Split ``phat = R Q`` over ``Z/p^e``.

    ``R`` is the Hensel lift of the residual factor whose roots are
    ``C(i_j,k) alpha_bar^{±k}``; ``Q`` is the coprime cofactor.
    """
    ring = modring.Ring(p, e)
    f = upoly.trim((ring(c) for c in phat), ring.mod)
    if not f or f[-1] != 1:
        raise ValidationError("phat must be monic", "phat")
    targets, degenerate = _targets(alpha_bar, i_j, k, p)
    rbar: tuple = (1,)
    rest = upoly.trim(f, p)
    mults = {}
    for t in targets:
        mults[t] = 0
        while True:
            quo, rem = upoly.divmod_monic(rest, (-t % p, 1), p)
            if rem:
                break
            rest = quo
            rbar = upoly.mul(rbar, (-t % p, 1), p)
            mults[t] += 1
    qbar = rest
    coprime = all(upoly.evaluate(qbar, t, p) % p for t in targets)
    if len(rbar) == 1:
        big_r, big_q = (1,), f
    elif len(qbar) == 1:
        big_r, big_q = f, (1,)
    elif e > 1:
        big_r, big_q = modring.hensel_lift(f, rbar, qbar, p, e)
    else:
        big_r, big_q = rbar, qbar
    # R ≡ ((X - C a^k)(X - C a^-k))^r: r is the multiplicity of each target
    # when the two differ, half the multiplicity when they coincide.
    total = sum(mults.values())
    r = total // 2 if len(targets) == 1 else min(mults.values())
    balanced = (total % 2 == 0) if len(targets) == 1 else len(set(mults.values())) == 1
    return FactorResult(big_r, big_q, r, targets, degenerate, coprime and balanced)


def factor_roots(roots: Sequence, alpha_bar: int, i_j: int, k: int, p: int):
    """Group exact roots by residue: ``(R-roots, Q-roots)``."""
    ring = modring.Ring(p)
    targets, _ = _targets(alpha_bar, i_j, k, p)
    rr = [x for x in roots if ring(x) in targets]
    qr = [x for x in roots if ring(x) not in targets]
    return rr, qr


# ---------------------------------------------------------------------------
# Frobenius profile


def frobenius_profile_check(eigen: Mapping[int, int] | Sequence[int], i_j0: int, p: int,
                            is_sp: bool = False, alpha_bar: int | None = None) -> dict:
    """Classify a residual Frobenius eigenvalue multiset against the two conditions.

    Returns ``{"verdict": "type1" | "type2" | "invalid", "alpha_bar": ...,
    "candidates": [...]}``.
    """
    counts = Counter({k % p: v for k, v in eigen.items()}) if isinstance(eigen, Mapping) \
        else Counter(x % p for x in eigen)
    if any(x == 0 for x in counts):
        raise ValidationError("eigenvalues must be units", "eigen")
    cands = []
    for a in sorted(counts):
        ainv = pow(a, -1, p)
        if a != ainv:
            if counts[a] == i_j0 and counts[ainv] == i_j0:
                cands.append(("type1", a))
        else:
            need = 2 * i_j0 + 1 if (is_sp and a == 1) else 2 * i_j0
            if counts[a] == need:
                cands.append(("type2", a))
    if alpha_bar is not None:
        cands = [c for c in cands if c[1] in (alpha_bar % p, pow(alpha_bar, -1, p))]
    if not cands:
        return {"verdict": "invalid", "alpha_bar": None, "candidates": []}
    verdict, a = cands[0]
    return {"verdict": verdict, "alpha_bar": a, "candidates": [c[1] for c in cands]}


# ---------------------------------------------------------------------------
# the projector


@dataclass(frozen=True)
class ParahoricDatum:
    desc: GroupDescriptor
    omega: IntervalPartition
    j0: int
    j1: int
    p: int
    q: int

    def __post_init__(self):
        if not modring.is_prime(self.p) or self.p == 2:
            raise ValidationError(f"p={self.p} must be an odd prime", "p")
        if self.q % self.p != 1:
            raise ValidationError(f"q={self.q} is not 1 mod p={self.p}", "q")
        qo = self.omega.q
        if self.omega.n_s != self.desc.n_s:
            raise ValidationError("Omega does not match the group rank", "Omega")
        for name, j in (("j0", self.j0), ("j1", self.j1)):
            if not 1 <= j <= qo:
                raise ValidationError(f"{name}={j} outside 1..{qo}", name)
        if self.j0 == self.j1:
            raise ValidationError("j0 and j1 must differ", "j1")
        if _block_size(self.omega, self.j0) == 0:
            raise ValidationError("block j0 has no nonzero indices", "j0")
        if self.j1 != 1 and self.omega.blocks[0] != (0, 0):
            raise ValidationError("the block containing 0 must be {0} unless j1 = 1", "Omega")


@dataclass(frozen=True)
class Component:
    """One summand of the modelled representation.

    ``unramified``: ``Ind_{P_Theta}(chi∘det)`` with ``params`` the ``n_s``
    Satake parameters (constant on Theta-blocks).  ``steinberg``: the
    constituent with ``St_2(chi)`` on the last two indices; ``params`` holds
    ``chi_1..chi_{n_s-1}`` and the pattern is ``(..., chi, chi |ϖ|)``.
    """

    kind: str
    params: tuple
    theta: IntervalPartition | None = None

    def characters(self, q) -> tuple:
        if self.kind == "unramified":
            return tuple(_exact(x) for x in self.params)
        last = _exact(self.params[-1])
        return tuple(_exact(x) for x in self.params) + (last / q,)


def steinberg_theta(n_s: int) -> IntervalPartition:
    if n_s < 2:
        raise ValidationError("a Steinberg block needs n_s >= 2", "components")
    blocks = [(0, 0)] + [(i, i) for i in range(1, n_s - 1)] + [(n_s - 1, n_s)]
    return IntervalPartition(tuple(blocks))


@dataclass
class ProjectorReport:
    alpha_bar: int
    verdict: str
    factorizations: list = field(default_factory=list)
    components: list = field(default_factory=list)
    image_dim: int = 0
    unramified_invariant_dim: int = 0
    induced_map_rank: int = 0
    checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"alpha_bar": self.alpha_bar, "verdict": self.verdict,
                "factorizations": self.factorizations, "components": self.components,
                "image_dim": self.image_dim,
                "unramified_invariant_dim": self.unramified_invariant_dim,
                "induced_map_rank": self.induced_map_rank, "checks": self.checks}


def _component_basis(datum: ParahoricDatum, comp: Component) -> tuple[IntervalPartition, list]:
    ns = datum.desc.n_s
    if comp.kind == "unramified":
        theta = comp.theta or IntervalPartition.singletons(ns)
        if len(comp.params) != ns:
            raise ValidationError(f"unramified component needs {ns} parameters", "components")
        return theta, [w.window for w in double_coset_reps(datum.desc, datum.omega, theta)]
    if comp.kind == "steinberg":
        theta = steinberg_theta(ns)
        if len(comp.params) != ns - 1:
            raise ValidationError(f"steinberg component needs {ns - 1} parameters", "components")
        return theta, [w.window for w in jacquet_w_set(datum.desc, datum.omega, theta)]
    raise ValidationError(f"unknown component kind {comp.kind!r}", "components")


def apply_projector(datum: ParahoricDatum, components: Sequence[Component],
                    alpha_bar: int | None = None) -> ProjectorReport:
    """Apply ``pr_(j1) = prod_{j != j1} prod_k Q_k^j(V_k^j)`` to every component.

    Everything is evaluated in the residue field ``F_p``.  Two notions of the
    image are reported: ``image_dim`` is the rank of ``pr_(j1)`` on the whole
    parahoric-invariant model, and ``induced_map_rank`` is the rank of its
    restriction to the spherical vectors ``sum_w phi_w`` of the unramified
    summands.
    """
    desc, omega, p = datum.desc, datum.omega, datum.p
    ring = modring.Ring(p)
    q = Fraction(datum.q)
    if not components:
        raise ValidationError("at least one component is required", "components")

    # residual Frobenius profile, shared by all components
    profiles = []
    for comp in components:
        chars = comp.characters(q)
        profiles.append(Counter(ring(x) for x in frobenius_roots(desc, chars)))
    if any(pr != profiles[0] for pr in profiles[1:]):
        raise ValidationError("components do not share a residual Frobenius spectrum",
                              "components")
    prof = frobenius_profile_check(profiles[0], _block_size(omega, datum.j0), p, desc.is_sp,
                                   alpha_bar)
    if prof["verdict"] == "invalid":
        raise ValidationError("residual Frobenius eigenvalues violate the multiplicity "
                              "hypothesis at block j0", "components")
    abar = prof["alpha_bar"]
    report = ProjectorReport(alpha_bar=abar, verdict=prof["verdict"])

    active = [j for j in range(1, omega.q + 1) if j != datum.j1 and _block_size(omega, j) > 0]
    seen_fact = set()
    for ci, comp in enumerate(components):
        chars = comp.characters(q)
        roots = frobenius_roots(desc, chars)
        theta, basis = _component_basis(datum, comp)

        def psi_at(i, chars=chars):
            return chars[i - 1] if i > 0 else 1 / chars[-i - 1]

        qroots = {}
        for j in active:
            for k in range(1, _block_size(omega, j) + 1):
                all_roots = phat_roots(roots, _block_size(omega, j), k)
                rr, qr = factor_roots(all_roots, abar, _block_size(omega, j), k, p)
                qroots[(j, k)] = qr
                key = (j, k)
                if key not in seen_fact:
                    seen_fact.add(key)
                    fr = projector_factor(upoly.from_roots(all_roots), abar,
                                          _block_size(omega, j), k, p)
                    report.factorizations.append({"j": j, "k": k, **fr.to_json()})
        coeffs = {}
        for w in basis:
            c = 1
            for (j, k), qr in qroots.items():
                lam = ring(v_eigenvalue(psi_at, w, omega, j, k))
                for rt in qr:
                    c = c * (lam - ring(rt)) % p
            coeffs[w] = c
        support = [list(w) for w in basis if coeffs[w]]
        entry = {"index": ci, "kind": comp.kind, "dim": len(basis),
                 "image_dim": len(support), "support": support,
                 "coefficients": {",".join(map(str, w)): coeffs[w] for w in basis}}
        if comp.kind == "unramified":
            spherical = any(coeffs.values())
            entry["spherical_image_nonzero"] = spherical
            report.unramified_invariant_dim += invariant_dim(
                desc, IntervalPartition.whole(desc.n_s), theta)
            report.induced_map_rank += 1 if spherical else 0
            entry["w_prime"] = _stated_w_prime(datum, theta, chars, abar, basis)
            entry["support_matches_w_prime"] = (
                None if entry["w_prime"] is None else
                sorted(entry["w_prime"]) == sorted(support))
        report.components.append(entry)
        report.image_dim += len(support)

    unr = [c for c in report.components if c["kind"] == "unramified"]
    st = [c for c in report.components if c["kind"] == "steinberg"]
    report.checks = {
        "image_dim_equals_invariant_dim": report.image_dim == report.unramified_invariant_dim,
        "induced_map_injective": report.induced_map_rank == report.unramified_invariant_dim,
        "steinberg_annihilated": all(c["image_dim"] == 0 for c in st),
        "distinguished_nonzero": all(c["spherical_image_nonzero"] for c in unr),
        "support_matches_w_prime": all(c["support_matches_w_prime"] is not False for c in unr),
    }
    return report


def _stated_w_prime(datum: ParahoricDatum, theta: IntervalPartition, chars: Sequence,
                   abar: int, basis: Sequence) -> list | None:
    """``W'``: the Theta-block carrying ``alpha_bar`` lands inside one Omega-block ``j' != j1``."""
    ring = modring.Ring(datum.p)
    i0 = _block_size(datum.omega, datum.j0)
    ainv = pow(abar, -1, datum.p)
    l0 = None
    for b, (lo, hi) in enumerate(theta.blocks):
        idx = [i for i in range(max(lo, 1), hi + 1)]
        if len(idx) == i0 and lo > 0 and all(ring(chars[i - 1]) in (abar, ainv) for i in idx):
            l0 = b
            break
    if l0 is None:
        return None
    out = []
    for w in basis:
        a = a_matrix(w, datum.omega, theta)
        if any(a[jp][l0] == i0 for jp in range(datum.omega.q) if jp != datum.j1 - 1):
            out.append(list(w))
    return out
