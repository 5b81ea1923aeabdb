"""Adequacy conditions for explicit finite subgroups of ``GL_N(F_p)``.

A module is given by its representation matrices on every group element
(``d x d`` over F_p); the adjoint module is the Lie algebra of the form with
``H`` acting by conjugation.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import config
from .errors import GuardError, ValidationError
from .galsplit import BilinearForm, algebra_span_words, lie_algebra_basis
from .modring import Ring, is_prime


def rref_np(a: np.ndarray, p: int) -> np.ndarray:
    """Reduced row echelon form over F_p (nonzero rows only)."""
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % p
        r += 1
    return a[:r]


def rank_np(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(rref_np(a, p))


def nullspace_np(a: np.ndarray, p: int, ncols: int) -> np.ndarray:
    """Rows form a basis of ``{x : a x = 0}``."""
    if a.size == 0:
        return np.eye(ncols, dtype=np.int64)
    red = rref_np(a, p)
    piv = [int(np.nonzero(row)[0][0]) for row in red]
    free = [c for c in range(ncols) if c not in piv]
    out = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for row, pc in zip(red, piv):
            out[k, pc] = -row[f] % p
    return out


# ---------------------------------------------------------------------------


@dataclass
class FiniteMatrixGroup:
    p: int
    generators: list[np.ndarray]
    elements: list[np.ndarray] = field(default_factory=list)
    index: dict = field(default_factory=dict)
    # Cayley graph: right multiplication by generators, and a BFS spanning tree
    parent: list = field(default_factory=list)

    @property
    def N(self) -> int:
        return self.generators[0].shape[0]

    def __len__(self) -> int:
        return len(self.elements)

    def inverse_index(self, i: int) -> int:
        return self.index[_key(np.array(Ring(self.p).matinv(self.elements[i].tolist())))]


def _key(m: np.ndarray) -> bytes:
    return np.ascontiguousarray(m, dtype=np.int64).tobytes()


def close_group(generators: Sequence, p: int, guard: int | None = None) -> FiniteMatrixGroup:
    """Breadth-first closure under right multiplication by the generators."""
    if not is_prime(p):
        raise ValidationError(f"p={p} is not prime", "p")
    guard = config.guards().max_group_order if guard is None else guard
    gens = [np.array(g, dtype=np.int64) % p for g in generators]
    if not gens:
        raise ValidationError("at least one generator is required", "generators")
    n = gens[0].shape[0]
    for k, g in enumerate(gens):
        if g.shape != (n, n):
            raise ValidationError("generators must be square of equal size", f"generators[{k}]")
        if Ring(p).det(g.tolist()) == 0:
            raise ValidationError("generator is singular", f"generators[{k}]")
    ident = np.eye(n, dtype=np.int64)
    grp = FiniteMatrixGroup(p, gens, [ident], {_key(ident): 0}, [None])
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for s, g in enumerate(gens):
            m = grp.elements[i] @ g % p
            k = _key(m)
            if k not in grp.index:
                if len(grp.elements) >= guard:
                    raise GuardError(f"group order exceeds guard {guard}")
                grp.index[k] = len(grp.elements)
                grp.elements.append(m)
                grp.parent.append((i, s))
                queue.append(len(grp.elements) - 1)
    return grp


# ---------------------------------------------------------------------------
# modules


@dataclass
class Module:
    """Representation matrices ``rho[i]`` (``d x d``) for every group element."""

    dim: int
    rho: list[np.ndarray]
    basis: list[np.ndarray] | None = None   # ambient matrices for the adjoint module


def trivial_module(group: FiniteMatrixGroup, dim: int = 1) -> Module:
    return Module(dim, [np.eye(dim, dtype=np.int64)] * len(group))


def adjoint_module(group: FiniteMatrixGroup, form: BilinearForm | None = None) -> Module:
    """The form's Lie algebra (or all of ``gl_N`` when ``form`` is None) under conjugation."""
    p, n = group.p, group.N
    if form is None:
        basis = [np.eye(n * n, dtype=np.int64)[k].reshape(n, n) for k in range(n * n)]
    else:
        if form.size != n:
            raise ValidationError("form size does not match the group", "form")
        basis = [np.array(b, dtype=np.int64) for b in lie_algebra_basis(form, p)]
        lam = np.array(form.matrix, dtype=np.int64) % p
        for k, g in enumerate(group.generators):
            if not np.array_equal(g.T @ lam @ g % p, lam):
                raise ValidationError("generator does not preserve the form", f"generators[{k}]")
    d = len(basis)
    bmat = np.array([b.reshape(-1) for b in basis], dtype=np.int64).T   # n^2 x d
    # coordinates are read off from d independent rows of the basis matrix
    piv_rows: list[int] = []
    for r in range(n * n):
        if rank_np(bmat[piv_rows + [r]], p) > len(piv_rows):
            piv_rows.append(r)
        if len(piv_rows) == d:
            break
    sub = bmat[piv_rows]                              # d x d invertible
    sub_inv = np.array(Ring(p).matinv(sub.tolist()), dtype=np.int64)
    rho = []
    for g in group.elements:
        g_inv = np.array(Ring(p).matinv(g.tolist()), dtype=np.int64)
        images = np.array([(g @ b @ g_inv % p).reshape(-1) for b in basis], dtype=np.int64).T
        coords = sub_inv @ images[piv_rows] % p
        if not np.array_equal(bmat @ coords % p, images):
            raise ValidationError("conjugation does not preserve the module", "form")
        rho.append(coords)
    return Module(d, rho, basis)


# ---------------------------------------------------------------------------
# cohomology


def h0_module(group: FiniteMatrixGroup, module: Module) -> int:
    """Dimension of the invariants: kernel of the stacked ``rho(s) - 1``."""
    p, d = group.p, module.dim
    stack = [module.rho[group.index[_key(g)]] - np.eye(d, dtype=np.int64) for g in group.generators]
    return d - rank_np(np.concatenate(stack) % p, p)


def reynolds_rank(group: FiniteMatrixGroup, module: Module) -> int:
    """Rank of ``sum_h rho(h)`` (the averaging projector up to ``|H|``)."""
    total = sum(module.rho) % group.p
    return rank_np(total, group.p)


def h1_finite(group: FiniteMatrixGroup, module: Module) -> int:
    """``dim Z^1 - dim B^1`` from cocycle constraints on the Cayley graph."""
    p, d = group.p, module.dim
    k = len(group.generators)
    config.check("|H|", len(group), config.guards().max_group_order)
    unknowns = d * k
    # F[i]: f(h_i) as a linear map of the unknowns (f(s_1), ..., f(s_k))
    big_f = np.zeros((len(group), d, unknowns), dtype=np.int64)
    sel = [np.zeros((d, unknowns), dtype=np.int64) for _ in range(k)]
    for s in range(k):
        sel[s][:, s * d:(s + 1) * d] = np.eye(d, dtype=np.int64)
    for i in range(1, len(group)):
        par, s = group.parent[i]
        big_f[i] = (big_f[par] + module.rho[par] @ sel[s]) % p
    basis = np.zeros((0, unknowns), dtype=np.int64)
    pending = []
    for i, g in enumerate(group.elements):
        for s, gen in enumerate(group.generators):
            j = group.index[_key(g @ gen % p)]
            if group.parent[j] == (i, s):
                continue
            pending.append((big_f[i] + module.rho[i] @ sel[s] - big_f[j]) % p)
            if len(pending) * d >= 4 * unknowns:
                basis = rref_np(np.concatenate([basis] + pending), p)
                pending = []
    if pending:
        basis = rref_np(np.concatenate([basis] + pending), p)
    z1 = unknowns - len(basis)
    b1 = d - h0_module(group, module)
    return z1 - b1


def hom_to_kappa(group: FiniteMatrixGroup) -> int:
    """``dim Hom(H, F_p)`` as ``H^1`` with trivial one-dimensional coefficients."""
    return h1_finite(group, trivial_module(group, 1))


def cyclic_h1(group: FiniteMatrixGroup, module: Module) -> int | None:
    """For cyclic ``H = <g>``: ``dim ker(norm) - dim im(g - 1)`` (None if not cyclic)."""
    if len(group.generators) != 1:
        return None
    p, d = group.p, module.dim
    g = module.rho[group.index[_key(group.generators[0])]]
    norm = sum(module.rho) % p
    ker_norm = d - rank_np(norm, p)
    im = rank_np((g - np.eye(d, dtype=np.int64)) % p, p)
    return ker_norm - im


# ---------------------------------------------------------------------------
# condition (4): traces of compressed elements


def _charpoly_roots(m: np.ndarray, p: int) -> dict[int, int]:
    """Algebraic multiplicities of the F_p-roots (via generalised kernels)."""
    n = m.shape[0]
    out = {}
    for a in range(p):
        t = (m - a * np.eye(n, dtype=np.int64)) % p
        pw = np.eye(n, dtype=np.int64)
        for _ in range(n):
            pw = pw @ t % p
        k = n - rank_np(pw, p)
        if k:
            out[a] = k
    return out


def eigen_projectors(gamma: np.ndarray, p: int) -> dict[int, np.ndarray]:
    """``a -> pi_{gamma, a}``, the projection onto ``ker (gamma - a)^N`` along the others."""
    n = gamma.shape[0]
    roots = _charpoly_roots(gamma, p)
    if sum(roots.values()) != n:
        raise ValidationError("F_p does not split the characteristic polynomial", "H")
    blocks = []
    for a in sorted(roots):
        t = (gamma - a * np.eye(n, dtype=np.int64)) % p
        pw = t
        for _ in range(n - 1):
            pw = pw @ t % p
        blocks.append((a, nullspace_np(pw, p, n).T))
    frame = np.concatenate([b for _, b in blocks], axis=1)
    frame_inv = np.array(Ring(p).matinv(frame.tolist()), dtype=np.int64)
    out = {}
    start = 0
    for a, b in blocks:
        k = b.shape[1]
        sel = np.zeros((n, n), dtype=np.int64)
        sel[start:start + k, start:start + k] = np.eye(k, dtype=np.int64)
        pi = frame @ sel @ frame_inv % p
        assert np.array_equal(pi @ pi % p, pi)
        assert np.array_equal(pi @ gamma % p, gamma @ pi % p)
        out[a] = pi
        start += k
    return out


def trace_pairing_check(group: FiniteMatrixGroup, w_span: Sequence) -> dict:
    """Search ``gamma in H``, eigenvalue ``a`` and ``w`` in the span with
    ``Tr(pi_{gamma,a} w) != 0``; the first witness in element order is returned."""
    p = group.p
    ws = [np.array(w, dtype=np.int64) % p for w in w_span]
    if not ws or all(not w.any() for w in ws):
        raise ValidationError("W must be nonzero", "W")
    for gi, gamma in enumerate(group.elements):
        for a, pi in eigen_projectors(gamma, p).items():
            for wi, w in enumerate(ws):
                tr = int(np.trace(pi @ w)) % p
                if tr:
                    return {"holds": True, "witness": {"element": gi, "eigenvalue": a,
                                                       "w_index": wi, "trace": tr,
                                                       "gamma": gamma.tolist()}}
    return {"holds": False, "witness": None}


def trace_functionals(group: FiniteMatrixGroup, module: Module) -> np.ndarray:
    """Rows: coordinates of ``X -> Tr(pi_{gamma,a} X)`` on the module basis."""
    p = group.p
    rows = []
    for gamma in group.elements:
        for pi in eigen_projectors(gamma, p).values():
            rows.append([int(np.trace(pi @ b)) % p for b in module.basis])
    return np.array(rows, dtype=np.int64)


def condition4(group: FiniteMatrixGroup, module: Module, exhaustive_limit: int = 10 ** 5) -> dict:
    """Condition (4) for every nonzero submodule, decided two ways.

    ``kernel``: the common kernel of all trace functionals is H-stable (the
    functionals are permuted by conjugation), so every submodule meets a
    nonzero functional iff that kernel is 0.  ``cyclic``: the check on every
    cyclic submodule, when ``p^d`` is small enough.
    """
    if module.basis is None:
        raise ValidationError("module has no ambient basis", "module")
    p, d = group.p, module.dim
    funcs = trace_functionals(group, module)
    kernel = nullspace_np(funcs, p, d)
    out = {"kernel_dim": int(len(kernel)), "holds_all": len(kernel) == 0, "cyclic": None}
    if p ** d <= exhaustive_limit and d <= 10:
        failing = None
        for v in itertools.product(range(p), repeat=d):
            nzv = [x for x in v if x]
            if not nzv or nzv[0] != 1:
                continue   # one vector per line
            orbit = np.array([r @ np.array(v) % p for r in module.rho])
            if not (funcs @ orbit.T % p).any():
                failing = list(v)
                break
        out["cyclic"] = {"holds": failing is None, "failing_generator": failing}
    return out


def sufficient_conditions(p: int, n: int, irreducible: bool, eigenvalues_split: bool) -> dict:
    """Sufficient criterion for adequacy; never returns "not adequate"."""
    threshold = 2 * (n + 1)
    ok = p >= threshold and irreducible and eigenvalues_split
    return {"verdict": "adequate-by-lemma" if ok else "inconclusive",
            "threshold": threshold, "p_large": p >= threshold,
            "irreducible": irreducible, "eigenvalues_split": eigenvalues_split}


def group_hypotheses(group: FiniteMatrixGroup) -> dict:
    """The two inputs of :func:`sufficient_conditions`, decided for ``group``.

    Absolute irreducibility is tested by the generated algebra being all of
    ``M_N(F_p)``; splitting by the F_p-root multiplicities summing to ``N``.
    """
    p, n = group.p, group.N
    span = algebra_span_words([g.tolist() for g in group.generators], p)
    split = all(sum(_charpoly_roots(m, p).values()) == n for m in group.elements)
    return {"absolutely_irreducible": len(span) == n * n, "eigenvalues_split": split}


def adequacy_report(group: FiniteMatrixGroup, form: BilinearForm | None = None) -> dict:
    module = adjoint_module(group, form)
    h0 = h0_module(group, module)
    h1 = h1_finite(group, module)
    hom = hom_to_kappa(group)
    try:
        c4 = condition4(group, module)
    except ValidationError as exc:
        c4 = {"error": str(exc), "holds_all": None}
    return {"order": len(group), "dim": module.dim, "h0": h0, "h1": h1, "hom_to_kappa": hom,
            "condition4": c4,
            "big": bool(h0 == 0 and h1 == 0 and hom == 0 and c4.get("holds_all"))}
