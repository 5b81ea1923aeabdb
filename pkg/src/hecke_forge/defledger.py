"""Bookkeeping for the deformation-dimension formulas.

Every quantity here is an integer supplied by the caller or read off a table;
no Galois cohomology is computed.  The point is exact, cross-checked
arithmetic of local defects, Euler characteristics and the Taylor-Wiles budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import ValidationError
from .weyl import GroupDescriptor, Kind, make_group

PLACE_KINDS = ("above_p", "taylor_wiles", "other_finite", "infinite")


@dataclass(frozen=True)
class PlaceRecord:
    label: str
    kind: str
    h0: int
    l: int = 0
    f: int = 1      # local degree [F_v : Q_p] for places above p

    def __post_init__(self):
        if self.kind not in PLACE_KINDS:
            raise ValidationError(f"unknown place kind {self.kind!r}", f"places[{self.label}].kind")
        for name in ("h0", "l", "f"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ValidationError("must be a nonnegative integer", f"places[{self.label}].{name}")
        if self.kind == "taylor_wiles" and self.l - self.h0 != 1:
            raise ValidationError("a Taylor-Wiles place needs l - h0 = 1", f"places[{self.label}]")
        if self.kind == "other_finite" and self.l != self.h0:
            raise ValidationError("a minimal place needs l = h0", f"places[{self.label}]")
        if self.kind == "above_p" and self.f < 1:
            raise ValidationError("residue degree must be positive", f"places[{self.label}].f")

    @property
    def in_s(self) -> bool:
        return self.kind != "infinite"


@dataclass
class LedgerInput:
    group: GroupDescriptor
    degree: int
    places: list[PlaceRecord] = field(default_factory=list)
    h0_global: int = 0
    h0_twist: int = 0
    h1_sperp_twist: int = 0

    def __post_init__(self):
        if not isinstance(self.degree, int) or self.degree < 1:
            raise ValidationError("must be a positive integer", "degree")
        for name in ("h0_global", "h0_twist", "h1_sperp_twist"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ValidationError("must be a nonnegative integer", name)

    @classmethod
    def from_json(cls, data: dict) -> "LedgerInput":
        if not isinstance(data, dict):
            raise ValidationError("expected an object", "ledger")
        allowed = {"group", "degree", "places", "h0_global", "h0_twist", "h1_sperp_twist"}
        extra = set(data) - allowed
        if extra:
            raise ValidationError(f"unknown field(s) {sorted(extra)}", "ledger")
        try:
            g = data["group"]
            desc = make_group(g["kind"], g["n"])
            places = []
            for i, pl in enumerate(data.get("places", [])):
                bad = set(pl) - {"label", "kind", "h0", "l", "f"}
                if bad:
                    raise ValidationError(f"unknown field(s) {sorted(bad)}", f"places[{i}]")
                places.append(PlaceRecord(str(pl.get("label", i)), pl["kind"], pl["h0"],
                                          pl.get("l", 0), pl.get("f", 1)))
            return cls(desc, data["degree"], places, data.get("h0_global", 0),
                       data.get("h0_twist", 0), data.get("h1_sperp_twist", 0))
        except KeyError as exc:
            raise ValidationError("missing field", str(exc.args[0])) from None


def dual_dim(desc: GroupDescriptor) -> int:
    """``dim ĝ`` of the dual group: ``Sp_N`` for odd orthogonal, ``SO_N`` otherwise."""
    n = desc.N
    if desc.kind is Kind.SO_ODD:
        return n * (n + 1) // 2
    return n * (n - 1) // 2


def positive_roots(desc: GroupDescriptor) -> int:
    """``dim Ĝ - dim B̂``."""
    n = desc.N
    if desc.kind is Kind.SO_ODD:
        return n * n // 4            # Sp_N, N even
    if n % 2:
        return (n - 1) ** 2 // 4     # SO_N, N odd
    return n * (n - 2) // 4          # SO_N, N even


def fl_defect(f: int, desc: GroupDescriptor) -> int:
    if not isinstance(f, int) or f < 1:
        raise ValidationError("must be a positive integer", "f")
    return f * positive_roots(desc)


def h0_infinity(desc: GroupDescriptor) -> int:
    """Table value ``N(N+1)/2`` (odd orthogonal) or ``N(N-1)/2`` (otherwise)."""
    n = desc.N
    return n * (n + 1) // 2 if desc.kind is Kind.SO_ODD else n * (n - 1) // 2


def _finite(inp: LedgerInput):
    return [pl for pl in inp.places if pl.in_s]


def _infinite(inp: LedgerInput):
    return [pl for pl in inp.places if not pl.in_s]


def local_euler_sum(inp: LedgerInput, literal: bool = False) -> int:
    """``sum_{v in S} chi(H_v)``; only places above ``p`` contribute.

    The local Euler-Poincare formula gives ``-f_v dim ĝ`` per place (``f_v`` the
    local degree), so ``-[F:Q] dim ĝ`` once every place above ``p`` is listed.
    ``literal=True`` uses ``+f_v dim ĝ`` (the literal reading); with that
    sign the local sum and the closed form for ``chi(H_S)`` disagree.
    """
    total = sum(pl.f for pl in inp.places if pl.kind == "above_p") * dual_dim(inp.group)
    return total if literal else -total


def global_euler(inp: LedgerInput) -> int:
    """``chi(H) = sum_{v | inf} h0_v - [F:Q] dim ĝ``."""
    return sum(pl.h0 for pl in _infinite(inp)) - inp.degree * dual_dim(inp.group)


def euler_chi_S(inp: LedgerInput, literal: bool = False) -> int:
    """``chi(H_S) = chi(H) - sum chi(H_v) - sum_{v in S} (l_v - h0_v)``."""
    return (global_euler(inp) - local_euler_sum(inp, literal)
            - sum(pl.l - pl.h0 for pl in _finite(inp)))


def euler_chi_S_closed(inp: LedgerInput) -> int:
    """Closed form ``sum_{v|inf} h0_v + sum_{v in S}(h0_v - l_v)``.

    It agrees with :func:`euler_chi_S` when the local degrees above ``p`` sum to ``[F:Q]``.
    """
    return (sum(pl.h0 for pl in _infinite(inp))
            + sum(pl.h0 - pl.l for pl in _finite(inp)))


def alternating_sum(inp: LedgerInput) -> int:
    """``h0_S - h1_S + h2_S - h3_S`` with ``h0_S = h0``, ``h2_S = h1_{S-perp}[1]``,
    ``h3_S = h0[1]``."""
    return inp.h0_global - h1_S(inp) + inp.h1_sperp_twist - inp.h0_twist


def h1_S(inp: LedgerInput) -> int:
    """``h1_{S-perp}[1] - h0[1] - sum_{v|inf} h0_v + sum_{v in S}(l_v - h0_v) + h0``."""
    return (inp.h1_sperp_twist - inp.h0_twist - sum(pl.h0 for pl in _infinite(inp))
            + sum(pl.l - pl.h0 for pl in _finite(inp)) + inp.h0_global)


def tw_budget(q0: int, h1_sperp_twist: int, a_values: Sequence[int],
              infinite_h0s: Sequence[int]) -> tuple[int, int]:
    if not isinstance(q0, int) or q0 < 1:
        raise ValidationError("must be a positive integer", "q0")
    q = max(q0, h1_sperp_twist)
    return q, q + sum(a_values) - sum(infinite_h0s)


def coincidence_report(inp: LedgerInput) -> dict:
    """Both sides of the comparison ``[F:Q](dim G - dim B)`` vs ``sum_{v|inf} h0``,
    the latter from the table; equality is reported, not asserted."""
    lhs = inp.degree * positive_roots(inp.group)
    rhs = inp.degree * h0_infinity(inp.group)
    return {"fl_total": lhs, "infinite_total": rhs, "equal": lhs == rhs}


def ledger_report(inp: LedgerInput) -> dict:
    lines = []
    for pl in inp.places:
        item = {"label": pl.label, "kind": pl.kind, "h0": pl.h0}
        if pl.in_s:
            item["l_minus_h0"] = pl.l - pl.h0
        if pl.kind == "above_p":
            item["fl_defect"] = fl_defect(pl.f, inp.group)
        lines.append(item)
    return {"group": inp.group.to_json(), "dim_dual_lie": dual_dim(inp.group),
            "h0_infinity_table": h0_infinity(inp.group), "places": lines,
            "chi_global": global_euler(inp), "chi_local_sum": local_euler_sum(inp),
            "euler_chi_S": euler_chi_S(inp), "euler_chi_S_literal": euler_chi_S(inp, True),
            "euler_chi_S_closed": euler_chi_S_closed(inp), "alternating_sum": alternating_sum(inp),
            "h1_S": h1_S(inp),
            "coincidence": coincidence_report(inp)}
