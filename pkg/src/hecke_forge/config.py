"""Centralised size and precision guards.

Every enumeration in the package checks one of these limits before doing
work.  ``HECKE_FORGE_GUARDS`` may carry a JSON object of overrides, but it is
only honoured after :func:`override_from_env` is called with
``acknowledge=True`` (the CLI does this for ``--guard-override``).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace

from .errors import GuardError, ValidationError


@dataclass(frozen=True)
class Guards:
    max_ns: int = 8                     # Weyl group enumeration
    oracle_max_n: int = 4               # finite classical group enumeration
    oracle_max_q: int = 5
    max_group_order: int = 20000        # adequacy closures
    max_precision: int = 6              # Z/p^e in galsplit and parahoric
    congruence_max_precision: int = 16  # Tate identity checks (default e = 8)
    max_matrix_size: int = 12           # N for formed matrices


_active = Guards()


def guards() -> Guards:
    return _active


def set_guards(g: Guards) -> None:
    global _active
    _active = g


def reset_guards() -> None:
    set_guards(Guards())


def override_from_env(acknowledge: bool) -> Guards:
    raw = os.environ.get("HECKE_FORGE_GUARDS")
    if not raw:
        return _active
    if not acknowledge:
        raise GuardError("HECKE_FORGE_GUARDS is set but --guard-override was not given")
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"not valid JSON ({exc.msg})", "HECKE_FORGE_GUARDS") from None
    known = {f.name for f in fields(Guards)}
    unknown = set(data) - known
    if unknown:
        raise ValidationError(f"unknown guard(s) {sorted(unknown)}", "HECKE_FORGE_GUARDS")
    g = replace(_active, **{k: int(v) for k, v in data.items()})
    set_guards(g)
    return g


def thread_count() -> int:
    raw = os.environ.get("HECKE_FORGE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValidationError("must be a positive integer", "HECKE_FORGE_THREADS") from None


def check(name: str, value: int, limit: int) -> None:
    if value > limit:
        raise GuardError(f"{name}={value} exceeds guard {limit}")
