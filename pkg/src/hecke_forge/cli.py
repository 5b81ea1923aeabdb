"""Command-line entry point: ``hecke-forge VERB [SUB] [options]``.

Output is canonical JSON (sorted keys, exact rationals as strings).  Exit
codes: 0 success, 1 failed selftest, 2 invalid input or unmet precondition,
3 guard violation.
"""

from __future__ import annotations

import argparse
import dataclasses
import inspect
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import (acceptance, adequacy, config, congruence, defledger, galsplit, oracle, parahoric,
               satake, upoly, weyl)
from .errors import GuardError, PreconditionReport, ValidationError
from .laurent import LaurentPoly
from .modring import Ring

VERBS = ("weyl", "satake", "projector", "split", "adequacy", "ledger", "congruence", "oracle",
         "selftest")


# ---------------------------------------------------------------------------
# serialization


def canonical(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, np.ndarray):
        return canonical(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(x) for x in obj]
    if hasattr(obj, "to_json"):
        return canonical(obj.to_json())
    if isinstance(obj, weyl.SignedPermutation):
        return list(obj.window)
    if dataclasses.is_dataclass(obj):
        return canonical(dataclasses.asdict(obj))
    return str(obj)


def dumps(obj: Any) -> str:
    return json.dumps(canonical(obj), sort_keys=True, separators=(",", ":"))


def _value(x) -> str:
    return str(Fraction(x)) if not isinstance(x, LaurentPoly) else x


# ---------------------------------------------------------------------------
# input helpers


def _payload(args) -> dict:
    raw = None
    if getattr(args, "json", None) is not None:
        raw = args.json
    elif getattr(args, "file", None) is not None:
        path = args.file
        try:
            raw = sys.stdin.read() if path == "-" else Path(path).read_text()
        except OSError as exc:
            raise ValidationError(f"cannot read file ({exc.strerror})", "--file") from None
    if raw is None:
        raise ValidationError("a JSON payload is required (--json or --file)", "payload")
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"not valid JSON ({exc.msg})", "payload") from None
    if not isinstance(data, dict):
        raise ValidationError("expected a JSON object", "payload")
    return data


def _reject_unknown(data: dict, allowed: set, where: str) -> None:
    extra = set(data) - allowed
    if extra:
        raise ValidationError(f"unknown field(s) {sorted(extra)}", where)


def _need(data: dict, key: str, where: str = ""):
    if key not in data:
        raise ValidationError("missing field", f"{where}{key}")
    return data[key]


def _rational(text, field: str) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"{text!r} is not an exact rational", field) from None


def _rationals(text: str, field: str) -> list[Fraction]:
    return [_rational(t, field) for t in str(text).split(",") if t.strip()]


def _ints(text: str, field: str) -> list[int]:
    try:
        return [int(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise ValidationError("expected comma-separated integers", field) from None


def _partition(text, n_s: int, field: str, default=None) -> weyl.IntervalPartition:
    if text is None:
        if default is None:
            raise ValidationError("missing partition", field)
        return default
    if isinstance(text, str):
        try:
            text = json.loads(text)
        except json.JSONDecodeError:
            raise ValidationError("expected a JSON list of [lo, hi] pairs", field) from None
    return weyl.IntervalPartition.from_json(text, n_s, field)


def _group_json(data, field="group") -> weyl.GroupDescriptor:
    if not isinstance(data, dict):
        raise ValidationError("expected {kind, n}", field)
    _reject_unknown(data, {"kind", "n"}, field)
    return weyl.make_group(_need(data, "kind", f"{field}."), _need(data, "n", f"{field}."))


def _form_json(data, field="form") -> galsplit.BilinearForm:
    if not isinstance(data, dict):
        raise ValidationError("expected a form object", field)
    if "matrix" in data:
        _reject_unknown(data, {"matrix", "symmetry"}, field)
        return galsplit.BilinearForm(tuple(tuple(int(x) for x in r) for r in data["matrix"]),
                                     data.get("symmetry", galsplit.SYMMETRIC))
    _reject_unknown(data, {"kind", "m", "u"}, field)
    return galsplit.standard_form(_need(data, "kind", f"{field}."), _need(data, "m", f"{field}."),
                                  data.get("u"))


def _matrix(data, field: str) -> list[list[int]]:
    try:
        return [[int(str(x)) for x in row] for row in data]
    except (TypeError, ValueError):
        raise ValidationError("expected a row-major integer matrix", field) from None


# ---------------------------------------------------------------------------
# verbs


def cmd_weyl(args) -> dict:
    desc = weyl.make_group(args.kind, args.n)
    ns = desc.n_s
    if args.sub == "order":
        return {"order": len(weyl.enumerate_group(desc)),
                "formula": weyl.group_order(ns, desc.weyl_flavor),
                "generators": [list(g.window) for g in weyl.generators(desc)]}
    if args.sub == "element":
        fl = desc.weyl_flavor
        w = weyl.SignedPermutation(tuple(_ints(args.w or "", "--w")), fl) if args.w \
            else weyl.identity(ns, fl)
        out = {"w": list(w.window), "length": weyl.length(w),
               "inverse": list(weyl.invert(w).window)}
        if args.u:
            u = weyl.SignedPermutation(tuple(_ints(args.u, "--u")), fl)
            out["product_u_w"] = list(weyl.group_op(u, w).window)
        if args.theta:
            th = _partition(args.theta, ns, "--theta")
            rep, par = weyl.parabolic_factor(desc, w, th)
            out["parabolic_factor"] = {"minimal": list(rep.window), "parabolic": list(par.window)}
        return out
    theta = _partition(args.theta, ns, "--theta", weyl.IntervalPartition.singletons(ns))
    if args.sub == "cosets":
        if args.omega is None:
            reps = weyl.min_coset_reps(desc, theta)
        else:
            reps = weyl.double_coset_reps(desc, _partition(args.omega, ns, "--omega"), theta)
        return {"count": len(reps),
                "representatives": [{"w": list(w.window), "length": weyl.length(w)} for w in reps]}
    if args.sub == "poincare":
        if args.q is None:   # coefficients of the polynomial in q, lowest degree first
            q = LaurentPoly.q(1)
            poly = weyl.poincare_sum(desc, theta, q)
            top = max((e[-1] // 2 for e in poly.terms), default=0)
            coeffs = [poly.terms.get((0, 2 * k), 0) for k in range(top + 1)]
            return {"poincare_coefficients": coeffs,
                    "parabolic_order": len(weyl.parabolic_subgroup(desc, theta))}
        q = _rational(args.q, "--q")
        return {"poincare": weyl.poincare_sum(desc, theta, q),
                "parabolic_order": len(weyl.parabolic_subgroup(desc, theta))}
    omega = _partition(args.omega, ns, "--omega")
    if args.sub == "matrix":
        if args.w is None:
            return {"matrices": [{"w": list(w.window), "matrix": weyl.coset_matrix(desc, w, omega, theta)}
                                 for w in weyl.matrix_domain(desc, omega, theta)]}
        w = weyl.SignedPermutation(tuple(_ints(args.w, "--w")), desc.weyl_flavor)
        return {"matrix": weyl.coset_matrix(desc, w, omega, theta),
                "b_minimal": weyl.is_b_minimal(w.window, omega, theta)}
    if args.sub == "invert":
        data = _payload(args)
        m = weyl.CosetMatrix.from_json(data)
        bad = weyl.matrix_violations(desc, m, omega, theta)
        if bad:
            raise ValidationError("; ".join(bad), "matrix")
        return {"w": list(weyl.matrix_to_rep(desc, m, omega, theta).window)}
    raise ValidationError(f"unknown subcommand {args.sub!r}", "weyl")


def cmd_satake(args) -> dict:
    desc = weyl.make_group(args.kind, args.n)
    if args.sub == "image":
        js = [args.j] if args.j else range(1, desc.n_s + 1)
        return {"images": {str(j): satake.satake_image(desc, j, args.literal) for j in js},
                "normalisation": {str(j): satake.satake_normalisation(desc, j) for j in js}}
    q = _rational(args.q, "--q")
    chi = _rationals(args.chi, "--chi")
    if args.sub == "eig":
        return {"value": _value(satake.unramified_eigenvalue(desc, chi, q, args.j or 1))}
    if args.sub == "charpoly":
        if args.t:
            return {"charpoly": satake.hecke_char_poly(desc, _rationals(args.t, "--t"), q)}
        return {"charpoly": satake.eigen_char_poly(desc, chi, q),
                "consistency": satake.charpoly_consistency(desc, chi, q)}
    if args.sub == "divisibility":
        return satake.v_divisibility(desc, args.n0, chi, q)
    raise ValidationError(f"unknown subcommand {args.sub!r}", "satake")


def _component(data, ns: int, k: int) -> parahoric.Component:
    where = f"components[{k}]"
    if not isinstance(data, dict):
        raise ValidationError("expected an object", where)
    _reject_unknown(data, {"kind", "params", "theta"}, where)
    theta = data.get("theta")
    theta = None if theta is None else weyl.IntervalPartition.from_json(theta, ns, f"{where}.theta")
    params = tuple(_rational(x, f"{where}.params") for x in _need(data, "params", f"{where}."))
    return parahoric.Component(_need(data, "kind", f"{where}."), params, theta)


def cmd_projector(args) -> dict:
    if args.sub == "vop":
        return projector_vop(_payload(args))
    data = _payload(args)
    _reject_unknown(data, {"group", "Omega", "j0", "j1", "p", "q", "components", "alpha_bar",
                           "version"}, "payload")
    desc = _group_json(_need(data, "group"))
    omega = weyl.IntervalPartition.from_json(_need(data, "Omega"), desc.n_s, "Omega")
    datum = parahoric.ParahoricDatum(desc, omega, int(_need(data, "j0")), int(_need(data, "j1")),
                                     int(_need(data, "p")), int(_need(data, "q")))
    comps = [_component(c, desc.n_s, k) for k, c in enumerate(_need(data, "components"))]
    return parahoric.apply_projector(datum, comps, data.get("alpha_bar")).to_json()


def projector_vop(data: dict) -> dict:
    """Diagonal of ``V_k^j`` on the Iwahori model of a principal series."""
    _reject_unknown(data, {"group", "Omega", "Theta", "psi", "q", "j", "k", "model", "version"},
                    "payload")
    desc = _group_json(_need(data, "group"))
    ns = desc.n_s
    omega = weyl.IntervalPartition.from_json(_need(data, "Omega"), ns, "Omega")
    theta = weyl.IntervalPartition.from_json(data.get("Theta", [[i, i] for i in range(ns + 1)]),
                                             ns, "Theta")
    psi = [_rational(x, "psi") for x in _need(data, "psi")]
    j, k = int(_need(data, "j")), int(_need(data, "k"))
    module = parahoric.build_ps_module(desc, theta, psi, _rational(_need(data, "q"), "q"))
    diag = parahoric.v_operator(module, omega, j, k, data.get("model", "jacquet"))
    i = len([x for x in range(omega.blocks[j - 1][0], omega.blocks[j - 1][1] + 1) if x > 0])
    roots = parahoric.frobenius_roots(desc, psi)
    return {"diagonal": {",".join(map(str, w)): v for w, v in sorted(diag.items())},
            "warnings": list(parahoric.block_constancy_warnings(theta, psi)),
            "w_k_j_size": parahoric.w_k_j_size(i, k),
            "phat": upoly.to_strings(parahoric.phat_poly(roots, omega, j, k))}


def cmd_split(args) -> dict:
    if args.sub == "random":
        rng = random.Random(args.seed)
        ring = Ring(args.p, args.e)
        form = _form_json(json.loads(args.form)) if args.form else galsplit.standard_form("A", args.N)
        m, a, b = galsplit.random_split_instance(form, ring, rng, args.b_pairs)
        res = galsplit.split_by_factor(m, form, a, b, ring)
        return {"M": m, "A": a, "B": b, "result": res}
    data = _payload(args)
    if args.sub == "run":
        _reject_unknown(data, {"p", "e", "form", "M", "A", "B", "version"}, "payload")
        ring = Ring(int(_need(data, "p")), int(data.get("e", 1)))
        config.check("e", ring.e, config.guards().max_precision)
        form = _form_json(_need(data, "form"))
        m = _matrix(_need(data, "M"), "M")
        a = [int(str(x)) for x in _need(data, "A")]
        b = [int(str(x)) for x in _need(data, "B")]
        return galsplit.split_by_factor(m, form, a, b, ring).to_json()
    if args.sub == "descend":
        _reject_unknown(data, {"p", "form", "rho", "version"}, "payload")
        p = int(_need(data, "p"))
        form = _form_json(_need(data, "form"))
        rho = [(_matrix(g[0], f"rho[{k}][0]"), _matrix(g[1], f"rho[{k}][1]"))
               for k, g in enumerate(_need(data, "rho"))]
        return galsplit.descend_dual_numbers(rho, form, p)
    if args.sub == "derivation":
        _reject_unknown(data, {"p", "B", "version"}, "payload")
        p = int(_need(data, "p"))
        b = _matrix(_need(data, "B"), "B")
        table = galsplit.inner_derivation_table(b, p)
        return {"table": {f"{i},{j}": v for (i, j), v in sorted(table.items())},
                "recovered_B": galsplit.inner_derivation_matrix(table, len(b), p)}
    raise ValidationError(f"unknown subcommand {args.sub!r}", "split")


def cmd_adequacy(args) -> dict:
    if args.sub == "conditions":
        return adequacy.sufficient_conditions(args.p, args.N, not args.reducible,
                                              not args.nonsplit)
    data = _payload(args)
    _reject_unknown(data, {"p", "generators", "form", "submodules", "version"}, "payload")
    p = int(_need(data, "p"))
    gens = [np.array(_matrix(g, f"generators[{k}]"), dtype=np.int64)
            for k, g in enumerate(_need(data, "generators"))]
    grp = adequacy.close_group(gens, p)
    form = _form_json(data["form"]) if "form" in data else None
    out = adequacy_check(grp, form)
    subs = []
    for k, w in enumerate(data.get("submodules", [])):
        span = [np.array(_matrix(x, f"submodules[{k}]"), dtype=np.int64) for x in w]
        subs.append(adequacy.trace_pairing_check(grp, span))
    out["submodules"] = subs
    return out


def adequacy_check(grp, form) -> dict:
    out = adequacy.adequacy_report(grp, form)
    out["cyclic_h1"] = adequacy.cyclic_h1(grp, adequacy.adjoint_module(grp, form))
    hyp = adequacy.group_hypotheses(grp)
    out["hypotheses"] = hyp
    out["sufficient"] = adequacy.sufficient_conditions(grp.p, grp.N, hyp["absolutely_irreducible"],
                                                       hyp["eigenvalues_split"])
    return out


def cmd_ledger(args) -> dict:
    if args.sub == "budget":
        q, bound = defledger.tw_budget(args.q0, args.h1, _ints(args.a or "", "--a"),
                                       _ints(args.inf or "", "--inf"))
        return {"q": q, "bound": bound}
    if args.sub == "defect":
        desc = weyl.make_group(args.kind, args.n)
        return {"fl_defect": defledger.fl_defect(args.f, desc),
                "h0_infinity": defledger.h0_infinity(desc),
                "positive_roots": defledger.positive_roots(desc)}
    data = _payload(args)
    data.pop("version", None)
    return defledger.ledger_report(defledger.LedgerInput.from_json(data))


def cmd_congruence(args) -> dict:
    if args.sub == "fiber":
        return congruence.fiber_product_numbers(args.k)
    if args.json is not None or args.file is not None:
        data = _payload(args)
        _reject_unknown(data, {"p", "e", "f", "a", "version"}, "payload")
        p, e = int(_need(data, "p")), int(data.get("e", congruence.DEFAULT_PRECISION))
        f, a = [int(str(x)) for x in _need(data, "f")], int(_need(data, "a"))
    else:
        if args.p is None or args.f is None or args.a is None:
            raise ValidationError("need --p, --f and --a (or a JSON payload)", "congruence")
        p, e, f, a = args.p, args.e, _ints(args.f, "--f"), args.a
    alg = congruence.MonogenicAlgebra.make(p, f, e)
    out = congruence.tate_check(alg, a)
    if args.shift:
        moved = congruence.translate(alg, args.shift)
        out["translated"] = congruence.tate_check(moved, a + args.shift)
    return out


def cmd_oracle(args) -> dict:
    desc = weyl.make_group(args.kind, args.n)
    ns = desc.n_s
    if args.sub == "hecke":
        chi = _rationals(args.chi, "--chi") if args.chi else \
            [LaurentPoly.z(ns, i + 1) for i in range(ns)]
        q = _rational(args.q, "--q") if args.q else LaurentPoly.q(ns)
        js = [args.j] if args.j else range(1, ns + 1)
        out = {}
        for j in js:
            lhs = oracle.spherical_coset_sum(desc, j, chi, q)
            rhs = satake.unramified_eigenvalue(desc, chi, q, j)
            out[str(j)] = {"coset_sum": _value(lhs) if not isinstance(lhs, LaurentPoly) else lhs,
                           "eigenvalue": _value(rhs) if not isinstance(rhs, LaurentPoly) else rhs,
                           "agree": lhs == rhs}
        return {"hecke": out}
    if args.sub == "index":
        args.q = int(_rational(args.q or 3, "--q"))
        return {"index": oracle.double_coset_index(args.u, desc.n, args.j, args.n0, args.m, args.q),
                "formula_exponent": oracle.index_formula(desc.n, args.j),
                "representative_count": oracle.representative_count(desc.n, args.j, args.n0,
                                                                    args.q),
                **({"whole_matrix_index": oracle.double_coset_index_whole(
                    args.u, desc.n, args.j, args.n0, args.m, args.q)} if args.whole else {})}
    if args.sub == "jset":
        big_i, big_j = _ints(args.I, "--I"), _ints(args.J or "", "--J")
        out = {"log_count": oracle.jset_log_count(desc, big_i, big_j),
               "closed_form": oracle.jset_log_count_closed(desc, big_i, big_j),
               "closed_form_literal": oracle.jset_log_count_closed(desc, big_i, big_j, False),
               "phi_exponent": oracle.phi_exponent(desc, big_i, big_j)}
        if args.q:
            out["enumerated"] = sum(1 for _ in oracle.enumerate_jset(desc, big_i, big_j,
                                                                 int(args.q)))
        return out
    q = int(_rational(args.q, "--q"))
    grp = oracle.enumerate_points(desc, q)
    if args.sub == "order":
        return {"order": len(grp), "formula": oracle.classical_order(desc, q)}
    theta = _partition(args.theta, ns, "--theta", weyl.IntervalPartition.singletons(ns))
    if args.sub == "flags":
        return oracle.flag_count(grp, theta)
    if args.sub == "cosets":
        omega = _partition(args.omega, ns, "--omega", weyl.IntervalPartition.singletons(ns))
        return {"double_cosets": oracle.count_double_cosets(grp, theta, omega),
                "weyl_double_cosets": len(weyl.double_coset_reps(desc, omega, theta))}
    raise ValidationError(f"unknown subcommand {args.sub!r}", "oracle")


def coverage_audit() -> dict:
    """Public functions of the primary modules not reachable from any verb.

    Reachability is a static name search: starting from this module and the
    acceptance suite (run by ``selftest``), a function is reached once its
    name is called in the source of something already reached.
    """
    import re
    mods = (weyl, satake, parahoric, galsplit, adequacy, defledger, congruence, oracle)
    funcs = {}
    for mod in mods:
        short = mod.__name__.rsplit(".", 1)[-1]
        for name, f in vars(mod).items():
            if inspect.isfunction(f) and f.__module__ == mod.__name__:
                funcs[(short, name)] = inspect.getsource(f)
    frontier = [inspect.getsource(sys.modules[__name__]), inspect.getsource(acceptance)]
    for mod in mods:   # class methods call module helpers too
        frontier += [inspect.getsource(c) for c in vars(mod).values()
                     if inspect.isclass(c) and c.__module__ == mod.__name__]
    reached: set = set()
    while frontier:
        text = frontier.pop()
        for key, src in funcs.items():
            if key not in reached and re.search(rf"\b{re.escape(key[1])}\(", text):
                reached.add(key)
                frontier.append(src)
    missing: dict = {}
    for short, name in sorted(set(funcs) - reached):
        if not name.startswith("_"):
            missing.setdefault(short, []).append(name)
    return {"unreached": missing, "reached": len([k for k in reached if not k[1].startswith("_")])}


def cmd_selftest(args) -> tuple[dict, int]:
    results = []
    for num, title, _budget, _fn in acceptance.CRITERIA:
        if args.only and num not in args.only:
            continue
        res = acceptance.run_criterion(num, args.level, args.seed)
        if not args.report:
            print(res.line(), file=sys.stderr)
        results.append(res)
    out = {"level": args.level, "seed": args.seed,
           "criteria": [r.to_json() for r in results],
           "failed": [f"{r.number}: {r.title}" for r in results if not r.passed],
           "coverage": coverage_audit()}
    if args.report:
        from . import report
        out["figures"] = report.write_report(results, args.report)
        print(report.delimited(results), file=sys.stderr)
    for r in out["criteria"]:
        r.pop("seconds", None)   # keep stdout deterministic; timings go to stderr
    return out, 1 if out["failed"] else 0


# ---------------------------------------------------------------------------
# parser


def _common(parser: argparse.ArgumentParser, top: bool) -> None:
    d = None if top else argparse.SUPPRESS
    parser.add_argument("--json", default=d, help="inline JSON payload")
    parser.add_argument("--file", default=d, help="JSON payload file ('-' for stdin)")
    parser.add_argument("--seed", type=int, default=0 if top else argparse.SUPPRESS)
    parser.add_argument("--guard-override", action="store_true",
                        default=False if top else argparse.SUPPRESS,
                        help="honour HECKE_FORGE_GUARDS (unguarded runs)")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="hecke-forge", description=__doc__.splitlines()[0])
    _common(top, True)
    verbs = top.add_subparsers(dest="verb", required=True)

    def sub(parent, name, subs, **kw):
        p = parent.add_parser(name, **kw)
        _common(p, False)
        p.add_argument("sub", choices=subs)
        return p

    p = sub(verbs, "weyl", ["order", "element", "cosets", "poincare", "matrix", "invert"])
    p.add_argument("--kind", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta")
    p.add_argument("--omega")
    p.add_argument("--w", help="window, e.g. --w=2,-1")
    p.add_argument("--u", help="left factor for the product u o w")
    p.add_argument("--q")

    p = sub(verbs, "satake", ["image", "eig", "charpoly", "divisibility"])
    p.add_argument("--kind", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int)
    p.add_argument("--q", default="1")
    p.add_argument("--chi", default="")
    p.add_argument("--t", help="spherical eigenvalues t^(1..n_s) for charpoly")
    p.add_argument("--n0", type=int, default=1)
    p.add_argument("--literal", action="store_true")

    sub(verbs, "projector", ["run", "vop"])

    p = sub(verbs, "split", ["run", "descend", "derivation", "random"])
    p.add_argument("--p", type=int, default=11)
    p.add_argument("--e", type=int, default=1)
    p.add_argument("--N", type=int, default=4)
    p.add_argument("--form")
    p.add_argument("--b-pairs", dest="b_pairs", type=int, default=1)

    p = sub(verbs, "adequacy", ["check", "conditions"])
    p.add_argument("--p", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--reducible", action="store_true")
    p.add_argument("--nonsplit", action="store_true")

    p = verbs.add_parser("ledger")
    _common(p, False)
    p.add_argument("sub", nargs="?", default="report", choices=["report", "budget", "defect"])
    p.add_argument("--q0", type=int, default=1)
    p.add_argument("--h1", type=int, default=0)
    p.add_argument("--a")
    p.add_argument("--inf")
    p.add_argument("--kind")
    p.add_argument("--n", type=int)
    p.add_argument("--f", type=int, default=1)

    p = verbs.add_parser("congruence")
    _common(p, False)
    p.add_argument("sub", nargs="?", default="tate", choices=["tate", "fiber"])
    p.add_argument("--p", type=int)
    p.add_argument("--e", type=int, default=congruence.DEFAULT_PRECISION)
    p.add_argument("--f", help="coefficients, lowest degree first")
    p.add_argument("--a", type=int)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--shift", type=int, default=0, help="also check the presentation x -> x + c")

    p = sub(verbs, "oracle", ["order", "flags", "cosets", "hecke", "index", "jset"])
    p.add_argument("--kind", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q")
    p.add_argument("--theta")
    p.add_argument("--omega")
    p.add_argument("--chi")
    p.add_argument("--j", type=int)
    p.add_argument("--n0", type=int, default=1)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--u", default="U0", choices=["U0", "U1"])
    p.add_argument("--whole", action="store_true", help="also count whole matrices (tiny n)")
    p.add_argument("--I")
    p.add_argument("--J")

    p = verbs.add_parser("selftest")
    _common(p, False)
    p.add_argument("--level", choices=["fast", "full"], default="fast")
    p.add_argument("--only", type=lambda s: _ints(s, "--only"), default=None)
    p.add_argument("--report", help="directory for figures and the delimited report")
    return top


HANDLERS: dict[str, Callable] = {
    "weyl": cmd_weyl, "satake": cmd_satake, "projector": cmd_projector, "split": cmd_split,
    "adequacy": cmd_adequacy, "ledger": cmd_ledger, "congruence": cmd_congruence,
    "oracle": cmd_oracle,
}


def dispatch(argv: list[str]) -> tuple[int, str, str]:
    """Run one command; returns ``(exit code, stdout, stderr)`` without printing."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), "", ""
    config.reset_guards()
    try:
        config.override_from_env(args.guard_override)
        config.thread_count()
        if args.verb == "selftest":
            out, code = cmd_selftest(args)
            return code, dumps(out), ""
        return 0, dumps(HANDLERS[args.verb](args)), ""
    except PreconditionReport as exc:
        return 2, dumps({"error": str(exc), "witness": exc.witness}), \
            f"precondition failed: {exc}"
    except ValidationError as exc:
        return 2, "", f"invalid input: {exc}"
    except GuardError as exc:
        return 3, "", f"guard violation: {exc}"
    except (ValueError, TypeError, KeyError, IndexError) as exc:
        # malformed payload values (e.g. a string where an integer belongs)
        return 2, "", f"invalid input: malformed payload ({type(exc).__name__}: {exc})"
    finally:
        config.reset_guards()


def main(argv: list[str] | None = None) -> int:
    code, out, err = dispatch(sys.argv[1:] if argv is None else argv)
    if out:
        print(out)
    if err:
        print(err, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
