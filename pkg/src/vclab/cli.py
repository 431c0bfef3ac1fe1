"""Command-line entry point.

Exit codes: 0 ok, 1 a checked property failed (or a counterexample turned up),
2 usage or input error, 3 a search ran out of budget.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from . import extremal, polycert, search, shadow, structure, sunflower
from .core import (
    ClaimCheck,
    Family,
    FamilyFormatError,
    SubsetMask,
    claims_to_json,
    elements_of,
    parse_family,
    serialize_family,
)
from .vc import (
    InvalidWitnessError,
    ShatteredMemberError,
    WitnessedFamily,
    count_size_d_witnesses,
    parse_witnessed_family,
    select_witnesses,
    serialize_witnessed_family,
    size_d_witness_bound,
    vc_dimension,
)

OK, VIOLATION, USAGE, BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


# --- helpers -------------------------------------------------------------------


def _has_witnesses(text: str) -> bool:
    return any("|" in line.split("#", 1)[0] for line in text.splitlines())


def load_family(path: str) -> Family:
    text = Path(path).read_text()
    if _has_witnesses(text):
        return parse_witnessed_family(text).family
    return parse_family(text)


def load_witnessed(path: str, d=None) -> WitnessedFamily:
    """Use the witnesses in the file when present, otherwise select them."""
    text = Path(path).read_text()
    if _has_witnesses(text):
        return parse_witnessed_family(text, d)
    f = parse_family(text)
    if d is None:
        r = f.rank()
        if r is None:
            raise UsageError("pass --d for an empty or non-uniform family")
        d = r - 1
    return select_witnesses(f, d)


def parse_elements(text: str, n: int) -> SubsetMask:
    try:
        elems = [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise UsageError(f"bad element list {text!r}") from exc
    try:
        return SubsetMask.from_elements(n, elems)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def emit(args, payload: dict, text: str) -> None:
    out = json.dumps(payload, sort_keys=True, indent=1) + "\n" if args.json else text
    if not out.endswith("\n"):
        out += "\n"
    if getattr(args, "out", None):
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def claims_text(claims: dict[str, ClaimCheck]) -> str:
    lines = []
    for name, c in claims.items():
        status = "ok" if c.holds else "FAIL"
        lines.append(f"{status:4} {name}: {c.lhs} vs {c.rhs}")
    return "\n".join(lines)


def all_hold(claims: dict[str, ClaimCheck]) -> bool:
    return all(c.holds for c in claims.values())


# --- subcommands ---------------------------------------------------------------


def cmd_construct(args) -> int:
    rng = random.Random(args.seed)
    kind, n, d = args.kind, args.n, args.d
    if kind == "star":
        w = extremal.star_witnessed(n, d, args.center or n)
        text = serialize_witnessed_family(w)
    elif kind == "mz":
        assignment = extremal.random_assignment(n, d, rng) if args.random else None
        w = extremal.mz_family(n, d, assignment)
        text = serialize_witnessed_family(w)
    elif kind == "stability":
        text = serialize_family(extremal.stability_example(n, d))
    elif kind == "hamming":
        text = serialize_family(extremal.hamming_ball(n, d))
    else:
        raise UsageError(f"unknown kind {kind}")
    fam = (parse_witnessed_family(text).family if _has_witnesses(text) else parse_family(text))
    emit(args, {"kind": kind, "n": n, "d": d, "size": len(fam), "text": text}, text)
    return OK


def cmd_vcdim(args) -> int:
    f = load_family(args.file)
    v = vc_dimension(f)
    emit(args, {"vc_dimension": v, "size": len(f)}, str(v))
    return OK


def cmd_witness(args) -> int:
    f = load_family(args.file)
    d = args.d if args.d is not None else (f.rank() or 1) - 1
    try:
        w = select_witnesses(f, d)
    except ShatteredMemberError as exc:
        emit(args, {"ok": False, "shattered_member": exc.index}, f"member {exc.index} is shattered: VC > {d}")
        return VIOLATION
    count, bound = count_size_d_witnesses(w), size_d_witness_bound(w.n, d)
    payload = {
        "ok": True,
        "d": d,
        "witnesses": [list(b.elements()) for b in w.witnesses],
        "size_d_witnesses": count,
        "size_d_witness_bound": bound,
    }
    emit(args, payload, serialize_witnessed_family(w))
    return OK if count <= bound else VIOLATION


def cmd_links(args) -> int:
    w = load_witnessed(args.file, args.d)
    claims = structure.link_audit(w)
    sizes = {str(v): list(xy) for v, xy in structure.link_sizes(w).items()}
    emit(args, {"link_sizes": sizes, "claims": claims_to_json(claims)}, claims_text(claims))
    return OK if all_hold(claims) else VIOLATION


def cmd_transversal(args) -> int:
    w = load_witnessed(args.file, args.d)
    j = structure.select_transversal(w, args.s)
    emit(args, {"J": list(j.elements()), "s": args.s}, " ".join(map(str, j.elements())) or "{}")
    return OK


def cmd_audit(args) -> int:
    w = load_witnessed(args.file, args.d)
    if args.s1:
        try:
            rep = structure.analyze_s1(w)
        except structure.LinkStructureError as exc:
            emit(args, {"ok": False, "error": str(exc)}, str(exc))
            return VIOLATION
        emit(args, rep.to_json(), f"case: {rep.case}\n" + claims_text(rep.claims))
        return OK if all_hold(rep.claims) else VIOLATION
    if args.J is None:
        raise UsageError("audit needs --J (or --s1)")
    audit = structure.partition_TJ(w, parse_elements(args.J, w.n))
    text = " ".join(f"{k}={v}" for k, v in audit.sizes().items())
    text += f"\ndeficiency={audit.deficiency}\n" + claims_text(audit.claims)
    emit(args, audit.to_json(), text)
    return OK if all_hold(audit.claims) else VIOLATION


def cmd_shadow(args) -> int:
    if args.witness_routes:
        claims = shadow.size_d_witness_routes(load_witnessed(args.file))
        emit(args, {"claims": claims_to_json(claims)}, claims_text(claims))
        return OK if all_hold(claims) else VIOLATION
    if args.s is None:
        raise UsageError("shadow needs --s (or --witness-routes)")
    f = load_family(args.file)
    sh = shadow.shadow_s(f, args.s)
    emit(args, {"s": args.s, "size": len(sh), "members": [list(x) for x in sh.sets()]}, serialize_family(sh))
    return OK


def cmd_kk(args) -> int:
    if args.file is None:
        if args.m is None or args.k is None or args.s is None:
            raise UsageError("kk needs a family file or all of --m --k --s")
        v = shadow.exact_kk_min(args.m, args.k, args.s)
        emit(args, {"m": args.m, "k": args.k, "s": args.s, "min_shadow": v}, str(v))
        return OK
    rep = shadow.check_kk(load_family(args.file))
    payload = {"shadow_size": rep.shadow_size, "lovasz_bound": repr(rep.lovasz_bound),
               "alpha": repr(rep.alpha), "holds": rep.holds}
    emit(args, payload, f"shadow {rep.shadow_size} >= {rep.lovasz_bound:.6f}: {rep.holds}")
    return OK if rep.holds else VIOLATION


def cmd_sunflower(args) -> int:
    if args.audit:
        rep = sunflower.audit_witness_sunflowers(load_witnessed(args.file, args.d))
        emit(args, rep.to_json(), f"forbidden size {rep.forbidden_size}: {'ok' if rep.holds else 'FAIL'}")
        return OK if rep.holds else VIOLATION
    f = load_family(args.file)
    hit = sunflower.find_sunflower(f, args.r)
    if hit is None:
        emit(args, {"found": False, "r": args.r}, "none")
    else:
        emit(args, {"found": True, "r": args.r, "core": list(hit.core.elements()),
                    "petal_indices": list(hit.petal_indices)},
             f"core {list(hit.core.elements())} petals {list(hit.petal_indices)}")
    return OK


def cmd_polycert(args) -> int:
    if args.verify:
        data = json.loads(Path(args.file).read_text())
        claims = polycert.verify_certificate(data)
        ok = all_hold(claims)
        payload = {"valid": ok, "claims": claims_to_json(claims)}
        out = json.dumps(payload, sort_keys=True, indent=1) if args.json else claims_text(claims)
        print(out)
        return OK if ok else VIOLATION
    w = load_witnessed(args.file, args.d)
    try:
        cert = polycert.certify(w, args.gamma)
    except polycert.RankDeficiencyError as exc:
        kernel = [str(x) for x in (exc.kernel or [])]
        emit(args, {"valid": False, "rank": exc.rank, "side": exc.side, "kernel": kernel},
             f"rank deficient: {exc.rank} < {exc.side}")
        return VIOLATION
    except polycert.FalsificationError as exc:
        emit(args, {"valid": False, "falsification": str(exc)}, f"FALSIFICATION: {exc}")
        return VIOLATION
    if args.out:
        Path(args.out).write_text(cert.dumps() + "\n")
        if not args.json:
            print(f"|F|={w.m} <= {cert.bound} (rank {cert.rank} = side {cert.matrix_side})")
        else:
            print(cert.dumps())
    else:
        print(cert.dumps() if args.json else
              f"|F|={w.m} <= {cert.bound} (rank {cert.rank} = side {cert.matrix_side})")
    return OK


def cmd_search(args) -> int:
    budget = dict(node_budget=args.nodes, time_budget=args.seconds)
    if args.mode == "vc":
        res = search.max_vc_family(args.n, args.d, **budget)
    elif args.mode == "switness":
        if args.s is None:
            raise UsageError("switness mode needs --s")
        res = search.max_switness_family(args.n, args.d, args.s, at_most=args.at_most, **budget)
    else:
        k = args.k if args.k is not None else args.d + 1
        res = search.max_intersecting(args.n, k, args.nontrivial, **budget)
    text = f"{res.size}" + ("" if res.complete else " (incomplete: lower bound only)")
    if res.exceeds_conjecture:
        text = f"COUNTEREXAMPLE: size {res.size} > {res.conjectured_bound}\n" + serialize_family(res.family)
    emit(args, res.to_json(), text)
    if res.exceeds_conjecture:
        return VIOLATION
    return OK if res.complete else BUDGET


def cmd_hunt(args) -> int:
    res = search.hunt_counterexample(args.n, args.d, args.s, budget=args.budget, seed=args.seed,
                                     at_most=args.at_most, exhaustive_nodes=args.nodes or 0)
    if res.counterexample is not None:
        text = f"COUNTEREXAMPLE: size {len(res.counterexample)} > {res.bound}\n" + serialize_family(res.counterexample)
    else:
        text = f"none found (best {res.best_size}, bound {res.bound}, {res.iterations} steps)"
    emit(args, res.to_json(), text)
    return VIOLATION if res.counterexample is not None else OK


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker cap (searches currently run in one worker)")
    common.add_argument("--out", help="write the main output here instead of stdout")

    p = argparse.ArgumentParser(prog="vclab", description="Exact tools for uniform set systems of bounded VC-dimension.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, file_arg="required"):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if file_arg == "required":
            sp.add_argument("file")
        elif file_arg == "optional":
            sp.add_argument("file", nargs="?")
        sp.set_defaults(func=func)
        return sp

    sp = add("construct", cmd_construct, "write a named construction", file_arg=None)
    sp.add_argument("--kind", required=True, choices=["star", "mz", "stability", "hamming"])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--center", type=int)
    sp.add_argument("--random", action="store_true", help="random link assignment (mz only, uses --seed)")

    add("vcdim", cmd_vcdim, "print the VC-dimension")
    for name, func, help_text in [("witness", cmd_witness, "select witnesses"),
                                  ("links", cmd_links, "audit the link identities"),
                                  ("transversal", cmd_transversal, "pick the high-link element set J"),
                                  ("audit", cmd_audit, "six-part partition audit")]:
        sp = add(name, func, help_text)
        sp.add_argument("--d", type=int)
        if name == "transversal":
            sp.add_argument("--s", type=int, required=True)
        if name == "audit":
            sp.add_argument("--J")
            sp.add_argument("--s1", action="store_true", help="singleton-witness analysis instead")

    sp = add("shadow", cmd_shadow, "s-shadow of a family")
    sp.add_argument("--s", type=int)
    sp.add_argument("--witness-routes", action="store_true",
                    help="both checks of the size-d witness bound")

    sp = add("kk", cmd_kk, "Kruskal-Katona check, or exact minimum shadow", file_arg="optional")
    sp.add_argument("--m", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--s", type=int)

    sp = add("sunflower", cmd_sunflower, "find a sunflower or audit witness classes")
    sp.add_argument("--r", type=int, default=3)
    sp.add_argument("--audit", action="store_true")
    sp.add_argument("--d", type=int)

    sp = add("polycert", cmd_polycert, "build or verify a rank certificate")
    sp.add_argument("--gamma", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--verify", action="store_true", help="treat FILE as a certificate and re-check it")

    for name, func, help_text in [("search", cmd_search, "exact maximum-family search"),
                                  ("hunt", cmd_hunt, "randomized counterexample hunt")]:
        sp = add(name, func, help_text, file_arg=None)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--d", type=int, required=True)
        sp.add_argument("--s", type=int, required=(name == "hunt"))
        sp.add_argument("--at-most", action="store_true", help="allow witnesses of size <= s")
        sp.add_argument("--nodes", type=int, help="node budget (default from VCLAB_BUDGET_NODES)")
        if name == "search":
            sp.add_argument("--mode", choices=["vc", "switness", "intersecting"], default="vc")
            sp.add_argument("--k", type=int)
            sp.add_argument("--nontrivial", action="store_true")
            sp.add_argument("--seconds", type=float)
        else:
            sp.add_argument("--budget", type=int, default=20000, help="local-search steps")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"vclab: {exc}", file=sys.stderr)
        return USAGE
    except (FamilyFormatError, OSError, json.JSONDecodeError) as exc:
        print(f"vclab: {exc}", file=sys.stderr)
        return USAGE
    except InvalidWitnessError as exc:
        print(f"vclab: {exc}", file=sys.stderr)
        return VIOLATION
    except ValueError as exc:
        print(f"vclab: {exc}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
