"""Batch command line front end.

Every output file starts with a manifest (command, parameters, seed, tool
version); identical manifests produce byte-identical outputs since all
enumerations are canonically ordered.  Exit codes: 0 pass, 1 check failure,
2 usage or schema error, 3 resource guard, 4 schedule error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import __version__
from .complexes import (
    EnumerationCap,
    build_complex,
    connectivity_bound,
    elementary_split_poset,
    split_class_poset,
)
from .groups import (
    Config,
    TreePair,
    canonical_form,
    compose,
    element_from_json,
    element_to_json,
    inverse,
    stabilizer_test,
    subnormal_depth,
)
from .homology import pi1_report, reduced_homology
from .posets import order_complex, underlying_poset
from .trading import (
    FiltrationSchedule,
    ScheduleError,
    euler_characteristic,
    run_staircase,
    sparsify,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_SCHEDULE = 4

GUARD_DEFAULTS = {2: 11, 3: 9}


def _manifest(command: str, params: dict, seed: int | None) -> dict:
    return {
        "command": command,
        "params": {k: params[k] for k in sorted(params)},
        "seed": seed,
        "version": __version__,
    }


def _resolve_out(path: str | None) -> str | None:
    if path is None:
        return None
    base = os.environ.get("SPHERO_OUT_DIR")
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _write_atomic(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".sphero-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_text(manifest: dict, payload: dict) -> str:
    doc = {"manifest": manifest}
    doc.update(payload)
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def _csv_text(manifest: dict, header: list[str], rows: list[list]) -> str:
    lines = ["# manifest: " + json.dumps(manifest, sort_keys=True)]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(str(x) for x in row))
    return "\n".join(lines) + "\n"


def _config_from_args(args) -> Config:
    sub = args.subgroup
    if sub not in ("sym", "triv"):
        sub = [w.strip() for w in sub.split(",") if w.strip()]
    return Config.make(args.q, getattr(args, "r", 1), sub)


# ---------------------------------------------------------------------------
# subcommands


def cmd_build_cn(args) -> int:
    config = _config_from_args(args)
    cx = build_complex(config, args.n)
    manifest = _manifest("build-cn", {
        "q": args.q, "subgroup": args.subgroup, "n": args.n,
        "format": args.format, "group_order": config.group_order,
    }, args.seed)
    if args.format == "json":
        text = _json_text(manifest, {"complex": cx.to_json()})
    else:
        rows = [[i, j] for i, j in cx.edges]
        text = _csv_text(manifest, ["vertex_i", "vertex_j"], rows)
    _write_atomic(_resolve_out(args.out), text)
    if args.dump_matrices:
        cc = cx.chain_complex(args.max_dim)
        _write_atomic(_resolve_out(args.dump_matrices), cc.dump_matrices())
    return EXIT_OK


def cmd_verify_nu(args) -> int:
    config = _config_from_args(args)
    guard = args.guard if args.guard is not None else GUARD_DEFAULTS.get(args.q, 8)
    if args.nmax > guard:
        print(f"nmax={args.nmax} exceeds the resource guard {guard}", file=sys.stderr)
        return EXIT_RESOURCE
    rows = []
    all_pass = True
    for n in range(2, args.nmax + 1):
        nu = connectivity_bound(config, n)
        cx = build_complex(config, n)
        nonempty = len(cx.vertices) > 0
        nonempty_ok = nonempty == (n >= config.q)
        through = max(nu + 1, 0)
        cc = cx.chain_complex(through + 1)
        if nonempty:
            res = reduced_homology(cc, through)
            betti = list(res.betti)
            torsion = ["+".join(map(str, t)) if t else "" for t in res.torsion]
            acyclic_ok = nonempty_ok and all(
                res.betti[i] == 0 and not res.torsion[i] for i in range(0, nu + 1)
            )
        else:
            betti, torsion = [], []
            acyclic_ok = nonempty_ok
        pi1 = "n/a"
        if args.pi1_budget and nonempty and betti and betti[0] == 0 and cc.dim >= 1:
            pi1 = pi1_report(cc, args.pi1_budget)["status"]
        all_pass = all_pass and acyclic_ok
        rows.append([n, nu, " ".join(map(str, betti)), " ".join(torsion),
                     "pass" if acyclic_ok else "FAIL", pi1])
    manifest = _manifest("verify-nu", {
        "q": args.q, "subgroup": args.subgroup, "nmax": args.nmax,
        "pi1_budget": args.pi1_budget, "group_order": config.group_order,
    }, args.seed)
    text = _csv_text(manifest, ["n", "nu", "betti", "torsion", "verdict", "pi1"], rows)
    _write_atomic(_resolve_out(args.out), text)
    return EXIT_OK if all_pass else EXIT_CHECK_FAILED


def _poset_homology_rows(poset):
    if not poset.objects:
        return [], None
    honest, _ = underlying_poset(poset)
    cc = order_complex(honest)
    res = reduced_homology(cc, max(cc.dim, 0))
    return [[d, res.betti[d], "+".join(map(str, res.torsion[d]))] for d in range(len(res.betti))], res


def cmd_desclink(args) -> int:
    config = Config.make(args.q, args.r,
                         args.subgroup if args.subgroup in ("sym", "triv")
                         else [w.strip() for w in args.subgroup.split(",")])
    want_full = args.full or not args.star
    want_star = args.star
    manifest = _manifest("desclink", {
        "q": args.q, "subgroup": args.subgroup, "r": args.r, "n": args.n,
        "star": want_star, "full": want_full, "cap": args.cap,
        "group_order": config.group_order,
    }, args.seed)
    try:
        payload = {}
        rows = []
        res_full = res_star = None
        if want_full:
            full = split_class_poset(config, args.n, cap=args.cap)
            payload["full_poset"] = full.to_json()
            frows, res_full = _poset_homology_rows(full)
            rows += [["full"] + r for r in frows]
            payload["full_components"] = len(full.components())
        if want_star:
            star, inclusion = elementary_split_poset(config, args.n, cap=args.cap)
            payload["star_poset"] = star.to_json()
            payload["inclusion"] = inclusion
            srows, res_star = _poset_homology_rows(star)
            rows += [["star"] + r for r in srows]
            payload["star_components"] = len(star.components())
        if want_full and want_star:
            def table(res):
                if res is None:
                    return []
                return [(b, t) for b, t in zip(res.betti, res.torsion) if b or t]
            payload["homology_equal"] = table(res_full) == table(res_star)
    except EnumerationCap as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_RESOURCE
    text = _json_text(manifest, payload)
    _write_atomic(_resolve_out(args.out), text)
    csv_out = args.homology_csv
    if csv_out:
        text = _csv_text(manifest, ["model", "dim", "betti", "torsion"], rows)
        _write_atomic(_resolve_out(csv_out), text)
    return EXIT_OK


def _load_element(path: str) -> TreePair:
    with open(path) as fh:
        return element_from_json(json.load(fh))


def cmd_group(args) -> int:
    try:
        if args.op == "compose":
            result = compose(_load_element(args.lhs), _load_element(args.rhs))
            payload = {"element": element_to_json(result)}
        elif args.op == "inverse":
            payload = {"element": element_to_json(inverse(_load_element(args.input)))}
        elif args.op == "canon":
            payload = {"element": element_to_json(canonical_form(_load_element(args.input)))}
        elif args.op == "stab":
            gamma = _load_element(args.gamma)
            phi = _load_element(args.phi)
            payload = {"stabilizes": stabilizer_test(gamma, phi)}
        elif args.op == "subnormal":
            phi = _load_element(args.phi)
            payload = {"kprime": subnormal_depth(phi, args.k)}
        else:  # pragma: no cover
            raise ValueError(f"unknown group op {args.op}")
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    manifest = _manifest(f"group-{args.op}", {"op": args.op}, args.seed)
    _write_atomic(_resolve_out(args.out), _json_text(manifest, payload))
    return EXIT_OK


def cmd_trade(args) -> int:
    try:
        with open(args.schedule) as fh:
            schedule = FiltrationSchedule.from_json(json.load(fh))
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"schedule error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        sparsified, index_map = sparsify(schedule, require=args.prefix)
        final, log = run_staircase(sparsified, args.prefix)
    except ScheduleError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_SCHEDULE
    before = sparsified.stages[0]
    for inv in sparsified.stages[1:args.prefix]:
        before = before.add(inv)
    manifest = _manifest("trade", {"schedule": os.path.basename(args.schedule),
                                   "prefix": args.prefix}, args.seed)
    payload = {
        "index_map": index_map,
        "final_inventory": final.to_json(),
        "trade_log": log.to_json(),
        "chi_before": euler_characteristic(before),
        "chi_after": euler_characteristic(final),
    }
    _write_atomic(_resolve_out(args.out), _json_text(manifest, payload))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sphero", description=__doc__)
    p.add_argument("--seed", type=int, default=0, help="seed recorded in manifests")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build-cn", help="build the decorated disjoint-support complex")
    b.add_argument("--q", type=int, required=True)
    b.add_argument("--subgroup", default="sym", help='"sym", "triv", or comma-separated words like "21"')
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--out", default=None)
    b.add_argument("--format", choices=("json", "csv"), default="json")
    b.add_argument("--dump-matrices", default=None, dest="dump_matrices",
                   help="also write the boundary matrices to this file")
    b.add_argument("--max-dim", type=int, default=2, dest="max_dim")
    b.set_defaults(fn=cmd_build_cn)

    v = sub.add_parser("verify-nu", help="certify the connectivity bound grid")
    v.add_argument("--q", type=int, required=True)
    v.add_argument("--subgroup", default="sym")
    v.add_argument("--nmax", type=int, required=True)
    v.add_argument("--pi1-budget", type=int, default=0, dest="pi1_budget")
    v.add_argument("--guard", type=int, default=None, help="override the nmax resource guard")
    v.add_argument("--out", default=None)
    v.set_defaults(fn=cmd_verify_nu)

    d = sub.add_parser("desclink", help="enumerate splitting-class posets")
    d.add_argument("--q", type=int, required=True)
    d.add_argument("--subgroup", default="sym")
    d.add_argument("--r", type=int, default=1)
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--star", action="store_true")
    d.add_argument("--full", action="store_true")
    d.add_argument("--cap", type=int, default=6)
    d.add_argument("--out", default=None)
    d.add_argument("--homology-csv", default=None, dest="homology_csv")
    d.set_defaults(fn=cmd_desclink)

    g = sub.add_parser("group", help="tree pair arithmetic on JSON elements")
    gs = g.add_subparsers(dest="op", required=True)
    gc = gs.add_parser("compose")
    gc.add_argument("--lhs", required=True)
    gc.add_argument("--rhs", required=True)
    gi = gs.add_parser("inverse")
    gi.add_argument("--input", required=True)
    gn = gs.add_parser("canon")
    gn.add_argument("--input", required=True)
    gt = gs.add_parser("stab")
    gt.add_argument("--gamma", required=True)
    gt.add_argument("--phi", required=True)
    gu = gs.add_parser("subnormal")
    gu.add_argument("--phi", required=True)
    gu.add_argument("--k", type=int, required=True)
    for sp in (gc, gi, gn, gt, gu):
        sp.add_argument("--out", default=None)
        sp.set_defaults(fn=cmd_group)

    t = sub.add_parser("trade", help="sparsify a schedule and run the staircase")
    t.add_argument("--schedule", required=True)
    t.add_argument("--prefix", type=int, required=True)
    t.add_argument("--out", default=None)
    t.set_defaults(fn=cmd_trade)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
