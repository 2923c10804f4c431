"""Command-line surface.

Exit codes: 0 = verified/true, 1 = falsified/none, 2 = error/truncated.
Reports are deterministic: identical inputs yield byte-identical JSON.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import catalog, gadget, order
from .homs import (
    SearchBudgetExceeded,
    find_hom_brute,
    find_hom_dp,
)
from .structures import (
    InvalidStructureError,
    OrientedPath,
    OrientedTree,
    format_tree,
    height,
    parse_structure,
    to_dot,
    tree_is_path,
    zigzag,
)

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_ERROR = 2


class CliError(RuntimeError):
    pass


def _load(path_str: str) -> OrientedPath | OrientedTree:
    p = Path(path_str)
    if not p.exists():
        raise CliError(f"no such file: {path_str}")
    try:
        return parse_structure(p.read_text())
    except (InvalidStructureError, ValueError) as exc:
        raise CliError(f"{path_str}: {exc}") from exc


def _emit(report: dict, as_json: bool, human: str) -> None:
    if as_json:
        print(json.dumps(report, sort_keys=True))
    else:
        print(human)


def _structure_str(g: OrientedPath | OrientedTree) -> str:
    if isinstance(g, OrientedTree):
        p = tree_is_path(g)
        if p is not None:
            return p.directions
        return format_tree(g).strip()
    return g.directions


def cmd_hom(args) -> int:
    src = _load(getattr(args, "from"))
    tgt = _load(args.to)
    try:
        if args.oracle == "brute":
            witness = find_hom_brute(src, tgt, budget=args.budget)
        else:
            witness = find_hom_dp(src, tgt)
    except SearchBudgetExceeded as exc:
        raise CliError(str(exc)) from exc
    if witness is None:
        _emit({"exists": False}, args.json, "no homomorphism")
        return EXIT_FALSE
    witness.validate()
    _emit(
        {"exists": True, **witness.to_json_dict()},
        args.json,
        "witness: " + " ".join(map(str, witness.mapping)),
    )
    return EXIT_TRUE


def cmd_core(args) -> int:
    g = _load(getattr(args, "in"))
    result = order.core(g, vertex_budget=args.budget)
    result.retraction.validate()
    p = result.core_as_path()
    human = p.directions if p is not None else format_tree(result.core).strip()
    _emit(result.to_json_dict(), args.json, human)
    return EXIT_TRUE


def cmd_height(args) -> int:
    g = _load(getattr(args, "in"))
    h = height(g)
    _emit({"height": h}, args.json, str(h))
    return EXIT_TRUE


def cmd_classify(args) -> int:
    lo = _load(args.lower)
    hi = _load(args.upper)
    report = order.classify_interval(lo, hi)
    _emit(report.to_json_dict(), args.json, report.classification.value)
    return EXIT_TRUE


def cmd_between(args) -> int:
    lo = _load(args.lower)
    hi = _load(args.upper)
    try:
        result = order.find_between(lo, hi, max_arcs=args.max_arcs)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    human = result.status.value
    if result.witness is not None:
        human += ": " + _structure_str(result.witness)
    _emit(result.to_json_dict(), args.json, human)
    return EXIT_TRUE if result.status is order.BetweenStatus.FOUND else EXIT_FALSE


def cmd_catalog(args) -> int:
    if args.family == "dpath":
        print(catalog.directed_path(args.n).directions)
    elif args.family == "lpath":
        print(catalog.l_path(args.n).directions)
    elif args.family == "zigzag":
        print(zigzag(args.n, args.start).directions)
    elif args.family == "chain":
        chain = catalog.bottom_chain(args.n)
        for label, elem in zip(chain.labels, chain.elements):
            print(f"{label} {elem.directions}")
    return EXIT_TRUE


def _gadget_config(args) -> gadget.GadgetConfig:
    kwargs = {}
    if getattr(args, "q_bound", None) is not None:
        kwargs["q_arc_bound"] = args.q_bound
    if getattr(args, "zig_floor", None) is not None:
        kwargs["zigzag_floor"] = args.zig_floor
    return gadget.GadgetConfig(**kwargs)


def cmd_gadget_build(args) -> int:
    p1 = _load(args.p1)
    p2 = _load(args.p2)
    if isinstance(p1, OrientedTree) or isinstance(p2, OrientedTree):
        raise CliError("gadget endpoints must be paths")
    if args.p is not None:
        mid = _load(args.p)
        if isinstance(mid, OrientedTree):
            raise CliError("the middle path must be a path")
    else:
        between = order.find_between(p1, p2, max_arcs=args.max_arcs)
        if between.status is not order.BetweenStatus.FOUND:
            raise CliError("no middle path found; pass one with --p")
        mid = between.witness
        assert isinstance(mid, OrientedPath)
    try:
        built = gadget.build_indicator(p1, p2, mid, _gadget_config(args))
    except gadget.GadgetConstructionError as exc:
        raise CliError(str(exc)) from exc
    bundle = gadget.gadget_to_json_dict(built)
    text = json.dumps(bundle, sort_keys=True, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
        print(f"bundle written to {args.out}")
    else:
        print(text)
    return EXIT_TRUE


def cmd_gadget_verify(args) -> int:
    data = json.loads(Path(args.bundle).read_text())
    try:
        g = gadget.gadget_from_json_dict(data)
    except (KeyError, ValueError, gadget.GadgetConstructionError) as exc:
        raise CliError(f"bad bundle: {exc}") from exc
    report = gadget.check_lemma1(g, _gadget_config(args))
    _emit(
        report.to_json_dict(),
        args.json,
        "verified" if report.all_verified() else "FAILED",
    )
    if report.any_truncated():
        return EXIT_ERROR
    return EXIT_TRUE if report.all_verified() else EXIT_FALSE


def cmd_embed_verify(args) -> int:
    data = json.loads(Path(args.bundle).read_text())
    g = gadget.gadget_from_json_dict(data)
    report = gadget.verify_embedding(g, max_arcs=args.max_arcs)
    _emit(
        report.to_json_dict(),
        args.json,
        "embedding verified" if report.all_ok else "embedding FAILED",
    )
    return EXIT_TRUE if report.all_ok else EXIT_FALSE


def cmd_export_dot(args) -> int:
    g = _load(getattr(args, "in"))
    sys.stdout.write(to_dot(g))
    return EXIT_TRUE


# --- batch verification ----------------------------------------------------

def _run_check(item: dict, manifest_dir: Path) -> dict:
    kind = item["kind"]
    if kind == "chain":
        chain = catalog.bottom_chain(item.get("k_max", 3))
        return {"ok": True, "elements": len(chain)}
    if kind == "gaps":
        max_arcs = item.get("max_arcs", 8)
        from .structures import iter_paths

        p0, p1, p2 = (catalog.directed_path(i) for i in range(3))
        offenders = [
            c.directions
            for c in iter_paths(max_arcs)
            if (order.strictly_less(p0, c) and order.strictly_less(c, p1))
            or (order.strictly_less(p1, c) and order.strictly_less(c, p2))
        ]
        return {"ok": not offenders, "offenders": offenders}
    if kind == "oracle-equivalence":
        from .structures import iter_paths

        max_arcs = item.get("max_arcs", 4)
        paths = list(iter_paths(max_arcs))
        disagreements = 0
        for a in paths:
            for b in paths:
                if (find_hom_dp(a, b) is None) != (find_hom_brute(a, b) is None):
                    disagreements += 1
        return {"ok": disagreements == 0, "pairs": len(paths) ** 2}
    if kind == "gadget-bundle":
        data = json.loads((manifest_dir / item["bundle"]).read_text())
        g = gadget.gadget_from_json_dict(data)
        cfg = gadget.GadgetConfig(q_arc_bound=item.get("q_bound", 3))
        report = gadget.check_lemma1(g, cfg)
        return {
            "ok": report.all_verified(),
            "truncated": report.any_truncated(),
            "report": report.to_json_dict(),
        }
    raise CliError(f"unknown check kind {kind!r}")


def cmd_batch_verify(args) -> int:
    manifest_path = Path(args.manifest)
    if not manifest_path.exists():
        raise CliError(f"no such manifest: {args.manifest}")
    manifest = json.loads(manifest_path.read_text())
    checks = manifest.get("checks", [])
    results = {}
    any_fail = False
    any_trunc = False
    for item in sorted(checks, key=lambda c: c["name"]):
        try:
            outcome = _run_check(item, manifest_path.parent)
        except FileNotFoundError as exc:
            outcome = {"ok": False, "error": str(exc)}
        results[item["name"]] = outcome
        any_fail = any_fail or not outcome["ok"]
        any_trunc = any_trunc or outcome.get("truncated", False)
    report = {"checks": results, "ok": not any_fail}
    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        for name, outcome in results.items():
            print(f"{name}: {'ok' if outcome['ok'] else 'FAILED'}")
        print(f"total: {len(results)} checks, {'all ok' if not any_fail else 'FAILURES'}")
    if any_trunc:
        return EXIT_ERROR
    return EXIT_TRUE if not any_fail else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homorder",
        description="Homomorphism order of oriented paths and trees",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--json", action="store_true", help="JSON report")

    p = sub.add_parser("hom", help="decide/witness a homomorphism")
    p.add_argument("--from", required=True, help="source structure file")
    p.add_argument("--to", required=True, help="target structure file")
    p.add_argument("--oracle", choices=("dp", "brute"), default="dp")
    p.add_argument("--budget", type=int, default=10**7)
    common(p)
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("core", help="compute the core")
    p.add_argument("--in", required=True)
    p.add_argument("--budget", type=int, default=order.DEFAULT_CORE_VERTEX_BUDGET)
    common(p)
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("height", help="height of a path/tree")
    p.add_argument("--in", required=True)
    common(p)
    p.set_defaults(func=cmd_height)

    p = sub.add_parser("classify", help="classify the interval [lower, upper]")
    p.add_argument("--lower", required=True)
    p.add_argument("--upper", required=True)
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("between", help="search for a structure strictly between")
    p.add_argument("--lower", required=True)
    p.add_argument("--upper", required=True)
    p.add_argument("--max-arcs", type=int, default=order.DEFAULT_BETWEEN_MAX_ARCS)
    common(p)
    p.set_defaults(func=cmd_between)

    p = sub.add_parser("catalog", help="emit a named family member")
    fam = p.add_subparsers(dest="family", required=True)
    for name, helptext in (
        ("dpath", "directed path with n arcs"),
        ("lpath", "the height-3 core L_k"),
        ("zigzag", "alternating path with n arcs"),
        ("chain", "the bottom chain up to L_{k_max}"),
    ):
        q = fam.add_parser(name, help=helptext)
        q.add_argument("n", type=int)
        if name == "zigzag":
            q.add_argument("--start", choices=("F", "B"), default="F")
        q.set_defaults(func=cmd_catalog)

    p = sub.add_parser("gadget", help="indicator gadget operations")
    gsub = p.add_subparsers(dest="gadget_command", required=True)
    q = gsub.add_parser("build", help="build and verify a gadget bundle")
    q.add_argument("--p1", required=True)
    q.add_argument("--p2", required=True)
    q.add_argument("--p", help="middle path (searched when omitted)")
    q.add_argument("--max-arcs", type=int, default=order.DEFAULT_BETWEEN_MAX_ARCS)
    q.add_argument("--q-bound", type=int)
    q.add_argument("--zig-floor", type=int)
    q.add_argument("--out")
    common(q)
    q.set_defaults(func=cmd_gadget_build)
    q = gsub.add_parser("verify", help="re-verify a gadget bundle")
    q.add_argument("--bundle", required=True)
    q.add_argument("--q-bound", type=int)
    common(q)
    q.set_defaults(func=cmd_gadget_verify)

    p = sub.add_parser("embed-verify", help="order-embedding audit for a bundle")
    p.add_argument("--bundle", required=True)
    p.add_argument("--max-arcs", type=int, default=3)
    common(p)
    p.set_defaults(func=cmd_embed_verify)

    p = sub.add_parser("batch-verify", help="run a manifest of named checks")
    p.add_argument("--manifest", required=True)
    common(p)
    p.set_defaults(func=cmd_batch_verify)

    p = sub.add_parser("export-dot", help="DOT export with level ranks")
    p.add_argument("--in", required=True)
    common(p)
    p.set_defaults(func=cmd_export_dot)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
