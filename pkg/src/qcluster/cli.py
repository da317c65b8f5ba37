"""Command-line front end.

Every command prints either a human report or, with ``--format json``, one
JSON document holding the engine version, digests of the input files, the
parameters and the result.  The exit status is 0 when every requested
check passes, 1 when a check fails and 2 on invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import __version__, _kernels
from .corpus import Instance, arc_strings
from .errors import QClusterError
from .expansion import expansion_element, run_expansion, surface_pair
from .index import index_of
from .io import (
    arc_to_text,
    element_to_data,
    file_digest,
    format_element,
    load_pair,
    load_surface,
    pair_to_data,
    parse_arc,
)
from .seed import CompatiblePair, check_compatible, initial_seed, seed_along_path, variable_along_path
from .strings import StringWord, canonical_submodules, dim_vector, format_word, word_of_arc
from .suite import verify_instance
from .surface import (
    FlipBFS,
    Triangulation,
    all_polygon_chords,
    bfs_from,
    find_flip_path,
    walk,
)


@dataclass
class Report:
    ok: bool = True
    data: dict = field(default_factory=dict)
    lines: list[str] = field(default_factory=list)


# ---------------------------------------------------------------------------
# inputs


def _parse_path(text: str | None) -> list[int]:
    if not text:
        return []
    return [int(x) for x in text.replace(",", " ").split()]


def _surface(args) -> Triangulation:
    if not args.surface:
        raise QClusterError("this command needs --surface")
    return load_surface(args.surface)


def _pair(args, t: Triangulation | None) -> CompatiblePair:
    if args.seed:
        return load_pair(args.seed)
    if t is None:
        raise QClusterError("give --seed or --surface")
    return surface_pair(t, args.coefficients)


def _target(args) -> Triangulation:
    if getattr(args, "target_triangulation", None):
        return load_surface(args.target_triangulation)
    return _surface(args)


def _word_of(arc, t: Triangulation, budget: int) -> StringWord:
    if isinstance(arc, StringWord):
        return arc
    path = find_flip_path(t, arc, budget)
    label = walk(t, path)[-1].chords()[tuple(sorted(arc))]
    return word_of_arc(t, path, label)


# ---------------------------------------------------------------------------
# commands


def cmd_seed_check(args) -> Report:
    t = load_surface(args.surface) if args.surface else None
    pair = _pair(args, t)
    check_compatible(pair.b, pair.lam)
    return Report(True, {"pair": pair_to_data(pair)}, ["compatible: pass"])


def cmd_mutate(args) -> Report:
    t = load_surface(args.surface) if args.surface else None
    pair = _pair(args, t)
    path = _parse_path(args.path)
    s = seed_along_path(initial_seed(pair), path)
    check_compatible(s.pair.b, s.pair.lam)
    data = {
        "path": path,
        "pair": pair_to_data(s.pair),
        "variables": [element_to_data(x) for x in s.variables[: s.n]],
    }
    lines = [f"path: {path}", f"B: {s.pair.b.tolist()}", f"lambda: {s.pair.lam.tolist()}"]
    lines += [f"x{i} = {format_element(x)}" for i, x in enumerate(s.variables[: s.n])]
    return Report(True, data, lines)


def cmd_variable(args) -> Report:
    t = load_surface(args.surface) if args.surface else None
    pair = _pair(args, t)
    path = _parse_path(args.path)
    x = variable_along_path(initial_seed(pair), path, args.target)
    data = {"path": path, "target": args.target, "variable": element_to_data(x), "positive": x.is_positive()}
    return Report(True, data, [format_element(x)])


def cmd_expand(args) -> Report:
    t = _target(args)
    pair = _pair(args, t)
    arc = parse_arc(args.arc, t)
    run = run_expansion(arc, t, pair, args.budget)
    we = run.expansion
    el = expansion_element(we, pair)
    subs = []
    for u, v, e in we.terms(pair.b):
        dim = dim_vector(we.word, u, t.m)[: t.n].tolist() if not we.word.is_empty() else [0] * t.n
        subs.append({"positions": list(u), "dim": dim, "weight": int(v), "exponent": e.tolist()})
    data = {
        "arc": arc_to_text(arc, t),
        "word": format_word(we.word, t),
        "index": we.index.tolist(),
        "path": list(run.path),
        "label": run.label,
        "submodules": subs,
        "element": element_to_data(el),
    }
    lines = [
        f"word: {format_word(we.word, t)}",
        f"index: {we.index.tolist()}",
        f"flip path: {list(run.path)} (arc becomes label {run.label})",
    ]
    lines += [f"  U={list(s['positions'])} dim={s['dim']} v={s['weight']}" for s in subs]
    lines.append(f"element: {format_element(el)}")
    ok = True
    if args.verify:
        oracle = variable_along_path(initial_seed(pair), run.path, run.label)
        ok = oracle == el
        data["oracle_match"] = ok
        if ok:
            lines.append("ORACLE MATCH")
        else:
            g, c = (el - oracle).sorted_terms()[0]
            data["first_difference"] = {"exponent": list(g), "coeff": {str(h): v for h, v in c.items()}}
            lines.append(f"ORACLE MISMATCH at exponent {list(g)}: expansion minus oracle = {c!r}")
    return Report(ok, data, lines)


def cmd_index(args) -> Report:
    t = _surface(args)
    w = _word_of(parse_arc(args.arc, t), t, args.budget)
    g = index_of(w, t)[: t.n].tolist()
    return Report(True, {"word": format_word(w, t), "index": g}, [f"index: {g}"])


def cmd_submodules(args) -> Report:
    t = _surface(args)
    w = _word_of(parse_arc(args.arc, t), t, args.budget)
    subs = canonical_submodules(w)
    rows = []
    for u in subs:
        dim = dim_vector(w, u, t.m)[: t.n].tolist() if not w.is_empty() else [0] * t.n
        rows.append({"positions": list(u), "dim": dim})
    lines = [f"word: {format_word(w, t)}", f"{len(subs)} canonical submodules"]
    lines += [f"  {r['positions']} dim={r['dim']}" for r in rows]
    return Report(True, {"word": format_word(w, t), "submodules": rows}, lines)


def _suite_instances(t: Triangulation, budget: int, max_crossings: int):
    if t.endpoints is not None:
        bfs = bfs_from(t)
        chords = all_polygon_chords(len(t.boundary))
        ts = _take(bfs, budget)
        return [Instance("polygon", tt, ch) for tt in ts for ch in chords]
    ts = _take(FlipBFS(t), budget)
    return [Instance("surface", tt, w) for tt in ts for w in arc_strings(tt, max_crossings)]


def _take(bfs: FlipBFS, budget: int) -> list[Triangulation]:
    out = []
    it = bfs.iterate(budget)
    try:
        for tt in it:
            out.append(tt)
    except QClusterError:
        pass
    return out


def cmd_verify_suite(args) -> Report:
    t = _surface(args)
    insts = _suite_instances(t, args.budget, args.max_crossings)
    rows = []
    passed = 0
    for inst in insts:
        pair = load_pair(args.seed) if args.seed and inst.triangulation == t else surface_pair(inst.triangulation, args.coefficients)
        rep = verify_instance(inst, single_flips=not args.quick, pair=pair)
        passed += rep.ok
        rows.append({
            "triangulation": [list(x) for x in inst.triangulation.triangles],
            "arc": arc_to_text(inst.arc, inst.triangulation),
            "oracle": rep.oracle,
            "flips": rep.flips,
            "blocks": rep.blocks,
            "counting": rep.counting,
            "positive": rep.positive,
            "index": rep.index,
            "pass": rep.ok,
        })
    rows.sort(key=lambda r: (r["triangulation"], r["arc"]))
    lines = []
    for r in rows:
        if not r["pass"] or args.verbose:
            flags = " ".join(f"{k}={'ok' if r[k] else 'FAIL'}" for k in ("oracle", "flips", "blocks", "counting", "positive", "index"))
            lines.append(f"{'PASS' if r['pass'] else 'FAIL'} {r['arc']} in {r['triangulation']}: {flags}")
    lines.append(f"{passed}/{len(rows)} instances pass")
    return Report(passed == len(rows), {"instances": rows, "passed": passed, "total": len(rows)}, lines)


COMMANDS = {
    "seed-check": cmd_seed_check,
    "mutate": cmd_mutate,
    "variable": cmd_variable,
    "expand": cmd_expand,
    "verify-suite": cmd_verify_suite,
    "index": cmd_index,
    "submodules": cmd_submodules,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--surface", help="surface file (JSON)")
    common.add_argument("--seed", help="seed file (JSON); default is built from the surface")
    common.add_argument("--coefficients", choices=("auto", "boundary", "principal"), default="auto")
    common.add_argument("--budget", type=int, default=1000, help="node budget of flip searches")
    common.add_argument("--format", choices=("human", "json"), default="human")

    p = argparse.ArgumentParser(prog="qcluster", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"qcluster {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("seed-check", parents=[common], help="check compatibility of (B, lambda)")
    sp = sub.add_parser("mutate", parents=[common], help="mutate the initial seed along a path")
    sp.add_argument("--path", default="", help="directions, e.g. 0,1,0")
    sp = sub.add_parser("variable", parents=[common], help="cluster variable by mutation")
    sp.add_argument("--path", default="")
    sp.add_argument("--target", type=int, required=True, help="index of the variable")
    sp = sub.add_parser("expand", parents=[common], help="expansion of an arc by weight transport")
    sp.add_argument("--arc", required=True, help='chord "i-j" or word "1 >R 2"')
    sp.add_argument("--target-triangulation", help="triangulation file; default is --surface")
    sp.add_argument("--verify", action="store_true", help="compare with the mutation oracle")
    sp = sub.add_parser("verify-suite", parents=[common], help="all arcs against all reachable triangulations")
    sp.add_argument("--max-crossings", type=int, default=6)
    sp.add_argument("--quick", action="store_true", help="skip the single-flip checks")
    sp.add_argument("--verbose", action="store_true")
    for name in ("index", "submodules"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("--arc", required=True)
    return p


def _inputs(args) -> dict:
    out = {}
    for key in ("surface", "seed", "target_triangulation"):
        path = getattr(args, key, None)
        if path:
            out[key] = {"path": path, "sha256": file_digest(path)}
    return out


def _params(args) -> dict:
    skip = {"surface", "seed", "target_triangulation", "format", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    doc: dict[str, Any] = {
        "engine": {"name": "qcluster", "version": __version__, "backend": _kernels.backend()},
        "command": args.command,
    }
    try:
        doc["inputs"] = _inputs(args)
        doc["params"] = _params(args)
        rep = COMMANDS[args.command](args)
    except (QClusterError, OSError, ValueError, KeyError) as exc:
        doc["status"] = "error"
        doc["error"] = {"type": type(exc).__name__, "message": str(exc)}
        if args.format == "json":
            print(json.dumps(doc, sort_keys=True, indent=2), file=out)
        else:
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    doc["status"] = "pass" if rep.ok else "fail"
    doc["result"] = rep.data
    if args.format == "json":
        print(json.dumps(doc, sort_keys=True, indent=2, default=_jsonable), file=out)
    else:
        for line in rep.lines:
            print(line, file=out)
    return 0 if rep.ok else 1


def _jsonable(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"cannot serialise {type(x).__name__}")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
