"""Command-line interface.

Exit codes: 0 success, 1 not found or violation, 2 usage or parse error,
3 internal invariant breach.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import formats
from .embedding import (
    EmbeddingError,
    NotMonoC3Free,
    OracleLimitError,
    brute_force_pc_spider,
    embed_pc_spider,
    embed_pc_subdivision,
)
from .embedding.spider import SpiderReport
from .graph_core import find_monochromatic_triangle
from .instances import KINDS, GeneratorError, GeneratorSpec, generate
from .pc_structures import PcError, _color_counts, find_nice_bowtie
from .ramsey import compute_g
from .tournament import TournamentError
from .trees import ShapeError, SpiderSpec, TreePattern

OK, NOT_FOUND, USAGE, BREACH = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_graph(path: str):
    try:
        return formats.load_graph(_read(path)).graph
    except formats.FormatError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _parse_legs(text: str) -> SpiderSpec:
    try:
        return SpiderSpec.of(int(x) for x in text.split(","))
    except (ValueError, ShapeError) as exc:
        raise UsageError(f"bad leg list {text!r}: {exc}") from exc


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit_certificate(args, g, tree, spec) -> int:
    text = (formats.certificate_to_json if args.json else formats.serialize_certificate)(g, tree)
    # re-read what is about to be written and verify it from scratch
    cert = formats.load_certificate(text)
    why = formats.verify_certificate(g, cert, spec)
    if why:
        _err(f"internal error: certificate failed verification: {why}")
        return BREACH
    _write(args.out, text)
    return OK


# ---------------------------------------------------------------- commands


def cmd_gen(args) -> int:
    if args.kind not in KINDS:
        raise UsageError(f"unknown kind {args.kind!r}; choose from {', '.join(KINDS)}")
    if args.n < 1:
        raise UsageError("n must be >= 1")
    params = {}
    if args.pair_density is not None:
        params["pair_density"] = args.pair_density
    if args.min_outdeg is not None:
        params["min_outdeg"] = args.min_outdeg
    spec = GeneratorSpec(args.kind, args.n, args.seed, args.palette, params)
    try:
        g = generate(spec)
    except GeneratorError as exc:
        raise UsageError(str(exc)) from exc
    comment = f"# kind={args.kind} n={args.n} seed={args.seed}"
    if args.palette is not None:
        comment += f" palette={args.palette}"
    text = (formats.graph_to_json if args.json else formats.serialize_graph)(g, [comment])
    _write(args.out, text)
    tri = find_monochromatic_triangle(g)
    _err(f"generated n={g.n} palette={g.palette_size} " + ("mono-C3-free" if tri is None else f"mono triangle {tri}"))
    return OK


def cmd_check(args) -> int:
    g = _load_graph(args.file)
    tri = find_monochromatic_triangle(g)
    verts = list(range(g.n))
    if g.n > 1:
        _, counts = _color_counts(g, verts)
        min_cdeg = int((counts > 0).sum(axis=1).min())
        max_dmon = int(counts.max())
    else:
        min_cdeg = max_dmon = 0
    report = {
        "n": g.n,
        "palette": g.palette_size,
        "min_color_degree": min_cdeg,
        "max_mono_degree": max_dmon,
        "mono_triangle": list(tri) if tri else None,
        "nice_bowtie": None,
    }
    if tri is None and g.n >= 5:
        b = find_nice_bowtie(g)
        report["nice_bowtie"] = None if b is None else {"kind": b.kind, "vertices": list(b.vertices)}
    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        print(f"n {g.n}")
        print(f"palette {g.palette_size}")
        print(f"min color degree {min_cdeg}")
        print(f"max mono degree {max_dmon}")
        if tri is None:
            print("mono-C3-free")
            b = report["nice_bowtie"]
            print("nice bowtie " + ("none" if b is None else f"{b['kind']} {' '.join(map(str, b['vertices']))}"))
        else:
            print(f"monochromatic triangle {tri[0]} {tri[1]} {tri[2]}")
    return OK if tri is None else NOT_FOUND


def _require_free(g) -> int | None:
    tri = find_monochromatic_triangle(g)
    if tri is not None:
        _err(f"graph has a monochromatic triangle {tri}")
        return NOT_FOUND
    return None


def cmd_spider(args) -> int:
    g = _load_graph(args.file)
    spec = _parse_legs(args.legs)
    if spec.size != g.n:
        raise UsageError(f"legs sum to {spec.size - 1}, need n-1 = {g.n - 1}")
    bad = _require_free(g)
    if bad is not None:
        return bad
    report = SpiderReport()
    try:
        tree = embed_pc_spider(g, spec, report, check=False)
    except EmbeddingError as exc:
        _err(f"not found: {exc}")
        return NOT_FOUND
    _err(f"branch {report.branch}")
    return _emit_certificate(args, g, tree, spec)


def cmd_subdivide(args) -> int:
    g = _load_graph(args.file)
    text = args.pattern
    if text not in ("edge",) and not text.startswith("star:"):
        text = _read(text)
    try:
        pattern = TreePattern.parse(text)
    except ShapeError as exc:
        raise UsageError(f"bad pattern: {exc}") from exc
    if g.n < pattern.k + 1:
        raise UsageError(f"n={g.n} too small for a pattern with {pattern.k} edges")
    bad = _require_free(g)
    if bad is not None:
        return bad
    try:
        tree = embed_pc_subdivision(g, pattern, check=False)
    except EmbeddingError as exc:
        _err(f"not found: {exc}")
        return NOT_FOUND
    return _emit_certificate(args, g, tree, pattern)


def cmd_ramsey(args) -> int:
    if args.k < 1:
        raise UsageError("k must be >= 1")
    res = compute_g(args.k, n_cap=args.max_n, budget=args.budget, workers=args.threads)
    st = res.stats
    _err(f"stats nodes={st['nodes']} seconds={st['seconds']:.3f} "
         + " ".join(f"N{n}={s}" for n, s in st["per_n"]))
    if args.json:
        data = {"k": args.k, "lower": res.lower, "upper": res.upper, "exact": res.exact,
                "witness": None if res.witness is None else json.loads(formats.graph_to_json(res.witness))}
        print(json.dumps(data, sort_keys=True))
    else:
        print(res.describe())
        if res.witness is not None:
            sys.stdout.write(formats.serialize_graph(res.witness, [f"# witness for k={args.k}"]))
    return OK if res.exact else NOT_FOUND


def cmd_oracle(args) -> int:
    g = _load_graph(args.file)
    spec = _parse_legs(args.legs)
    if spec.size != g.n:
        raise UsageError(f"legs sum to {spec.size - 1}, need n-1 = {g.n - 1}")
    try:
        tree = brute_force_pc_spider(g, spec, limit=args.limit)
    except OracleLimitError as exc:
        raise UsageError(str(exc)) from exc
    if tree is None:
        print("not found")
        return NOT_FOUND
    print("found")
    return _emit_certificate(args, g, tree, spec)


def cmd_export_dot(args) -> int:
    g = _load_graph(args.file)
    tree = None
    if args.cert:
        try:
            cert = formats.load_certificate(_read(args.cert))
        except formats.FormatError as exc:
            raise UsageError(f"{args.cert}: {exc}") from exc
        tree = cert.tree()
    _write(args.out, formats.to_dot(g, tree, tree_only=args.tree_only))
    return OK


def cmd_verify(args) -> int:
    g = _load_graph(args.file)
    try:
        cert = formats.load_certificate(_read(args.cert))
    except formats.FormatError as exc:
        raise UsageError(f"{args.cert}: {exc}") from exc
    spec = None
    if args.legs:
        spec = _parse_legs(args.legs)
    why = formats.verify_certificate(g, cert, spec)
    if why:
        print(f"invalid: {why}")
        return NOT_FOUND
    print("valid")
    return OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pcspider", description="Properly colored spanning trees in edge-colored K_n.")
    p.add_argument("--json", action="store_true", help="JSON instead of the text formats")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("gen", help="generate a mono-C3-free coloring")
    s.add_argument("kind", help="|".join(KINDS))
    s.add_argument("n", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--palette", type=int)
    s.add_argument("--pair-density", type=float)
    s.add_argument("--min-outdeg", type=int)
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("check", help="validity report for a graph file")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("spider", help="spanning PC spider with given leg lengths")
    s.add_argument("file")
    s.add_argument("legs", help="comma separated leg lengths")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_spider)

    s = sub.add_parser("subdivide", help="spanning PC subdivision of a tree pattern")
    s.add_argument("file")
    s.add_argument("pattern", help="edge, star:k, or a file of a-b pairs")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_subdivide)

    s = sub.add_parser("ramsey", help="exact search for g(S_k, C_3)")
    s.add_argument("k", type=int)
    s.add_argument("--max-n", type=int, default=64)
    s.add_argument("--budget", type=float, help="seconds")
    s.add_argument("--threads", type=int, default=1)
    s.set_defaults(func=cmd_ramsey)

    s = sub.add_parser("oracle", help="exhaustive spider search on small graphs")
    s.add_argument("file")
    s.add_argument("legs")
    s.add_argument("--limit", type=int, default=9)
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("export-dot", help="DOT drawing of a graph and optional certificate")
    s.add_argument("file")
    s.add_argument("--cert")
    s.add_argument("--tree-only", action="store_true")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_export_dot)

    s = sub.add_parser("verify", help="recheck a certificate against a graph")
    s.add_argument("file")
    s.add_argument("cert")
    s.add_argument("--legs")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except UsageError as exc:
        _err(f"error: {exc}")
        return USAGE
    except (ShapeError, NotMonoC3Free) as exc:
        _err(f"error: {exc}")
        return USAGE if isinstance(exc, ShapeError) else NOT_FOUND
    except (AssertionError, PcError, TournamentError) as exc:
        _err(f"internal error: {exc}")
        return BREACH


if __name__ == "__main__":
    sys.exit(main())
