"""Graph and certificate files (text and JSON) and DOT export."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .graph_core import GraphError, build_graph, pairs
from .trees import PcTree, ShapeError, SpiderSpec, TreePattern, canonical_form, suppress_degree_two

CERT_HEADER = "certificate pcspider/1"


class FormatError(ValueError):
    pass


# ---------------------------------------------------------------- graphs


@dataclass
class GraphFile:
    graph: object
    comments: list[str] = field(default_factory=list)


def _label_int(g, c) -> int:
    lab = g.labels[c]
    if not isinstance(lab, int) or isinstance(lab, bool) or lab < 0:
        raise FormatError(f"color label {lab!r} is not a non-negative integer")
    return lab


def serialize_graph(g, comments=()) -> str:
    """``n <count>`` then row i holding col(i, j) for j > i."""
    out = [c if c.startswith("#") else "# " + c for c in comments]
    out.append(f"n {g.n}")
    rows = g.rows
    for i in range(g.n - 1):
        out.append(" ".join(str(_label_int(g, rows[i][j])) for j in range(i + 1, g.n)))
    return "\n".join(out) + "\n"


def parse_graph(text: str) -> GraphFile:
    comments = []
    body = []
    lines = text.rstrip("\n").splitlines()
    for lineno, line in enumerate(lines, 1):
        if line.startswith("#") and not body:
            comments.append(line)
        elif line.strip():
            body.append((lineno, line))
        elif body:
            raise FormatError(f"line {lineno}: blank line inside the matrix")
    if not body:
        raise FormatError("empty graph file")
    lineno, head = body[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "n" or not parts[1].isdigit():
        raise FormatError(f"line {lineno}: expected 'n <count>'")
    n = int(parts[1])
    if n < 1:
        raise FormatError("n must be >= 1")
    rows = body[1:]
    if len(rows) != n - 1:
        raise FormatError(f"expected {n - 1} color rows, found {len(rows)}")
    flat = []
    for i, (lineno, line) in enumerate(rows):
        toks = line.split()
        if len(toks) != n - 1 - i:
            raise FormatError(f"line {lineno}: row {i} has {len(toks)} entries, expected {n - 1 - i}")
        for t in toks:
            if not t.isdigit():
                raise FormatError(f"line {lineno}: bad color {t!r}")
            flat.append(int(t))
    try:
        g = build_graph(n, flat)
    except GraphError as exc:
        raise FormatError(str(exc)) from exc
    return GraphFile(g, comments)


def graph_to_json(g, comments=()) -> str:
    rows = g.rows
    data = {
        "n": g.n,
        "rows": [[_label_int(g, rows[i][j]) for j in range(i + 1, g.n)] for i in range(g.n - 1)],
    }
    if comments:
        data["comments"] = [c.lstrip("#").strip() for c in comments]
    return json.dumps(data, sort_keys=True) + "\n"


def graph_from_json(text: str) -> GraphFile:
    try:
        data = json.loads(text)
        n = int(data["n"])
        rows = data["rows"]
    except (ValueError, KeyError, TypeError) as exc:
        raise FormatError(f"bad graph JSON: {exc}") from exc
    if len(rows) != n - 1 or any(len(r) != n - 1 - i for i, r in enumerate(rows)):
        raise FormatError("graph JSON rows have the wrong shape")
    flat = [c for r in rows for c in r]
    if any(not isinstance(c, int) or c < 0 for c in flat):
        raise FormatError("colors must be non-negative integers")
    return GraphFile(build_graph(n, flat), ["# " + c for c in data.get("comments", [])])


def load_graph(text: str) -> GraphFile:
    """Text or JSON, decided by the first non-blank character."""
    if text.lstrip().startswith("{"):
        return graph_from_json(text)
    return parse_graph(text)


# ---------------------------------------------------------------- certificates


def serialize_certificate(g, tree: PcTree, verdict: str = "ok") -> str:
    out = [CERT_HEADER, f"kind {tree.kind}", f"n {g.n}", f"root {tree.root}"]
    if tree.kind == "spider":
        legs = tree.legs or []
        out.append("legs " + " ".join(str(len(leg) - 1) for leg in legs))
        for i, leg in enumerate(legs):
            out.append(f"leg {i} " + " ".join(map(str, leg)))
    else:
        out.append("pattern " + tree.pattern.describe())
        for x in sorted(tree.node_map):
            out.append(f"node {x} {tree.node_map[x]}")
        for idx in sorted(tree.edge_paths):
            out.append(f"path {idx} " + " ".join(map(str, tree.edge_paths[idx])))
    for v in sorted(tree.parent):
        p = tree.parent[v]
        if p is not None:
            out.append(f"edge {v} {p} {_label_int(g, g.color(v, p))}")
    out.append(f"verdict {verdict}")
    return "\n".join(out) + "\n"


@dataclass
class Certificate:
    kind: str
    n: int
    root: int
    parent: dict
    colors: dict
    legs: list | None = None
    pattern: TreePattern | None = None
    node_map: dict | None = None
    edge_paths: dict | None = None
    verdict: str = ""

    def tree(self) -> PcTree:
        if self.kind == "spider":
            return PcTree.spider(self.root, self.legs)
        edges = [(v, p) for v, p in self.parent.items() if p is not None]
        return PcTree.from_edges(self.root, edges, kind="subdivision", pattern=self.pattern,
                                 node_map=self.node_map, edge_paths=self.edge_paths)


def _ints(toks, lineno):
    try:
        return [int(t) for t in toks]
    except ValueError as exc:
        raise FormatError(f"line {lineno}: expected integers") from exc


def parse_certificate(text: str) -> Certificate:
    try:
        return _parse_certificate(text)
    except FormatError:
        raise
    except (ValueError, IndexError, KeyError) as exc:
        raise FormatError(f"malformed certificate: {exc}") from exc


def _parse_certificate(text: str) -> Certificate:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or lines[0].strip() != CERT_HEADER:
        raise FormatError("missing certificate header")
    fields: dict = {"parent": {}, "colors": {}, "legs": [], "node_map": {}, "edge_paths": {}}
    for lineno, line in enumerate(lines[1:], 2):
        key, *toks = line.split()
        if key in ("kind", "verdict"):
            fields[key] = " ".join(toks)
        elif key in ("n", "root"):
            (fields[key],) = _ints(toks, lineno)
        elif key == "legs":
            fields["leg_lengths"] = _ints(toks, lineno)
        elif key == "leg":
            nums = _ints(toks, lineno)
            if nums[0] != len(fields["legs"]):
                raise FormatError(f"line {lineno}: legs out of order")
            fields["legs"].append(nums[1:])
        elif key == "pattern":
            try:
                fields["pattern"] = TreePattern.parse(" ".join(toks))
            except ShapeError as exc:
                raise FormatError(f"line {lineno}: {exc}") from exc
        elif key == "node":
            x, h = _ints(toks, lineno)
            fields["node_map"][x] = h
        elif key == "path":
            nums = _ints(toks, lineno)
            fields["edge_paths"][nums[0]] = nums[1:]
        elif key == "edge":
            v, p, c = _ints(toks, lineno)
            fields["parent"][v] = p
            fields["colors"][(v, p)] = c
        else:
            raise FormatError(f"line {lineno}: unknown field {key!r}")
    for req in ("kind", "n", "root"):
        if req not in fields:
            raise FormatError(f"certificate lacks '{req}'")
    fields["parent"][fields["root"]] = None
    kind = fields["kind"]
    if kind == "spider":
        if [len(leg) - 1 for leg in fields["legs"]] != fields.get("leg_lengths"):
            raise FormatError("recorded leg lengths disagree with the legs")
        return Certificate(kind, fields["n"], fields["root"], fields["parent"], fields["colors"],
                           legs=fields["legs"], verdict=fields.get("verdict", ""))
    if kind == "subdivision":
        if "pattern" not in fields:
            raise FormatError("subdivision certificate lacks a pattern")
        return Certificate(kind, fields["n"], fields["root"], fields["parent"], fields["colors"],
                           pattern=fields["pattern"], node_map=fields["node_map"],
                           edge_paths=fields["edge_paths"], verdict=fields.get("verdict", ""))
    raise FormatError(f"unknown certificate kind {kind!r}")


def certificate_to_json(g, tree: PcTree, verdict: str = "ok") -> str:
    data = {"kind": tree.kind, "n": g.n, "root": tree.root, "verdict": verdict,
            "edges": [[v, p, _label_int(g, g.color(v, p))] for v, p in sorted(tree.parent.items()) if p is not None]}
    if tree.kind == "spider":
        data["legs"] = tree.legs
    else:
        data["pattern"] = [list(e) for e in tree.pattern.edges]
        data["node_map"] = {str(x): h for x, h in sorted(tree.node_map.items())}
        data["edge_paths"] = {str(i): p for i, p in sorted(tree.edge_paths.items())}
    return json.dumps(data, sort_keys=True) + "\n"


def certificate_from_json(text: str) -> Certificate:
    try:
        d = json.loads(text)
        parent = {int(v): int(p) for v, p, _ in d["edges"]}
        colors = {(int(v), int(p)): int(c) for v, p, c in d["edges"]}
        parent[int(d["root"])] = None
        if d["kind"] == "spider":
            return Certificate("spider", int(d["n"]), int(d["root"]), parent, colors,
                               legs=[list(map(int, leg)) for leg in d["legs"]], verdict=d.get("verdict", ""))
        return Certificate("subdivision", int(d["n"]), int(d["root"]), parent, colors,
                           pattern=TreePattern(tuple(tuple(e) for e in d["pattern"])),
                           node_map={int(k): int(v) for k, v in d["node_map"].items()},
                           edge_paths={int(k): list(map(int, v)) for k, v in d["edge_paths"].items()},
                           verdict=d.get("verdict", ""))
    except (ValueError, KeyError, TypeError, ShapeError) as exc:
        raise FormatError(f"bad certificate JSON: {exc}") from exc


def load_certificate(text: str) -> Certificate:
    if text.lstrip().startswith("{"):
        return certificate_from_json(text)
    return parse_certificate(text)


def verify_certificate(g, cert: Certificate, spec=None) -> str | None:
    """Recheck a certificate against the graph from its raw fields only.

    Returns None when valid. ``spec`` (leg lengths or a TreePattern) pins
    the shape the caller asked for; otherwise the recorded shape is used.
    """
    if cert.n != g.n:
        return f"certificate is for n={cert.n}, graph has n={g.n}"
    parent = cert.parent
    if sorted(parent) != list(range(g.n)):
        return "tree does not span the graph"
    adj: dict[int, list[int]] = {v: [] for v in parent}
    for v, p in parent.items():
        if p is None:
            continue
        if p not in adj or p == v:
            return f"bad parent {p} of {v}"
        c = g.label(g.color(v, p))
        if cert.colors.get((v, p)) != c:
            return f"recorded color of edge {(v, p)} is {cert.colors.get((v, p))}, graph has {c}"
        adj[v].append(p)
        adj[p].append(v)
    # connectivity with n-1 edges means a tree
    seen = {cert.root}
    stack = [cert.root]
    while stack:
        a = stack.pop()
        for b in adj[a]:
            if b not in seen:
                seen.add(b)
                stack.append(b)
    if len(seen) != g.n or sum(len(x) for x in adj.values()) != 2 * (g.n - 1):
        return "edges do not form a spanning tree"
    for v, ns in adj.items():
        cs = [g.color(v, u) for u in ns]
        if len(cs) != len(set(cs)):
            return f"two tree edges of one color at vertex {v}"
    if cert.kind == "spider":
        from .embedding.oracle import check_spider_certificate

        lengths = sorted((len(leg) - 1 for leg in cert.legs), reverse=True)
        if spec is not None:
            want = list(SpiderSpec.of(spec).leg_lengths) if not isinstance(spec, SpiderSpec) else list(spec.leg_lengths)
            if lengths != want:
                return f"leg lengths {lengths} != requested {want}"
        legedges = {(min(a, b), max(a, b)) for leg in cert.legs for a, b in zip(leg, leg[1:])}
        treeedges = {(min(v, p), max(v, p)) for v, p in parent.items() if p is not None}
        if legedges != treeedges:
            return "legs disagree with the edge list"
        return check_spider_certificate(g, cert.root, cert.legs, lengths)
    pattern = spec if isinstance(spec, TreePattern) else cert.pattern
    if canonical_form(suppress_degree_two(adj)) != canonical_form(suppress_degree_two(pattern.adjacency())):
        return "tree does not contract to the pattern"
    return None


# ---------------------------------------------------------------- DOT


def to_dot(g, tree: PcTree | None = None, tree_only: bool = False) -> str:
    """Undirected DOT; edges carry their color label and tree edges are bold."""
    out = ["graph G {", "  node [shape=circle];"]
    in_tree = set()
    leg_of = {}
    if tree is not None:
        in_tree = {(min(v, p), max(v, p)) for v, p in tree.edges}
        for i, leg in enumerate(tree.legs or []):
            for a, b in zip(leg, leg[1:]):
                leg_of[(min(a, b), max(a, b))] = i
    for v in range(g.n):
        attr = ' [style=filled, fillcolor="lightgray"]' if tree is not None and v == tree.root else ""
        out.append(f"  {v}{attr};")
    for i, j in pairs(g.n):
        e = (i, j)
        lab = g.label(g.color(i, j))
        if e in in_tree:
            extra = f', leg="{leg_of[e]}"' if e in leg_of else ""
            out.append(f'  {i} -- {j} [label="{lab}", penwidth=3{extra}];')
        elif not tree_only:
            out.append(f'  {i} -- {j} [label="{lab}", color="gray80"];')
    out.append("}")
    return "\n".join(out) + "\n"
