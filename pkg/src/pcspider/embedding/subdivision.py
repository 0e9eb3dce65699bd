"""PC copies and PC spanning subdivisions of a fixed tree."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..graph_core import find_monochromatic_triangle
from ..pc_structures import _color_counts, validate_pc_tree
from ..trees import PcTree, ShapeError, TreePattern, verify_shape
from .spider import EmbeddingError, NotMonoC3Free


@dataclass
class SubdivisionReport:
    small: str = ""
    leaf_extensions: int = 0
    exchanges: int = 0
    walk_steps: int = 0
    notes: list = field(default_factory=list)


# ---------------------------------------------------------------- small trees


def _leaf_to_drop(edges: list[tuple[int, int]]) -> tuple[int, int, int]:
    """(index, leaf, neighbor) for the largest-labelled leaf."""
    deg: dict[int, int] = {}
    for a, b in edges:
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
    leaf = max(v for v, d in deg.items() if d == 1)
    for i, (a, b) in enumerate(edges):
        if leaf in (a, b):
            return i, leaf, b if a == leaf else a
    raise AssertionError("leaf without an edge")


def _inductive(g, S: list[int], edges: list[tuple[int, int]], report) -> dict[int, int]:
    """Pattern node -> host vertex inside S, or EmbeddingError."""
    rows = g.rows
    k = len(edges)
    if k == 1:
        if len(S) < 2:
            raise EmbeddingError("small/base", "fewer than two vertices left")
        a, b = edges[0]
        return {a: S[0], b: S[1]}
    _, counts = _color_counts(g, S)
    cdeg = (counts > 0).sum(axis=1)
    V1 = [S[i] for i in range(len(S)) if cdeg[i] >= k]
    i, leaf, p = _leaf_to_drop(edges)
    rest = edges[:i] + edges[i + 1:]
    if len(V1) < len(rest) + 1:
        raise EmbeddingError("small/V1-too-small", f"|V1|={len(V1)} for a tree with {len(rest)} edges")
    m = _inductive(g, V1, rest, report)
    yp = m[p]
    image = set(m.values())
    near = [m[b] if a == p else m[a] for a, b in rest if p in (a, b)]
    used_at_y = {rows[yp][z] for z in near}
    to_tree = {rows[yp][z] for z in image if z != yp}
    for x in S:
        if x not in image and rows[yp][x] not in to_tree:
            m[leaf] = x
            return m
    # weaker rule: the new color only has to avoid the tree edges at y'
    for x in S:
        if x not in image and rows[yp][x] not in used_at_y:
            report.notes.append(f"leaf {leaf} attached by tree-edge colors")
            m[leaf] = x
            return m
    raise EmbeddingError("small/attach", f"no vertex to attach pattern leaf {leaf}")


def _backtrack(g, pattern: TreePattern, S: list[int], node_limit: int = 200_000) -> dict[int, int] | None:
    """Direct search for a PC copy of ``pattern`` inside S."""
    rows = g.rows
    adj = pattern.adjacency()
    order = [0]
    par = {0: None}
    for v in order:
        for u in sorted(adj[v]):
            if u not in par:
                par[u] = v
                order.append(u)
    m: dict[int, int] = {}
    used: set[int] = set()
    cols: dict[int, set[int]] = {}
    budget = [node_limit]

    def rec(t: int) -> bool:
        if t == len(order):
            return True
        budget[0] -= 1
        if budget[0] < 0:
            return False
        node = order[t]
        p = par[node]
        for x in S:
            if x in used:
                continue
            if p is not None:
                y = m[p]
                c = rows[y][x]
                if c in cols[y]:
                    continue
                cols[y].add(c)
                cols[x] = {c}
            else:
                cols[x] = set()
            m[node] = x
            used.add(x)
            if rec(t + 1):
                return True
            used.discard(x)
            del m[node]
            del cols[x]
            if p is not None:
                cols[m[p]].discard(rows[m[p]][x])
        return False

    return m if rec(0) else None


def embed_small_pc_tree(g, pattern: TreePattern, report: SubdivisionReport | None = None,
                        fallback: bool = True) -> PcTree:
    """PC copy (not spanning) of ``pattern`` in ``g``.

    Peels off the vertices of color degree below the edge count, embeds the
    pattern minus a leaf among the rest, and re-attaches the leaf through a
    color that is new at its neighbor. With ``fallback`` a direct search
    takes over when a step lacks room.
    """
    report = report if report is not None else SubdivisionReport()
    if g.n < pattern.k + 1:
        raise EmbeddingError("small/too-few-vertices", f"n={g.n} < {pattern.k + 1}")
    try:
        m = _inductive(g, list(range(g.n)), list(pattern.edges), report)
        report.small = "inductive"
    except EmbeddingError as exc:
        if not fallback:
            raise
        report.notes.append(f"inductive step failed: {exc}")
        m = _backtrack(g, pattern, list(range(g.n)))
        if m is None:
            raise EmbeddingError("small/search-exhausted", "no PC copy found") from exc
        report.small = "search"
    edges = [(m[a], m[b]) for a, b in pattern.edges]
    ok, why = validate_pc_tree(g, edges)
    if not ok:
        raise AssertionError(f"small tree is not properly colored: {why}")
    return PcTree.from_edges(
        m[0], edges, kind="subdivision", pattern=pattern, node_map=dict(m),
        edge_paths={i: [m[a], m[b]] for i, (a, b) in enumerate(pattern.edges)},
    )


# ---------------------------------------------------------------- growth


class _Grower:
    """Mutable tree with a pattern-edge label on every host edge."""

    def __init__(self, g, small: PcTree):
        self.rows = g.rows
        self.adj: dict[int, dict[int, int]] = {v: {} for v in small.parent}
        for idx, path in small.edge_paths.items():
            for a, b in zip(path, path[1:]):
                self.adj[a][b] = idx
                self.adj[b][a] = idx
        self.node_map = dict(small.node_map)
        self.image_of = {h: x for x, h in self.node_map.items()}

    def colors_at(self, y: int, skip: int | None = None) -> set[int]:
        r = self.rows[y]
        return {r[z] for z in self.adj[y] if z != skip}

    def side_size(self, x: int, y: int) -> int:
        """Vertices on y's side once the edge xy is removed."""
        seen = {x, y}
        stack = [y]
        while stack:
            a = stack.pop()
            for b in self.adj[a]:
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        return len(seen) - 1

    def extend_leaf(self, u: int) -> bool:
        r = self.rows
        for x in sorted(self.adj):
            if len(self.adj[x]) != 1:
                continue
            (y, idx), = self.adj[x].items()
            if r[u][x] != r[x][y]:
                self.adj[u] = {x: idx}
                self.adj[x][u] = idx
                node = self.image_of.pop(x)
                self.node_map[node] = u
                self.image_of[u] = node
                return True
        return False

    def subdivide(self, u: int, x: int, y: int) -> None:
        idx = self.adj[x].pop(y)
        del self.adj[y][x]
        self.adj[u] = {x: idx, y: idx}
        self.adj[x][u] = idx
        self.adj[y][u] = idx

    def paths(self, pattern: TreePattern) -> dict[int, list[int]]:
        out = {}
        for idx, (a, b) in enumerate(pattern.edges):
            cur, prev = self.node_map[a], None
            path = [cur]
            end = self.node_map[b]
            while cur != end:
                nxt = [z for z, i in self.adj[cur].items() if i == idx and z != prev]
                if len(nxt) != 1:
                    raise AssertionError(f"pattern edge {idx} does not trace a path")
                prev, cur = cur, nxt[0]
                path.append(cur)
            out[idx] = path
        return out


def embed_pc_subdivision(g, pattern: TreePattern, report: SubdivisionReport | None = None,
                         check: bool = True) -> PcTree:
    """Spanning PC tree of ``g`` that is a subdivision of ``pattern``.

    Starts from a PC copy and absorbs the outside vertices one by one: by
    extending a leaf when the colors allow it, otherwise by walking
    compatible triples ``(u, x, y)`` with ``col(ux) = col(xy)`` until the
    edge ``xy`` can be subdivided by ``u``.
    """
    report = report if report is not None else SubdivisionReport()
    if g.n < pattern.k + 1:
        raise ShapeError(f"n={g.n} too small for a tree with {pattern.k} edges")
    if check:
        tri = find_monochromatic_triangle(g)
        if tri is not None:
            raise NotMonoC3Free(tri)
    small = embed_small_pc_tree(g, pattern, report)
    t = _Grower(g, small)
    rows = g.rows
    for u in range(g.n):
        if u in t.adj:
            continue
        if t.extend_leaf(u):
            report.leaf_extensions += 1
            continue
        # every leaf now sees u in the color of its tree edge
        x = min(v for v in t.adj if len(t.adj[v]) == 1)
        (y,) = t.adj[x]
        last = t.side_size(x, y)
        while True:
            if rows[u][x] != rows[x][y]:
                raise AssertionError("walk left the compatible triples")
            c = rows[u][y]
            if c == rows[x][y]:
                raise NotMonoC3Free((u, x, y))
            if c not in t.colors_at(y, skip=x):
                t.subdivide(u, x, y)
                report.exchanges += 1
                break
            z = next(z for z in t.adj[y] if z != x and rows[y][z] == c)
            size = t.side_size(y, z)
            if size >= last:
                raise AssertionError("component size did not decrease along the walk")
            last = size
            x, y = y, z
            report.walk_steps += 1
    parent_edges = [(a, b) for a in t.adj for b in t.adj[a] if a < b]
    tree = PcTree.from_edges(
        t.node_map[0], parent_edges, kind="subdivision", pattern=pattern,
        node_map=dict(t.node_map), edge_paths=t.paths(pattern),
    )
    ok, why = validate_pc_tree(g, tree.edges)
    if not ok:
        raise AssertionError(f"subdivision is not properly colored: {why}")
    ok, why = verify_shape(tree, pattern)
    if not ok:
        raise AssertionError(f"subdivision has the wrong shape: {why}")
    if len(tree) != g.n:
        raise AssertionError("subdivision is not spanning")
    return tree
