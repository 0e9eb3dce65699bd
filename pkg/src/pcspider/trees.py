"""Tree patterns, spider specs and tree certificates."""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class ShapeError(ValueError):
    pass


@dataclass(frozen=True)
class SpiderSpec:
    """Leg lengths of a spider, longest first."""

    leg_lengths: tuple[int, ...]

    def __post_init__(self):
        legs = tuple(int(x) for x in self.leg_lengths)
        if not legs:
            raise ShapeError("a spider needs at least one leg")
        if any(x < 1 for x in legs):
            raise ShapeError(f"leg lengths must be >= 1: {legs}")
        if list(legs) != sorted(legs, reverse=True):
            raise ShapeError(f"leg lengths must be sorted descending: {legs}")
        object.__setattr__(self, "leg_lengths", legs)

    @classmethod
    def of(cls, legs: Iterable[int]) -> "SpiderSpec":
        """Build from lengths in any order."""
        return cls(tuple(sorted((int(x) for x in legs), reverse=True)))

    @property
    def k(self) -> int:
        return len(self.leg_lengths)

    @property
    def size(self) -> int:
        """Vertex count of the spider."""
        return sum(self.leg_lengths) + 1


@dataclass(frozen=True)
class TreePattern:
    """A fixed tree on nodes ``0..k`` given by its edge list."""

    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        edges = tuple((int(a), int(b)) for a, b in self.edges)
        if not edges:
            raise ShapeError("pattern needs at least one edge")
        nodes = sorted({x for e in edges for x in e})
        if nodes != list(range(len(edges) + 1)):
            raise ShapeError("pattern nodes must be 0..k for a tree with k edges")
        seen = set()
        for a, b in edges:
            if a == b:
                raise ShapeError(f"loop at pattern node {a}")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise ShapeError(f"repeated pattern edge {key}")
            seen.add(key)
        parent = list(range(len(nodes)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in edges:
            ra, rb = find(a), find(b)
            if ra == rb:
                raise ShapeError(f"pattern has a cycle through edge {(a, b)}")
            parent[ra] = rb
        object.__setattr__(self, "edges", edges)

    @property
    def k(self) -> int:
        return len(self.edges)

    @property
    def nodes(self) -> range:
        return range(self.k + 1)

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {x: [] for x in self.nodes}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    @classmethod
    def edge(cls) -> "TreePattern":
        return cls(((0, 1),))

    @classmethod
    def star(cls, k: int) -> "TreePattern":
        if k < 1:
            raise ShapeError("star needs k >= 1")
        return cls(tuple((0, i) for i in range(1, k + 1)))

    @classmethod
    def parse(cls, text: str) -> "TreePattern":
        """``edge``, ``star:k``, or whitespace/comma separated ``a-b`` pairs."""
        text = text.strip()
        if text == "edge":
            return cls.edge()
        if text.startswith("star:"):
            try:
                return cls.star(int(text[5:]))
            except ValueError as exc:
                raise ShapeError(f"bad star pattern {text!r}") from exc
        edges = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].replace(",", " ")
            for tok in line.split():
                parts = tok.split("-")
                if len(parts) != 2 or not all(x.isdigit() for x in parts):
                    raise ShapeError(f"bad pattern edge {tok!r}")
                edges.append((int(parts[0]), int(parts[1])))
        if not edges:
            raise ShapeError("empty pattern")
        return cls(tuple(edges))

    def describe(self) -> str:
        return " ".join(f"{a}-{b}" for a, b in self.edges)


@dataclass
class PcTree:
    """A tree certificate over host vertices.

    ``legs`` is set for spiders (each leg listed from the center outward).
    ``node_map``/``edge_paths`` are set for subdivisions: pattern node -> host
    vertex, pattern edge index -> host path from the image of its first node
    to the image of its second node.
    """

    root: int
    parent: dict[int, int | None]
    kind: str = "tree"
    legs: list[list[int]] | None = None
    pattern: TreePattern | None = None
    node_map: dict[int, int] | None = None
    edge_paths: dict[int, list[int]] | None = None
    meta: dict = field(default_factory=dict)

    @property
    def vertices(self) -> list[int]:
        return sorted(self.parent)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(p, v) for v, p in sorted(self.parent.items()) if p is not None]

    def __len__(self) -> int:
        return len(self.parent)

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in self.parent}
        for p, v in self.edges:
            adj[p].append(v)
            adj[v].append(p)
        return adj

    @classmethod
    def from_edges(cls, root: int, edges: Iterable[tuple[int, int]], **kw) -> "PcTree":
        adj: dict[int, list[int]] = {root: []}
        count = 0
        for a, b in edges:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
            count += 1
        parent: dict[int, int | None] = {root: None}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in sorted(adj[x]):
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
        if len(parent) != len(adj) or count != len(adj) - 1:
            raise ShapeError("edge list is not a tree")
        return cls(root, parent, **kw)

    @classmethod
    def spider(cls, center: int, legs: Sequence[Sequence[int]], **kw) -> "PcTree":
        legs = [list(leg) for leg in legs]
        edges = []
        for leg in legs:
            if not leg or leg[0] != center:
                raise ShapeError("every leg must start at the center")
            edges.extend(zip(leg, leg[1:]))
        return cls.from_edges(center, edges, kind="spider", legs=legs, **kw)


def verify_shape(tree: PcTree, spec) -> tuple[bool, str | None]:
    """Check that ``tree`` has the shape ``spec`` (a SpiderSpec or TreePattern)."""
    if isinstance(spec, SpiderSpec):
        return _verify_spider(tree, spec)
    if isinstance(spec, TreePattern):
        return _verify_subdivision(tree, spec)
    raise TypeError(f"unknown shape spec {spec!r}")


def _verify_spider(tree: PcTree, spec: SpiderSpec) -> tuple[bool, str | None]:
    adj = tree.adjacency()
    c = tree.root
    if c not in adj:
        return False, "center not in tree"
    if len(adj[c]) != spec.k:
        return False, f"center {c} has degree {len(adj[c])}, expected {spec.k}"
    lengths = []
    for start in sorted(adj[c]):
        prev, cur, length = c, start, 1
        while True:
            nxt = [y for y in adj[cur] if y != prev]
            if len(nxt) > 1:
                return False, f"vertex {cur} branches off a leg"
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        lengths.append(length)
    if sum(lengths) + 1 != len(adj):
        return False, "tree has vertices outside the legs"
    if sorted(lengths, reverse=True) != list(spec.leg_lengths):
        return False, f"leg lengths {sorted(lengths, reverse=True)} != {list(spec.leg_lengths)}"
    if tree.legs is not None:
        recorded = sorted((len(leg) - 1 for leg in tree.legs), reverse=True)
        if recorded != list(spec.leg_lengths):
            return False, "recorded legs disagree with spec"
    return True, None


def _verify_subdivision(tree: PcTree, pattern: TreePattern) -> tuple[bool, str | None]:
    adj = tree.adjacency()
    if tree.node_map is not None and tree.edge_paths is not None:
        ok, why = _verify_subdivision_metadata(tree, pattern, adj)
        if not ok:
            return ok, why
    # independent check: both trees suppress to the same shape
    if len(adj) < pattern.k + 1:
        return False, "tree smaller than pattern"
    host = canonical_form(suppress_degree_two(adj))
    pat = canonical_form(suppress_degree_two(pattern.adjacency()))
    if host != pat:
        return False, "tree does not contract to the pattern"
    return True, None


def _verify_subdivision_metadata(tree, pattern, adj) -> tuple[bool, str | None]:
    nm = tree.node_map
    if sorted(nm) != list(pattern.nodes):
        return False, "node map does not cover the pattern"
    images = set(nm.values())
    if len(images) != len(nm) or not images <= set(adj):
        return False, "node map is not injective into the tree"
    covered: Counter = Counter()
    for idx, (a, b) in enumerate(pattern.edges):
        path = tree.edge_paths.get(idx)
        if not path or path[0] != nm[a] or path[-1] != nm[b]:
            return False, f"pattern edge {idx} path has wrong endpoints"
        for x, y in zip(path, path[1:]):
            if y not in adj[x]:
                return False, f"pattern edge {idx} path uses non-tree pair {(x, y)}"
            covered[(min(x, y), max(x, y))] += 1
        for inner in path[1:-1]:
            if inner in images or len(adj[inner]) != 2:
                return False, f"subdivision vertex {inner} is not an inner degree-2 vertex"
    tree_edges = {(min(p, v), max(p, v)) for p, v in tree.edges}
    if set(covered) != tree_edges or any(c != 1 for c in covered.values()):
        return False, "pattern edge paths do not partition the tree edges"
    adjp = pattern.adjacency()
    for x, h in nm.items():
        if len(adj[h]) != len(adjp[x]):
            return False, f"image of pattern node {x} has wrong degree"
    return True, None


def suppress_degree_two(adj: dict) -> dict:
    """Contract every degree-2 vertex; a bare path collapses to one edge."""
    adj = {v: list(ns) for v, ns in adj.items()}
    keep = {v for v, ns in adj.items() if len(ns) != 2}
    if not keep:
        # a cycle cannot occur for trees; a lone vertex stays as is
        return adj
    out: dict = {v: [] for v in keep}
    for v in sorted(keep):
        for start in adj[v]:
            prev, cur = v, start
            while cur not in keep:
                nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
                prev, cur = cur, nxt
            out[v].append(cur)
    return out


def canonical_form(adj: dict) -> str:
    """AHU canonical string of an unrooted tree (rooted at its center)."""
    if len(adj) == 1:
        return "()"
    deg = {v: len(ns) for v, ns in adj.items()}
    layer = [v for v, d in deg.items() if d <= 1]
    remaining = len(adj)
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for u in adj[v]:
                deg[u] -= 1
                if deg[u] == 1:
                    nxt.append(u)
            deg[v] = 0
        layer = nxt
    return min(_encode(adj, c, None) for c in layer)


def _encode(adj, v, parent) -> str:
    return "(" + "".join(sorted(_encode(adj, u, v) for u in adj[v] if u != parent)) + ")"
