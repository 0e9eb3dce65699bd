"""Edge-colored complete graphs.

Colors are stored densely: after :func:`build_graph` every color id lies in
``[0, palette_size)`` and ids are assigned in first-use order over the pairs
``(0,1), (0,2), ..., (0,n-1), (1,2), ...``.  The caller's labels survive in
``EdgeColoredGraph.labels`` and are only used for I/O.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np


class GraphError(ValueError):
    """Malformed graph input."""


def pair_index(n: int, i: int, j: int) -> int:
    """Position of the unordered pair {i, j} in the flat upper-triangular array."""
    if i > j:
        i, j = j, i
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


def pairs(n: int):
    for i in range(n):
        for j in range(i + 1, n):
            yield i, j


@dataclass(frozen=True)
class EdgeColoredGraph:
    n: int
    colors: tuple[int, ...]
    labels: tuple = ()

    @property
    def palette_size(self) -> int:
        return len(self.labels)

    @cached_property
    def rows(self) -> list[list[int]]:
        # full symmetric matrix as nested lists, diagonal -1; list indexing is
        # the fast path for the pure-Python algorithms
        n = self.n
        rows = [[-1] * n for _ in range(n)]
        it = iter(self.colors)
        for i in range(n):
            ri = rows[i]
            for j in range(i + 1, n):
                c = next(it)
                ri[j] = c
                rows[j][i] = c
        return rows

    @cached_property
    def matrix(self) -> np.ndarray:
        m = np.array(self.rows, dtype=np.int64) if self.n else np.zeros((0, 0), np.int64)
        m.setflags(write=False)
        return m

    def color(self, u: int, v: int) -> int:
        if u == v:
            raise GraphError(f"no loop at vertex {u}")
        return self.colors[pair_index(self.n, u, v)]

    def label(self, c: int):
        """Original label of dense color ``c``."""
        return self.labels[c]

    def edge_label(self, u: int, v: int):
        return self.labels[self.color(u, v)]

    def __repr__(self) -> str:
        return f"EdgeColoredGraph(n={self.n}, palette_size={self.palette_size})"


def build_graph(n: int, color_matrix) -> EdgeColoredGraph:
    """Build a normalized graph on ``n`` vertices.

    ``color_matrix`` is either a full ``n x n`` nested sequence / array (the
    diagonal is ignored), a mapping from pairs ``(i, j)`` to labels, or a flat
    sequence of ``n(n-1)/2`` labels in pair order.
    """
    if n < 1:
        raise GraphError("n must be >= 1")
    m = n * (n - 1) // 2
    raw: list = [None] * m

    if isinstance(color_matrix, Mapping):
        for key, c in color_matrix.items():
            i, j = key
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise GraphError(f"bad pair {key!r}")
            k = pair_index(n, i, j)
            if raw[k] is not None and raw[k] != c:
                raise GraphError(f"asymmetric entries for pair {(min(i, j), max(i, j))}")
            raw[k] = c
    else:
        seq = list(color_matrix)
        if len(seq) == n and (n == 0 or _is_row(seq[0])):
            for i, row in enumerate(seq):
                row = list(row)
                if len(row) != n:
                    raise GraphError(f"row {i} has {len(row)} entries, expected {n}")
                seq[i] = row
            for i, j in pairs(n):
                a, b = seq[i][j], seq[j][i]
                if a is None or b is None:
                    raise GraphError(f"missing pair {(i, j)}")
                if a != b:
                    raise GraphError(f"asymmetric entries for pair {(i, j)}: {a!r} != {b!r}")
                raw[pair_index(n, i, j)] = a
        elif len(seq) == m:
            raw = seq
        else:
            raise GraphError("color_matrix must be n x n, a pair mapping or a flat pair list")

    for k, c in enumerate(raw):
        if c is None:
            i, j = _unrank_pair(n, k)
            raise GraphError(f"missing pair {(i, j)}")
    dense: dict = {}
    colors = []
    for c in raw:
        if c not in dense:
            dense[c] = len(dense)
        colors.append(dense[c])
    return EdgeColoredGraph(n, tuple(colors), tuple(dense))


def _is_row(x) -> bool:
    return isinstance(x, (list, tuple, np.ndarray))


def _unrank_pair(n: int, k: int) -> tuple[int, int]:
    for i, j in pairs(n):
        if k == 0:
            return i, j
        k -= 1
    raise IndexError(k)


class TriangleKind(enum.Enum):
    MONOCHROMATIC = "monochromatic"
    TWO_COLORED = "two-colored"
    RAINBOW = "rainbow"


@dataclass(frozen=True)
class TriangleClass:
    kind: TriangleKind
    center_edges: tuple[tuple[int, int], ...]


def _edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def classify_triangle(g, u: int, v: int, w: int) -> TriangleClass:
    """Kind of the triangle uvw and its center edges.

    An edge is central when its color does not occur on the other two edges.
    """
    if len({u, v, w}) != 3:
        raise GraphError(f"triangle needs three distinct vertices, got {(u, v, w)}")
    r = g.rows
    sides = {_edge(v, w): r[v][w], _edge(u, w): r[u][w], _edge(u, v): r[u][v]}
    cols = list(sides.values())
    centers = tuple(sorted(e for e, c in sides.items() if cols.count(c) == 1))
    distinct = len(set(cols))
    kind = {1: TriangleKind.MONOCHROMATIC, 2: TriangleKind.TWO_COLORED, 3: TriangleKind.RAINBOW}[distinct]
    return TriangleClass(kind, centers)


def center_edge(rows, u: int, v: int, w: int) -> tuple[int, int, int] | None:
    """Relabel triangle uvw as ``(apex, x, y)`` with ``xy`` a center edge.

    Prefers the edge opposite ``u``, then opposite ``v``, then ``w``. Returns
    None for a monochromatic triangle.
    """
    a, b, c = rows[v][w], rows[u][w], rows[u][v]
    if a != b and a != c:
        return u, v, w
    if b != a and b != c:
        return v, u, w
    if c != a and c != b:
        return w, u, v
    return None


def find_monochromatic_triangle(g) -> tuple[int, int, int] | None:
    """Lexicographically smallest monochromatic triangle, or None."""
    n = g.n
    if n < 3:
        return None
    rows = g.rows
    # masks[v][c]: bitmask of neighbors joined to v in color c
    masks: list[dict[int, int]] = []
    for v in range(n):
        mv: dict[int, int] = {}
        for w, c in enumerate(rows[v]):
            if w != v:
                mv[c] = mv.get(c, 0) | (1 << w)
        masks.append(mv)
    for u in range(n - 2):
        ru, mu = rows[u], masks[u]
        for v in range(u + 1, n - 1):
            common = (mu[ru[v]] & masks[v][ru[v]]) >> (v + 1)
            if common:
                w = v + 1 + ((common & -common).bit_length() - 1)
                return u, v, w
    return None


def is_mono_c3_free(g) -> bool:
    return find_monochromatic_triangle(g) is None


@dataclass(frozen=True)
class VertexColorProfile:
    vertex: int
    color_degree: int
    max_mono_degree: int
    repeated_colors: tuple[tuple[int, tuple[int, ...]], ...] = field(default=())


def vertex_profile(g, v: int, within: Iterable[int] | None = None) -> VertexColorProfile:
    """Color degree, maximum monochromatic degree and repeated colors at ``v``.

    ``within`` restricts the neighborhood to a vertex subset (``v`` itself is
    skipped if present).
    """
    if not 0 <= v < g.n:
        raise GraphError(f"vertex {v} out of range")
    row = g.rows[v]
    nbrs = range(g.n) if within is None else sorted(within)
    classes: dict[int, list[int]] = {}
    for u in nbrs:
        if u != v:
            classes.setdefault(row[u], []).append(u)
    dmon = max((len(ws) for ws in classes.values()), default=0)
    repeated = tuple((c, tuple(ws)) for c, ws in sorted(classes.items()) if len(ws) >= 2)
    return VertexColorProfile(v, len(classes), dmon, repeated)


def color_degrees(g, vertices: Sequence[int] | None = None) -> list[int]:
    verts = range(g.n) if vertices is None else vertices
    rows = g.rows
    out = []
    for v in verts:
        r = rows[v]
        out.append(len({r[u] for u in verts if u != v}))
    return out


class InducedView:
    """Read-only G[subset] with local indices ``0..len(subset)-1``.

    Color queries go to the parent; ``rows`` is materialized on first use so
    every algorithm written against ``g.n``/``g.rows`` runs on a view too.
    """

    def __init__(self, parent, subset: Sequence[int]):
        subset = list(subset)
        if len(set(subset)) != len(subset):
            raise GraphError("subset has duplicate vertices")
        for v in subset:
            if not 0 <= v < parent.n:
                raise GraphError(f"vertex {v} out of range")
        self.parent = parent
        self.vertices = tuple(subset)
        self.n = len(subset)

    def to_parent(self, i: int) -> int:
        return self.vertices[i]

    def color(self, i: int, j: int) -> int:
        return self.parent.color(self.vertices[i], self.vertices[j])

    @cached_property
    def rows(self) -> list[list[int]]:
        pr = self.parent.rows
        vs = self.vertices
        return [[pr[a][b] for b in vs] for a in vs]

    @cached_property
    def matrix(self) -> np.ndarray:
        idx = np.array(self.vertices, dtype=np.int64)
        m = self.parent.matrix[np.ix_(idx, idx)] if self.n else np.zeros((0, 0), np.int64)
        m.setflags(write=False)
        return m

    @property
    def labels(self):
        return self.parent.labels

    def materialize(self) -> EdgeColoredGraph:
        """A standalone normalized graph with the view's colors."""
        return build_graph(self.n, [self.parent.labels[self.rows[i][j]] for i, j in pairs(self.n)] if self.n > 1 else [])


def induced(g, subset: Sequence[int]) -> InducedView:
    return InducedView(g, subset)
