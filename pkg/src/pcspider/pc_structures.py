"""Properly colored paths, shovels, bowties and octopuses.

All functions take host-graph vertex ids. Functions that accept ``vertices``
work inside the induced subgraph on that set without building a view.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

from .graph_core import GraphError, center_edge, find_monochromatic_triangle
from .trees import PcTree


class PcError(ValueError):
    """A precondition of a constructive step does not hold."""


class NotMonoC3Free(GraphError):
    def __init__(self, triangle):
        super().__init__(f"graph has a monochromatic triangle {triangle}")
        self.triangle = triangle


def require_mono_c3_free(g) -> None:
    tri = find_monochromatic_triangle(g)
    if tri is not None:
        raise NotMonoC3Free(tri)


# ---------------------------------------------------------------- checks


def is_pc_path(rows, path: Sequence[int]) -> bool:
    return all(rows[a][b] != rows[b][c] for a, b, c in zip(path, path[1:], path[2:]))


@dataclass(frozen=True)
class PcViolation:
    vertex: int
    edges: tuple[tuple[int, int], tuple[int, int]]
    color: int


def validate_pc_tree(g, edges: Iterable[tuple[int, int]]) -> tuple[bool, PcViolation | None]:
    """Is the forest given by ``edges`` properly colored?

    Raises PcError when the edges contain a cycle, a loop or a repeat.
    """
    edges = [tuple(e) for e in edges]
    parent: dict[int, int] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    seen = set()
    incident: dict[int, list[tuple[int, int]]] = {}
    for u, v in edges:
        if not (0 <= u < g.n and 0 <= v < g.n):
            raise PcError(f"edge {(u, v)} has a vertex out of range")
        if u == v:
            raise PcError(f"loop at {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise PcError(f"repeated edge {key}")
        seen.add(key)
        ru, rv = find(u), find(v)
        if ru == rv:
            raise PcError(f"edge {key} closes a cycle")
        parent[ru] = rv
        incident.setdefault(u, []).append((u, v))
        incident.setdefault(v, []).append((u, v))

    rows = g.rows
    for x in sorted(incident):
        by_color: dict[int, tuple[int, int]] = {}
        for e in incident[x]:
            c = rows[e[0]][e[1]]
            if c in by_color:
                return False, PcViolation(x, (by_color[c], e), c)
            by_color[c] = e
    return True, None


# ---------------------------------------------------------------- structures


@dataclass(frozen=True)
class Shovel:
    """Triangle ``(u1, u2, u3)`` glued to the path ``path`` at ``path[0] == u1``."""

    triangle: tuple[int, int, int]
    path: tuple[int, ...]

    @property
    def t(self) -> int:
        return len(self.path)

    @property
    def vertices(self) -> list[int]:
        return list(self.path) + [self.triangle[1], self.triangle[2]]

    def violation(self, g) -> str | None:
        r = g.rows
        u1, u2, u3 = self.triangle
        p = self.path
        if not p or p[0] != u1:
            return "path must start at the triangle apex"
        if len(set(self.vertices)) != len(p) + 2:
            return "shovel vertices are not distinct"
        if not is_pc_path(r, p):
            return "path is not properly colored"
        if r[u2][u3] in (r[u1][u2], r[u1][u3]):
            return "u2u3 is not a center edge"
        if len(p) >= 2 and r[p[0]][p[1]] in (r[u1][u2], r[u1][u3]):
            return "first path edge repeats a triangle color at the apex"
        return None

    def is_nice(self, g) -> bool:
        return self.violation(g) is None


@dataclass(frozen=True)
class Bowtie:
    """Short: ``center`` with triangles ``center,a`` and ``center,b``.

    Long: triangles ``a = (v1, v2, v3)`` and ``b = (v4, v5, v6)`` joined by
    the bridge ``v3v4``; ``a[2]`` and ``b[0]`` are the centers.
    """

    kind: str
    a: tuple[int, ...]
    b: tuple[int, ...]
    center: int | None = None

    @property
    def vertices(self) -> list[int]:
        vs = list(self.a) + list(self.b)
        if self.kind == "short":
            vs.append(self.center)
        return vs

    @property
    def centers(self) -> tuple[int, ...]:
        return (self.center,) if self.kind == "short" else (self.a[2], self.b[0])

    def violation(self, g) -> str | None:
        r = g.rows
        if len(set(self.vertices)) != len(self.vertices):
            return "bowtie vertices are not distinct"
        if self.kind == "short":
            u0 = self.center
            (u1, u2), (u3, u4) = self.a, self.b
            for x, y in ((u1, u2), (u3, u4)):
                if r[x][y] in (r[u0][x], r[u0][y]):
                    return f"{(x, y)} is not a center edge"
            if {r[u0][u1], r[u0][u2]} & {r[u0][u3], r[u0][u4]}:
                return "the two triangles share a color at the center"
            return None
        if self.kind == "long":
            v1, v2, v3 = self.a
            v4, v5, v6 = self.b
            left = Shovel((v4, v5, v6), (v4, v3)).violation(g)
            if left:
                return "v4 side: " + left
            right = Shovel((v3, v1, v2), (v3, v4)).violation(g)
            if right:
                return "v3 side: " + right
            return None
        return f"unknown bowtie kind {self.kind!r}"

    def is_nice(self, g) -> bool:
        return self.violation(g) is None


@dataclass(frozen=True)
class Octopus:
    """Triangle ``(u0, a, b)`` plus PC legs from ``u0`` (each listed from ``u0``)."""

    triangle: tuple[int, int, int]
    legs: tuple[tuple[int, ...], ...]

    @property
    def center(self) -> int:
        return self.triangle[0]

    @property
    def leg_lengths(self) -> list[int]:
        return [len(leg) - 1 for leg in self.legs]

    @property
    def vertices(self) -> list[int]:
        vs = list(self.triangle)
        for leg in self.legs:
            vs.extend(leg[1:])
        return vs

    def violation(self, g) -> str | None:
        r = g.rows
        u0, a, b = self.triangle
        vs = self.vertices
        if len(set(vs)) != len(vs):
            return "octopus vertices are not distinct"
        if r[a][b] in (r[u0][a], r[u0][b]):
            return "ab is not a center edge"
        firsts = []
        for leg in self.legs:
            if len(leg) < 2 or leg[0] != u0:
                return "every leg must start at the center and have an edge"
            if not is_pc_path(r, leg):
                return f"leg {leg} is not properly colored"
            c = r[leg[0]][leg[1]]
            if c in (r[u0][a], r[u0][b]):
                return f"leg {leg} starts with a triangle color"
            firsts.append(c)
        if len(set(firsts)) != len(firsts):
            return "two legs start with the same color"
        return None

    def is_nice(self, g) -> bool:
        return self.violation(g) is None


# ---------------------------------------------------------------- paths


def insert_vertex(g, path: Sequence[int], v: int, i: int) -> list[int]:
    """Insert ``v`` into the PC path, keeping both endpoints.

    Precondition: ``col(v, path[i]) == col(path[i], path[i+1])`` (0-based
    ``i``). ``v`` goes right after ``path[j]`` for the largest ``j >= i`` with
    the same color match, which keeps the path PC when the host has no
    monochromatic triangle.
    """
    path = list(path)
    r = g.rows
    if len(path) < 2:
        raise PcError("path needs at least two vertices")
    if v in path:
        raise PcError(f"vertex {v} already on the path")
    if not 0 <= i <= len(path) - 2:
        raise PcError(f"index {i} out of range")
    if r[v][path[i]] != r[path[i]][path[i + 1]]:
        raise PcError(f"col(v, path[{i}]) differs from col(path[{i}], path[{i + 1}])")
    return _insert_after_last_match(r, path, v, i)


def _insert_after_last_match(r, path: list[int], v: int, lo: int = 0) -> list[int]:
    rv = r[v]
    for j in range(len(path) - 2, lo - 1, -1):
        if rv[path[j]] == r[path[j]][path[j + 1]]:
            path.insert(j + 1, v)
            return path
    raise PcError("no insertion position")


def pc_path_ending_at(rows, v: int, others: Iterable[int]) -> list[int]:
    """PC path through ``{v} | others`` whose last vertex is ``v``.

    Assumes the host has no monochromatic triangle on these vertices.
    """
    p = [v]
    for u in others:
        if u == v:
            continue
        if len(p) == 1 or rows[u][p[0]] != rows[p[0]][p[1]]:
            p.insert(0, u)
        else:
            _insert_after_last_match(rows, p, u, 0)
    return p


def pc_hamilton_path_from(g, v: int, vertices: Sequence[int] | None = None) -> list[int]:
    """A PC Hamilton path of G (or G[vertices]) ending at ``v``.

    Reverse it for a path starting at ``v``.
    """
    if vertices is None:
        if not 0 <= v < g.n:
            raise PcError(f"vertex {v} out of range")
        require_mono_c3_free(g)
        return pc_path_ending_at(g.rows, v, range(g.n))
    vertices = list(vertices)
    if v not in vertices:
        raise PcError(f"vertex {v} not in the vertex set")
    from .graph_core import induced

    require_mono_c3_free(induced(g, vertices))
    return pc_path_ending_at(g.rows, v, vertices)


# ---------------------------------------------------------------- shovels


def _place(r, path: list[int], x: int) -> tuple[list[int], int]:
    """Add ``x`` to PC path ``path`` (length >= 2) keeping ``path[0]``.

    Appends when possible; otherwise inserts before the first ``path[m]``
    (m >= 1) with ``col(x, path[m]) == col(path[m], path[m-1])``. Returns the
    new path and the position ``x`` landed at.
    """
    t = len(path)
    last, prev = path[-1], path[-2]
    rx = r[x]
    if rx[last] != r[last][prev]:
        path.append(x)
        return path, t
    for m in range(1, t):
        if rx[path[m]] == r[path[m]][path[m - 1]]:
            path.insert(m, x)
            return path, m
    raise PcError("unreachable: last position always matches")


def _spanning_nice_shovel(r, verts: Sequence[int]) -> Shovel:
    verts = list(verts)
    if len(verts) < 3:
        raise PcError("a shovel needs at least three vertices")
    tri = center_edge(r, verts[0], verts[1], verts[2])
    if tri is None:
        raise NotMonoC3Free(tuple(sorted(verts[:3])))
    u1, u2, u3 = tri
    path = [u1]
    for v in verts[3:]:
        cv = r[v][u1]
        if cv != r[u1][u2] and cv != r[u1][u3]:
            # v extends the path; landing right after u1 is fine since col(u1 v) is free
            if len(path) == 1:
                path.append(v)
            else:
                path, _ = _place(r, path, v)
            continue
        if cv == r[u1][u3]:
            u2, u3 = u3, u2
        alpha = cv
        # triangle u1 u2 v has center edge u2v; try to move u3 onto the path
        if len(path) == 1:
            pos = 1
            candidate = [u1, u3]
        else:
            candidate, pos = _place(r, path, u3)
        if pos >= 2 or r[u1][u3] != alpha:
            u2, u3 = u2, v
            path = candidate
            if r[u2][u3] in (r[u1][u2], r[u1][u3]):
                raise NotMonoC3Free(tuple(sorted((u1, u2, u3))))
            continue
        if pos == 1 and len(path) > 1:
            path.pop(1)
        # every one of v, u2, u3 sees u1 in color alpha and the triangle on
        # them avoids alpha: its apex becomes the new shovel center
        tri = center_edge(r, v, u2, u3)
        if tri is None:
            raise NotMonoC3Free(tuple(sorted((v, u2, u3))))
        u1, u2, u3 = tri
        path.insert(0, u1)
    return Shovel((u1, u2, u3), tuple(path))


def spanning_nice_shovel(g, vertices: Sequence[int] | None = None) -> Shovel:
    """A nice (n-2)-shovel spanning G (or G[vertices])."""
    verts = list(range(g.n)) if vertices is None else sorted(vertices)
    if len(verts) < 3:
        raise PcError("a spanning shovel needs n >= 3")
    if vertices is None:
        require_mono_c3_free(g)
    else:
        from .graph_core import induced

        require_mono_c3_free(induced(g, verts))
    s = _spanning_nice_shovel(g.rows, verts)
    bad = s.violation(g)
    if bad or len(s.vertices) != len(verts):
        raise AssertionError(f"spanning shovel invariant broken: {bad}")
    return s


def merge_triangle_shovel(g, triangle: Sequence[int], y) -> list[int]:
    """PC path from ``triangle[0]`` through the triangle and ``y``.

    ``triangle = (u1, u2, u3)`` must have ``u2u3`` as a center edge; ``y`` is a
    nice Shovel or a collection of at most two vertices. The first edge of the
    returned path has a color from ``col(u1, {u2, u3})``.
    """
    r = g.rows
    u1, u2, u3 = triangle
    if r[u2][u3] in (r[u1][u2], r[u1][u3]):
        raise PcError("u2u3 is not a center edge of the triangle")
    allowed = (r[u1][u2], r[u1][u3])
    if isinstance(y, Shovel):
        bad = y.violation(g)
        if bad:
            raise PcError(f"shovel is not nice: {bad}")
        if set(y.vertices) & {u1, u2, u3}:
            raise PcError("triangle and shovel overlap")
        path = _merge_with_shovel(g, r, (u1, u2, u3), y)
    else:
        ys = sorted(y)
        if len(ys) > 2 or len(set(ys)) != len(ys):
            raise PcError("y must be a nice shovel or at most two distinct vertices")
        if set(ys) & {u1, u2, u3}:
            raise PcError("triangle and vertex set overlap")
        path = None
        for perm in permutations(sorted([u2, u3] + ys)):
            cand = [u1, *perm]
            if r[u1][cand[1]] in allowed and is_pc_path(r, cand):
                path = cand
                break
        if path is None:
            raise PcError("no ordering of the small merge is properly colored")
    if not (is_pc_path(r, path) and path[0] == u1 and r[path[0]][path[1]] in allowed):
        raise AssertionError("merge produced an invalid path")
    return path


def _merge_with_shovel(g, r, tri, y: Shovel) -> list[int]:
    u1, u2, u3 = tri
    v1, v2, v3 = y.triangle
    tail = list(y.path[1:])
    c1, c2 = r[u2][u3], r[v2][v3]
    for a, a2 in ((u2, u3), (u3, u2)):
        for b, b2 in ((v2, v3), (v3, v2)):
            if r[a][b] != c1 and r[a][b] != c2:
                return [u1, a2, a, b, b2, v1] + tail
    # every cross edge is colored c1 or c2, so c1 != c2 and the colors are
    # forced up to relabeling
    for p, q in ((u2, u3), (u3, u2)):
        for s, t in ((v2, v3), (v3, v2)):
            if r[p][s] == c1:
                u2, u3, v2, v3 = p, q, s, t
                break
        else:
            continue
        break
    else:
        raise NotMonoC3Free((v2, v3, u2))
    if r[u1][u2] != c2:
        return [u1, u2, v3, u3, v2, v1] + tail
    if r[v1][v3] != c1:
        return [u1, u2, v2, u3, v3, v1] + tail
    p1 = insert_vertex(g, [v3, v1] + tail, u3, 0)
    return [u1, u2, v2] + p1


# ---------------------------------------------------------------- bowties


def _color_counts(g, verts: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Submatrix on ``verts`` and per-vertex color multiplicities."""
    idx = np.asarray(verts, dtype=np.int64)
    sub = g.matrix[np.ix_(idx, idx)]
    m = len(verts)
    p = max(len(g.labels), 1)
    mask = sub >= 0
    flat = (sub + (np.arange(m, dtype=np.int64) * p)[:, None])[mask]
    counts = np.bincount(flat, minlength=m * p).reshape(m, p)
    return sub, counts


def find_nice_bowtie(g, vertices: Sequence[int] | None = None) -> Bowtie | None:
    """A nice bowtie in G (or G[vertices]), or None.

    Short bowties come from any vertex with two repeated colors. Long ones
    are searched between pairs ``u, v`` whose unique repeated colors
    ``f(u), f(v)`` both differ from ``col(uv)``. Rainbow-triangle based long
    bowties are not searched for.
    """
    verts = list(range(g.n)) if vertices is None else sorted(vertices)
    if len(verts) < 5:
        return None
    sub, counts = _color_counts(g, verts)
    rep = counts >= 2
    nrep = rep.sum(axis=1)
    multi = np.flatnonzero(nrep >= 2)
    if multi.size:
        i = int(multi[0])
        alpha, beta = (int(c) for c in np.flatnonzero(rep[i])[:2])
        wa = np.flatnonzero(sub[i] == alpha)[:2]
        wb = np.flatnonzero(sub[i] == beta)[:2]
        return Bowtie(
            "short",
            (verts[wa[0]], verts[wa[1]]),
            (verts[wb[0]], verts[wb[1]]),
            center=verts[i],
        )
    f = np.where(nrep == 1, rep.argmax(axis=1), -1)
    has = f >= 0
    cand = has[:, None] & has[None, :] & (sub != f[:, None]) & (sub != f[None, :])
    cand = np.triu(cand, 1)
    for i, j in np.argwhere(cand):
        A = [int(x) for x in np.flatnonzero(sub[i] == f[i])]
        B = [int(x) for x in np.flatnonzero(sub[j] == f[j])]
        bset = set(B)
        pick_a = ([x for x in A if x not in bset] + [x for x in A if x in bset])[:2]
        pick_b = [x for x in B if x not in pick_a][:2]
        if len(pick_a) < 2 or len(pick_b) < 2:
            continue
        return Bowtie(
            "long",
            (verts[pick_a[0]], verts[pick_a[1]], verts[int(i)]),
            (verts[int(j)], verts[pick_b[0]], verts[pick_b[1]]),
        )
    return None


def degenerate_label(g, vertices: Sequence[int]) -> dict[int, int]:
    """Partial map v -> the unique color repeated at v inside G[vertices]."""
    verts = sorted(vertices)
    if not verts:
        return {}
    _, counts = _color_counts(g, verts)
    rep = counts >= 2
    nrep = rep.sum(axis=1)
    return {verts[i]: int(rep[i].argmax()) for i in range(len(verts)) if nrep[i] == 1}


def bowtie_free_claims(g, vertices: Sequence[int]) -> str | None:
    """Recheck what a bowtie-free remainder guarantees.

    Every vertex has at most one repeated color, and ``col(uv)`` is ``f(u)``
    or ``f(v)`` whenever both are defined. Returns the first failure.
    """
    verts = sorted(vertices)
    if len(verts) < 2:
        return None
    sub, counts = _color_counts(g, verts)
    rep = counts >= 2
    nrep = rep.sum(axis=1)
    bad = np.flatnonzero(nrep >= 2)
    if bad.size:
        return f"vertex {verts[int(bad[0])]} has {int(nrep[bad[0]])} repeated colors"
    f = np.where(nrep == 1, rep.argmax(axis=1), -1)
    has = f >= 0
    off = has[:, None] & has[None, :] & (sub != f[:, None]) & (sub != f[None, :])
    off = np.triu(off, 1)
    if off.any():
        i, j = (int(x) for x in np.argwhere(off)[0])
        return f"col({verts[i]},{verts[j]}) is neither f({verts[i]}) nor f({verts[j]})"
    return None


# ---------------------------------------------------------------- octopus


def octopus_to_spider(g, o: Octopus, remainder: Iterable[int]) -> PcTree:
    """Complete a nice octopus to a spanning PC spider.

    The remainder is turned into a spanning nice shovel (or kept as a set of
    at most two vertices) and merged through the octopus triangle; the merged
    path becomes the first leg.
    """
    rem = sorted(remainder)
    bad = o.violation(g)
    if bad:
        raise PcError(f"octopus is not nice: {bad}")
    if set(rem) & set(o.vertices):
        raise PcError("remainder overlaps the octopus")
    if len(rem) + len(o.vertices) != g.n:
        raise PcError("octopus and remainder do not cover the graph")
    if len(rem) >= 3:
        y = _spanning_nice_shovel(g.rows, rem)
    else:
        y = rem
    first = merge_triangle_shovel(g, o.triangle, y)
    legs = [first] + [list(leg) for leg in o.legs]
    return PcTree.spider(o.center, legs)
