"""Exact search for the largest K_N coloring with no rainbow k-star and no
monochromatic triangle.

Colorings are enumerated as restricted growth strings over the pairs
``(0,1), (0,2), ..., (N-2,N-1)``: a pair takes an existing color or the next
unused one, so each set partition of the edges is visited once.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

from .graph_core import EdgeColoredGraph, build_graph, find_monochromatic_triangle, pairs


@dataclass
class RamseyResult:
    k: int
    lower: int
    upper: int
    witness: EdgeColoredGraph | None
    exhausted: bool
    stats: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.exhausted and self.lower == self.upper

    @property
    def value(self) -> int | None:
        return self.lower if self.exact else None

    def describe(self) -> str:
        if self.exact:
            return f"g(S_{self.k}, C_3) = {self.lower}"
        return f"{self.lower} <= g(S_{self.k}, C_3) <= {self.upper}"


def find_rainbow_star(g, k: int) -> tuple[int, list[int]] | None:
    """Center and k leaves of a rainbow k-star, smallest center first."""
    if k < 1:
        raise ValueError("k must be >= 1")
    rows = g.rows
    for v in range(g.n):
        leaves: dict[int, int] = {}
        for u in range(g.n):
            if u != v and rows[v][u] not in leaves:
                leaves[rows[v][u]] = u
                if len(leaves) == k:
                    return v, sorted(leaves.values())
    return None


def star_bound(k: int) -> int:
    """(k+1)!, the proven strict upper bound."""
    return math.factorial(k + 1)


def check_bound(k: int, result) -> bool:
    value = result if isinstance(result, int) else result.value
    if value is None:
        raise ValueError("check_bound needs an exact result")
    return value < star_bound(k)


# ---------------------------------------------------------------- search


class _Search:
    """Depth-first search for one N; state is updated in place."""

    def __init__(self, N: int, k: int):
        self.N = N
        self.k = k
        self.order = list(pairs(N))
        self.col = [[-1] * N for _ in range(N)]
        # per vertex: color -> multiplicity
        self.seen = [dict() for _ in range(N)]
        self.nodes = 0
        self.deadline = None
        self.node_budget = None

    def _ok(self, i: int, j: int, c: int) -> bool:
        cap = self.k - 1
        si, sj = self.seen[i], self.seen[j]
        if c not in si and len(si) >= cap:
            return False
        if c not in sj and len(sj) >= cap:
            return False
        col = self.col
        for l in range(i):
            if col[l][i] == c and col[l][j] == c:
                return False
        return True

    def _assign(self, i, j, c):
        self.col[i][j] = self.col[j][i] = c
        for v in (i, j):
            s = self.seen[v]
            s[c] = s.get(c, 0) + 1

    def _unassign(self, i, j, c):
        self.col[i][j] = self.col[j][i] = -1
        for v in (i, j):
            s = self.seen[v]
            s[c] -= 1
            if not s[c]:
                del s[c]

    def run(self, prefix=(), used=0) -> list[int] | None:
        """First (lexicographically smallest) valid coloring extending prefix."""
        for (i, j), c in zip(self.order, prefix):
            if not self._ok(i, j, c):
                return None
            self._assign(i, j, c)
        seq = list(prefix)
        return self._dfs(len(prefix), used, seq)

    def _dfs(self, depth, used, seq):
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise TimeoutError
        if self.deadline is not None and (self.nodes & 0x3FFF) == 0 and time.monotonic() > self.deadline:
            raise TimeoutError
        if depth == len(self.order):
            return list(seq)
        i, j = self.order[depth]
        for c in range(used + 1):
            if self._ok(i, j, c):
                self._assign(i, j, c)
                seq.append(c)
                r = self._dfs(depth + 1, max(used, c + 1), seq)
                seq.pop()
                self._unassign(i, j, c)
                if r is not None:
                    return r
        return None


def _prefixes(N: int, k: int, depth: int) -> list[tuple[int, ...]]:
    """Canonical partial colorings of the first ``depth`` pairs, in search order."""
    s = _Search(N, k)
    out = []
    order = s.order[:depth]

    def rec(d, used, seq):
        if d == len(order):
            out.append(tuple(seq))
            return
        i, j = order[d]
        for c in range(used + 1):
            if s._ok(i, j, c):
                s._assign(i, j, c)
                seq.append(c)
                rec(d + 1, max(used, c + 1), seq)
                seq.pop()
                s._unassign(i, j, c)

    rec(0, 0, [])
    return out


def _run_prefix(args):
    N, k, prefix, deadline, node_budget = args
    s = _Search(N, k)
    s.deadline = deadline
    s.node_budget = node_budget
    try:
        r = s.run(prefix, max(prefix, default=-1) + 1)
    except TimeoutError:
        return ("timeout", None, s.nodes)
    return ("done", r, s.nodes)


def search_coloring(N: int, k: int, deadline=None, node_budget=None, workers: int = 1, split_depth: int = 6):
    """Smallest canonical valid coloring of K_N (flat pair list) or None.

    Returns ``(coloring, nodes)``; raises TimeoutError when the budget runs out.
    """
    if N <= 1:
        return [], 1
    if workers <= 1:
        s = _Search(N, k)
        s.deadline = deadline
        s.node_budget = node_budget
        r = s.run()
        return r, s.nodes
    depth = min(split_depth, N * (N - 1) // 2)
    prefs = _prefixes(N, k, depth)
    nodes = 0
    with ProcessPoolExecutor(max_workers=workers) as ex:
        results = list(ex.map(_run_prefix, [(N, k, p, deadline, node_budget) for p in prefs]))
    # results are in prefix order, which is the single-threaded search order
    for status, r, cnt in results:
        nodes += cnt
        if status == "timeout":
            raise TimeoutError
        if r is not None:
            return r, nodes
    return None, nodes


def compute_g(k: int, n_cap: int = 64, budget: float | None = None, node_budget: int | None = None,
              workers: int = 1) -> RamseyResult:
    """Largest N <= n_cap with a valid coloring, with a refutation of N+1.

    ``budget`` is wall-clock seconds, ``node_budget`` a search-node cap; when
    either runs out a bracket is returned instead of an exact value.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    t0 = time.monotonic()
    deadline = None if budget is None else t0 + budget
    upper_bound = star_bound(k) - 1
    lower, witness = 0, None
    nodes = 0
    per_n = []
    N = 1
    while N <= min(n_cap, upper_bound + 1):
        try:
            r, cnt = search_coloring(N, k, deadline, node_budget, workers)
        except TimeoutError:
            per_n.append((N, "timeout"))
            return RamseyResult(k, lower, upper_bound, witness, False,
                                {"nodes": nodes, "seconds": time.monotonic() - t0, "per_n": per_n})
        nodes += cnt
        if r is None:
            per_n.append((N, "refuted"))
            return RamseyResult(k, lower, lower, witness, True,
                                {"nodes": nodes, "seconds": time.monotonic() - t0, "per_n": per_n})
        per_n.append((N, "found"))
        lower = N
        witness = build_graph(N, r) if N > 1 else build_graph(1, [])
        N += 1
    # cap reached without refutation
    return RamseyResult(k, lower, upper_bound, witness, False,
                        {"nodes": nodes, "seconds": time.monotonic() - t0, "per_n": per_n})


def validate_witness(g, k: int) -> str | None:
    tri = find_monochromatic_triangle(g)
    if tri is not None:
        return f"monochromatic triangle {tri}"
    star = find_rainbow_star(g, k)
    if star is not None:
        return f"rainbow {k}-star at {star[0]}"
    return None


# ---------------------------------------------------------------- enumeration


def set_partitions(m: int) -> Iterator[list[int]]:
    """All restricted growth strings of length m (set partitions of m items)."""
    seq: list[int] = []

    def rec(used):
        if len(seq) == m:
            yield list(seq)
            return
        for c in range(used + 1):
            seq.append(c)
            yield from rec(max(used, c + 1))
            seq.pop()

    yield from rec(0)


def canonical_colorings(n: int, mono_free: bool = False) -> Iterator[list[int]]:
    """Every coloring of K_n up to color renaming, as flat pair lists.

    With ``mono_free`` partial colorings that close a monochromatic triangle
    are pruned, yielding exactly the mono-C3-free ones.
    """
    if not mono_free:
        yield from set_partitions(n * (n - 1) // 2)
        return
    order = list(pairs(n))
    col = [[-1] * n for _ in range(n)]
    seq: list[int] = []

    def rec(d, used):
        if d == len(order):
            yield list(seq)
            return
        i, j = order[d]
        for c in range(used + 1):
            if any(col[l][i] == c and col[l][j] == c for l in range(i)):
                continue
            col[i][j] = col[j][i] = c
            seq.append(c)
            yield from rec(d + 1, max(used, c + 1))
            seq.pop()
            col[i][j] = col[j][i] = -1

    yield from rec(0, 0)
