"""Multipartite tournaments with parts of size at most two whose paired
vertices share no out-neighbor, and the directed spider embedding used by the
degenerate case of the spider construction.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence


class TournamentError(ValueError):
    """Precondition failure, with an optional witness."""

    def __init__(self, message: str, witness=None, step: str | None = None):
        super().__init__(message)
        self.witness = witness
        self.step = step


@dataclass(frozen=True)
class McfTournament:
    n: int
    out: tuple[frozenset, ...]
    parts: tuple[tuple[int, ...], ...]

    @classmethod
    def build(cls, n: int, arcs: Iterable[tuple[int, int]], parts: Iterable[Sequence[int]] | None = None):
        out = [set() for _ in range(n)]
        for a, b in arcs:
            out[a].add(b)
        if parts is None:
            parts = [(v,) for v in range(n)]
        parts = tuple(tuple(sorted(p)) for p in parts)
        t = cls(n, tuple(frozenset(s) for s in out), parts)
        ok, why = validate_mcf(t.out, t.parts, n)
        if not ok:
            raise TournamentError(f"not a valid tournament of this kind: {why}", witness=why)
        return t

    def arc(self, a: int, b: int) -> bool:
        return b in self.out[a]

    @property
    def partner(self) -> dict[int, int]:
        pm = {}
        for p in self.parts:
            if len(p) == 2:
                pm[p[0]], pm[p[1]] = p[1], p[0]
        return pm

    @property
    def inn(self) -> list[set]:
        ins = [set() for _ in range(self.n)]
        for a in range(self.n):
            for b in self.out[a]:
                ins[b].add(a)
        return ins

    def arcs(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.n) for b in sorted(self.out[a])]

    def outdeg(self, v: int, within=None) -> int:
        if within is None:
            return len(self.out[v])
        return len(self.out[v] & within)


def validate_mcf(out, parts, n: int | None = None) -> tuple[bool, str | None]:
    """Check the multipartite structure and the no-common-out-neighbor rule."""
    if n is None:
        n = len(out)
    out = [set(s) for s in out]
    part_of = {}
    for i, p in enumerate(parts):
        if not 1 <= len(p) <= 2:
            return False, f"part {tuple(p)} has size {len(p)}"
        for v in p:
            if not 0 <= v < n:
                return False, f"vertex {v} out of range"
            if v in part_of:
                return False, f"vertex {v} in two parts"
            part_of[v] = i
    if len(part_of) != n:
        missing = min(set(range(n)) - set(part_of))
        return False, f"vertex {missing} in no part"
    for a in range(n):
        for b in out[a]:
            if not 0 <= b < n or b == a:
                return False, f"bad arc {(a, b)}"
            if part_of[a] == part_of[b]:
                return False, f"arc {(a, b)} inside a part"
    for a in range(n):
        for b in range(a + 1, n):
            if part_of[a] == part_of[b]:
                continue
            ab, ba = b in out[a], a in out[b]
            if ab and ba:
                return False, f"both arcs between {a} and {b}"
            if not ab and not ba:
                return False, f"missing arc between {a} and {b}"
    for p in parts:
        if len(p) == 2:
            common = out[p[0]] & out[p[1]]
            if common:
                return False, f"common out-neighbor {min(common)} of pair {tuple(p)}"
    return True, None


# ---------------------------------------------------------------- SCCs


@dataclass
class SccOrder:
    """Components with all inter-component arcs pointing to lower indices.

    ``dominates[(i, j)]`` (i < j) is True when every vertex of component j
    has an arc to every vertex of component i.
    """

    components: list[list[int]]
    dominates: dict[tuple[int, int], bool] = field(default_factory=dict)

    def index(self) -> dict[int, int]:
        return {v: i for i, comp in enumerate(self.components) for v in comp}


def _tarjan(vertices: Sequence[int], out) -> list[list[int]]:
    """Iterative Tarjan; components come out sink-first."""
    vset = set(vertices)
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in sorted(vset):
        if root in index:
            continue
        work = [(root, iter(sorted(out[root] & vset)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(out[w] & vset))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


def scc_order(d: McfTournament, vertices: Iterable[int] | None = None) -> SccOrder:
    verts = list(range(d.n)) if vertices is None else sorted(vertices)
    comps = _tarjan(verts, d.out)
    where = {v: i for i, c in enumerate(comps) for v in c}
    for a in verts:
        for b in d.out[a]:
            if b in where and where[a] < where[b]:
                raise AssertionError(f"arc {(a, b)} points up the component order")
    dom = {}
    for i in range(len(comps)):
        for j in range(i + 1, len(comps)):
            dom[(i, j)] = all(b in d.out[a] for a in comps[j] for b in comps[i])
    return SccOrder(comps, dom)


# ---------------------------------------------------------------- paths and cycles


def _check_cycle(d, cyc, vertices) -> bool:
    return (
        sorted(cyc) == sorted(vertices)
        and all(d.arc(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc)))
    )


def _shortest_cycle_through(d, s: int, vset: set) -> list[int] | None:
    prev = {s: None}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        for y in sorted(d.out[x] & vset):
            if y == s:
                cyc = [x]
                while prev[cyc[-1]] is not None:
                    cyc.append(prev[cyc[-1]])
                return cyc[::-1]
            if y not in prev:
                prev[y] = x
                queue.append(y)
    return None


def _grow_cycle(d, cyc: list[int], vset: set) -> list[int] | None:
    """One extension step; None when stuck."""
    L = len(cyc)
    outside = sorted(vset - set(cyc))
    for v in outside:
        ov = d.out[v]
        for i in range(L):
            if v in d.out[cyc[i]] and cyc[(i + 1) % L] in ov:
                return cyc[: i + 1] + [v] + cyc[i + 1:]
    pos = {c: i for i, c in enumerate(cyc)}
    outset = set(outside)
    best = None
    for i in range(L):
        # BFS from cyc[i] through outside vertices only
        prev = {}
        frontier = [v for v in sorted(d.out[cyc[i]] & outset)]
        for v in frontier:
            prev[v] = None
        queue = deque((v, 1) for v in frontier)
        while queue:
            x, dep = queue.popleft()
            # exits back onto the cycle: drop the d-1 cycle vertices skipped
            for c in d.out[x]:
                j = pos.get(c)
                if j is None:
                    continue
                gap = (j - i) % L
                if gap == 0:
                    continue
                gain = dep - (gap - 1)
                if gain >= 1 and (best is None or (gain, -i, -j) > (best[0], -best[1], -best[2])):
                    ear = [x]
                    while prev[ear[-1]] is not None:
                        ear.append(prev[ear[-1]])
                    best = (gain, i, j, ear[::-1])
            for y in sorted(d.out[x] & outset):
                if y not in prev:
                    prev[y] = x
                    queue.append((y, dep + 1))
        if best is not None and best[0] >= 1:
            break
    if best is None:
        return None
    _, i, j, ear = best
    # new cycle: cyc[j], cyc[j+1], ..., cyc[i], ear
    seq = []
    t = j
    while True:
        seq.append(cyc[t])
        if t == i:
            break
        t = (t + 1) % L
    return seq + ear


def _exhaustive_cycle(d, verts: list[int]) -> list[int] | None:
    s = verts[0]
    idx = {v: i for i, v in enumerate(verts)}
    full = (1 << len(verts)) - 1
    vset = set(verts)
    dead = set()

    def dfs(path, mask):
        if mask == full:
            return path if s in d.out[path[-1]] else None
        key = (path[-1], mask)
        if key in dead:
            return None
        for y in sorted(d.out[path[-1]] & vset):
            b = 1 << idx[y]
            if not mask & b:
                path.append(y)
                r = dfs(path, mask | b)
                if r:
                    return r
                path.pop()
        dead.add(key)
        return None

    return dfs([s], 1)


def hamilton_cycle_strong(d: McfTournament, vertices: Iterable[int] | None = None) -> list[int]:
    """Directed Hamilton cycle of a strongly connected (sub)tournament.

    Grows a shortest cycle through the smallest vertex by single-vertex and
    ear insertions. If that stalls, falls back to exhaustive search for at
    most 12 vertices and raises otherwise.
    """
    verts = list(range(d.n)) if vertices is None else sorted(vertices)
    vset = set(verts)
    if len(verts) < 3:
        raise TournamentError("a Hamilton cycle needs at least 3 vertices")
    comps = _tarjan(verts, d.out)
    if len(comps) != 1:
        raise TournamentError("vertex set is not strongly connected", witness=comps)
    cyc = _shortest_cycle_through(d, verts[0], vset)
    while cyc is not None and len(cyc) < len(verts):
        cyc = _grow_cycle(d, cyc, vset)
    if cyc is None:
        if len(verts) <= 12:
            cyc = _exhaustive_cycle(d, verts)
        if cyc is None:
            raise TournamentError(
                f"cycle extension stalled on {len(verts)} vertices", step="hamilton-cycle/stalled"
            )
    if not _check_cycle(d, cyc, verts):
        raise AssertionError("hamilton cycle failed its own check")
    return cyc


def _is_tournament(d, verts) -> bool:
    pm = d.partner
    vs = set(verts)
    return not any(v in pm and pm[v] in vs for v in verts)


def _tournament_path(d, verts) -> list[int]:
    path: list[int] = []
    for v in verts:
        ov = d.out[v]
        if not path or path[0] in ov:
            path.insert(0, v)
        elif v in d.out[path[-1]]:
            path.append(v)
        else:
            for i in range(len(path) - 1):
                if v in d.out[path[i]] and path[i + 1] in ov:
                    path.insert(i + 1, v)
                    break
            else:
                raise AssertionError("tournament insertion failed")
    return path


def hamilton_path(d: McfTournament, vertices: Iterable[int] | None = None) -> list[int]:
    """Directed Hamilton path of D (or of D[vertices])."""
    verts = list(range(d.n)) if vertices is None else sorted(vertices)
    if not verts:
        return []
    if _is_tournament(d, verts):
        p = _tournament_path(d, verts)
    else:
        vset = set(verts)
        for v in verts:
            if not d.out[v] & vset:
                raise TournamentError(f"vertex {v} has no out-neighbor", witness=v)
        comps = _tarjan(verts, d.out)
        p = []
        for comp in reversed(comps):
            if len(comp) == 1:
                seg = comp
            else:
                seg = hamilton_cycle_strong(d, comp)
            if p:
                starts = [i for i, c in enumerate(seg) if c in d.out[p[-1]]]
                if not starts:
                    raise TournamentError(
                        "no arc between consecutive components", witness=(p[-1], comp),
                        step="hamilton-path/junction",
                    )
                s = starts[0]
                seg = seg[s:] + seg[:s]
            elif len(comp) > 1:
                # end on a vertex with an arc into the next component, if any
                seg = _rotate_to_exit(d, seg, comps, comp)
            p.extend(seg)
    if sorted(p) != verts or not all(d.arc(a, b) for a, b in zip(p, p[1:])):
        raise AssertionError("hamilton path failed its own check")
    return p


def _rotate_to_exit(d, seg, comps, comp):
    k = comps.index(comp)
    if k == 0:
        return seg
    nxt = set(comps[k - 1])
    L = len(seg)
    for s in range(L):
        if d.out[seg[(s - 1) % L]] & nxt:
            return seg[s:] + seg[:s]
    return seg


def extend_directed_path(d: McfTournament, p: Sequence[int], v: int) -> list[int]:
    """Add ``v`` to the directed path ``p`` keeping its final vertex.

    ``v`` goes into the first gap ``p[j-1] -> v -> p[j]``; the start of the
    path counts as a gap when ``v`` dominates ``p[0]``.
    """
    p = list(p)
    if v in p:
        raise TournamentError(f"vertex {v} already on the path")
    ov = d.out[v]
    for j, x in enumerate(p):
        if x in ov and (j == 0 or v in d.out[p[j - 1]]):
            return p[:j] + [v] + p[j:]
    raise TournamentError(f"no gap of the path accepts vertex {v}", witness=v)


# ---------------------------------------------------------------- T*


@dataclass
class DirectedSpider:
    """Root with out-arcs to x and y and in-legs (each listed start -> root)."""

    root: int
    x: int
    y: int
    legs: list[list[int]]
    trace: list[str] = field(default_factory=list)

    @property
    def lengths(self) -> list[int]:
        return [len(leg) - 1 for leg in self.legs]

    @property
    def vertices(self) -> list[int]:
        vs = [self.root, self.x, self.y]
        for leg in self.legs:
            vs.extend(leg[:-1])
        return vs


def validate_tstar(d: McfTournament, s: DirectedSpider, lengths: Sequence[int]) -> str | None:
    vs = s.vertices
    if len(set(vs)) != len(vs):
        return "spider vertices are not distinct"
    if len(vs) != 3 + sum(lengths):
        return "wrong vertex count"
    if not (d.arc(s.root, s.x) and d.arc(s.root, s.y)):
        return "root out-arcs missing"
    if s.lengths != list(lengths):
        return f"leg lengths {s.lengths} != {list(lengths)}"
    for leg in s.legs:
        if leg[-1] != s.root:
            return "leg does not end at the root"
        for a, b in zip(leg, leg[1:]):
            if not d.arc(a, b):
                return f"missing arc {(a, b)}"
    return None


def tstar_bound(k: int) -> int:
    return 2 * k * k + 2 * k + 6


def embed_tstar(d: McfTournament, lengths: Sequence[int], check_size: bool = True) -> DirectedSpider:
    """Directed spider with in-legs of the given lengths (longest first).

    Uses the non-sink components first when they are large enough,
    otherwise builds a spider with shortened legs in the sink component
    around a minimum out-degree vertex and extends it.
    """
    lengths = [int(x) for x in lengths]
    if not lengths or any(x < 1 for x in lengths) or lengths != sorted(lengths, reverse=True):
        raise TournamentError("lengths must be positive and non-increasing")
    k = len(lengths) + 1
    for v in range(d.n):
        if len(d.out[v]) < 2:
            raise TournamentError(f"vertex {v} has out-degree {len(d.out[v])} < 2", witness=v)
    total = sum(lengths)
    if check_size and d.n < total + tstar_bound(k):
        raise TournamentError(f"n={d.n} below {total} + {tstar_bound(k)}", witness=d.n)

    trace: list[str] = []
    order = scc_order(d)
    d0 = order.components[0]
    d0set = set(d0)
    U = [v for v in range(d.n) if v not in d0set]

    if len(U) >= total:
        trace.append("U-path")
        # the non-sink part is a tournament dominating the sink component
        P = hamilton_path(d, U)
        legs, pos = [], 0
        v0 = d0[0]
        for li in lengths:
            seg = P[pos:pos + li]
            pos += li
            legs.append(seg + [v0])
        x, y = sorted(d.out[v0])[:2]
        s = DirectedSpider(v0, x, y, legs, trace)
    else:
        reduced = _shrink(lengths, len(U))
        trace.append(f"sink reduced={reduced}")
        inner_idx = [i for i, l in enumerate(reduced) if l >= 1]
        inner = _tstar_in_sink(d, d0, [reduced[i] for i in inner_idx], trace)
        legs = [[inner.root] for _ in lengths]
        for pos, i in enumerate(inner_idx):
            legs[i] = inner.legs[pos]
        # prepend U parts: every vertex of U dominates the sink component
        start = 0
        for i, li in enumerate(lengths):
            r = li - reduced[i]
            if r:
                part = U[start:start + r]
                start += r
                legs[i] = hamilton_path(d, part) + legs[i]
        s = DirectedSpider(inner.root, inner.x, inner.y, legs, trace)
    bad = validate_tstar(d, s, lengths)
    if bad:
        raise AssertionError(f"directed spider failed validation: {bad}")
    return s


def _shrink(lengths: list[int], u: int) -> list[int]:
    """Reduce the longest legs first (ties by index) by ``u`` in total."""
    red = list(lengths)
    for _ in range(u):
        i = max(range(len(red)), key=lambda t: (red[t], -t))
        red[i] -= 1
    return red


def _tstar_in_sink(d, d0, lengths, trace) -> DirectedSpider:
    """T* with the given (positive) leg lengths inside the sink component."""
    d0set = set(d0)
    m = len(lengths)
    k = m + 1
    v = min(d0, key=lambda t: (len(d.out[t] & d0set), t))
    A = sorted(d.out[v] & d0set)
    B = sorted(u for u in d0 if v in d.out[u])
    total = sum(lengths)
    if m == 0:
        trace.append("sink/no-legs")
        return DirectedSpider(v, A[0], A[1], [], trace)
    if len(B) >= total:
        trace.append("sink/B-path")
        P = [v]
        for b in B:
            P = extend_directed_path(d, P, b)
        body = P[:-1]
        legs, pos = [], 0
        for li in lengths:
            legs.append(body[pos:pos + li] + [v])
            pos += li
        return DirectedSpider(v, A[0], A[1], legs, trace)

    pm = d.partner
    pairs_in_a = sorted({tuple(sorted((a, pm[a]))) for a in A if a in pm and pm[a] in set(A)})
    A1 = list(A)
    if len(pairs_in_a) == 1:
        A1.remove(pairs_in_a[0][0])
        trace.append(f"sink/drop {pairs_in_a[0][0]}")
    Q = _tarjan(A1, d.out)
    caps = [max(li - 1, 1) for li in lengths]
    acc = 0
    j = 0
    for j in range(len(Q)):
        acc += len(Q[j])
        if acc >= k - 1:
            break
    rest = sum(len(q) for q in Q[j + 1:])
    Bset = set(B)

    def outB(z):
        return len(d.out[z] & Bset)

    if acc >= k - 1 and rest >= k - 1:
        trace.append("sink/A-case1")
        low = [x for q in Q[: j + 1] for x in q]
        P = hamilton_path(d, low)
        W = [x for q in Q[j + 1:] for x in q]
        sizes = _fill(min(len(P), sum(caps), len(A) - 2), caps)
        segs, pos = [], 0
        for sz in sizes:
            segs.append(P[pos:pos + sz])
            pos += sz
        for seg in segs:
            if outB(seg[-1]) < k - 1:
                raise TournamentError("segment end with too few out-neighbors in B",
                                      step="tstar/sink/A-case1/outB")
    else:
        trace.append("sink/A-case2")
        big = max(range(len(Q)), key=lambda t: (len(Q[t]), -t))
        if len(Q[big]) < 3:
            raise TournamentError("no large strong component in A", step="tstar/sink/A-case2/small")
        C = hamilton_cycle_strong(d, Q[big])
        h = len(C)
        if h < m:
            raise TournamentError("cycle shorter than the number of legs", step="tstar/sink/A-case2/short")
        # two vertices of A stay free for the root's out-arcs
        hs = _fill(min(h, sum(caps), len(A) - 2), caps)
        W = [x for q in Q[big + 1:] for x in q]
        segs = None
        for s in range(h):
            ends, cand, pos = [], [], s
            for hi in hs:
                seg = [C[(pos + t) % h] for t in range(hi)]
                pos += hi
                cand.append(seg)
                ends.append(seg[-1])
            if all(outB(e) >= k - 1 for e in ends):
                segs = cand
                trace.append(f"model rotation {s}")
                break
        if segs is None:
            raise TournamentError("no admissible model on the cycle", step="tstar/sink/A-case2/no-model")

    used = {x for seg in segs for x in seg}
    legs = []
    taken: set[int] = set()
    for seg in segs:
        b = next((x for x in sorted(d.out[seg[-1]] & Bset) if x not in taken), None)
        if b is None:
            raise TournamentError("matching into B failed", step="tstar/sink/merge/matching")
        taken.add(b)
        legs.append(seg + [b, v])
    # reserve the root's two out-arcs before padding the legs
    spare = [a for a in A if a not in used]
    if len(spare) < 2:
        raise TournamentError("no free out-neighbors of the root", step="tstar/sink/merge/root")
    x, y = spare[0], spare[1]
    Wset = set(W)
    pool = ([z for z in B if z not in taken] + [z for z in W if z not in used and z not in (x, y)]
            + [z for z in spare[2:] if z not in Wset])
    targets = [max(li, 2) for li in lengths]
    for i, leg in enumerate(legs):
        while len(leg) - 1 < targets[i]:
            for t, z in enumerate(pool):
                try:
                    leg = extend_directed_path(d, leg, z)
                except TournamentError:
                    continue
                del pool[t]
                break
            else:
                raise TournamentError("ran out of vertices extending legs", step="tstar/sink/merge/pool")
        legs[i] = leg
    # trim q = max(l, 2) back to l from the start of each leg
    legs = [leg[len(leg) - 1 - li:] for leg, li in zip(legs, lengths)]
    return DirectedSpider(v, x, y, legs, trace)


def _fill(total: int, caps: Sequence[int]) -> list[int]:
    """Positive sizes bounded by ``caps`` summing to ``total``."""
    sizes = [1] * len(caps)
    left = total - len(caps)
    if left < 0:
        raise TournamentError("too few vertices for one per leg")
    for i, c in enumerate(caps):
        add = min(c - 1, left)
        sizes[i] += add
        left -= add
    if left:
        raise TournamentError("sizes exceed caps")
    return sizes


# ---------------------------------------------------------------- local configurations


def local_configurations(p: Sequence[int], q: Sequence[int]) -> list[list[tuple[int, int]]]:
    """All arc sets between parts ``p`` and ``q`` obeying the pair rule locally."""
    pairs = [(a, b) for a in p for b in q]
    out = []
    for bits in product((0, 1), repeat=len(pairs)):
        arcs = [(a, b) if bit else (b, a) for (a, b), bit in zip(pairs, bits)]
        # both members of a pair pointing at the same vertex is forbidden
        heads = [(b, a in p) for a, b in arcs]
        if len(p) == 2 and any(heads.count((z, True)) > 1 for z in q):
            continue
        if len(q) == 2 and any(heads.count((z, False)) > 1 for z in p):
            continue
        out.append(arcs)
    return out
