"""Generators of mono-C3-free colorings and of the matching tournaments."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .graph_core import GraphError, build_graph, find_monochromatic_triangle, pairs
from .tournament import McfTournament, TournamentError, local_configurations, validate_mcf

RNG_NAME = "mt19937-getrandbits/1"
MAX_RESTARTS = 20
MAX_SAMPLES = 10_000


class GeneratorError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class Rng:
    """Seeded source built only on MT19937 ``getrandbits``.

    Integer draws use rejection sampling on raw bits and the shuffle is a
    plain Fisher-Yates, so streams do not depend on library helpers that may
    change between Python versions.
    """

    name = RNG_NAME

    def __init__(self, seed: int):
        self._r = random.Random(int(seed) & 0xFFFFFFFFFFFFFFFF)

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        k = n.bit_length()
        while True:
            x = self._r.getrandbits(k)
            if x < n:
                return x

    def unit(self) -> float:
        return self._r.getrandbits(53) / (1 << 53)

    def shuffle(self, xs: list) -> None:
        for i in range(len(xs) - 1, 0, -1):
            j = self.below(i + 1)
            xs[i], xs[j] = xs[j], xs[i]

    def choice(self, xs: Sequence):
        return xs[self.below(len(xs))]


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int
    seed: int = 0
    palette: int | None = None
    params: dict = field(default_factory=dict)


def transitive_coloring(n: int):
    """col(u, v) = min(u, v): each edge takes its tail's label."""
    if n < 1:
        raise GraphError("n must be >= 1")
    return build_graph(n, [i for i, j in pairs(n)])


def degenerate_coloring(n: int, f: Callable[[int], int] | Sequence[int],
                        orientation: Callable[[int, int], int] | None = None):
    """col(uv) = f(tail(uv)); rejected if a monochromatic triangle appears.

    ``orientation(u, v)`` returns the tail of the pair; the default orients
    every pair from its smaller vertex.
    """
    fm = f if callable(f) else (lambda v, _f=list(f): _f[v])
    orient = orientation or (lambda u, v: min(u, v))
    raw = []
    for u, v in pairs(n):
        t = orient(u, v)
        if t not in (u, v):
            raise GeneratorError(f"orientation returned {t} for pair {(u, v)}")
        raw.append(fm(t))
    g = build_graph(n, raw)
    tri = find_monochromatic_triangle(g)
    if tri is not None:
        raise GeneratorError(f"coloring has a monochromatic triangle {tri}", witness=tri)
    return g


def random_acyclic_orientation(n: int, seed: int) -> Callable[[int, int], int]:
    rng = Rng(seed)
    rank = list(range(n))
    rng.shuffle(rank)
    return lambda u, v: u if rank[u] < rank[v] else v


def random_mono_c3_free(n: int, palette: int, seed: int, repair_steps: int | None = None):
    """Random sequential coloring avoiding monochromatic triangles.

    Pairs are colored in a random order; each pair draws uniformly among the
    palette colors that do not close a monochromatic triangle with already
    colored pairs. A pair with no admissible color takes a least-conflict
    color instead, and a min-conflicts repair pass (bounded by
    ``repair_steps``) then recolors edges of monochromatic triangles. If the
    repair budget runs out the whole draw restarts.
    """
    if n < 1:
        raise GraphError("n must be >= 1")
    if n >= 3 and palette < 2:
        raise GeneratorError("palette must be >= 2 for n >= 3")
    palette = max(palette, 1)
    # multicolor Ramsey numbers: R(3,3) = 6, R(3,3,3) = 17
    limit = {1: 2, 2: 5, 3: 16}.get(palette)
    if limit is not None and n > limit:
        raise GeneratorError(f"every {palette}-coloring of K_{n} has a monochromatic triangle")
    if repair_steps is None:
        repair_steps = 20 * n * n
    rng = Rng(seed)
    order = list(pairs(n))
    for _ in range(MAX_RESTARTS):
        rng.shuffle(order)
        g = _sequential_with_repair(n, palette, order, rng, repair_steps)
        if g is None:
            continue
        tri = find_monochromatic_triangle(g)
        if tri is not None:
            raise AssertionError(f"generator produced monochromatic triangle {tri}")
        return g
    raise GeneratorError(f"no coloring after {MAX_RESTARTS} restarts; try a larger palette")


def _least_conflict(nu, nv, palette, rng, avoid=-1):
    best, cands = None, []
    for c in range(palette):
        if c == avoid:
            continue
        k = (nu[c] & nv[c]).bit_count()
        if best is None or k < best:
            best, cands = k, [c]
        elif k == best:
            cands.append(c)
    return cands[rng.below(len(cands))], best


def _sequential_with_repair(n, palette, order, rng, steps):
    # nb[v][c]: bitmask of neighbors joined to v in color c
    nb = [[0] * palette for _ in range(n)]
    col = {}
    bad = []
    for u, v in order:
        nu, nv = nb[u], nb[v]
        # rejection draws first; conditioned on failing them the scan below
        # is still uniform over the free colors
        c = rng.below(palette)
        if not nu[c] & nv[c]:
            pass
        elif (free := [c for c in range(palette) if not nu[c] & nv[c]]):
            c = free[rng.below(len(free))]
        else:
            c, _ = _least_conflict(nu, nv, palette, rng)
            bad.append((u, v))
        col[(u, v)] = c
        nu[c] |= 1 << v
        nv[c] |= 1 << u
    pending = set(bad)
    bad = sorted(pending)
    for _ in range(steps):
        if not bad:
            break
        e = bad.pop(rng.below(len(bad)))
        pending.discard(e)
        u, v = e
        c = col[e]
        if not nb[u][c] & nb[v][c]:
            continue
        nb[u][c] &= ~(1 << v)
        nb[v][c] &= ~(1 << u)
        c2, _ = _least_conflict(nb[u], nb[v], palette, rng, avoid=c)
        col[e] = c2
        nb[u][c2] |= 1 << v
        nb[v][c2] |= 1 << u
        new = nb[u][c2] & nb[v][c2]
        if new:
            pending.add(e)
            bad.append(e)
        while new:
            low = new & -new
            new ^= low
            w = low.bit_length() - 1
            for f in ((min(u, w), max(u, w)), (min(v, w), max(v, w))):
                if f not in pending:
                    pending.add(f)
                    bad.append(f)
    if bad:
        return None
    return build_graph(n, [col[p] for p in pairs(n)])


def random_mcf_tournament(n: int, pair_density: float = 0.0, min_outdeg: int = 0, seed: int = 0) -> McfTournament:
    """Random tournament with paired vertices that share no out-neighbor.

    Parts are formed by walking a random vertex order and pairing the next
    two vertices with probability ``pair_density``. Between every two parts
    the arcs are drawn uniformly from the locally valid configurations; the
    pair rule only involves arcs between two parts, so the result is always
    valid. Samples below ``min_outdeg`` are rejected.
    """
    if not 0.0 <= pair_density <= 1.0:
        raise GeneratorError("pair_density must lie in [0, 1]")
    if n < 1:
        raise GeneratorError("n must be >= 1")
    if min_outdeg > (n - 1) / 2:
        raise GeneratorError(f"min out-degree {min_outdeg} impossible on {n} vertices (average <= {(n - 1) / 2})")
    rng = Rng(seed)
    cache: dict = {}
    for _ in range(MAX_SAMPLES):
        verts = list(range(n))
        rng.shuffle(verts)
        parts = []
        i = 0
        while i < n:
            if i + 1 < n and rng.unit() < pair_density:
                parts.append(tuple(sorted(verts[i:i + 2])))
                i += 2
            else:
                parts.append((verts[i],))
                i += 1
        parts.sort()
        out = [set() for _ in range(n)]
        for a in range(len(parts)):
            for b in range(a + 1, len(parts)):
                p, q = parts[a], parts[b]
                shape = (len(p), len(q))
                if shape not in cache:
                    cache[shape] = local_configurations(tuple(range(len(p))),
                                                        tuple(range(len(p), len(p) + len(q))))
                conf = cache[shape][rng.below(len(cache[shape]))]
                local = list(p) + list(q)
                for x, y in conf:
                    out[local[x]].add(local[y])
        if min(len(s) for s in out) < min_outdeg:
            continue
        t = McfTournament(n, tuple(frozenset(s) for s in out), tuple(parts))
        ok, why = validate_mcf(t.out, t.parts, n)
        if not ok:
            raise AssertionError(f"generator produced invalid tournament: {why}")
        return t
    raise GeneratorError(f"min out-degree {min_outdeg} not reached after {MAX_SAMPLES} samples")


def mcf_coloring(t: McfTournament):
    """Color each arc with its tail's part index; paired vertices get their own.

    The result is mono-C3-free, every vertex's repeated color is its part
    index, and the tournament built from that labeling is ``t`` again.
    """
    part_of = {v: i for i, p in enumerate(t.parts) for v in p}
    raw = []
    for u, v in pairs(t.n):
        if part_of[u] == part_of[v]:
            raw.append(part_of[u])
        elif v in t.out[u]:
            raw.append(part_of[u])
        else:
            raw.append(part_of[v])
    g = build_graph(t.n, raw)
    tri = find_monochromatic_triangle(g)
    if tri is not None:
        raise AssertionError(f"tournament coloring has a monochromatic triangle {tri}")
    return g


def generate(spec: GeneratorSpec):
    """Dispatch on ``spec.kind``; every output is validated."""
    kind = spec.kind
    p = spec.params
    if kind == "transitive":
        return transitive_coloring(spec.n)
    if kind == "random":
        return random_mono_c3_free(spec.n, spec.palette or 8, spec.seed)
    if kind == "degenerate":
        orient = random_acyclic_orientation(spec.n, spec.seed)
        return degenerate_coloring(spec.n, list(range(spec.n)), orient)
    if kind == "mcf":
        t = random_mcf_tournament(spec.n, p.get("pair_density", 0.3), p.get("min_outdeg", 0), spec.seed)
        return mcf_coloring(t)
    raise GeneratorError(f"unknown generator kind {kind!r}")


KINDS = ("transitive", "random", "degenerate", "mcf")

__all__ = [
    "GeneratorError", "GeneratorSpec", "KINDS", "RNG_NAME", "Rng", "TournamentError",
    "degenerate_coloring", "generate", "mcf_coloring", "random_acyclic_orientation",
    "random_mcf_tournament", "random_mono_c3_free", "transitive_coloring",
]
