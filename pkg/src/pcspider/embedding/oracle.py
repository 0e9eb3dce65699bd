"""Exhaustive spider search and a certificate checker that shares no code
with the constructive pipeline."""
from __future__ import annotations

from ..trees import PcTree, SpiderSpec

ORACLE_LIMIT = 9


class OracleLimitError(ValueError):
    pass


def check_spider_certificate(g, center: int, legs, leg_lengths) -> str | None:
    """None when ``legs`` form a spanning PC spider with the given lengths.

    Works on raw color lookups only: every vertex appears once, each leg is
    a path from ``center``, and the colors at every vertex are distinct.
    """
    n = g.n
    seen = {center}
    at: dict[int, list[int]] = {v: [] for v in range(n)}
    for leg in legs:
        if not leg or leg[0] != center:
            return "leg does not start at the center"
        for a, b in zip(leg, leg[1:]):
            if b in seen:
                return f"vertex {b} used twice"
            seen.add(b)
            c = g.color(a, b)
            at[a].append(c)
            at[b].append(c)
    if len(seen) != n:
        return f"spider covers {len(seen)} of {n} vertices"
    for v, cs in at.items():
        if len(cs) != len(set(cs)):
            return f"two edges of one color at vertex {v}"
    got = sorted((len(leg) - 1 for leg in legs), reverse=True)
    want = sorted(leg_lengths, reverse=True)
    if got != want:
        return f"leg lengths {got} != {want}"
    return None


def brute_force_pc_spider(g, spec, limit: int = ORACLE_LIMIT) -> PcTree | None:
    """Lexicographically smallest spanning PC spider of the given shape.

    Centers are tried in increasing order and legs are filled longest first
    with vertices in increasing order; among legs of equal length the first
    vertices increase, which removes only relabelings of the same tree.
    """
    if not isinstance(spec, SpiderSpec):
        spec = SpiderSpec.of(spec)
    n = g.n
    if n > limit:
        raise OracleLimitError(f"n={n} above oracle limit {limit}")
    if spec.size != n:
        raise ValueError(f"leg lengths need n-1 = {n - 1} edges")
    lengths = list(spec.leg_lengths)
    rows = g.rows
    for c in range(n):
        legs: list[list[int]] = []
        used = [False] * n
        used[c] = True
        center_cols: set[int] = set()

        def grow(i: int) -> bool:
            if i == len(lengths):
                return True
            leg = [c]
            floor = legs[-1][1] if legs and len(legs[-1]) - 1 == lengths[i] else -1

            def step(prev_col: int) -> bool:
                if len(leg) - 1 == lengths[i]:
                    legs.append(list(leg))
                    if grow(i + 1):
                        return True
                    legs.pop()
                    return False
                last = leg[-1]
                for w in range(n):
                    if used[w]:
                        continue
                    col = rows[last][w]
                    if len(leg) == 1:
                        if w <= floor or col in center_cols:
                            continue
                    elif col == prev_col:
                        continue
                    used[w] = True
                    leg.append(w)
                    if len(leg) == 2:
                        center_cols.add(col)
                    ok = step(col)
                    if len(leg) == 2:
                        center_cols.discard(col)
                    leg.pop()
                    used[w] = False
                    if ok:
                        return True
                return False

            return step(-1)

        if grow(0):
            why = check_spider_certificate(g, c, legs, lengths)
            if why:
                raise AssertionError(f"oracle produced a bad spider: {why}")
            return PcTree.spider(c, legs)
    return None
