import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcspider.instances import Rng, random_mcf_tournament
from pcspider.tournament import (
    DirectedSpider,
    McfTournament,
    TournamentError,
    embed_tstar,
    extend_directed_path,
    hamilton_cycle_strong,
    hamilton_path,
    local_configurations,
    scc_order,
    tstar_bound,
    validate_mcf,
    validate_tstar,
)


def brute_sccs(d):
    reach = [{v} for v in range(d.n)]
    for v in range(d.n):
        stack = [v]
        while stack:
            a = stack.pop()
            for b in d.out[a]:
                if b not in reach[v]:
                    reach[v].add(b)
                    stack.append(b)
    return {frozenset(u for u in range(d.n) if u in reach[v] and v in reach[u]) for v in range(d.n)}


def is_directed_path(d, p):
    return all(d.arc(a, b) for a, b in zip(p, p[1:]))


def layered(strong, top, seed):
    """Random strong-ish bottom tournament dominated by a transitive top."""
    base = random_mcf_tournament(strong, 0.3, 2, seed)
    n = strong + top
    arcs = list(base.arcs())
    for i in range(strong, n):
        arcs += [(i, j) for j in range(i)]
    return McfTournament.build(n, arcs, list(base.parts) + [(i,) for i in range(strong, n)])


def test_build_validates():
    d = McfTournament.build(3, [(0, 1), (1, 2), (2, 0)])
    assert d.arc(2, 0) and not d.arc(0, 2)
    with pytest.raises(TournamentError):
        McfTournament.build(3, [(0, 1), (1, 2)])
    # pair (0,1) both pointing at 2
    with pytest.raises(TournamentError):
        McfTournament.build(3, [(0, 2), (1, 2)], [(0, 1), (2,)])
    ok, why = validate_mcf([{1}, {0}], [(0,), (1,)])
    assert not ok and "both arcs" in why


def test_local_configurations_counts():
    assert len(local_configurations((0,), (1,))) == 2
    # a pair against a single vertex: not both pair vertices into it
    assert len(local_configurations((0, 1), (2,))) == 3
    for arcs in local_configurations((0, 1), (2, 3)):
        ok, _ = validate_mcf(_out(4, arcs), [(0, 1), (2, 3)])
        assert ok


def _out(n, arcs):
    out = [set() for _ in range(n)]
    for a, b in arcs:
        out[a].add(b)
    return out


@given(st.integers(2, 25), st.floats(0, 1), st.integers(0, 10**6))
@settings(max_examples=150, deadline=None)
def test_scc_order_matches_reachability(n, dens, seed):
    d = random_mcf_tournament(n, dens, 0, seed)
    order = scc_order(d)
    assert {frozenset(c) for c in order.components} == brute_sccs(d)
    idx = order.index()
    for a, b in d.arcs():
        assert idx[a] >= idx[b]


@given(st.integers(1, 30), st.floats(0, 1), st.integers(0, 10**6))
@settings(max_examples=150, deadline=None)
def test_hamilton_path_covers(n, dens, seed):
    d = random_mcf_tournament(n, dens, 0, seed)
    strong = len(scc_order(d).components) == 1 and n >= 3
    try:
        p = hamilton_path(d)
    except TournamentError:
        # paired vertices can block every Hamilton path, never in these cases
        assert not (dens == 0 or strong)
        return
    assert sorted(p) == list(range(n)) and is_directed_path(d, p)


@given(st.integers(3, 30), st.floats(0, 1), st.integers(0, 10**6))
@settings(max_examples=200, deadline=None)
def test_hamilton_cycle_in_strong_components(n, dens, seed):
    d = random_mcf_tournament(n, dens, 0, seed)
    for comp in scc_order(d).components:
        if len(comp) < 3:
            continue
        c = hamilton_cycle_strong(d, comp)
        assert sorted(c) == sorted(comp)
        assert all(d.arc(c[i], c[(i + 1) % len(c)]) for i in range(len(c)))


def test_hamilton_cycle_exhaustive_agrees_small():
    # every strong tournament here has a Hamilton cycle; compare with brute force
    rng = Rng(5)
    for seed in range(200):
        d = random_mcf_tournament(6, 0.5, 0, seed + rng.below(1000))
        comps = scc_order(d).components
        if len(comps) != 1:
            continue
        brute = any(all(d.arc(p[i], p[(i + 1) % 6]) for i in range(6))
                    for p in itertools.permutations(range(6)) if p[0] == 0)
        assert brute
        c = hamilton_cycle_strong(d)
        assert sorted(c) == list(range(6))


def test_extend_directed_path():
    d = McfTournament.build(4, [(0, 1), (1, 2), (2, 3), (0, 2), (3, 0), (1, 3)])
    p = extend_directed_path(d, [1, 2], 0)
    assert p == [0, 1, 2]
    with pytest.raises(TournamentError):
        extend_directed_path(d, [1, 2], 1)


def test_tstar_validator():
    d = McfTournament.build(5, [(0, 1), (1, 2), (2, 3), (2, 4), (3, 0), (4, 0), (0, 2), (1, 3), (1, 4), (3, 4)])
    s = DirectedSpider(2, 3, 4, [[0, 1, 2]])
    assert validate_tstar(d, s, [2]) is None
    assert validate_tstar(d, s, [1]) is not None
    assert validate_tstar(d, DirectedSpider(2, 3, 0, [[0, 1, 2]]), [2]) is not None


@given(st.integers(0, 10**6), st.sampled_from([(3, 2), (2, 2), (5, 1), (1, 1, 1)]), st.floats(0, 1))
@settings(max_examples=100, deadline=None)
def test_embed_tstar_at_bound(seed, lengths, dens):
    k = len(lengths) + 1
    n = sum(lengths) + tstar_bound(k)
    d = random_mcf_tournament(n, dens, 2, seed)
    s = embed_tstar(d, list(lengths))
    assert validate_tstar(d, s, list(lengths)) is None


@pytest.mark.parametrize("seed", range(10))
def test_embed_tstar_sink_branches(seed):
    # long legs force the construction to use out-neighbors of the root
    d = random_mcf_tournament(100, 0.3, 2, seed)
    s = embed_tstar(d, [35, 35])
    assert validate_tstar(d, s, [35, 35]) is None
    assert any("model" in t or "A-case" in t for t in s.trace)


@pytest.mark.parametrize("top,branch", [(5, "sink reduced"), (40, "U-path")])
def test_embed_tstar_with_upper_components(top, branch):
    d = layered(70, top, 3)
    s = embed_tstar(d, [20, 10])
    assert validate_tstar(d, s, [20, 10]) is None
    assert s.trace[0].startswith(branch)


def test_embed_tstar_preconditions():
    d = McfTournament.build(3, [(0, 1), (1, 2), (2, 0)])
    with pytest.raises(TournamentError):
        embed_tstar(d, [1])
    d = random_mcf_tournament(20, 0.0, 2, 1)
    with pytest.raises(TournamentError):
        embed_tstar(d, [5, 5])
    with pytest.raises(TournamentError):
        embed_tstar(d, [1, 2])
