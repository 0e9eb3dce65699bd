"""Acceptance criteria, one test per criterion.

Each test appends a pass/fail line to ``conftest.ACCEPTANCE``; the lines are
printed in the terminal summary. Independent checks live in this file or in
conftest and do not call the code under test.
"""
import hashlib
import itertools
import math
import os
import random
import subprocess
import sys
import time

import pytest

from conftest import ACCEPTANCE, brute_mono_triangle, indep_pc_edges, indep_pc_path
from pcspider import formats
from pcspider.embedding import (
    EmbeddingError,
    brute_force_pc_spider,
    check_spider_certificate,
    embed_pc_spider,
    embed_pc_subdivision,
    spider_threshold,
)
from pcspider.graph_core import build_graph, pairs
from pcspider.instances import GeneratorSpec, Rng, generate, random_mcf_tournament, random_mono_c3_free
from pcspider.pc_structures import insert_vertex, pc_hamilton_path_from, spanning_nice_shovel, validate_pc_tree
from pcspider.ramsey import canonical_colorings, check_bound, compute_g, set_partitions
from pcspider.tournament import embed_tstar, hamilton_cycle_strong, validate_tstar
from pcspider.trees import SpiderSpec, TreePattern, verify_shape

G_GOLDEN = {1: 1, 2: 2, 3: 5}


def record(num, ok, detail):
    ACCEPTANCE.append(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def leg_specs(n, k):
    """Every multiset of k positive leg lengths summing to n-1, longest first."""
    out = []

    def rec(rest, parts, cap):
        if len(parts) == k:
            if rest == 0:
                out.append(list(parts))
            return
        for x in range(min(cap, rest - (k - len(parts) - 1)), 0, -1):
            rec(rest - x, parts + [x], x)

    rec(n - 1, [], n - 1)
    return out


def random_legs(n, k, rng):
    cuts = sorted(rng.randrange(n - k) for _ in range(k - 1))
    return [b - a + 1 for a, b in zip([0] + cuts, cuts + [n - 1 - k])]


def indep_rainbow_star(g, k):
    for v in range(g.n):
        if len({g.color(v, u) for u in range(g.n) if u != v}) >= k:
            return True
    return False


def indep_spider_ok(g, tree, lengths):
    if len(tree) != g.n or not indep_pc_edges(g, tree.edges):
        return False
    if check_spider_certificate(g, tree.root, tree.legs, lengths) is not None:
        return False
    return verify_shape(tree, SpiderSpec.of(lengths))[0] and validate_pc_tree(g, tree.edges)[0]


def is_strong(t):
    def reach(adj):
        seen, stack = {0}, [0]
        while stack:
            a = stack.pop()
            for b in adj[a]:
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        return len(seen) == t.n

    inn = [[a for a in range(t.n) if b in t.out[a]] for b in range(t.n)]
    return reach([sorted(s) for s in t.out]) and reach(inn)


# ---------------------------------------------------------------- 1


def test_criterion_1_exhaustive_small_colorings():
    t0 = time.perf_counter()
    survivors, failures = {}, []
    for n in (3, 4, 5):
        count = 0
        for cols in set_partitions(n * (n - 1) // 2):
            g = build_graph(n, cols)
            if brute_mono_triangle(g) is not None:
                continue
            count += 1
            for v in range(n):
                p = pc_hamilton_path_from(g, v)
                if p[-1] != v or sorted(p) != list(range(n)) or not indep_pc_path(g, p):
                    failures.append(("path", n, cols, v))
            s = spanning_nice_shovel(g)
            u1, u2, u3 = s.triangle
            path = list(s.path)
            ok = (path[0] == u1 and sorted(path + [u2, u3]) == list(range(n)) and indep_pc_path(g, path)
                  and g.color(u2, u3) not in (g.color(u1, u2), g.color(u1, u3))
                  and (len(path) < 2 or g.color(path[0], path[1]) not in (g.color(u1, u2), g.color(u1, u3))))
            if not ok:
                failures.append(("shovel", n, cols))
        survivors[n] = count
        # the pruned canonical enumeration must agree with filter-after-enumerate
        if sum(1 for _ in canonical_colorings(n, mono_free=True)) != count:
            failures.append(("count", n))
    dt = time.perf_counter() - t0
    ok = not failures and dt < 120
    record(1, ok, f"survivors {survivors}, failures {len(failures)}, {dt:.1f}s (limit 120s)")


# ---------------------------------------------------------------- 2


def _random_pc_path(g, rnd):
    n = g.n
    start = rnd.randrange(n)
    path, prev = [start], None
    target = rnd.randint(2, n - 1)
    while len(path) < target:
        last = path[-1]
        cand = [w for w in range(n) if w not in path and g.color(last, w) != prev]
        if not cand:
            break
        w = rnd.choice(cand)
        prev = g.color(last, w)
        path.append(w)
    return path


def test_criterion_2_insertion_triples():
    rnd = random.Random(2024)
    triples = []
    seed = 0
    while len(triples) < 10_000:
        seed += 1
        n = rnd.randint(3, 40)
        palette = next(p for p, cap in ((2, 5), (3, 12), (4, 22), (5, 45)) if n <= cap)
        g = random_mono_c3_free(n, palette + rnd.randint(0, 1), seed)
        for _ in range(8):
            path = _random_pc_path(g, rnd)
            if len(path) < 2:
                continue
            options = [(v, i) for v in range(n) if v not in path for i in range(len(path) - 1)
                       if g.color(v, path[i]) == g.color(path[i], path[i + 1])]
            for v, i in rnd.sample(options, min(len(options), 10)):
                triples.append((g, path, v, i))
    triples = triples[:10_000]
    bad = 0
    t0 = time.perf_counter()
    outs = [insert_vertex(g, path, v, i) for g, path, v, i in triples]
    dt = time.perf_counter() - t0
    for (g, path, v, i), out in zip(triples, outs):
        p = out.index(v)
        j = p - 1
        later = [jj for jj in range(j + 1, len(path) - 1) if g.color(v, path[jj]) == g.color(path[jj], path[jj + 1])]
        if not (indep_pc_path(g, out) and out[0] == path[0] and out[-1] == path[-1]
                and out[:p] + out[p + 1:] == path and j >= i
                and g.color(v, out[j]) == g.color(out[j], out[p + 1]) and not later):
            bad += 1
    ok = bad == 0 and dt < 10
    record(2, ok, f"{len(triples)} triples over {seed} graphs, failures {bad}, {dt:.2f}s (limit 10s)")


# ---------------------------------------------------------------- 3


def test_criterion_3_ramsey_anchors():
    t0 = time.perf_counter()
    got, problems = {}, []
    for k in (1, 2, 3):
        res = compute_g(k, budget=600)
        got[k] = res.value
        if not res.exact or res.value != G_GOLDEN[k]:
            problems.append(f"k={k}: {res.describe()}")
            continue
        w = res.witness
        if w.n != res.value or brute_mono_triangle(w) is not None or indep_rainbow_star(w, k):
            problems.append(f"k={k}: witness invalid")
        if not check_bound(k, res) or res.value >= math.factorial(k + 1):
            problems.append(f"k={k}: bound check")
    dt = time.perf_counter() - t0
    ok = not problems and dt < 600
    record(3, ok, f"g = {got} (golden {G_GOLDEN}), {dt:.1f}s (limit 600s) {'; '.join(problems)}")


# ---------------------------------------------------------------- 4


def test_criterion_4_spiders_at_threshold_scale():
    k, n = 3, 400
    assert n >= spider_threshold(k) == 6 * k * G_GOLDEN[3] + 2 * k**3 + 2 * k**2 + 8 * k
    rnd = random.Random(4)
    t_gen = time.perf_counter()
    graphs = [("random", s, random_mono_c3_free(n, 12 + s % 21, s)) for s in range(100)]
    # transitive colorings under random vertex orders
    graphs += [("transitive", s, generate(GeneratorSpec("degenerate", n, s))) for s in range(10)]
    t_gen = time.perf_counter() - t_gen
    runs = fails = 0
    branches = {}
    t_emb = 0.0
    for kind, s, g in graphs:
        for _ in range(5):
            legs = random_legs(n, k, rnd)
            t0 = time.perf_counter()
            try:
                tree = embed_pc_spider(g, legs)
                cert = formats.load_certificate(formats.serialize_certificate(g, tree))
                good = (indep_spider_ok(g, tree, legs)
                        and formats.verify_certificate(g, cert, SpiderSpec.of(legs)) is None)
            except EmbeddingError:
                good = False
            t_emb += time.perf_counter() - t0
            runs += 1
            fails += not good
            if good:
                branches[tree.meta.get("branch")] = branches.get(tree.meta.get("branch"), 0) + 1
    ok = fails == 0 and t_emb < 60
    record(4, ok, f"n={n} (threshold {spider_threshold(k)}), {runs} spiders, failures {fails}, "
                  f"branches {dict(sorted(branches.items()))}, embed+verify {t_emb:.1f}s (limit 60s), "
                  f"instance generation {t_gen:.1f}s")


# ---------------------------------------------------------------- 5


def test_criterion_5_subdivisions():
    star = TreePattern.star(3)
    edge = TreePattern.edge()
    assert math.factorial(3 + 2) == 120
    graphs = [random_mono_c3_free(120 + s % 31, 7 + s % 10, 500 + s) for s in range(100)]
    fails = 0
    t0 = time.perf_counter()
    for g in graphs:
        try:
            t = embed_pc_subdivision(g, star)
            good = (len(t) == g.n and indep_pc_edges(g, t.edges) and verify_shape(t, star)[0]
                    and formats.verify_certificate(g, formats.load_certificate(
                        formats.serialize_certificate(g, t)), star) is None)
            e = embed_pc_subdivision(g, edge)
            path = e.edge_paths[0]
            # the reference path ends at the chosen vertex
            ref = pc_hamilton_path_from(g, path[0])
            good = good and sorted(path) == sorted(ref) == list(range(g.n))
            good = good and indep_pc_path(g, path) and indep_pc_path(g, ref) and ref[-1] == path[0]
        except EmbeddingError:
            good = False
        fails += not good
    dt = time.perf_counter() - t0
    ok = fails == 0 and dt < 30
    record(5, ok, f"star:3 and edge on {len(graphs)} instances, n=120..150, failures {fails}, {dt:.1f}s (limit 30s)")


# ---------------------------------------------------------------- 6


def _specs_k3(n):
    return leg_specs(n, 3) if n >= 4 else []


def _agree(g, stats):
    for legs in _specs_k3(g.n):
        stats["checks"] += 1
        oracle = brute_force_pc_spider(g, legs)
        try:
            tree = embed_pc_spider(g, legs)
        except EmbeddingError:
            continue
        stats["embedded"] += 1
        if oracle is None or check_spider_certificate(g, tree.root, tree.legs, legs) is not None:
            stats["bad"] += 1


def _canonical(cols):
    relabel = {}
    return [relabel.setdefault(c, len(relabel)) for c in cols]


def test_criterion_6_oracle_agreement():
    stats = {"checks": 0, "embedded": 0, "bad": 0}
    exhaustive = {}
    for n in (4, 5):
        c = 0
        for cols in canonical_colorings(n, mono_free=True):
            _agree(build_graph(n, cols), stats)
            c += 1
        exhaustive[n] = c
    rnd = random.Random(6)
    sampled = {6: set(), 7: set()}
    for n, want in ((6, 1500), (7, 600)):
        while len(sampled[n]) < want:
            cols = _canonical([rnd.randrange(rnd.randint(2, 6)) for _ in pairs(n)])
            g = build_graph(n, cols)
            if tuple(cols) in sampled[n] or brute_mono_triangle(g) is not None:
                continue
            sampled[n].add(tuple(cols))
            _agree(g, stats)
    ok = stats["bad"] == 0
    record(6, ok, f"scope: exhaustive n=4,5 {exhaustive}, sampled n=6,7 "
                  f"{ {n: len(s) for n, s in sampled.items()} }; {stats['checks']} (coloring, spec) pairs, "
                  f"{stats['embedded']} embedder certificates, disagreements {stats['bad']}")


@pytest.mark.xfail(strict=True, reason="exhaustive enumeration at n = 6, 7 does not finish at desk scale")
def test_criterion_6_full_scope():
    budget = 30.0
    stats = {"checks": 0, "embedded": 0, "bad": 0}
    t0 = time.perf_counter()
    done = 0
    finished = True
    for n in (6, 7):
        for cols in canonical_colorings(n, mono_free=True):
            _agree(build_graph(n, cols), stats)
            done += 1
            if time.perf_counter() - t0 > budget:
                finished = False
                break
        if not finished:
            break
    ok = finished and stats["bad"] == 0
    ACCEPTANCE.append(
        f"criterion 6 (full scope, every canonical coloring at n=6,7): {'PASS' if ok else 'FAIL'}  "
        f"{done} colorings checked in {budget:.0f}s before the budget ran out, disagreements {stats['bad']}; "
        f"n=6 alone has over 23 million colorings up to color renaming"
    )
    assert ok


# ---------------------------------------------------------------- 7


def test_criterion_7_tournaments():
    t0 = time.perf_counter()
    bad_cycles, per_n = 0, {}
    seed = 0
    for n in range(5, 10):
        got = 0
        while got < 1000:
            seed += 1
            t = random_mcf_tournament(n, (seed % 5) / 10, 0, seed)
            if not is_strong(t):
                continue
            got += 1
            cyc = hamilton_cycle_strong(t)
            if sorted(cyc) != list(range(n)) or not all(t.arc(a, b) for a, b in zip(cyc, cyc[1:] + cyc[:1])):
                bad_cycles += 1
        per_n[n] = got
    bad_tstar = 0
    lengths = [3, 2]
    lo = 5 + 2 * 9 + 6 + 6
    for s in range(100):
        n = lo + s % 25
        d = random_mcf_tournament(n, 0.1 + (s % 5) / 10, 2, 7000 + s)
        assert min(len(o) for o in d.out) >= 2
        try:
            sp = embed_tstar(d, lengths)
        except Exception:
            bad_tstar += 1
            continue
        legs_ok = all(all(d.arc(a, b) for a, b in zip(leg, leg[1:])) and leg[-1] == sp.root for leg in sp.legs)
        if validate_tstar(d, sp, lengths) is not None or not legs_ok or len(set(sp.vertices)) != 3 + sum(lengths):
            bad_tstar += 1
    dt = time.perf_counter() - t0
    ok = bad_cycles == 0 and bad_tstar == 0 and dt < 30
    record(7, ok, f"strong tournaments {per_n}, cycle failures {bad_cycles}; "
                  f"T* (3,2) at n>={lo}: 100 runs, failures {bad_tstar}; {dt:.1f}s (limit 30s)")


# ---------------------------------------------------------------- 8

DRIVER = r"""
import sys, os
from pcspider.cli import main
d = sys.argv[1]
p = lambda name: os.path.join(d, name)
def run(*a):
    main([str(x) for x in a])
run("gen", "random", 200, "--seed", 7, "--palette", 12, "-o", p("r.txt"))
run("--json", "gen", "random", 200, "--seed", 7, "--palette", 12, "-o", p("r.json"))
run("gen", "transitive", 301, "-o", p("t.txt"))
run("gen", "degenerate", 60, "--seed", 3, "-o", p("d.txt"))
run("gen", "mcf", 80, "--seed", 3, "--pair-density", 0.3, "-o", p("m.txt"))
run("spider", p("r.txt"), "120,50,29", "-o", p("rs.cert"))
run("--json", "spider", p("r.json"), "120,50,29", "-o", p("rs.json"))
run("spider", p("t.txt"), "200,60,40", "-o", p("ts.cert"))
run("subdivide", p("r.txt"), "star:3", "-o", p("rsub.cert"))
run("subdivide", p("d.txt"), "edge", "-o", p("dsub.cert"))
run("export-dot", p("r.txt"), "--cert", p("rs.cert"), "-o", p("rs.dot"))
with open(p("k4.txt"), "w") as fh:
    fh.write("n 4\n0 1 2\n2 1\n0\n")
run("oracle", p("k4.txt"), "1,1,1", "-o", p("k4.cert"))
with open(p("stdout.txt"), "w") as out:
    sys.stdout = out
    run("check", p("r.txt"))
    run("check", p("m.txt"))
    run("verify", p("r.txt"), p("rs.cert"))
    run("ramsey", 3)
    run("--json", "ramsey", 2)
"""


def test_criterion_8_determinism(tmp_path):
    reruns = 20
    digests = []
    for r in range(reruns):
        d = tmp_path / f"run{r}"
        d.mkdir()
        env = dict(os.environ, PYTHONHASHSEED=str(r))
        proc = subprocess.run([sys.executable, "-c", DRIVER, str(d)], env=env, capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        h = hashlib.sha256()
        for f in sorted(d.iterdir()):
            h.update(f.name.encode() + b"\0" + f.read_bytes())
        digests.append(h.hexdigest())
    files = len(list((tmp_path / "run0").iterdir()))
    ok = len(set(digests)) == 1 and files == 14
    record(8, ok, f"{reruns} reruns x {files} output files across all subcommands, "
                  f"distinct digests {len(set(digests))}")
