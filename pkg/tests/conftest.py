import itertools

import pytest
from hypothesis import strategies as st

from pcspider.graph_core import build_graph, pairs
from pcspider.instances import random_mono_c3_free


def rainbow(n):
    return build_graph(n, list(range(n * (n - 1) // 2)))


def pentagon():
    # sides one color, diagonals another: the extremal coloring for k = 3
    return build_graph(5, [0 if (j - i) % 5 in (1, 4) else 1 for i, j in pairs(5)])


def brute_mono_triangle(g):
    for a, b, c in itertools.combinations(range(g.n), 3):
        if g.color(a, b) == g.color(a, c) == g.color(b, c):
            return a, b, c
    return None


def indep_pc_edges(g, edges):
    """True when no vertex meets two edges of one color (test-side check)."""
    seen = {}
    for a, b in edges:
        c = g.color(a, b)
        for x in (a, b):
            if (x, c) in seen:
                return False
            seen[(x, c)] = True
    return True


def indep_pc_path(g, path):
    return all(g.color(a, b) != g.color(b, c) for a, b, c in zip(path, path[1:], path[2:]))


@st.composite
def mono_free_graphs(draw, min_n=1, max_n=30, max_palette=8):
    n = draw(st.integers(min_n, max_n))
    # smallest palette for which the random generator stays fast at this n
    lo = next(p for p, cap in ((2, 5), (3, 12), (4, 22), (5, 45), (6, 10**9)) if n <= cap)
    palette = draw(st.integers(lo, max(lo, max_palette)))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_mono_c3_free(n, palette, seed)


@st.composite
def raw_colorings(draw, min_n=1, max_n=7, max_palette=4):
    n = draw(st.integers(min_n, max_n))
    m = n * (n - 1) // 2
    cols = draw(st.lists(st.integers(0, max_palette - 1), min_size=m, max_size=m))
    return build_graph(n, cols)


@pytest.fixture
def k4_rainbow():
    return rainbow(4)


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
