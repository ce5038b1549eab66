import itertools

from hypothesis import settings, strategies as st

from wlpkit.graphs import Graph

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


def brute_independent_sets(g):
    """Every independent set, by checking all subsets."""
    out = []
    for r in range(g.n + 1):
        for s in itertools.combinations(g.vertices, r):
            if all(not g.has_edge(u, v) for u, v in itertools.combinations(s, 2)):
                out.append(frozenset(s))
    return out


def brute_maximal_independent_sets(g):
    ind = brute_independent_sets(g)
    return [s for s in ind if not any(s < t for t in ind)]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
