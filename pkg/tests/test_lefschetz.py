import itertools
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from conftest import brute_independent_sets, graphs
from wlpkit import graphs as gr
from wlpkit import lefschetz as lf
from wlpkit.complexes import SimplicialComplex, independence_complex
from wlpkit.lefschetz import (
    AlgebraError,
    WitnessError,
    alpha_criterion,
    block_structure_complete,
    build_algebra,
    hilbert_function,
    lm_decrease_holds,
    mult_map_matrix,
    non_surjectivity_witness,
    predicted_hilbert,
    predicted_hilbert_whiskered,
    propagation_consistent,
    slp_check,
    transpose_is_derivative,
    whiskered_algebra,
    witness_rank_check,
    wlp_check,
)
from wlpkit.linalg_exact import IntegerMatrix, rank_exact

K5_MINUS_EDGE = gr.remove_edges(gr.complete(5), [(1, 2)])
K5_MINUS_TRIANGLE = gr.remove_edges(gr.complete(5), [(1, 2), (1, 3), (2, 3)])
K4_MINUS_EDGE = gr.remove_edges(gr.complete(4), [(1, 2)])
K8_MINUS_TRIANGLE = gr.remove_edges(gr.complete(8), [(1, 2), (1, 3), (2, 3)])


# --- independent oracle ------------------------------------------------------

def brute_basis(c, caps, degree):
    """Exponent vectors of the given degree with face support and capped entries."""
    out = []
    for e in itertools.product(*(range(d) for d in caps)):
        if sum(e) == degree and c.is_face([v + 1 for v, x in enumerate(e) if x]):
            out.append(e)
    return out


def power_of_sum(nvars, s):
    """L^s as {exponent: multinomial coefficient}."""
    out = {}
    for e in itertools.product(range(s + 1), repeat=nvars):
        if sum(e) == s:
            coeff = factorial(s)
            for x in e:
                coeff //= factorial(x)
            out[e] = coeff
    return out


def oracle_map(c, caps, i, s):
    src = brute_basis(c, caps, i)
    tgt = brute_basis(c, caps, i + s)
    pos = {m: k for k, m in enumerate(tgt)}
    rows = [[0] * len(src) for _ in tgt]
    for col, m in enumerate(src):
        for e, coeff in power_of_sum(len(caps), s).items():
            t = tuple(a + b for a, b in zip(m, e))
            if t in pos:
                rows[pos[t]][col] += coeff
    return rows


@st.composite
def small_complexes(draw):
    m = draw(st.integers(1, 4))
    subsets = [frozenset(s) for r in range(1, m + 1) for s in itertools.combinations(range(1, m + 1), r)]
    chosen = draw(st.lists(st.sampled_from(subsets), min_size=1, max_size=4))
    caps = draw(st.lists(st.integers(2, 3), min_size=m, max_size=m))
    return SimplicialComplex.generated_by(m, chosen), tuple(caps)


# --- Hilbert functions -------------------------------------------------------

@pytest.mark.parametrize(
    "g,expected",
    [
        (K5_MINUS_EDGE, (1, 10, 31, 43, 28, 7)),
        (K5_MINUS_TRIANGLE, (1, 10, 33, 50, 36, 10)),
        (K4_MINUS_EDGE, (1, 8, 19, 18, 6)),
        (K8_MINUS_TRIANGLE, (1, 16, 87, 243, 400, 406, 251, 87, 13)),
    ],
)
def test_known_hilbert_functions(g, expected):
    assert hilbert_function(whiskered_algebra(g)) == expected
    assert predicted_hilbert_whiskered(g) == expected


@given(small_complexes())
def test_basis_matches_brute_force(cc):
    c, caps = cc
    a = build_algebra(c, caps)
    for i in range(a.top_degree + 2):
        assert sorted(a.degree_basis(i)) == sorted(brute_basis(c, caps, i))
    assert hilbert_function(a) == predicted_hilbert(c, caps)


@given(graphs(max_n=5))
def test_squarefree_basis_counts_independent_sets(g):
    a = build_algebra(independence_complex(g))
    ind = brute_independent_sets(g)
    assert hilbert_function(a) == tuple(
        sum(1 for s in ind if len(s) == k) for k in range(max(map(len, ind)) + 1)
    )


@given(graphs(max_n=4), st.data())
def test_predicted_whiskered_matches_built(g, data):
    caps = tuple(data.draw(st.lists(st.integers(2, 3), min_size=g.n, max_size=g.n)))
    assert predicted_hilbert_whiskered(g, caps) == hilbert_function(whiskered_algebra(g, caps))


def test_complete_graph_socle_degree():
    for caps in [(2, 2, 2), (3, 2, 3), (3, 3)]:
        a = whiskered_algebra(gr.complete(len(caps)), caps)
        assert a.top_degree == sum(caps) - len(caps)


def test_degenerate_caps_rejected():
    with pytest.raises(AlgebraError, match="degenerate cap"):
        build_algebra(SimplicialComplex(2, ({1, 2},)), (1, 2))
    with pytest.raises(AlgebraError):
        whiskered_algebra(gr.complete(3), (2, 2))


# --- multiplication maps -----------------------------------------------------

@given(small_complexes(), st.integers(1, 3))
@settings(max_examples=40)
def test_mult_map_matches_oracle(cc, s):
    c, caps = cc
    a = build_algebra(c, caps)
    for i in range(a.top_degree):
        got = mult_map_matrix(a, i, s)
        src = a.degree_basis(i)
        tgt = a.degree_basis(i + s)
        want = oracle_map(c, caps, i, s)
        # compare after aligning the oracle's ordering to ours
        bsrc = brute_basis(c, caps, i)
        btgt = brute_basis(c, caps, i + s)
        for r, t in enumerate(tgt):
            for col, m in enumerate(src):
                assert got[r, col] == want[btgt.index(t)][bsrc.index(m)]


@given(graphs(max_n=4))
def test_sparse_map_is_transpose(g):
    a = whiskered_algebra(g)
    for i in range(a.top_degree):
        assert lf.mult_map_sparse(a, i).to_dense() == mult_map_matrix(a, i).transpose()


@given(graphs(max_n=5))
def test_transpose_is_derivative(g):
    a = whiskered_algebra(g)
    for i in range(a.top_degree):
        assert transpose_is_derivative(a, i)


def test_transpose_is_derivative_needs_squarefree():
    with pytest.raises(AlgebraError):
        transpose_is_derivative(whiskered_algebra(gr.complete(2), (3, 2)), 0)


def test_small_derivative_identity():
    a = whiskered_algebra(gr.complete(2))
    for i in range(a.top_degree):
        assert mult_map_matrix(a, i).transpose() == lf.derivative_matrix(a, i)
    point = build_algebra(SimplicialComplex(1, ({1},)))
    assert transpose_is_derivative(point, 0)


# --- verdicts ----------------------------------------------------------------

def test_k5_minus_edge_wlp_not_slp():
    rep = slp_check(whiskered_algebra(K5_MINUS_EDGE))
    assert rep.wlp is True and rep.slp is False
    rec = rep.record(2, 2)
    assert not rec.surjective and "not surjective" in rec.failures


def test_k5_minus_triangle_fails_at_three():
    rep = wlp_check(whiskered_algebra(K5_MINUS_TRIANGLE))
    assert not rep.wlp
    assert [m.degree for m in rep.failing()] == [3]
    rec = rep.record(3)
    assert (rec.source_dim, rec.target_dim, rec.rank) == (50, 36, 35)
    assert rec.failures == ("not surjective",)


def test_k4_minus_edge_fails_at_two():
    rep = wlp_check(whiskered_algebra(K4_MINUS_EDGE))
    assert [m.degree for m in rep.failing()] == [2]
    assert rep.record(2).failures == ("not surjective",)


def test_k8_minus_triangle_fails_injectivity_only():
    rep = wlp_check(whiskered_algebra(K8_MINUS_TRIANGLE))
    assert [m.degree for m in rep.failing()] == [4]
    rec = rep.record(4)
    assert rec.failures == ("not injective",)
    assert (rec.source_dim, rec.target_dim, rec.rank) == (400, 406, 386)


def test_star_four_fails():
    assert not wlp_check(whiskered_algebra(gr.star(4))).wlp


def test_complete_three_has_slp():
    rep = slp_check(whiskered_algebra(gr.complete(3)))
    assert rep.slp and rep.wlp


def test_status_labels():
    assert lf.classify_map(0, 1, 3, 2, 2).status == "injective"
    assert lf.classify_map(0, 1, 2, 3, 2).status == "surjective"
    assert lf.classify_map(0, 1, 2, 2, 2).status == "bijective"
    rec = lf.classify_map(0, 1, 2, 2, 1)
    assert rec.status == "deficient" and rec.failures == ("not injective", "not surjective")


@given(graphs(max_n=5))
def test_report_consistency(g):
    rep = wlp_check(whiskered_algebra(g))
    assert rep.wlp == all(m.maximal for m in rep.maps)
    for m in rep.maps:
        assert 0 <= m.rank <= m.required_rank
        assert (m.status == "deficient") == (not m.maximal)
    # pure complex, squarefree: level algebra
    assert propagation_consistent(rep, level=True)


@given(graphs(max_n=6))
def test_decrease_past_two_thirds(g):
    assert lm_decrease_holds(whiskered_algebra(g), g.n)


def test_positive_characteristic_never_beats_rational():
    a = whiskered_algebra(K5_MINUS_EDGE)
    q = wlp_check(a)
    for p in (2, 3, 5):
        rep = wlp_check(a, characteristic=p)
        assert rep.field == f"GF({p})"
        for x, y in zip(rep.maps, q.maps):
            assert x.rank <= y.rank


def test_parallel_and_sparse_paths_agree(monkeypatch):
    a = whiskered_algebra(K5_MINUS_TRIANGLE)
    base = slp_check(a).to_dict()
    assert slp_check(a, jobs=2).to_dict() == base
    monkeypatch.setattr(lf, "DENSE_LIMIT", 0)
    assert slp_check(a).to_dict() == base


# --- witnesses ---------------------------------------------------------------

def test_witness_k4_minus_edge():
    g = K4_MINUS_EDGE
    w = non_surjectivity_witness(g, {1, 2})
    assert w.degree == 3
    assert w.pairs == ((3, 4),)
    assert w.describe() == "(y3 - y4)*(x1 - y1)*(x2 - y2)"
    r = witness_rank_check(g, w)
    assert r.rank < whiskered_algebra(g).dim(3)


@given(graphs(max_n=5))
def test_witness_for_every_maximal_set(g):
    a = whiskered_algebra(g)
    for C in gr.maximal_independent_sets(g):
        w = non_surjectivity_witness(g, C, a)
        assert w.terms
        assert w.degree == (g.n + len(C)) // 2
        assert witness_rank_check(g, w, a).rank < a.dim(w.degree)


def test_witness_errors():
    with pytest.raises(WitnessError):
        non_surjectivity_witness(gr.complete(3), {1, 2})
    with pytest.raises(WitnessError):
        non_surjectivity_witness(gr.complete(3), {4})


def test_alpha_criterion_examples():
    assert alpha_criterion(gr.star(5)) == (4, 4)
    assert alpha_criterion(gr.broom(3)) is not None
    assert alpha_criterion(gr.complete(5)) is None
    # alpha = n: i ranges over ceil((2n+2)/3)..n
    assert alpha_criterion(gr.empty_graph(6)) == (5, 6)


# --- complete graphs ---------------------------------------------------------

@pytest.mark.parametrize("caps", [(2, 2), (3, 2), (2, 2, 3), (3, 3, 2)])
def test_block_structure(caps):
    a = whiskered_algebra(gr.complete(len(caps)), caps)
    for s in range(1, a.top_degree + 1):
        for i in range(1, a.top_degree - s + 1):
            blocks = block_structure_complete(len(caps), caps, i, s)
            assert len(blocks.diagonal_blocks) == len(caps)
            total = sum(r for r, _ in blocks.block_sizes), sum(c for _, c in blocks.block_sizes)
            assert total == (a.dim(i + s), a.dim(i))


def test_block_ranks_add_up():
    caps = (3, 2, 2)
    a = whiskered_algebra(gr.complete(3), caps)
    i = 2
    blocks = block_structure_complete(3, caps, i, 1)
    full = rank_exact(mult_map_matrix(a, i)).rank
    parts = rank_exact(blocks.top_block).rank + sum(rank_exact(b).rank for b in blocks.diagonal_blocks)
    # block lower triangular: rank at least the sum of the diagonal ranks
    assert full >= parts


def test_matrix_equality_uses_values():
    assert IntegerMatrix.from_rows([[1, 2]]) == IntegerMatrix.from_rows([[1, 2]])
    assert IntegerMatrix.from_rows([[1, 2]]) != IntegerMatrix.from_rows([[2, 1]])
