import itertools
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from conftest import graphs
from wlpkit import graphs as gr
from wlpkit.complexes import SimplicialComplex, f_vector, independence_complex
from wlpkit.perazzo import (
    MultilinearForm,
    PerazzoError,
    apolarity_dims,
    facet_log_matrix,
    gorenstein_mult_rank,
    gorenstein_wlp_maps,
    idealization_hilbert,
    is_perazzo,
    log_matrix,
    perazzo_check,
    perazzo_wlp_predicate,
    simplicial_form,
)
from wlpkit.linalg_exact import rank_exact


def whiskered_complex(g):
    return independence_complex(gr.whisker(g))


# --- sympy model of A_F = R/Ann(F) ------------------------------------------

def sympy_form(f):
    xs = sp.symbols(" ".join(f.names))
    expr = sum(
        sp.Rational(c.numerator, c.denominator) * sp.prod([v**e for v, e in zip(xs, m)])
        for m, c in f.terms.items()
    )
    return xs, sp.expand(expr)


def monomials(xs, degree):
    return [sp.prod(c) if c else sp.Integer(1) for c in itertools.combinations_with_replacement(xs, degree)]


def apply_operator(mono, expr, xs):
    for v in xs:
        e = sp.degree(mono, v)
        if e:
            expr = sp.diff(expr, v, e)
    return expr


def coefficient_matrix(polys, xs):
    polys = [sp.Poly(p, *xs) for p in polys]
    keys = sorted({m for p in polys for m in p.monoms()})
    return sp.Matrix([[p.as_dict().get(k, 0) for k in keys] for p in polys]) if keys else sp.zeros(len(polys), 1)


def sympy_h(f):
    xs, expr = sympy_form(f)
    return tuple(
        coefficient_matrix([apply_operator(m, expr, xs) for m in monomials(xs, i)], xs).rank()
        for i in range(f.degree + 1)
    )


def sympy_mult_rank(f, i):
    """Rank of ×L on A_F in degree i: the span of (L*m)∘F over degree-i monomials m."""
    xs, expr = sympy_form(f)
    ell = sum(xs)
    # (L m)∘F is a sum over the monomials of L m
    images = [
        sum(apply_operator(t, expr, xs) * c for t, c in _terms_with_coeffs(sp.expand(ell * m), xs))
        for m in monomials(xs, i)
    ]
    return coefficient_matrix(images, xs).rank()


def _terms_with_coeffs(p, xs):
    poly = sp.Poly(p, *xs)
    return [(sp.prod([v**e for v, e in zip(xs, k)]), c) for k, c in poly.as_dict().items()]


@st.composite
def small_pure_complexes(draw):
    m = draw(st.integers(2, 4))
    k = draw(st.integers(1, m))
    subsets = [frozenset(s) for s in itertools.combinations(range(1, m + 1), k)]
    chosen = draw(st.lists(st.sampled_from(subsets), min_size=1, max_size=3, unique=True))
    return SimplicialComplex(m, tuple(chosen))


# --- forms -------------------------------------------------------------------

def test_simplicial_form_of_whiskered_edge():
    c = SimplicialComplex(4, ({3, 4}, {1, 4}, {2, 3}))
    f = simplicial_form(c)
    assert f.nx == 3 and f.nu == 4
    assert str(f) == "x1*u3*u4 + x2*u1*u4 + x3*u2*u3"
    assert set(f.terms.values()) == {1}
    assert MultilinearForm.from_records(f.nx, f.nu, f.to_records()) == f


def test_form_validation():
    with pytest.raises(PerazzoError):
        MultilinearForm(1, 1, {(1, 0): 1, (1, 1): 1})
    with pytest.raises(PerazzoError):
        MultilinearForm(1, 1, {(1,): 1})
    with pytest.raises(PerazzoError):
        simplicial_form(SimplicialComplex(3, ({1, 2}, {3})))
    f = MultilinearForm(1, 1, {(1, 0): 1, (0, 1): Fraction(1, 2)})
    assert f.degree == 1 and str(f) == "x1 + 1/2*u1"
    assert MultilinearForm(1, 1, {(1, 0): 0}).terms == {}


@given(graphs(max_n=5))
def test_simplicial_form_terms(g):
    c = whiskered_complex(g)
    f = simplicial_form(c)
    assert len(f.terms) == len(c.facets)
    assert f.degree == g.n + 1
    for mono in f.terms:
        assert sum(mono[: f.nx]) == 1


# --- log matrix --------------------------------------------------------------

def test_log_matrix_examples():
    assert rank_exact(log_matrix([[1, 1, 0], [0, 1, 1], [1, 0, 1]])).rank == 3
    assert rank_exact(log_matrix([[1, 0], [0, 1], [1, 1]])).rank == 2
    m = log_matrix([[1, 0], [0, 1], [1, 1], [2, 1]])
    assert rank_exact(m).rank < m.rows
    with pytest.raises(PerazzoError):
        log_matrix([[1, 0], [1]])


def test_facet_log_matrix_shape():
    c = SimplicialComplex(4, ({1, 2}, {3, 4}))
    assert facet_log_matrix(c).to_list() == [[1, 1, 0, 0], [0, 0, 1, 1]]


@pytest.mark.parametrize("n,facets", [(5, 17), (6, 33), (7, 65), (8, 129)])
def test_star_is_perazzo(n, facets):
    chk = perazzo_check(whiskered_complex(gr.star(n)))
    assert chk.facets == facets == 2 ** (n - 1) + 1
    assert chk.vertices == 2 * n
    assert chk.perazzo and chk.log_rank == chk.map_rank


@pytest.mark.parametrize("m", [3, 4, 5])
def test_broom_is_perazzo(m):
    n = m + 3
    chk = perazzo_check(whiskered_complex(gr.broom(m)))
    assert chk.facets == 2 ** (n - 2) + 2 ** (n - 3) + 2
    assert chk.perazzo


def test_complete_graph_not_perazzo():
    chk = perazzo_check(whiskered_complex(gr.complete(4)))
    assert chk.facets == 5 and chk.vertices == 8
    assert not chk.perazzo


@given(graphs(max_n=5))
def test_log_rank_equals_map_rank(g):
    chk = perazzo_check(whiskered_complex(g))  # raises on disagreement
    assert chk.log_rank == chk.map_rank
    assert is_perazzo(whiskered_complex(g)) == chk.perazzo


# --- apolarity ---------------------------------------------------------------

def test_star_five_h_vector():
    c = whiskered_complex(gr.star(5))
    ideal = idealization_hilbert(c)
    assert ideal.h[1] == 27 == 2 * 5 + 2 ** 4 + 1
    assert apolarity_dims(simplicial_form(c)) == ideal.h == (1, 27, 88, 124, 88, 27, 1)


@given(graphs(max_n=4))
def test_apolarity_matches_dimension_sum(g):
    c = whiskered_complex(g)
    ideal = idealization_hilbert(c)
    h = apolarity_dims(simplicial_form(c))
    assert h == ideal.h
    assert h[0] == h[-1] == 1 and h == h[::-1]
    fv = f_vector(c)
    assert ideal.d == len(fv)


@given(small_pure_complexes())
@settings(max_examples=25)
def test_apolarity_matches_sympy(c):
    f = simplicial_form(c)
    assert apolarity_dims(f) == sympy_h(f)


@given(small_pure_complexes())
@settings(max_examples=25)
def test_gorenstein_mult_rank_matches_sympy(c):
    f = simplicial_form(c)
    for i in range(f.degree):
        assert gorenstein_mult_rank(f, i) == sympy_mult_rank(f, i)


def test_gorenstein_rank_bounds():
    f = simplicial_form(whiskered_complex(gr.complete(3)))
    for mp in gorenstein_wlp_maps(f):
        assert 0 <= mp.rank <= min(mp.source_dim, mp.target_dim)
    with pytest.raises(PerazzoError):
        gorenstein_mult_rank(f, f.degree)


def test_star_five_gorenstein_fails_wlp():
    f = simplicial_form(whiskered_complex(gr.star(5)))
    bad = [mp for mp in gorenstein_wlp_maps(f) if not mp.maximal]
    assert [(mp.degree, mp.rank) for mp in bad] == [(2, 83), (3, 83)]


# --- WLP predicate -----------------------------------------------------------

def test_predicate_star_five():
    v = perazzo_wlp_predicate(gr.star(5))
    assert v.prediction and v.wlp_fails
    assert v.degree == 4 and v.restriction_dims == (62, 52) and v.restriction_rank == 47
    assert v.gorenstein_deficient


def test_predicate_broom_three():
    v = perazzo_wlp_predicate(gr.broom(3))
    assert v.prediction and v.restriction_rank < v.restriction_dims[1]


def test_predicate_silent_below_threshold():
    v = perazzo_wlp_predicate(gr.complete(4))
    assert not v.prediction and v.wlp_fails is None and v.summary == "no prediction"
