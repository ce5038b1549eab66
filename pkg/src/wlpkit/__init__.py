"""Exact Lefschetz computations for monomial algebras of simplicial complexes.

The main entry points:

* :func:`whiskered_algebra` / :func:`build_algebra` build A(Δ, d) with a
  monomial basis graded by degree.
* :func:`wlp_check` / :func:`slp_check` decide maximal rank of the maps
  ×L^s exactly over Q or over GF(p).
* :func:`perazzo_check` and :func:`apolarity_dims` handle simplicial forms
  and their Gorenstein algebras.
* :func:`target_sequence` and :func:`certificate_check` handle
  roller-coaster target sequences.
"""

from .complexes import SimplicialComplex, independence_complex
from .graphs import Graph, enumerate_graphs, independence_sequence, parse_graph, whisker
from .lefschetz import (
    build_algebra,
    hilbert_function,
    non_surjectivity_witness,
    slp_check,
    whiskered_algebra,
    wlp_check,
)
from .linalg_exact import IntegerMatrix, rank_exact, rank_mod_p
from .perazzo import apolarity_dims, is_perazzo, perazzo_check, simplicial_form
from .rollercoaster import certificate_check, target_sequence

__all__ = [
    "Graph",
    "IntegerMatrix",
    "SimplicialComplex",
    "apolarity_dims",
    "build_algebra",
    "certificate_check",
    "enumerate_graphs",
    "hilbert_function",
    "independence_complex",
    "independence_sequence",
    "is_perazzo",
    "non_surjectivity_witness",
    "parse_graph",
    "perazzo_check",
    "rank_exact",
    "rank_mod_p",
    "simplicial_form",
    "slp_check",
    "target_sequence",
    "whisker",
    "whiskered_algebra",
    "wlp_check",
]
