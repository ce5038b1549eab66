"""Simplicial forms, log matrices and Gorenstein algebras via apolarity.

Catalecticant ranks are computed directly from the derivative spaces of a
form: the i-th entry of the Hilbert function of A_F = R/Ann(F) is the
dimension of the span of all order-i partial derivatives of F.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .complexes import SimplicialComplex, dimension, f_vector, independence_complex, is_pure
from .graphs import Graph, independence_number, whisker
from .lefschetz import build_algebra, mult_map_matrix, whiskered_algebra
from .linalg_exact import IntegerMatrix, rank_exact, sparse_fraction_free_rank


class PerazzoError(ValueError):
    pass


@dataclass(frozen=True)
class MultilinearForm:
    """Homogeneous form in variables x_1..x_nx, u_1..u_nu.

    ``terms`` maps exponent vectors (x-part first) to nonzero rationals.
    """

    nx: int
    nu: int
    terms: dict

    def __post_init__(self):
        clean = {}
        for mono, c in self.terms.items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != self.nx + self.nu:
                raise PerazzoError(f"exponent vector {mono} has the wrong length")
            c = Fraction(c)
            if c:
                clean[mono] = clean.get(mono, 0) + c
        clean = {m: c for m, c in clean.items() if c}
        if len({sum(m) for m in clean}) > 1:
            raise PerazzoError("form is not homogeneous")
        object.__setattr__(self, "terms", clean)

    @property
    def nvars(self) -> int:
        return self.nx + self.nu

    @property
    def degree(self) -> int:
        if not self.terms:
            raise PerazzoError("the zero form has no degree")
        return sum(next(iter(self.terms)))

    @property
    def names(self) -> tuple:
        return tuple(f"x{i}" for i in range(1, self.nx + 1)) + tuple(
            f"u{j}" for j in range(1, self.nu + 1)
        )

    def __str__(self) -> str:
        out = []
        for mono in sorted(self.terms, reverse=True):
            c = self.terms[mono]
            body = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(self.names, mono) if e
            ) or "1"
            out.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(out) or "0"

    def to_records(self) -> list:
        """Serialisable ``[exponents, numerator, denominator]`` records."""
        return [
            [list(m), self.terms[m].numerator, self.terms[m].denominator]
            for m in sorted(self.terms)
        ]

    @classmethod
    def from_records(cls, nx: int, nu: int, records) -> "MultilinearForm":
        return cls(nx, nu, {tuple(e): Fraction(p, q) for e, p, q in records})


def simplicial_form(c: SimplicialComplex) -> MultilinearForm:
    """sum_i x_i u_{F_i} over the facets F_i, in the complex's facet order."""
    if not is_pure(c):
        raise PerazzoError("the simplicial form needs a pure complex")
    s, m = len(c.facets), c.m
    terms = {}
    for i, facet in enumerate(c.facets):
        mono = [0] * (s + m)
        mono[i] = 1
        for v in facet:
            mono[s + v - 1] = 1
        terms[tuple(mono)] = 1
    return MultilinearForm(s, m, terms)


def log_matrix(monomials: Sequence[Sequence[int]]) -> IntegerMatrix:
    rows = [list(m) for m in monomials]
    if len({len(r) for r in rows}) > 1:
        raise PerazzoError("monomials live in different rings")
    return IntegerMatrix.from_rows(rows)


def facet_log_matrix(c: SimplicialComplex) -> IntegerMatrix:
    return log_matrix([[1 if v in f else 0 for v in range(1, c.m + 1)] for f in c.facets])


@dataclass(frozen=True)
class PerazzoCheck:
    facets: int
    vertices: int
    log_rank: int
    map_rank: int | None  # rank of ×L^dim: A(Δ)_1 -> A(Δ)_{dim+1}

    @property
    def perazzo(self) -> bool:
        return self.log_rank < self.facets


def perazzo_check(c: SimplicialComplex, cross_check: bool = True) -> PerazzoCheck:
    if not is_pure(c):
        raise PerazzoError("Perazzo test needs a pure complex")
    log = facet_log_matrix(c)
    log_rank = rank_exact(log).rank
    map_rank = None
    if cross_check:
        d = dimension(c)
        a = build_algebra(c)
        if d >= 1:
            m = mult_map_matrix(a, 1, d)
            map_rank = rank_exact(m).rank
        else:
            # d = 0: the map is the identity on A_1
            map_rank = a.dim(1)
        if map_rank != log_rank:
            raise PerazzoError(
                f"log-matrix rank {log_rank} disagrees with multiplication-map rank {map_rank}"
            )
    return PerazzoCheck(len(c.facets), len(c.used_vertices), log_rank, map_rank)


def is_perazzo(c: SimplicialComplex, cross_check: bool = True) -> bool:
    return perazzo_check(c, cross_check).perazzo


@dataclass(frozen=True)
class IdealizationHilbert:
    d: int
    h: tuple


def idealization_hilbert(c: SimplicialComplex) -> IdealizationHilbert:
    """h_i = dim A(Δ)_i + dim A(Δ)_{d-i} with socle degree d = dim Δ + 2."""
    if not is_pure(c):
        raise PerazzoError("idealization Hilbert function needs a pure complex")
    fv = f_vector(c)  # fv[i] = dim A(Δ)_i
    d = dimension(c) + 2

    def dim_a(i):
        return fv[i] if 0 <= i < len(fv) else 0

    return IdealizationHilbert(d, tuple(dim_a(i) + dim_a(d - i) for i in range(d + 1)))


# --- catalecticants ----------------------------------------------------------

def _sub_exponents(beta: tuple, order: int):
    """All alpha <= beta (componentwise) with |alpha| = order."""
    support = [v for v, e in enumerate(beta) if e]
    if all(beta[v] == 1 for v in support):
        for combo in itertools.combinations(support, order):
            alpha = [0] * len(beta)
            for v in combo:
                alpha[v] = 1
            yield tuple(alpha)
        return
    for exps in itertools.product(*(range(beta[v] + 1) for v in support)):
        if sum(exps) == order:
            alpha = [0] * len(beta)
            for v, e in zip(support, exps):
                alpha[v] = e
            yield tuple(alpha)


def _falling(b: int, a: int) -> int:
    return math.perm(b, a)


def _integral_terms(terms: dict) -> dict:
    den = 1
    for c in terms.values():
        den = den * c.denominator // math.gcd(den, c.denominator)
    return {m: int(c * den) for m, c in terms.items()}


def derivative_rows(terms: dict, order: int) -> list[dict]:
    """Sparse rows of the order-``order`` catalecticant of an integral form.

    One row per operator alpha that hits some term; columns are the
    resulting monomials, numbered in order of appearance.
    """
    ops = set()
    for beta in terms:
        ops.update(_sub_exponents(beta, order))
    col_index: dict = {}
    rows = []
    for alpha in sorted(ops):
        row: dict = {}
        for beta, c in terms.items():
            if all(b >= a for a, b in zip(alpha, beta)):
                coeff = c
                for a, b in zip(alpha, beta):
                    if a:
                        coeff *= _falling(b, a)
                rest = tuple(b - a for a, b in zip(alpha, beta))
                j = col_index.setdefault(rest, len(col_index))
                row[j] = row.get(j, 0) + coeff
        row = {k: v for k, v in row.items() if v}
        if row:
            rows.append(row)
    return rows


def catalecticant_rank(terms: dict, order: int) -> int:
    return sparse_fraction_free_rank(derivative_rows(_integral_terms(terms), order))


def apolarity_dims(f: MultilinearForm) -> tuple:
    """Hilbert function of A_F: ranks of the catalecticants of f."""
    if not f.terms:
        raise PerazzoError("apolarity needs a nonzero form")
    return tuple(catalecticant_rank(f.terms, i) for i in range(f.degree + 1))


def derivative_along_sum(terms: dict) -> dict:
    """L∘f for L the sum of all variables."""
    out: dict = {}
    for mono, c in terms.items():
        for v, e in enumerate(mono):
            if e:
                t = mono[:v] + (e - 1,) + mono[v + 1:]
                out[t] = out.get(t, 0) + e * c
    return {m: c for m, c in out.items() if c}


def gorenstein_mult_rank(f: MultilinearForm, i: int) -> int:
    """Rank of ×L: (A_F)_i -> (A_F)_{i+1} with L the sum of all variables.

    Under the inverse system (A_F)_j is the space of order-j derivatives of
    f, and ×L becomes one more derivative along L, so the image is the span
    of the order-i derivatives of L∘f.
    """
    if not f.terms:
        raise PerazzoError("apolarity needs a nonzero form")
    if not 0 <= i < f.degree:
        raise PerazzoError(f"degree {i} outside 0..{f.degree - 1}")
    g = derivative_along_sum(f.terms)
    if not g:
        return 0
    return catalecticant_rank(g, i)


@dataclass(frozen=True)
class GorensteinMap:
    degree: int
    source_dim: int
    target_dim: int
    rank: int

    @property
    def maximal(self) -> bool:
        return self.rank == min(self.source_dim, self.target_dim)


def gorenstein_wlp_maps(f: MultilinearForm, h: Sequence[int] | None = None) -> list:
    h = tuple(h) if h is not None else apolarity_dims(f)
    return [
        GorensteinMap(i, h[i], h[i + 1], gorenstein_mult_rank(f, i)) for i in range(f.degree)
    ]


# --- WLP failure for forms of whiskered graphs -------------------------------

@dataclass
class PerazzoVerdict:
    prediction: bool
    n: int
    alpha: int
    degree: int | None = None  # target degree i of the restricted map A_{i-1} -> A_i
    restriction_dims: tuple | None = None
    restriction_rank: int | None = None
    gorenstein_deficient: list | None = None  # cross-check, when computed

    @property
    def wlp_fails(self) -> bool | None:
        return True if self.prediction else None

    @property
    def summary(self) -> str:
        return "WLP fails" if self.prediction else "no prediction"


def perazzo_wlp_predicate(g: Graph, cross_check_facets: int = 40) -> PerazzoVerdict:
    """Decide WLP failure for A_F with F the simplicial form of Ind(w(g)).

    When the independence number of g is at least n/3 + 2 the restriction
    ×L: A(w(g))_{i-1} -> A(w(g))_i with i = ceil((2n+2)/3) is checked to be
    non-surjective by exact rank.  For complexes with at most
    ``cross_check_facets`` facets the Gorenstein algebra itself is also
    inspected for a deficient map.
    """
    n = g.n
    alpha = independence_number(g)
    if 3 * alpha < n + 6:
        return PerazzoVerdict(False, n, alpha)
    i = -((-(2 * n + 2)) // 3)
    a = whiskered_algebra(g)
    m = mult_map_matrix(a, i - 1, 1)
    r = rank_exact(m).rank
    if r >= a.dim(i):
        raise PerazzoError(f"restriction A_{i - 1} -> A_{i} is surjective; prediction contradicted")
    verdict = PerazzoVerdict(True, n, alpha, i, (a.dim(i - 1), a.dim(i)), r)
    c = independence_complex(whisker(g))
    if len(c.facets) <= cross_check_facets:
        f = simplicial_form(c)
        bad = [mp for mp in gorenstein_wlp_maps(f) if not mp.maximal]
        if not bad:
            raise PerazzoError("Gorenstein algebra shows no deficient map")
        verdict.gorenstein_deficient = bad
    return verdict
