"""Artinian monomial algebras A(Δ, d) and their Lefschetz properties.

A(Δ, d) = K[x_1..x_m] / (I_Δ + (x_1^{d_1}, ..., x_m^{d_m})) has the monomials
whose support is a face of Δ and whose exponents stay below the caps as a
K-basis.  Since the ideal is monomial, it is enough to test the Lefschetz
properties for L = x_1 + ... + x_m, so every map here is multiplication by
the sum of all variables.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .complexes import SimplicialComplex, independence_complex
from .graphs import Graph, complete, independence_number, iter_independent_masks, whisker
from .linalg_exact import IntegerMatrix, RankResult, SparseMatrix, has_maximal_rank, rank_exact

Monomial = tuple  # exponent vector, one entry per variable

# maps with more entries than this are ranked from sparse rows
DENSE_LIMIT = 2**24


class AlgebraError(ValueError):
    pass


class WitnessError(AlgebraError):
    pass


class BlockStructureError(AssertionError):
    pass


@dataclass(frozen=True)
class GradedMonomialAlgebra:
    complex: SimplicialComplex
    caps: tuple
    basis: tuple  # basis[i] is a tuple of exponent vectors of degree i
    names: tuple
    index: tuple = field(repr=False, compare=False)

    @property
    def nvars(self) -> int:
        return len(self.caps)

    @property
    def top_degree(self) -> int:
        return len(self.basis) - 1

    def dim(self, i: int) -> int:
        return len(self.basis[i]) if 0 <= i < len(self.basis) else 0

    def degree_basis(self, i: int) -> tuple:
        return self.basis[i] if 0 <= i < len(self.basis) else ()

    def degree_index(self, i: int) -> dict:
        return self.index[i] if 0 <= i < len(self.index) else {}

    @property
    def is_squarefree(self) -> bool:
        return all(d == 2 for d in self.caps)

    def format_monomial(self, mono: Monomial) -> str:
        parts = []
        for name, e in zip(self.names, mono):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) or "1"


def _default_names(m: int) -> tuple:
    return tuple(f"x{i}" for i in range(1, m + 1))


def build_algebra(
    c: SimplicialComplex, caps: Sequence[int] | None = None, names: Sequence[str] | None = None
) -> GradedMonomialAlgebra:
    caps = tuple(caps) if caps is not None else (2,) * c.m
    if len(caps) != c.m:
        raise AlgebraError(f"need {c.m} caps, got {len(caps)}")
    if any(d < 2 for d in caps):
        raise AlgebraError("degenerate cap: every cap must be at least 2")
    names = tuple(names) if names is not None else _default_names(c.m)
    by_degree: dict[int, list] = {}
    top_face = max(len(f) for f in c.facets)
    for size in range(top_face + 1):
        for face in c.faces(size):
            support = sorted(face)
            ranges = [range(1, caps[v - 1]) for v in support]
            for exps in itertools.product(*ranges):
                mono = [0] * c.m
                for v, e in zip(support, exps):
                    mono[v - 1] = e
                by_degree.setdefault(sum(exps), []).append(tuple(mono))
    top = max(by_degree)
    basis = tuple(tuple(sorted(by_degree.get(i, ()), reverse=True)) for i in range(top + 1))
    index = tuple({m: k for k, m in enumerate(b)} for b in basis)
    return GradedMonomialAlgebra(c, caps, basis, names, index)


def whiskered_algebra(g: Graph, caps: Sequence[int] | None = None) -> GradedMonomialAlgebra:
    """A(w(g), d): variables x_1..x_n (vertices of g) and y_1..y_n (whiskers),
    with the cap d_i on both x_i and y_i."""
    caps = tuple(caps) if caps is not None else (2,) * g.n
    if len(caps) != g.n:
        raise AlgebraError(f"need {g.n} caps, got {len(caps)}")
    names = tuple(f"x{i}" for i in range(1, g.n + 1)) + tuple(f"y{i}" for i in range(1, g.n + 1))
    return build_algebra(independence_complex(whisker(g)), caps + caps, names)


def hilbert_function(a: GradedMonomialAlgebra) -> tuple:
    return tuple(len(b) for b in a.basis)


def _cap_poly(d: int) -> list[int]:
    # t + t^2 + ... + t^{d-1}
    return [0] + [1] * (d - 1)


def _poly_mul(p: list[int], q: list[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def predicted_hilbert(c: SimplicialComplex, caps: Sequence[int] | None = None) -> tuple:
    """Hilbert function of A(Δ, d) by counting, without building a basis."""
    caps = tuple(caps) if caps is not None else (2,) * c.m
    total = [1]
    for size in range(1, max(len(f) for f in c.facets) + 1):
        for face in c.faces(size):
            p = [1]
            for v in face:
                p = _poly_mul(p, _cap_poly(caps[v - 1]))
            total += [0] * (len(p) - len(total))
            for k, x in enumerate(p):
                total[k] += x
    return tuple(total)


def predicted_hilbert_whiskered(g: Graph, caps: Sequence[int] | None = None) -> tuple:
    """Hilbert function of A(w(g), d) from the independent sets of g alone.

    A basis monomial picks an independent set S of g for its x-part; every
    other vertex may still carry a power of its whisker variable.
    """
    caps = tuple(caps) if caps is not None else (2,) * g.n
    total = [0]
    for mask in iter_independent_masks(g):
        p = [1]
        for v in range(1, g.n + 1):
            cp = _cap_poly(caps[v - 1])
            if mask >> (v - 1) & 1:
                p = _poly_mul(p, cp)
            else:
                p = _poly_mul(p, [1] + cp[1:])
        total += [0] * (len(p) - len(total))
        for k, x in enumerate(p):
            total[k] += x
    while len(total) > 1 and total[-1] == 0:
        total.pop()
    return tuple(total)


def multiply_by_linear_sum(
    a: GradedMonomialAlgebra, poly: dict, degree: int, times: int = 1
) -> dict:
    """Multiply a degree-``degree`` element by L^times, reducing as we go."""
    for step in range(times):
        idx = a.degree_index(degree + step + 1)
        out: dict = {}
        if not idx:
            return out
        for mono, coeff in poly.items():
            for v in range(a.nvars):
                t = mono[:v] + (mono[v] + 1,) + mono[v + 1:]
                if t in idx:
                    out[t] = out.get(t, 0) + coeff
        poly = {m: c for m, c in out.items() if c}
    return poly


def mult_map_matrix(a: GradedMonomialAlgebra, i: int, s: int = 1) -> IntegerMatrix:
    """Matrix of ×L^s : A_i -> A_{i+s}; column = source monomial, row = target."""
    if s < 1:
        raise AlgebraError("shift must be >= 1")
    src = a.degree_basis(i)
    tgt_index = a.degree_index(i + s)
    data = np.zeros((len(tgt_index), len(src)), dtype=np.int64)
    for col, mono in enumerate(src):
        for t, c in multiply_by_linear_sum(a, {mono: 1}, i, s).items():
            data[tgt_index[t], col] = c
    return IntegerMatrix(len(tgt_index), len(src), data)


def mult_map_sparse(a: GradedMonomialAlgebra, i: int, s: int = 1) -> SparseMatrix:
    """Transpose of :func:`mult_map_matrix` in sparse form: one row per source."""
    if s < 1:
        raise AlgebraError("shift must be >= 1")
    tgt_index = a.degree_index(i + s)
    rows = tuple(
        {tgt_index[t]: c for t, c in multiply_by_linear_sum(a, {mono: 1}, i, s).items()}
        for mono in a.degree_basis(i)
    )
    return SparseMatrix(len(rows), len(tgt_index), rows)


# --- Lefschetz reports -------------------------------------------------------

@dataclass(frozen=True)
class MapRecord:
    degree: int
    shift: int
    source_dim: int
    target_dim: int
    rank: int
    status: str  # injective | surjective | bijective | deficient
    failures: tuple  # () or labels "not injective" / "not surjective"

    @property
    def required_rank(self) -> int:
        return min(self.source_dim, self.target_dim)

    @property
    def maximal(self) -> bool:
        return self.rank == self.required_rank

    @property
    def surjective(self) -> bool:
        return self.rank == self.target_dim

    @property
    def injective(self) -> bool:
        return self.rank == self.source_dim


def classify_map(degree: int, shift: int, rows: int, cols: int, rank: int) -> MapRecord:
    src, tgt = cols, rows
    if rank == src == tgt:
        status, failures = "bijective", ()
    elif rank == min(src, tgt):
        status, failures = ("injective" if rank == src else "surjective"), ()
    else:
        status = "deficient"
        if src < tgt:
            failures = ("not injective",)
        elif src > tgt:
            failures = ("not surjective",)
        else:
            failures = ("not injective", "not surjective")
    return MapRecord(degree, shift, src, tgt, rank, status, failures)


@dataclass
class LefschetzReport:
    hilbert: tuple
    maps: list
    wlp: bool
    slp: bool | None
    characteristic: int = 0

    @property
    def field(self) -> str:
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"

    def record(self, degree: int, shift: int = 1) -> MapRecord:
        for m in self.maps:
            if m.degree == degree and m.shift == shift:
                return m
        raise KeyError((degree, shift))

    def failing(self, shift: int | None = 1) -> list:
        return [m for m in self.maps if not m.maximal and (shift is None or m.shift == shift)]

    def non_surjective_targets(self) -> list[int]:
        """Target degrees i for which ×L: A_{i-1} -> A_i is not surjective."""
        return [m.degree + 1 for m in self.maps if m.shift == 1 and not m.surjective]

    def to_dict(self) -> dict:
        return {
            "hilbert": list(self.hilbert),
            "maps": [
                {
                    "i": m.degree,
                    "s": m.shift,
                    "dims": [m.source_dim, m.target_dim],
                    "required": m.required_rank,
                    "rank": m.rank,
                    "status": m.status,
                    "failures": list(m.failures),
                }
                for m in self.maps
            ],
            "verdicts": {"wlp": self.wlp, "slp": self.slp},
            "field": self.field,
        }


def _map_record(a: GradedMonomialAlgebra, i: int, s: int, characteristic: int) -> MapRecord:
    src, tgt = a.dim(i), a.dim(i + s)
    if src * tgt > DENSE_LIMIT:
        _, res = has_maximal_rank(mult_map_sparse(a, i, s), characteristic)
    else:
        _, res = has_maximal_rank(mult_map_matrix(a, i, s), characteristic)
    return classify_map(i, s, tgt, src, res.rank)


def _records(a, pairs, characteristic, jobs):
    pairs = list(pairs)
    if jobs > 1 and len(pairs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futs = [pool.submit(_map_record, a, i, s, characteristic) for i, s in pairs]
            recs = [f.result() for f in futs]
    else:
        recs = [_map_record(a, i, s, characteristic) for i, s in pairs]
    return sorted(recs, key=lambda r: (r.shift, r.degree))


def wlp_check(a: GradedMonomialAlgebra, characteristic: int = 0, jobs: int = 1) -> LefschetzReport:
    recs = _records(a, ((i, 1) for i in range(a.top_degree)), characteristic, jobs)
    return LefschetzReport(hilbert_function(a), recs, all(r.maximal for r in recs), None, characteristic)


def slp_check(a: GradedMonomialAlgebra, characteristic: int = 0, jobs: int = 1) -> LefschetzReport:
    top = a.top_degree
    pairs = [(i, s) for s in range(1, top + 1) for i in range(top - s + 1)]
    recs = _records(a, pairs, characteristic, jobs)
    wlp = all(r.maximal for r in recs if r.shift == 1)
    return LefschetzReport(hilbert_function(a), recs, wlp, all(r.maximal for r in recs), characteristic)


def propagation_consistent(report: LefschetzReport, level: bool) -> bool:
    """Surjectivity persists upward; for level algebras injectivity persists downward."""
    ones = sorted((r for r in report.maps if r.shift == 1), key=lambda r: r.degree)
    seen_surjective = False
    for r in ones:
        if seen_surjective and not r.surjective:
            return False
        seen_surjective = seen_surjective or r.surjective
    if level:
        seen_injective = False
        for r in reversed(ones):
            if seen_injective and not r.injective:
                return False
            seen_injective = seen_injective or r.injective
    return True


# --- transpose = derivative --------------------------------------------------

def derivative_matrix(a: GradedMonomialAlgebra, i: int) -> IntegerMatrix:
    """Matrix of m -> sum_j dm/dx_j from A_{i+1} to A_i (squarefree bases)."""
    src = a.degree_basis(i + 1)
    tgt_index = a.degree_index(i)
    data = np.zeros((len(tgt_index), len(src)), dtype=np.int64)
    for col, mono in enumerate(src):
        for v, e in enumerate(mono):
            if e:
                t = mono[:v] + (e - 1,) + mono[v + 1:]
                if t in tgt_index:
                    data[tgt_index[t], col] += e
    return IntegerMatrix(len(tgt_index), len(src), data)


def transpose_is_derivative(a: GradedMonomialAlgebra, i: int) -> bool:
    if not a.is_squarefree:
        raise AlgebraError("transpose/derivative duality needs all caps equal to 2")
    return mult_map_matrix(a, i, 1).transpose() == derivative_matrix(a, i)


# --- non-surjectivity witness ------------------------------------------------

@dataclass(frozen=True)
class Witness:
    degree: int
    independent_set: frozenset
    pairs: tuple  # whisker pairs (u, v) giving the factors (y_u - y_v)
    terms: dict  # exponent vector over (x_1..x_n, y_1..y_n) -> coefficient

    def describe(self) -> str:
        factors = [f"(y{u} - y{v})" for u, v in self.pairs]
        factors += [f"(x{c} - y{c})" for c in sorted(self.independent_set)]
        return "*".join(factors) or "1"


def _linear_product(factors: list[tuple[int, int]], nvars: int) -> dict:
    """Expand prod (z_a - z_b) over 0-based variable pairs."""
    poly = {(0,) * nvars: 1}
    for pos, neg in factors:
        out: dict = {}
        for mono, c in poly.items():
            for v, sign in ((pos, 1), (neg, -1)):
                t = mono[:v] + (mono[v] + 1,) + mono[v + 1:]
                out[t] = out.get(t, 0) + sign * c
        poly = {m: c for m, c in out.items() if c}
    return poly


def _derivative_poly(poly: dict) -> dict:
    out: dict = {}
    for mono, c in poly.items():
        for v, e in enumerate(mono):
            if e:
                t = mono[:v] + (e - 1,) + mono[v + 1:]
                out[t] = out.get(t, 0) + e * c
    return {m: c for m, c in out.items() if c}


def non_surjectivity_witness(
    g: Graph, independent: Iterable[int], algebra: GradedMonomialAlgebra | None = None
) -> Witness:
    """Kernel element of the transpose of ×L: A_{i-1} -> A_i in A(w(g)).

    The non-C vertices are taken in increasing order and paired off
    consecutively; this plays the role of relabelling so that C occupies the
    last labels, and the result is stated in the original labels.
    """
    C = frozenset(independent)
    if not g.is_independent(C) or any(not 1 <= v <= g.n for v in C):
        raise WitnessError(f"{sorted(C)} is not an independent set of the graph")
    n = g.n
    rest = [v for v in g.vertices if v not in C]
    pairs = tuple((rest[2 * t], rest[2 * t + 1]) for t in range(len(rest) // 2))
    # variable x_v has index v-1, y_v has index n+v-1
    factors = [(n + u - 1, n + v - 1) for u, v in pairs] + [(c - 1, n + c - 1) for c in sorted(C)]
    degree = (n + len(C)) // 2
    assert len(factors) == degree
    poly = _linear_product(factors, 2 * n)
    if _derivative_poly(poly):
        raise WitnessError("derivative along L does not vanish")
    a = algebra if algebra is not None else whiskered_algebra(g)
    idx = a.degree_index(degree)
    reduced = {m: c for m, c in poly.items() if m in idx}
    if not reduced:
        raise WitnessError("degenerate witness: f vanishes in the algebra")
    # the transpose of ×L on the squarefree basis is the derivative map
    lower = a.degree_index(degree - 1)
    image = {m: c for m, c in _derivative_poly(reduced).items() if m in lower}
    if image:
        raise WitnessError("reduced witness is not in the kernel of the derivative map")
    return Witness(degree, C, pairs, reduced)


def witness_rank_check(g: Graph, w: Witness, algebra: GradedMonomialAlgebra | None = None) -> RankResult:
    """Exact rank of ×L: A_{i-1} -> A_i; it must fall short of dim A_i."""
    a = algebra if algebra is not None else whiskered_algebra(g)
    m = mult_map_matrix(a, w.degree - 1, 1)
    return rank_exact(m)


def alpha_criterion(g: Graph) -> tuple[int, int] | None:
    """Target degrees i where ×L: A_{i-1} -> A_i must fail surjectivity in
    A(w(g)), or None when the independence number is below n/3 + 2."""
    n = g.n
    alpha = independence_number(g)
    if 3 * alpha < n + 6:
        return None
    lo = -((-(2 * n + 2)) // 3)
    hi = (n + alpha) // 2
    return (lo, hi)


# --- block decomposition for whiskered complete graphs -----------------------

@dataclass
class BlockDecomposition:
    n: int
    caps: tuple
    degree: int
    shift: int
    top_block: IntegerMatrix
    diagonal_blocks: list
    block_sizes: list  # [(rows, cols)] top block first


def _truncation(n: int, caps: Sequence[int]) -> GradedMonomialAlgebra:
    """K[z_1..z_n]/(z_k^{caps_k}); a cap of 1 removes the variable."""
    keep = frozenset(k + 1 for k in range(n) if caps[k] >= 2)
    c = SimplicialComplex(n, (keep,))
    return build_algebra(c, [max(d, 2) for d in caps])


def _reindex(mat: IntegerMatrix, rows: list, cols: list) -> IntegerMatrix:
    if not rows or not cols:
        return IntegerMatrix.zeros(len(rows), len(cols))
    return IntegerMatrix(len(rows), len(cols), mat.data[np.ix_(rows, cols)])


def block_structure_complete(n: int, caps: Sequence[int], i: int, s: int = 1) -> BlockDecomposition:
    """Split ×L^s on A(w(K_n), d) into the pure-y block and the n x_j-blocks.

    Raises BlockStructureError if the reordered matrix is not block lower
    triangular or a diagonal block differs from the matching truncated
    polynomial ring map.
    """
    caps = tuple(caps)
    a = whiskered_algebra(complete(n), caps)
    full = mult_map_matrix(a, i, s)
    ci = _truncation(n, caps)
    lowered = []
    for j in range(n):
        d = list(caps)
        d[j] -= 1
        lowered.append(_truncation(n, d))

    def part(mono):
        xs = [k for k in range(n) if mono[k]]
        if len(xs) > 1:
            raise BlockStructureError(f"monomial {mono} has two x variables")
        return xs[0] if xs else None

    def split(deg):
        """Position lists per part, ordered by the comparison algebra's basis."""
        idx = a.degree_index(deg)
        groups = [[] for _ in range(n + 1)]
        for mono, pos in idx.items():
            j = part(mono)
            if j is None:
                key = mono[n:]
                target = ci.degree_index(deg)
                groups[0].append((target.get(key, -1), pos))
            else:
                key = tuple(mono[j] - 1 if k == j else mono[n + k] for k in range(n))
                target = lowered[j].degree_index(deg - 1)
                groups[j + 1].append((target.get(key, -1), pos))
        out = []
        for k, grp in enumerate(groups):
            ref = ci.dim(deg) if k == 0 else lowered[k - 1].dim(deg - 1)
            if any(t < 0 for t, _ in grp) or len(grp) != ref:
                raise BlockStructureError(f"degree {deg} part {k} does not match its model")
            out.append([p for _, p in sorted(grp)])
        return out

    src_parts = split(i)
    tgt_parts = split(i + s)
    # upper-right zero, and N block diagonal
    for r in range(n + 1):
        for c in range(n + 1):
            if r == c or (r > 0 and c == 0):
                continue
            blk = _reindex(full, tgt_parts[r], src_parts[c])
            if np.any(blk.data != 0):
                raise BlockStructureError(f"nonzero off-diagonal block ({r}, {c})")
    top = _reindex(full, tgt_parts[0], src_parts[0])
    if top != mult_map_matrix(ci, i, s):
        raise BlockStructureError("top block differs from the complete intersection map")
    diag = []
    for j in range(n):
        blk = _reindex(full, tgt_parts[j + 1], src_parts[j + 1])
        if blk != mult_map_matrix(lowered[j], i - 1, s):
            raise BlockStructureError(f"diagonal block {j + 1} differs from the lowered-cap map")
        diag.append(blk)
    sizes = [(len(tgt_parts[k]), len(src_parts[k])) for k in range(n + 1)]
    return BlockDecomposition(n, caps, i, s, top, diag, sizes)


def complete_intersection_socle_degree(caps: Sequence[int]) -> int:
    return sum(caps) - len(caps)


def lm_decrease_holds(a: GradedMonomialAlgebra, n: int) -> bool:
    """h_{i-1} >= h_i whenever 3i >= 2n + 2 (whiskered algebra on 2n vertices)."""
    h = hilbert_function(a)
    return all(
        (h[i - 1] if i - 1 < len(h) else 0) >= (h[i] if i < len(h) else 0)
        for i in range(1, len(h) + 1)
        if 3 * i >= 2 * n + 2
    )
