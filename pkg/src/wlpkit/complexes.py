"""Simplicial complexes presented by their facets."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .graphs import Graph, GraphParseError, mask_to_set, maximal_independent_sets, set_to_mask


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class SimplicialComplex:
    """Complex on the vertex range ``1..m`` given by its facets.

    A vertex of the range that lies in no facet is allowed; it simply is not
    a face.  ``{∅}`` is written with the single facet ``frozenset()``.
    """

    m: int
    facets: tuple

    def __post_init__(self):
        if self.m < 0:
            raise ComplexError("vertex count must be non-negative")
        fs = []
        seen = set()
        for f in self.facets:
            f = frozenset(f)
            if any(not (1 <= v <= self.m) for v in f):
                raise ComplexError(f"facet {sorted(f)} leaves the range 1..{self.m}")
            if f not in seen:
                seen.add(f)
                fs.append(f)
        if not fs:
            raise ComplexError("a complex needs at least one facet (use [set()] for {∅})")
        for a in fs:
            for b in fs:
                if a is not b and a < b:
                    raise ComplexError(f"{sorted(a)} is contained in facet {sorted(b)}")
        if len(fs) > 1 and frozenset() in seen:
            raise ComplexError("the empty set cannot be a facet next to other facets")
        object.__setattr__(self, "facets", tuple(fs))

    @classmethod
    def generated_by(cls, m: int, sets: Iterable[Iterable[int]]) -> "SimplicialComplex":
        """The complex generated by ``sets``; non-maximal ones are dropped."""
        cand = {frozenset(s) for s in sets}
        maximal = [s for s in cand if not any(s < t for t in cand)]
        maximal.sort(key=lambda s: (len(s), sorted(s)))
        return cls(m, tuple(maximal))

    @cached_property
    def _faces_by_size(self) -> dict[int, list[int]]:
        masks = set()
        for f in self.facets:
            full = set_to_mask(f)
            sub = full
            while True:
                masks.add(sub)
                if sub == 0:
                    break
                sub = (sub - 1) & full
        by_size: dict[int, list[int]] = {}
        for mk in masks:
            by_size.setdefault(bin(mk).count("1"), []).append(mk)
        for k in by_size:
            by_size[k].sort()
        return by_size

    def faces(self, size: int) -> list[frozenset]:
        """Faces with exactly ``size`` vertices, in a fixed order."""
        return [mask_to_set(mk) for mk in self._faces_by_size.get(size, [])]

    def face_masks(self, size: int) -> list[int]:
        return list(self._faces_by_size.get(size, []))

    def is_face(self, vertices: Iterable[int]) -> bool:
        s = frozenset(vertices)
        return any(s <= f for f in self.facets)

    @property
    def used_vertices(self) -> frozenset:
        return frozenset().union(*self.facets)


def independence_complex(g: Graph) -> SimplicialComplex:
    return SimplicialComplex(g.n, tuple(maximal_independent_sets(g)))


def is_pure(c: SimplicialComplex) -> bool:
    return len({len(f) for f in c.facets}) == 1


def dimension(c: SimplicialComplex) -> int:
    return max(len(f) for f in c.facets) - 1


def f_vector(c: SimplicialComplex) -> tuple:
    """``(f_{-1}, f_0, ..., f_dim)``: the number of faces of each dimension."""
    by_size = c._faces_by_size
    return tuple(len(by_size.get(k, ())) for k in range(dimension(c) + 2))


def reduced_euler_characteristic(c: SimplicialComplex) -> int:
    # f_vector starts at dimension -1, so index k carries sign (-1)^(k-1)
    return sum(fk if k % 2 else -fk for k, fk in enumerate(f_vector(c)))


def is_flag(c: SimplicialComplex) -> bool:
    """True iff every minimal nonface (among used vertices) has two elements."""
    used = sorted(c.used_vertices)
    edges = [
        (u, v) for i, u in enumerate(used) for v in used[i + 1:] if not c.is_face((u, v))
    ]
    if not used:
        return True
    relabel = {v: i + 1 for i, v in enumerate(used)}
    back = {i + 1: v for i, v in enumerate(used)}
    g = Graph(len(used), frozenset((relabel[u], relabel[v]) for u, v in edges))
    flag_facets = {frozenset(back[v] for v in f) for f in maximal_independent_sets(g)}
    return flag_facets == set(c.facets)


def parse_complex(text: str) -> SimplicialComplex:
    """Parse the facet-list format: header ``m s``, then ``s`` facet lines."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    if not rows:
        raise GraphParseError("empty input", 1)
    lineno, head = rows[0]
    try:
        m, s = (int(x) for x in head)
    except ValueError:
        raise GraphParseError("header must be 'm s'", lineno) from None
    body = rows[1:]
    if len(body) != s:
        raise GraphParseError(f"expected {s} facet lines, found {len(body)}", lineno)
    facets = []
    for lineno, parts in body:
        try:
            f = frozenset(int(x) for x in parts)
        except ValueError:
            raise GraphParseError("facet labels must be integers", lineno) from None
        if any(not (1 <= v <= m) for v in f):
            raise GraphParseError(f"label outside 1..{m}", lineno)
        facets.append(f)
    try:
        return SimplicialComplex(m, tuple(facets))
    except ComplexError as exc:
        raise GraphParseError(str(exc), body[-1][0] if body else lineno) from None
