"""Simple graphs on vertices 1..n, independent sets and whiskering.

Vertices are the integers ``1..n``.  Internally every vertex set is also
available as a bitmask where vertex ``v`` is bit ``v - 1``; the enumeration
routines work on masks and convert back to frozensets at the boundary.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator


class GraphError(ValueError):
    pass


class GraphParseError(GraphError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset = frozenset()
    adjacency: tuple = field(init=False, repr=False, compare=False)
    _masks: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise GraphError("a graph needs at least one vertex")
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise GraphError(f"edge {{{u},{v}}} outside 1..{self.n}")
            norm.add(_edge(u, v))
        adj = [set() for _ in range(self.n + 1)]
        for u, v in norm:
            adj[u].add(v)
            adj[v].add(u)
        masks = [0] * (self.n + 1)
        for v in range(1, self.n + 1):
            masks[v] = sum(1 << (w - 1) for w in adj[v])
        object.__setattr__(self, "edges", frozenset(norm))
        # index 0 is a placeholder so that adjacency[v] works for 1-based v
        object.__setattr__(self, "adjacency", tuple(frozenset(a) for a in adj))
        object.__setattr__(self, "_masks", tuple(masks))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        edges = list(edges)
        seen = set()
        for u, v in edges:
            e = _edge(u, v)
            if e in seen:
                raise GraphError(f"duplicate edge {{{u},{v}}}")
            seen.add(e)
        return cls(n, frozenset(seen))

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def neighbors(self, v: int) -> frozenset:
        return self.adjacency[v]

    def neighbor_mask(self, v: int) -> int:
        return self._masks[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def is_independent(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(not self.has_edge(u, v) for u, v in itertools.combinations(vs, 2))

    def relabel(self, perm: dict[int, int]) -> "Graph":
        """Apply a vertex bijection ``perm`` (old label -> new label)."""
        return Graph(self.n, frozenset(_edge(perm[u], perm[v]) for u, v in self.edges))

    def to_text(self) -> str:
        lines = [f"{self.n} {len(self.edges)}"]
        lines += [f"{u} {v}" for u, v in self.sorted_edges()]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class IndependenceSequence:
    counts: tuple

    def __post_init__(self):
        c = self.counts
        if not c or c[0] != 1 or c[-1] < 1 or any(x < 0 for x in c):
            raise ValueError(f"not an independence sequence: {c}")

    @property
    def alpha(self) -> int:
        return len(self.counts) - 1

    def __getitem__(self, k: int) -> int:
        # out-of-range sizes have no independent sets
        if 0 <= k < len(self.counts):
            return self.counts[k]
        return 0

    def __len__(self) -> int:
        return len(self.counts)


def mask_to_set(mask: int) -> frozenset:
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return frozenset(out)


def set_to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << (v - 1)
    return m


def iter_independent_masks(g: Graph) -> Iterator[int]:
    """Yield every independent set of ``g`` (including the empty set) as a mask."""
    masks = g._masks
    n = g.n

    def rec(v: int, current: int, forbidden: int):
        if v > n:
            yield current
            return
        yield from rec(v + 1, current, forbidden)
        bit = 1 << (v - 1)
        if not forbidden & bit:
            yield from rec(v + 1, current | bit, forbidden | masks[v])

    yield from rec(1, 0, 0)


def independence_sequence(g: Graph) -> IndependenceSequence:
    counts: dict[int, int] = {}
    for m in iter_independent_masks(g):
        k = m.bit_count() if hasattr(m, "bit_count") else bin(m).count("1")
        counts[k] = counts.get(k, 0) + 1
    alpha = max(counts)
    return IndependenceSequence(tuple(counts.get(k, 0) for k in range(alpha + 1)))


def independence_number(g: Graph) -> int:
    best = 0
    for m in _maximal_masks(g):
        best = max(best, bin(m).count("1"))
    return best


def _maximal_masks(g: Graph) -> Iterator[int]:
    # Bron-Kerbosch with pivoting on the complement: maximal cliques of the
    # complement are the maximal independent sets of g.
    full = (1 << g.n) - 1
    non_nbr = [0] * (g.n + 1)
    for v in g.vertices:
        non_nbr[v] = full & ~g._masks[v] & ~(1 << (v - 1))

    def bits(mask):
        while mask:
            low = mask & -mask
            yield low.bit_length()
            mask ^= low

    def bk(r: int, p: int, x: int):
        if not p and not x:
            yield r
            return
        pivot = max(bits(p | x), key=lambda u: bin(non_nbr[u] & p).count("1"))
        for v in list(bits(p & ~non_nbr[pivot])):
            bit = 1 << (v - 1)
            yield from bk(r | bit, p & non_nbr[v], x & non_nbr[v])
            p &= ~bit
            x |= bit

    yield from bk(0, full, 0)


def maximal_independent_sets(g: Graph) -> list[frozenset]:
    return sorted((mask_to_set(m) for m in _maximal_masks(g)), key=sorted)


def is_well_covered(g: Graph) -> bool:
    sizes = {bin(m).count("1") for m in _maximal_masks(g)}
    return len(sizes) == 1


def whisker(g: Graph) -> Graph:
    """Attach a pendant vertex ``i + n`` to every vertex ``i``."""
    n = g.n
    return Graph(2 * n, g.edges | frozenset((i, i + n) for i in range(1, n + 1)))


def complete(n: int) -> Graph:
    return Graph(n, frozenset(itertools.combinations(range(1, n + 1), 2)))


def star(n: int) -> Graph:
    """Star on n vertices with centre 1."""
    return Graph(n, frozenset((1, j) for j in range(2, n + 1)))


def broom(m: int) -> Graph:
    """Broom on m + 3 vertices.

    Bristles x_1..x_m are vertices 1..m and the handle y_1, y_2, y_3 is
    m+1, m+2, m+3; y_3 is joined to every bristle.
    """
    if m < 1:
        raise GraphError("broom needs m >= 1")
    y1, y2, y3 = m + 1, m + 2, m + 3
    edges = {(y1, y2), (y2, y3)} | {(i, y3) for i in range(1, m + 1)}
    return Graph(m + 3, frozenset(edges))


def empty_graph(n: int) -> Graph:
    return Graph(n, frozenset())


def bipartite_check(g: Graph) -> bool:
    color: dict[int, int] = {}
    for s in g.vertices:
        if s in color:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for w in g.adjacency[u]:
                if w not in color:
                    color[w] = 1 - color[u]
                    stack.append(w)
                elif color[w] == color[u]:
                    return False
    return True


def remove_edges(g: Graph, pairs: Iterable[tuple[int, int]]) -> Graph:
    drop = set()
    for u, v in pairs:
        e = _edge(u, v)
        if e not in g.edges:
            raise GraphError(f"{{{u},{v}}} is not an edge")
        drop.add(e)
    return Graph(g.n, g.edges - drop)


def parse_graph(text: str) -> Graph:
    """Parse the edge-list format: a header ``n m`` then ``m`` lines ``u v``.

    Blank lines and ``#`` comments are ignored.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    if not rows:
        raise GraphParseError("empty input", 1)
    lineno, head = rows[0]
    if len(head) != 2:
        raise GraphParseError("header must be 'n m'", lineno)
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise GraphParseError("header must contain two integers", lineno) from None
    if n < 1 or m < 0:
        raise GraphParseError("need n >= 1 and m >= 0", lineno)
    body = rows[1:]
    if len(body) != m:
        where = body[m][0] if len(body) > m else (body[-1][0] if body else lineno)
        raise GraphParseError(f"expected {m} edge lines, found {len(body)}", where)
    edges = []
    seen = set()
    for lineno, parts in body:
        if len(parts) != 2:
            raise GraphParseError("edge line must be 'u v'", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError("edge endpoints must be integers", lineno) from None
        if u == v:
            raise GraphParseError(f"loop at vertex {u}", lineno)
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphParseError(f"endpoint outside 1..{n}", lineno)
        e = _edge(u, v)
        if e in seen:
            raise GraphParseError(f"duplicate edge {u} {v}", lineno)
        seen.add(e)
        edges.append(e)
    return Graph(n, frozenset(edges))


# --- enumeration up to isomorphism -------------------------------------------

def _refined_cells(n: int, adj: list[int]) -> list[list[int]]:
    """Partition 0-based vertices by iterated degree refinement."""
    colors = [bin(adj[v]).count("1") for v in range(n)]
    for _ in range(n):
        sig = [
            (colors[v], tuple(sorted(colors[w] for w in range(n) if adj[v] >> w & 1)))
            for v in range(n)
        ]
        ranking = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [ranking[s] for s in sig]
        if len(set(new)) == len(set(colors)):
            colors = new
            break
        colors = new
    cells: dict[int, list[int]] = {}
    for v in range(n):
        cells.setdefault(colors[v], []).append(v)
    return [cells[c] for c in sorted(cells)]


def canonical_key(g: Graph) -> tuple:
    """An isomorphism-invariant key: the least edge mask over all labelings
    that respect the refined degree partition."""
    n = g.n
    adj = [0] * n
    for u, v in g.edges:
        adj[u - 1] |= 1 << (v - 1)
        adj[v - 1] |= 1 << (u - 1)
    cells = _refined_cells(n, adj)
    pairs = [(u - 1, v - 1) for u, v in g.edges]
    best = None
    for choice in itertools.product(*(itertools.permutations(c) for c in cells)):
        order = [v for block in choice for v in block]
        pos = [0] * n
        for i, v in enumerate(order):
            pos[v] = i
        key = 0
        for u, v in pairs:
            a, b = pos[u], pos[v]
            if a > b:
                a, b = b, a
            key |= 1 << (b * (b - 1) // 2 + a)
        if best is None or key < best:
            best = key
    return (n, best or 0)


def enumerate_graphs(n: int) -> list[Graph]:
    """All graphs on exactly ``n`` vertices, one per isomorphism class.

    Built by vertex extension from the classes on ``n - 1`` vertices; every
    graph arises this way by deleting its last vertex.
    """
    if n < 1:
        raise GraphError("n must be >= 1")
    layer = [Graph(1)]
    for k in range(2, n + 1):
        seen: dict[tuple, Graph] = {}
        for g in layer:
            for nbrs in range(1 << (k - 1)):
                new_edges = {(u, k) for u in range(1, k) if nbrs >> (u - 1) & 1}
                h = Graph(k, g.edges | frozenset(new_edges))
                seen.setdefault(canonical_key(h), h)
        layer = [seen[key] for key in sorted(seen)]
    return layer
