"""Target sequences for roller-coaster h-vectors and certificate checks.

Sequences are 1-indexed in the mathematics; in code ``a[k - 1]`` holds a_k.
Everything is exact: integers for the sequences, Fractions for ratios and
tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .graphs import Graph, IndependenceSequence, independence_sequence, is_well_covered


class SequenceError(ValueError):
    pass


def upper_range(q: int) -> range:
    """The indices ceil(q/2)..q that a permutation acts on."""
    return range(-(-q // 2), q + 1)


def default_pair_range(q: int) -> range:
    """floor(q/2)+2..q, where every partner index q-k+1 lies in the binomial part."""
    return range(q // 2 + 2, q + 1)


@dataclass(frozen=True)
class TargetSequence:
    q: int
    pi: dict  # index -> value, a bijection of upper_range(q)
    a: tuple  # a_1..a_q
    c: int

    def __getitem__(self, k: int) -> int:
        return self.a[k - 1]


def _check_permutation(q: int, pi: dict) -> None:
    dom = set(upper_range(q))
    if set(pi) != dom or sorted(pi.values()) != sorted(dom):
        raise SequenceError(
            f"permutation must be a bijection of {{{min(dom)},...,{q}}}, got {pi}"
        )


def as_permutation(q: int, images: Sequence[int] | dict | None) -> dict:
    """Accept ``None`` (identity), a dict, or the image list of ceil(q/2)..q."""
    dom = list(upper_range(q))
    if images is None:
        pi = {k: k for k in dom}
    elif isinstance(images, dict):
        pi = dict(images)
    else:
        images = list(images)
        if len(images) != len(dom):
            raise SequenceError(f"expected {len(dom)} images for {dom[0]}..{q}, got {len(images)}")
        pi = dict(zip(dom, images))
    _check_permutation(q, pi)
    return pi


def target_sequence(q: int, pi: Sequence[int] | dict | None = None) -> TargetSequence:
    if q < 2:
        raise SequenceError("q must be at least 2")
    pi = as_permutation(q, pi)
    half = -(-q // 2)
    c = math.comb(q, half + 1)
    a = tuple(
        math.comb(q, i) if i <= half - 1 else 3**q + pi[i] * c for i in range(1, q + 1)
    )
    return TargetSequence(q, pi, a, c)


def ratio_condition(a: Sequence[int | Fraction]) -> bool:
    """a_k / C(q, k) nondecreasing in k, compared by cross-multiplication."""
    q = len(a)
    if q == 0:
        raise SequenceError("empty sequence")
    for k in range(1, q):
        # a_k / C(q,k) <= a_{k+1} / C(q,k+1)
        if a[k - 1] * math.comb(q, k + 1) > a[k] * math.comb(q, k):
            return False
    return True


def pair_sum(a: Sequence[int], k: int) -> int:
    q = len(a)
    return a[k - 1] + a[q - k]


def tied_pairs(a: Sequence[int]) -> list[tuple[int, int]]:
    """Pairs k < l whose pair sums coincide (they contribute 0 to the minimum)."""
    q = len(a)
    return [
        (k, l)
        for k in range(1, q + 1)
        for l in range(k + 1, q + 1)
        if pair_sum(a, k) == pair_sum(a, l)
    ]


def epsilon_bound(a: Sequence[int]) -> Fraction:
    """A quarter of the least nonzero gap between pair sums a_k + a_{q-k+1}.

    Pairs with equal sums (always present when k + l = q + 1) are skipped;
    list them with :func:`tied_pairs`.
    """
    q = len(a)
    if q < 2:
        raise SequenceError("need at least two entries")
    gaps = [
        abs(pair_sum(a, l) - pair_sum(a, k))
        for k in range(1, q + 1)
        for l in range(k + 1, q + 1)
    ]
    nonzero = [g for g in gaps if g]
    if not nonzero:
        raise SequenceError("degenerate sequence: all pair sums are equal")
    return Fraction(min(nonzero), 4)


def pair_order_violations(a: Sequence[int], pi: dict, indices: Iterable[int]) -> list:
    idx = sorted(indices)
    out = []
    for x, k in enumerate(idx):
        for l in idx[x + 1:]:
            if (pair_sum(a, k) < pair_sum(a, l)) != (pi[k] < pi[l]):
                out.append((k, l))
    return out


def pair_order_check(a: Sequence[int], pi: dict, indices: Iterable[int]) -> bool:
    """For all k < l in ``indices``: pair sum at k < pair sum at l iff pi(k) < pi(l)."""
    indices = list(indices)
    q = len(a)
    allowed = set(upper_range(q))
    if not set(indices) <= allowed:
        raise SequenceError(f"indices must lie in {min(allowed)}..{q}")
    return not pair_order_violations(a, pi, indices)


@dataclass(frozen=True)
class Certificate:
    graph: Graph
    T: Fraction
    epsilon: Fraction

    def __post_init__(self):
        object.__setattr__(self, "T", Fraction(self.T))
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if self.T <= 0 or self.epsilon <= 0:
            raise SequenceError("scaling factor and epsilon must be positive")


def certificate_check(cert: Certificate, a: Sequence[int | Fraction]) -> bool:
    """|i_k(G)/T - a_k| < epsilon for every 1 <= k <= q."""
    g = cert.graph
    if not is_well_covered(g):
        raise SequenceError("certificate graph is not well-covered")
    seq = independence_sequence(g)
    if seq.alpha != len(a):
        raise SequenceError(f"independence number {seq.alpha} != sequence length {len(a)}")
    return all(
        abs(Fraction(seq[k], 1) / cert.T - Fraction(a[k - 1])) < cert.epsilon
        for k in range(1, len(a) + 1)
    )


def roller_coaster_hvector(iseq: IndependenceSequence | Sequence[int], d: int) -> tuple:
    """h_k = i_k + i_{d-k} with i_j = 0 outside 0..alpha; needs d > alpha."""
    if not isinstance(iseq, IndependenceSequence):
        iseq = IndependenceSequence(tuple(iseq))
    if d < iseq.alpha + 1:
        raise SequenceError(f"socle degree {d} must be at least alpha + 1 = {iseq.alpha + 1}")
    h = tuple(iseq[k] + iseq[d - k] for k in range(d + 1))
    assert h[0] == h[d] == 1 and h == h[::-1]
    return h


def hvector_order(h: Sequence[int], pi: dict) -> bool:
    """h_{pi(1)} < h_{pi(2)} < ...; ``pi`` maps positions 1..r to degrees."""
    ordered = [h[pi[k]] for k in sorted(pi)]
    return all(x < y for x, y in zip(ordered, ordered[1:]))
