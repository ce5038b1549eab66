"""Exact rank of integer matrices over Q and over prime fields.

Modular ranks run in a numba kernel on int64 residues.  The rational rank
uses fraction-free elimination on Python integers, either dense (Bareiss) or
on sparse rows with content removal, which is what the multiplication maps
need: they have a handful of nonzeros per column and mostly unit pivots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numba
import numpy as np

# three primes just above 2**20; all below 2**31 so residue products fit in int64
PROBE_PRIMES = (1048583, 1048589, 1048601)

_KERNEL_LIMIT = 2**31


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic Miller-Rabin for p < 3.3e24
    for a in small:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class IntegerMatrix:
    """Dense integer matrix; ``data`` is int64 when every entry fits, else object."""

    rows: int
    cols: int
    data: np.ndarray

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        if self.data.shape != (self.rows, self.cols):
            raise ValueError(f"data shape {self.data.shape} != ({self.rows}, {self.cols})")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntegerMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, _as_array(rows, len(rows), cols))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: dict) -> "IntegerMatrix":
        """Build from a ``{(r, c): value}`` map of nonzero entries."""
        big = any(abs(v) >= 2**62 for v in entries.values())
        data = np.zeros((rows, cols), dtype=object if big else np.int64)
        for (r, c), v in entries.items():
            data[r, c] = v
        return cls(rows, cols, data)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_list(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.data]

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(self.cols, self.rows, self.data.T.copy())

    def __getitem__(self, idx):
        return int(self.data[idx])

    def __eq__(self, other):
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return self.shape == other.shape and self.to_list() == other.to_list()

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(map(tuple, self.to_list()))))


def _as_array(rows: list[list[int]], r: int, c: int) -> np.ndarray:
    if r == 0 or c == 0:
        return np.zeros((r, c), dtype=np.int64)
    if all(abs(x) < 2**62 for row in rows for x in row):
        return np.array(rows, dtype=np.int64).reshape(r, c)
    out = np.empty((r, c), dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            out[i, j] = int(x)
    return out


@dataclass(frozen=True)
class RankResult:
    rank: int
    characteristic: int  # 0 for Q, otherwise the prime p
    certified: bool

    @property
    def field(self) -> str:
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"


# --- modular rank ------------------------------------------------------------

@numba.njit(cache=True)
def _inv_mod(a, p):
    t, new_t, r, new_r = 0, 1, p, a
    while new_r != 0:
        q = r // new_r
        t, new_t = new_t, t - q * new_t
        r, new_r = new_r, r - q * new_r
    return t % p


@numba.njit(cache=True)
def _rank_mod_p_kernel(a, p):
    rows, cols = a.shape
    nz = np.empty(cols, dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, cols):
                tmp = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = tmp
        inv = _inv_mod(a[r, c], p)
        k = 0
        for j in range(c, cols):
            if a[r, j] != 0:
                a[r, j] = a[r, j] * inv % p
                nz[k] = j
                k += 1
        for i in range(r + 1, rows):
            f = a[i, c]
            if f != 0:
                for t in range(k):
                    j = nz[t]
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
        r += 1
    return r


def _residues(m: IntegerMatrix, p: int) -> np.ndarray:
    if m.data.dtype == object:
        return np.array([[int(x) % p for x in row] for row in m.data], dtype=np.int64).reshape(
            m.rows, m.cols
        )
    return np.mod(m.data, p).astype(np.int64)


def _rank_mod_p_python(m: IntegerMatrix, p: int) -> int:
    rows = [[int(x) % p for x in row] for row in m.data]
    r = 0
    for c in range(m.cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def rank_mod_p(m: IntegerMatrix, p: int) -> RankResult:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m.rows == 0 or m.cols == 0:
        return RankResult(0, p, True)
    if p < _KERNEL_LIMIT:
        a = _residues(m, p)
        if a.shape[0] < a.shape[1]:
            a = np.ascontiguousarray(a.T)
        r = int(_rank_mod_p_kernel(a, p))
    else:
        r = _rank_mod_p_python(m, p)
    return RankResult(r, p, True)


# --- rational rank -----------------------------------------------------------

def bareiss_rank(rows: list[list[int]]) -> int:
    """Rank by dense Bareiss elimination with row pivoting."""
    a = [list(map(int, r)) for r in rows]
    if not a or not a[0]:
        return 0
    nrows, ncols = len(a), len(a[0])
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pr = a[r]
        pc = pr[c]
        for i in range(r + 1, nrows):
            row = a[i]
            f = row[c]
            for j in range(c + 1, ncols):
                row[j] = (pc * row[j] - f * pr[j]) // prev
            row[c] = 0
        prev = pc
        r += 1
    return r


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g not in (1,):
        row = {k: v // g for k, v in row.items()}
    return row


def sparse_fraction_free_rank(rows: Iterable[dict]) -> int:
    """Rank of a matrix given as sparse rows ``{col: value}``.

    Rows are reduced one at a time against an echelon set of primitive
    integer pivot rows keyed by leading column; combinations are
    cross-multiplied (no division) and then made primitive.
    """
    pivots: dict[int, dict] = {}
    for row in sorted((dict(r) for r in rows), key=len):
        row = {k: v for k, v in row.items() if v}
        while row:
            c = min(row)
            prow = pivots.get(c)
            if prow is None:
                pivots[c] = _primitive(row)
                break
            a, b = prow[c], row[c]
            if a == 1 or a == -1:
                f = b * a
                new = dict(row)
                for k, v in prow.items():
                    x = new.get(k, 0) - f * v
                    if x:
                        new[k] = x
                    else:
                        new.pop(k, None)
            else:
                g = math.gcd(a, b)
                a, b = a // g, b // g
                new = {k: a * v for k, v in row.items()}
                for k, v in prow.items():
                    x = new.get(k, 0) - b * v
                    if x:
                        new[k] = x
                    else:
                        new.pop(k, None)
            row = _primitive(new) if new else new
    return len(pivots)


def sparse_rank_mod_p(rows: Iterable[dict], p: int) -> int:
    """Rank over GF(p) of a matrix given as sparse rows ``{col: value}``."""
    pivots: dict[int, dict] = {}
    for row in sorted(rows, key=len):
        row = {k: v % p for k, v in row.items() if v % p}
        while row:
            c = min(row)
            prow = pivots.get(c)
            if prow is None:
                inv = pow(row[c], -1, p)
                pivots[c] = {k: v * inv % p for k, v in row.items()}
                break
            f = row[c]
            for k, v in prow.items():
                x = (row.get(k, 0) - f * v) % p
                if x:
                    row[k] = x
                else:
                    row.pop(k, None)
    return len(pivots)


@dataclass(frozen=True)
class SparseMatrix:
    """Integer matrix stored as one ``{col: value}`` dict per row.

    Used for maps too large to hold densely; ranks never need the transpose.
    """

    rows: int
    cols: int
    entries: tuple

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_dense(self) -> IntegerMatrix:
        return IntegerMatrix.from_entries(
            self.rows, self.cols, {(r, c): v for r, row in enumerate(self.entries) for c, v in row.items()}
        )


def sparse_rows(m: IntegerMatrix, transpose: bool = False) -> list[dict]:
    data = m.data.T if transpose else m.data
    out = []
    for r in data:
        nz = np.flatnonzero(r)
        out.append({int(j): int(r[j]) for j in nz})
    return out


def rank_exact(m: IntegerMatrix | SparseMatrix) -> RankResult:
    """Rank over Q by fraction-free elimination on exact integers."""
    if m.rows == 0 or m.cols == 0:
        return RankResult(0, 0, True)
    if isinstance(m, SparseMatrix):
        return RankResult(sparse_fraction_free_rank(m.entries), 0, True)
    # eliminate along the shorter side so fewer rows are reduced
    rows = sparse_rows(m, transpose=m.rows > m.cols)
    return RankResult(sparse_fraction_free_rank(rows), 0, True)


def _modular_rank(m: IntegerMatrix | SparseMatrix, p: int) -> RankResult:
    if isinstance(m, SparseMatrix):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        return RankResult(sparse_rank_mod_p(m.entries, p), p, True)
    return rank_mod_p(m, p)


def has_maximal_rank(
    m: IntegerMatrix | SparseMatrix, characteristic: int = 0
) -> tuple[bool, RankResult]:
    """Decide whether ``m`` has rank ``min(rows, cols)``.

    Over Q a full modular rank settles the question (a modular rank never
    exceeds the rational one); a deficient modular rank is always rechecked
    exactly, so a negative answer is unconditional.
    """
    target = min(m.rows, m.cols)
    if characteristic:
        res = _modular_rank(m, characteristic)
        return res.rank == target, res
    if target == 0:
        return True, RankResult(0, 0, True)
    probes = PROBE_PRIMES[:1] if isinstance(m, SparseMatrix) else PROBE_PRIMES
    for p in probes:
        if _modular_rank(m, p).rank == target:
            return True, RankResult(target, 0, True)
    res = rank_exact(m)
    return res.rank == target, res
