"""Gram matrices of partition vectors and exact rank.

For partitions p, q of the same ground set the inner product of the
associated fixed vectors in (C^n)^{\\otimes k} is ``n ** len(join(p, q))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidInputError, RegimeError
from .partitions import Partition, PartitionClass, count, enumerate_partitions

# Largest prime below 2**31: products of two residues fit in int64.
_PRIME = 2_147_483_647

BASIS_THRESHOLD = {
    PartitionClass.NC2C: 2,
    PartitionClass.NC2: 2,
    PartitionClass.NC: 4,
}


@dataclass(frozen=True)
class GramMatrix:
    entries: tuple[tuple[int, ...], ...]
    labels: tuple[Partition, ...]
    dimension_n: int

    def __len__(self) -> int:
        return len(self.entries)

    def to_json(self) -> dict:
        return {
            "n": self.dimension_n,
            "labels": [p.to_json() for p in self.labels],
            "entries": [[str(x) for x in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GramMatrix":
        labels = tuple(Partition.from_blocks(b) for b in data["labels"])
        entries = tuple(tuple(int(x) for x in row) for row in data["entries"])
        return cls(entries, labels, int(data["n"]))


def gram_matrix(eps: str, cls: PartitionClass | str, n: int) -> GramMatrix:
    if n < 1:
        raise InvalidInputError(f"dimension n must be >= 1, got {n}")
    labels = tuple(enumerate_partitions(eps, cls))
    size = len(labels)
    k = len(eps)
    edges = [[(b[t], b[t + 1]) for b in p.blocks for t in range(len(b) - 1)] for p in labels]
    powers = [n**b for b in range(k + 1)]
    rows = [[0] * size for _ in range(size)]
    for i in range(size):
        rows[i][i] = powers[len(labels[i])]
        base = list(range(k + 1))
        for a, b in edges[i]:
            base[b] = a
        for j in range(i + 1, size):
            rows[i][j] = rows[j][i] = powers[_join_block_count(base, len(labels[i]), edges[j])]
    return GramMatrix(tuple(map(tuple, rows)), labels, n)


def _join_block_count(base: list[int], blocks: int, edges) -> int:
    """Blocks of p v q, given p as a parent forest and q as a list of edges."""
    parent = base[:]

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra
            blocks -= 1
    return blocks


def _as_rows(M) -> list[list[int]]:
    if isinstance(M, GramMatrix):
        M = M.entries
    return [list(map(int, row)) for row in M]


def _rank_mod_p(rows: list[list[int]]) -> int:
    a = np.array([[x % _PRIME for x in row] for row in rows], dtype=np.int64)
    nrows, ncols = a.shape
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        nz = np.nonzero(a[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), _PRIME - 2, _PRIME)
        pivot_row = (a[rank, col:] * inv) % _PRIME
        below = a[rank + 1 :, col]
        hit = np.nonzero(below)[0] + rank + 1
        if hit.size:
            a[hit, col:] = (a[hit, col:] - np.outer(a[hit, col], pivot_row) % _PRIME) % _PRIME
        rank += 1
    return rank


def bareiss_rank(rows: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination over the integers.

    Every division is exact; columns without a pivot are skipped.
    """
    a = [row[:] for row in rows]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    prev = 1
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if a[i][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for i in range(rank + 1, nrows):
            f = a[i][col]
            row_i = a[i]
            row_r = a[rank]
            for j in range(col + 1, ncols):
                row_i[j] = (p * row_i[j] - f * row_r[j]) // prev
            row_i[col] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free elimination with row pivoting."""
    a = [list(map(int, row)) for row in rows]
    size = len(a)
    if size == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(size - 1):
        piv = next((i for i in range(k, size) if a[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1]


def leading_principal_minors(M) -> list[int]:
    rows = _as_rows(M)
    return [determinant([r[:j] for r in rows[:j]]) for j in range(1, len(rows) + 1)]


def rank_exact(M, shortcut: bool = True) -> int:
    """Rank over the rationals.

    A modular rank never exceeds the rational rank, so when the rank modulo
    a large prime is already maximal it is returned directly. Otherwise the
    answer comes from Bareiss elimination on the exact integers.
    """
    rows = _as_rows(M)
    if not rows or not rows[0]:
        return 0
    if shortcut:
        full = min(len(rows), len(rows[0]))
        if _rank_mod_p(rows) == full:
            return full
    return bareiss_rank(rows)


def dim_fixed_space(eps: str, cls: PartitionClass | str, n: int, method: str = "rank") -> int:
    cls = PartitionClass.parse(cls)
    if n < 1:
        raise InvalidInputError(f"dimension n must be >= 1, got {n}")
    if method == "count":
        threshold = BASIS_THRESHOLD[cls]
        if n < threshold:
            raise RegimeError(
                f"count method for {cls.value} needs n >= {threshold} (got n={n}); use method=rank",
                threshold=threshold,
            )
        return count(eps, cls)
    if method == "rank":
        return rank_exact(gram_matrix(eps, cls, n))
    raise InvalidInputError(f"unknown method {method!r}; expected 'count' or 'rank'")
