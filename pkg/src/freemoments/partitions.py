"""Colored non-crossing partitions.

Color words are plain strings over the alphabet ``"1"`` (the representation)
and ``"c"`` (its conjugate), e.g. ``"1c1c"``.  Ground sets are 1-based.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import InvalidInputError

PLAIN = "1"
CONJ = "c"


class PartitionClass(str, enum.Enum):
    NC = "nc"
    NC2 = "nc2"
    NC2C = "nc2c"

    @classmethod
    def parse(cls, value) -> "PartitionClass":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidInputError(f"unknown partition class {value!r}") from None


def color_word(value: str | Iterable[str] = "") -> str:
    """Validate and normalize a color word.

    Accepts a string over ``{1, c}`` or an iterable of ``"1"``/``"c"``/
    ``"plain"``/``"conj"`` tokens.
    """
    if isinstance(value, str):
        tokens = list(value)
    else:
        tokens = [{"plain": PLAIN, "conj": CONJ}.get(t, t) for t in value]
    for t in tokens:
        if t not in (PLAIN, CONJ):
            raise InvalidInputError(f"invalid color {t!r}; expected '1' or 'c'")
    return "".join(tokens)


def balanced(eps: str) -> bool:
    return eps.count(PLAIN) == eps.count(CONJ)


def word_sum(e1: str, e2: str) -> str:
    return e1 + e2


def all_words(length: int) -> Iterable[str]:
    for w in itertools.product((PLAIN, CONJ), repeat=length):
        yield "".join(w)


@dataclass(frozen=True, order=True)
class Partition:
    """A set partition of ``{1..size}`` in canonical form.

    Blocks are sorted internally and ordered by their minimum element, so
    structural equality coincides with equality of partitions.
    """

    blocks: tuple[tuple[int, ...], ...]
    size: int

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], size: int | None = None) -> "Partition":
        canon = sorted(tuple(sorted(b)) for b in blocks)
        elements = [x for b in canon for x in b]
        if size is None:
            size = len(elements)
        if any(len(b) == 0 for b in canon):
            raise InvalidInputError("partition blocks must be nonempty")
        if sorted(elements) != list(range(1, size + 1)):
            raise InvalidInputError(f"blocks {canon} do not partition [1..{size}]")
        return cls(tuple(canon), size)

    @classmethod
    def empty(cls) -> "Partition":
        return cls((), 0)

    @classmethod
    def singletons(cls, size: int) -> "Partition":
        return cls(tuple((i,) for i in range(1, size + 1)), size)

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self) -> dict[int, int]:
        """Map each element to the index of its block."""
        return {x: i for i, b in enumerate(self.blocks) for x in b}

    def shifted(self, offset: int) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(x + offset for x in b) for b in self.blocks)

    def is_noncrossing(self) -> bool:
        return is_noncrossing(self)

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    def __str__(self) -> str:
        return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


def is_noncrossing(p: Partition) -> bool:
    # A partition is non-crossing iff scanning left to right, every block
    # is entered and closed in stack order.
    owner = p.block_of()
    last = {i: b[-1] for i, b in enumerate(p.blocks)}
    stack: list[int] = []
    for x in range(1, p.size + 1):
        b = owner[x]
        if stack and stack[-1] == b:
            pass
        elif b in stack:
            return False
        else:
            stack.append(b)
        if last[b] == x:
            stack.pop()
    return True


def in_class(p: Partition, eps: str, cls: PartitionClass) -> bool:
    if p.size != len(eps) or not is_noncrossing(p):
        return False
    if cls is PartitionClass.NC:
        return True
    if any(len(b) != 2 for b in p.blocks):
        return False
    if cls is PartitionClass.NC2:
        return True
    return all(eps[a - 1] != eps[b - 1] for a, b in p.blocks)


# -- enumeration -------------------------------------------------------------


@lru_cache(maxsize=None)
def _nc_segments(length: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """All non-crossing partitions of ``{1..length}`` as raw block tuples."""
    if length == 0:
        return ((),)
    out = []

    def extend(block: tuple[int, ...], gaps: list[tuple[int, int]]):
        last = block[-1]
        # close the block: the tail after `last` is an independent segment
        pieces = gaps + [(last, length - last)]
        out.extend(_combine(block, pieces))
        for nxt in range(last + 1, length + 1):
            extend(block + (nxt,), gaps + [(last, nxt - last - 1)])

    extend((1,), [])
    return tuple(out)


def _combine(block, pieces):
    """Cartesian product of independent segment partitions plus one block."""
    choices = [
        [tuple(tuple(x + start for x in b) for b in seg) for seg in _nc_segments(n)]
        for start, n in pieces
    ]
    for combo in itertools.product(*choices):
        yield (block,) + tuple(b for seg in combo for b in seg)


@lru_cache(maxsize=None)
def _nc2_segments(length: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    if length == 0:
        return ((),)
    if length % 2:
        return ()
    out = []
    for partner in range(2, length + 1, 2):
        for inner in _nc2_segments(partner - 2):
            for outer in _nc2_segments(length - partner):
                out.append(
                    ((1, partner),)
                    + tuple(tuple(x + 1 for x in b) for b in inner)
                    + tuple(tuple(x + partner for x in b) for b in outer)
                )
    return tuple(out)


def _nc2c_raw(eps: str) -> list[tuple[tuple[int, ...], ...]]:
    if not eps:
        return [()]
    if len(eps) % 2:
        return []
    out = []
    for partner in range(2, len(eps) + 1, 2):
        if eps[0] == eps[partner - 1]:
            continue
        outers = _nc2c_raw(eps[partner:])
        if not outers:
            continue
        for inner in _nc2c_raw(eps[1 : partner - 1]):
            for outer in outers:
                out.append(
                    ((1, partner),)
                    + tuple(tuple(x + 1 for x in b) for b in inner)
                    + tuple(tuple(x + partner for x in b) for b in outer)
                )
    return out


def enumerate_partitions(eps: str, cls: PartitionClass | str) -> list[Partition]:
    """Every partition of the class on ``eps``, once each, in canonical order."""
    cls = PartitionClass.parse(cls)
    k = len(eps)
    if cls is PartitionClass.NC:
        raw = _nc_segments(k)
    elif cls is PartitionClass.NC2:
        raw = _nc2_segments(k)
    else:
        raw = _nc2c_raw(eps)
    return sorted(Partition(tuple(sorted(blocks)), k) for blocks in raw)


# -- counting ----------------------------------------------------------------


@lru_cache(maxsize=None)
def _count_nc(length: int) -> int:
    return _count_nc_tail(length - 1) if length else 1


@lru_cache(maxsize=None)
def _count_nc_tail(rest: int) -> int:
    # ways to finish the first block when `rest` points follow its latest element
    total = _count_nc(rest)
    for gap in range(rest):
        total += _count_nc(gap) * _count_nc_tail(rest - 1 - gap)
    return total


@lru_cache(maxsize=None)
def _count_nc2(length: int) -> int:
    if length == 0:
        return 1
    if length % 2:
        return 0
    return sum(_count_nc2(r - 2) * _count_nc2(length - r) for r in range(2, length + 1, 2))


@lru_cache(maxsize=None)
def _count_nc2c(eps: str) -> int:
    if not eps:
        return 1
    if len(eps) % 2:
        return 0
    total = 0
    for partner in range(2, len(eps) + 1, 2):
        if eps[0] != eps[partner - 1]:
            outer = _count_nc2c(eps[partner:])
            if outer:
                total += _count_nc2c(eps[1 : partner - 1]) * outer
    return total


def count(eps: str, cls: PartitionClass | str) -> int:
    """Number of partitions in the class, without materializing them.

    NC and NC2 do not depend on the colors, so their memo is keyed on length.
    """
    cls = PartitionClass.parse(cls)
    if cls is PartitionClass.NC:
        return _count_nc(len(eps))
    if cls is PartitionClass.NC2:
        return _count_nc2(len(eps))
    return _count_nc2c(eps)


# -- lattice and decomposition operations -------------------------------------


def join(p: Partition, q: Partition) -> Partition:
    if p.size != q.size:
        raise InvalidInputError(f"ground size mismatch: {p.size} vs {q.size}")
    parent = list(range(p.size + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for b in itertools.chain(p.blocks, q.blocks):
        root = find(b[0])
        for x in b[1:]:
            parent[find(x)] = root
    groups: dict[int, list[int]] = {}
    for x in range(1, p.size + 1):
        groups.setdefault(find(x), []).append(x)
    return Partition(tuple(sorted(tuple(g) for g in groups.values())), p.size)


def juxtapose(p: Partition, q: Partition) -> Partition:
    if p.size != q.size:
        raise InvalidInputError(f"juxtaposition needs equal sizes, got {p.size} and {q.size}")
    return Partition(tuple(sorted(p.blocks + q.shifted(p.size))), 2 * p.size)


def decompose_at(eps: str, r: int) -> tuple[str, str]:
    """Split ``eps`` as ``eps[1] + sigma + eps[2r] + sigma'``."""
    if len(eps) < 2 or len(eps) % 2:
        raise InvalidInputError(f"need an even-length word of length >= 2, got {len(eps)}")
    half = len(eps) // 2
    if not 1 <= r <= half:
        raise InvalidInputError(f"r={r} outside [1, {half}]")
    return eps[1 : 2 * r - 1], eps[2 * r :]


def admissible_positions(eps: str) -> set[int]:
    if len(eps) < 2 or len(eps) % 2:
        raise InvalidInputError(f"need an even-length word of length >= 2, got {len(eps)}")
    return {r for r in range(1, len(eps) // 2 + 1) if eps[0] != eps[2 * r - 1]}


def nest(r: int, p: Partition, q: Partition) -> Partition:
    """Pair positions 1 and 2r, put ``p`` strictly inside and ``q`` after."""
    if r < 1 or p.size != 2 * r - 2:
        raise InvalidInputError(f"inner partition must have size {2 * r - 2}, got {p.size}")
    if q.size % 2:
        raise InvalidInputError(f"outer partition must have even size, got {q.size}")
    blocks = ((1, 2 * r),) + p.shifted(1) + q.shifted(2 * r)
    return Partition(tuple(sorted(blocks)), 2 * r + q.size)


@dataclass(frozen=True)
class BlockInequalityReport:
    word: str
    partition_class: PartitionClass
    lhs: int
    rhs: int
    injective: bool

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs and self.injective

    def to_json(self) -> dict:
        return {
            "word": self.word,
            "class": self.partition_class.value,
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "injective": self.injective,
            "holds": self.holds,
        }


@lru_cache(maxsize=None)
def _nest_images_ok(length: int, positions: frozenset, cls: PartitionClass) -> bool:
    # NC and NC2 are color-blind, so the image set only depends on (length, R).
    eps = PLAIN * length
    seen = set()
    for r in sorted(positions):
        sigma, sigma_p = decompose_at(eps, r)
        for p in enumerate_partitions(sigma, cls):
            for q in enumerate_partitions(sigma_p, cls):
                img = nest(r, p, q)
                if img in seen or not in_class(img, eps, cls):
                    return False
                seen.add(img)
    return True


def verify_block_inequality(eps: str, cls: PartitionClass | str) -> BlockInequalityReport:
    cls = PartitionClass.parse(cls)
    positions = admissible_positions(eps)
    lhs = 0
    for r in positions:
        sigma, sigma_p = decompose_at(eps, r)
        lhs += count(sigma, cls) * count(sigma_p, cls)
    rhs = count(eps, cls)
    if cls is PartitionClass.NC2C:
        seen = set()
        injective = True
        for r in sorted(positions):
            sigma, sigma_p = decompose_at(eps, r)
            for p in enumerate_partitions(sigma, cls):
                for q in enumerate_partitions(sigma_p, cls):
                    img = nest(r, p, q)
                    if img in seen or not in_class(img, eps, cls):
                        injective = False
                    seen.add(img)
    else:
        injective = _nest_images_ok(len(eps), frozenset(positions), cls)
    return BlockInequalityReport(eps, cls, lhs, rhs, injective)


def parse_partition(blocks: Sequence[Sequence[int]], size: int | None = None) -> Partition:
    return Partition.from_blocks(blocks, size)
