"""Moments of the self-adjoint main character of FU_n, FO_n and FS_n.

The k-th moment is the sum over all color words of length k of the
dimension of the fixed-vector space of the corresponding tensor power.
That dimension is obtained by counting partitions (inside the basis
regime) or as the rank of a Gram matrix (any n).

FU(Q) shares its fusion rules with FU_n, so the FU values apply to every Q.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

from .errors import InvalidInputError, RegimeError, ResourceError
from .gram import BASIS_THRESHOLD, rank_exact, gram_matrix
from .partitions import CONJ, PLAIN, PartitionClass, count

FAMILY_CLASS = {
    "FU": PartitionClass.NC2C,
    "FO": PartitionClass.NC2,
    "FS": PartitionClass.NC,
}

METHODS = ("partition_count", "gram_rank", "closed_form")
_METHOD_ALIASES = {"count": "partition_count", "rank": "gram_rank", "closed": "closed_form"}

COUNT_CAP = 64
RANK_CAP = 8

# Beyond this length, FU word sums are grouped by the color of the first pair.
_EXPLICIT_WORD_LIMIT = 16


def normalize_method(method: str) -> str:
    method = _METHOD_ALIASES.get(method, method)
    if method not in METHODS:
        raise InvalidInputError(f"unknown method {method!r}; expected one of {METHODS}")
    return method


@dataclass(frozen=True)
class QuantumModel:
    family: str
    n: int

    def __post_init__(self):
        fam = self.family.upper()
        if fam not in FAMILY_CLASS:
            raise InvalidInputError(f"unknown family {self.family!r}; expected fu, fo or fs")
        if self.n < 1:
            raise InvalidInputError(f"n must be >= 1, got {self.n}")
        object.__setattr__(self, "family", fam)

    @property
    def partition_class(self) -> PartitionClass:
        return FAMILY_CLASS[self.family]

    @property
    def basis_threshold(self) -> int:
        return BASIS_THRESHOLD[self.partition_class]

    @property
    def in_basis_regime(self) -> bool:
        return self.n >= self.basis_threshold

    @property
    def tag(self) -> str:
        return f"{self.family}_{self.n}"


@dataclass(frozen=True)
class MomentSequence:
    values: tuple[int, ...]
    model_tag: str
    config: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k):
        return self.values[k]

    @property
    def max_k(self) -> int:
        return len(self.values) - 1


def catalan(k: int) -> int:
    return comb(2 * k, k) // (k + 1)


def closed_form(family: str, k: int) -> int:
    family = family.upper()
    if family == "FU":
        return 0 if k % 2 else 2 ** (k // 2) * catalan(k // 2)
    if family == "FO":
        return 0 if k % 2 else 2**k * catalan(k // 2)
    if family == "FS":
        return 2**k * catalan(k)
    raise InvalidInputError(f"unknown family {family!r}")


def balanced_words(length: int):
    """Color words of the given length with as many 1s as cs."""
    if length % 2:
        return
    for plain_pos in itertools.combinations(range(length), length // 2):
        w = [CONJ] * length
        for i in plain_pos:
            w[i] = PLAIN
        yield "".join(w)


@lru_cache(maxsize=None)
def _nc2c_word_sum(length: int) -> int:
    # The first point pairs with some even position 2r of the other color:
    # two choices for that pair's colors, arbitrary words inside and after.
    if length == 0:
        return 1
    if length % 2:
        return 0
    return sum(
        2 * _nc2c_word_sum(r - 2) * _nc2c_word_sum(length - r) for r in range(2, length + 1, 2)
    )


def _partition_count_moment(model: QuantumModel, k: int) -> int:
    cls = model.partition_class
    if cls is PartitionClass.NC2C:
        if k % 2:
            return 0
        if k <= _EXPLICIT_WORD_LIMIT:
            return sum(count(w, cls) for w in balanced_words(k))
        return _nc2c_word_sum(k)
    # NC and NC2 are color-blind: all 2^k words contribute the same count.
    return 2**k * count(PLAIN * k, cls)


def _gram_rank_moment(model: QuantumModel, k: int) -> int:
    cls = model.partition_class
    if cls is PartitionClass.NC2C:
        return sum(rank_exact(gram_matrix(w, cls, model.n)) for w in balanced_words(k))
    return 2**k * rank_exact(gram_matrix(PLAIN * k, cls, model.n))


def moment(model: QuantumModel, k: int, method: str = "partition_count", cap: int | None = None) -> int:
    method = normalize_method(method)
    if k < 0:
        raise InvalidInputError(f"k must be >= 0, got {k}")
    if cap is None:
        cap = RANK_CAP if method == "gram_rank" else COUNT_CAP
    if k > cap:
        raise ResourceError(f"k={k} exceeds the {method} cap of {cap}", attained_k=cap)
    if method != "gram_rank" and not model.in_basis_regime:
        raise RegimeError(
            f"{method} for {model.family} needs n >= {model.basis_threshold} "
            f"(got n={model.n}); use method=gram_rank",
            threshold=model.basis_threshold,
        )
    if method == "closed_form":
        return closed_form(model.family, k)
    if method == "partition_count":
        return _partition_count_moment(model, k)
    return _gram_rank_moment(model, k)


def moment_sequence(
    model: QuantumModel, K: int, method: str = "partition_count", cap: int | None = None
) -> MomentSequence:
    method = normalize_method(method)
    if K < 0:
        raise InvalidInputError(f"K must be >= 0, got {K}")
    values = tuple(moment(model, k, method, cap) for k in range(K + 1))
    return MomentSequence(values, f"{model.tag}:{method}")


@dataclass
class CrossValidationReport:
    model_tag: str
    max_k: int
    rank_max_k: int
    partition_count: tuple[int, ...]
    closed_form: tuple[int, ...]
    gram_rank: tuple[int, ...]
    first_discrepancy: dict | None = None

    @property
    def agree(self) -> bool:
        return self.first_discrepancy is None

    def to_json(self) -> dict:
        return {
            "model_tag": self.model_tag,
            "max_k": self.max_k,
            "rank_max_k": self.rank_max_k,
            "partition_count": [str(v) for v in self.partition_count],
            "closed_form": [str(v) for v in self.closed_form],
            "gram_rank": [str(v) for v in self.gram_rank],
            "agree": self.agree,
            "first_discrepancy": self.first_discrepancy,
        }


def cross_validate(model: QuantumModel, K: int, rank_cap: int = RANK_CAP) -> CrossValidationReport:
    counts = moment_sequence(model, K, "partition_count").values
    closed = moment_sequence(model, K, "closed_form").values
    rank_k = min(K, rank_cap)
    ranks = moment_sequence(model, rank_k, "gram_rank").values
    report = CrossValidationReport(model.tag, K, rank_k, counts, closed, ranks)
    for k in range(K + 1):
        if counts[k] != closed[k]:
            report.first_discrepancy = {
                "k": k, "partition_count": str(counts[k]), "closed_form": str(closed[k]),
            }
            break
        if k <= rank_k and counts[k] != ranks[k]:
            report.first_discrepancy = {
                "k": k, "partition_count": str(counts[k]), "gram_rank": str(ranks[k]),
            }
            break
    return report
