"""Finitely generated groups and their word-counting moment sequences.

The k-th moment of (G, S) is the number of words of length k over the
symmetric letter list S' = (g_1, g_1^-1, ..., g_n, g_n^-1) whose product
is the identity.  It is computed by a convolution over the reachable
elements, keyed by canonical forms.

Models may expose ``orbit_key``: a function constant exactly on the orbits
of a group of Cayley-graph automorphisms fixing the identity (and
permuting S').  Walk counts are constant on such orbits, so the dynamic
programme can carry one representative per orbit without losing exactness.
"""

from __future__ import annotations

import json
import os
import random
import re
from dataclasses import dataclass, field
from typing import Any, Hashable, Sequence

from .errors import HomomorphismError, InvalidInputError, ResourceError
from .qmoments import MomentSequence

BYTES_PER_ENTRY = 256
DEFAULT_MEMORY_BUDGET = 2 * 1024**3
MEMORY_BUDGET_ENV = "FREEMOMENTS_MEMORY_BUDGET"


def memory_budget() -> int:
    raw = os.environ.get(MEMORY_BUDGET_ENV)
    if raw is None:
        return DEFAULT_MEMORY_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise InvalidInputError(f"{MEMORY_BUDGET_ENV} must be an integer byte count, got {raw!r}")


class GroupModel:
    """Base class: subclasses define the element calculus on canonical forms."""

    name = "group"

    def __init__(self, generators: Sequence[Hashable], identity: Hashable):
        self.generators = [self.canonicalize(g) for g in generators]
        self.identity = identity

    def multiply(self, a, b):
        raise NotImplementedError

    def invert(self, a):
        raise NotImplementedError

    def canonicalize(self, a):
        return a

    def orbit_key(self, a) -> Hashable:
        return a

    def letters(self, generators=None) -> list:
        gens = self.generators if generators is None else generators
        out = []
        for g in gens:
            out.append(g)
            out.append(self.invert(g))
        return out

    # JSON element codec; models override when elements are not JSON-native.
    def encode(self, a) -> Any:
        return a

    def decode(self, data) -> Hashable:
        return self.canonicalize(data)

    def evaluate(self, word: Sequence[int], generators=None):
        """Evaluate a word of signed 1-based generator indices."""
        gens = self.generators if generators is None else generators
        x = self.identity
        for letter in word:
            g = gens[abs(letter) - 1]
            x = self.multiply(x, g if letter > 0 else self.invert(g))
        return x

    def __repr__(self):
        return f"<{self.name}>"


class FreeGroup(GroupModel):
    """Free group on n generators; elements are reduced words of signed indices."""

    def __init__(self, n: int):
        if n < 1:
            raise InvalidInputError(f"free group needs n >= 1, got {n}")
        self.n = n
        self.name = f"free:{n}"
        super().__init__([(i,) for i in range(1, n + 1)], ())

    def canonicalize(self, a):
        out: list[int] = []
        for x in a:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return tuple(out)

    def multiply(self, a, b):
        i = 0
        while i < len(a) and i < len(b) and a[-1 - i] == -b[i]:
            i += 1
        return a[: len(a) - i] + b[i:]

    def invert(self, a):
        return tuple(-x for x in reversed(a))

    def orbit_key(self, a):
        # The Cayley graph is a regular tree: spheres are orbits.
        return len(a)

    def encode(self, a):
        return list(a)

    def decode(self, data):
        return self.canonicalize(tuple(int(x) for x in data))


class FreeAbelianGroup(GroupModel):
    def __init__(self, d: int):
        if d < 1:
            raise InvalidInputError(f"free abelian group needs d >= 1, got {d}")
        self.d = d
        self.name = f"abelian:{d}"
        gens = [tuple(int(i == j) for j in range(d)) for i in range(d)]
        super().__init__(gens, (0,) * d)

    def multiply(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def invert(self, a):
        return tuple(-x for x in a)

    def orbit_key(self, a):
        # signed coordinate permutations preserve the generating set
        return tuple(sorted(abs(x) for x in a))

    def encode(self, a):
        return list(a)

    def decode(self, data):
        return tuple(int(x) for x in data)


class CyclicGroup(GroupModel):
    def __init__(self, m: int):
        if m < 1:
            raise InvalidInputError(f"cyclic group needs order m >= 1, got {m}")
        self.m = m
        self.name = f"cyclic:{m}"
        super().__init__([1 % m], 0)

    def canonicalize(self, a):
        return int(a) % self.m

    def multiply(self, a, b):
        return (a + b) % self.m

    def invert(self, a):
        return (-a) % self.m

    def orbit_key(self, a):
        return min(a, self.m - a)


class FiniteTableGroup(GroupModel):
    """A finite group given by its Cayley table and designated generators."""

    def __init__(self, table: Sequence[Sequence[int]], generators: Sequence[int], identity: int,
                 name: str = "table"):
        order = len(table)
        self.order = order
        self.table = [list(map(int, row)) for row in table]
        self.name = name
        full = set(range(order))
        for row in self.table:
            if len(row) != order or set(row) != full:
                raise InvalidInputError("Cayley table rows must be permutations of the elements")
        for c in range(order):
            if {self.table[r][c] for r in range(order)} != full:
                raise InvalidInputError("Cayley table columns must be permutations of the elements")
        if not 0 <= identity < order or self.table[identity] != list(range(order)):
            raise InvalidInputError(f"element {identity} is not a two-sided identity")
        if any(self.table[r][identity] != r for r in range(order)):
            raise InvalidInputError(f"element {identity} is not a two-sided identity")
        self._inv = [self.table[a].index(identity) for a in range(order)]
        for g in generators:
            if not 0 <= g < order:
                raise InvalidInputError(f"generator {g} out of range")
        super().__init__(list(generators), identity)
        reached = {identity}
        frontier = [identity]
        while frontier:
            nxt = []
            for x in frontier:
                for s in self.letters():
                    y = self.table[x][s]
                    if y not in reached:
                        reached.add(y)
                        nxt.append(y)
            frontier = nxt
        if len(reached) != order:
            raise InvalidInputError(
                f"designated generators reach {len(reached)} of {order} elements"
            )

    @classmethod
    def from_json(cls, data: dict, name: str = "table") -> "FiniteTableGroup":
        try:
            order = int(data["order"])
            flat = [int(x) for x in data["table"]]
            if len(flat) == order * order:
                table = [flat[i * order : (i + 1) * order] for i in range(order)]
            else:
                table = data["table"]
            return cls(table, [int(g) for g in data["generators"]], int(data["identity"]), name)
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"malformed finite_table JSON: {exc}") from None

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "table": [x for row in self.table for x in row],
            "generators": list(self.generators),
            "identity": self.identity,
        }

    def canonicalize(self, a):
        return int(a)

    def multiply(self, a, b):
        return self.table[a][b]

    def invert(self, a):
        return self._inv[a]


def trivial_group(n: int) -> FiniteTableGroup:
    return FiniteTableGroup([[0]], [0] * n, 0, name=f"trivial:{n}")


class DirectProduct(GroupModel):
    """A x B with the generators of A followed by those of B."""

    def __init__(self, a: GroupModel, b: GroupModel):
        self.a, self.b = a, b
        self.name = f"prod({a.name},{b.name})"
        gens = [(g, b.identity) for g in a.generators] + [(a.identity, g) for g in b.generators]
        super().__init__(gens, (a.identity, b.identity))

    def multiply(self, x, y):
        return (self.a.multiply(x[0], y[0]), self.b.multiply(x[1], y[1]))

    def invert(self, x):
        return (self.a.invert(x[0]), self.b.invert(x[1]))

    def orbit_key(self, x):
        return (self.a.orbit_key(x[0]), self.b.orbit_key(x[1]))

    def encode(self, x):
        return [self.a.encode(x[0]), self.b.encode(x[1])]

    def decode(self, data):
        return (self.a.decode(data[0]), self.b.decode(data[1]))


class FreeProductOfCyclics(GroupModel):
    """<g_1> * ... * <g_n> where factor i has the given order (0 means infinite).

    Elements are tuples of syllables (factor, exponent) with consecutive
    syllables from different factors and nonzero reduced exponents.
    """

    def __init__(self, orders: Sequence[int]):
        if not orders or any(o < 0 or o == 1 for o in orders):
            raise InvalidInputError(f"factor orders must be 0 (infinite) or >= 2, got {list(orders)}")
        self.orders = list(orders)
        self.name = "freeprod:" + ",".join(map(str, orders))
        super().__init__([((i, 1),) for i in range(len(orders))], ())

    def _reduce_exp(self, f, e):
        m = self.orders[f]
        if m == 0:
            return e
        e %= m
        return e

    def canonicalize(self, a):
        out: list[tuple[int, int]] = []
        for f, e in a:
            f = int(f)
            if out and out[-1][0] == f:
                e = out.pop()[1] + e
            e = self._reduce_exp(f, int(e))
            if e:
                out.append((f, e))
        return tuple(out)

    def multiply(self, a, b):
        a = list(a)
        i = 0
        while a and i < len(b) and a[-1][0] == b[i][0]:
            f = b[i][0]
            e = self._reduce_exp(f, a.pop()[1] + b[i][1])
            i += 1
            if e:
                a.append((f, e))
                break
        return tuple(a) + tuple(b[i:])

    def invert(self, a):
        return tuple((f, self._reduce_exp(f, -e)) for f, e in reversed(a))

    def encode(self, a):
        return [list(s) for s in a]

    def decode(self, data):
        return self.canonicalize(tuple((int(f), int(e)) for f, e in data))


_PRESET_RE = re.compile(r"^\s*(\w+)\s*:\s*([\d,\s]+)\s*$")


def _split_args(body: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def parse_preset(spec: str) -> GroupModel:
    """Build a group from a preset descriptor.

    Grammar: ``free:N``, ``abelian:D`` (alias ``free_abelian:D``, ``zd:D``),
    ``cyclic:M``, ``trivial:N``, ``freeprod:O1,O2,...`` (0 = infinite
    factor), ``table:PATH`` and ``prod(A,B)`` for direct products.
    """
    spec = spec.strip()
    if spec.startswith("prod(") and spec.endswith(")"):
        args = _split_args(spec[5:-1])
        if len(args) != 2:
            raise InvalidInputError(f"prod(...) takes exactly two factors: {spec!r}")
        return DirectProduct(parse_preset(args[0]), parse_preset(args[1]))
    if spec.startswith("table:"):
        path = spec[len("table:"):]
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInputError(f"cannot read finite table {path!r}: {exc}") from None
        return FiniteTableGroup.from_json(data, name=spec)
    m = _PRESET_RE.match(spec)
    if not m:
        raise InvalidInputError(f"unknown group preset {spec!r}")
    kind, raw = m.group(1).lower(), m.group(2)
    nums = [int(x) for x in raw.split(",") if x.strip()]
    if kind == "freeprod":
        return FreeProductOfCyclics(nums)
    if len(nums) != 1:
        raise InvalidInputError(f"preset {kind!r} takes one integer parameter")
    (v,) = nums
    if kind == "free":
        return FreeGroup(v)
    if kind in ("abelian", "free_abelian", "zd"):
        return FreeAbelianGroup(v)
    if kind == "cyclic":
        return CyclicGroup(v)
    if kind == "trivial":
        return trivial_group(v)
    raise InvalidInputError(f"unknown group preset {spec!r}")


def group_moment_sequence(
    G: GroupModel,
    K: int,
    generators=None,
    budget: int | None = None,
    lump: bool = True,
) -> MomentSequence:
    """Count identity words of each length 0..K exactly.

    ``generators`` overrides the model's generating list (used for images
    under a homomorphism).  Orbit lumping is only valid for the model's own
    generators, so it is disabled when an override is given.
    """
    if K < 0:
        raise InvalidInputError(f"K must be >= 0, got {K}")
    if budget is None:
        budget = memory_budget()
    letters = G.letters(generators)
    key = G.orbit_key if (lump and generators is None) else (lambda x: x)
    inv_letters = [G.invert(s) for s in letters]

    # state: orbit key -> (representative, walks from identity to it)
    state = {key(G.identity): (G.identity, 1)}
    values = [1]
    for step in range(1, K + 1):
        reps: dict = {}
        for x, _ in state.values():
            for s in letters:
                y = G.multiply(x, s)
                ky = key(y)
                if ky not in reps:
                    reps[ky] = y
        if len(reps) * BYTES_PER_ENTRY > budget:
            raise ResourceError(
                f"{G.name}: {len(reps)} states at k={step} exceed the memory budget "
                f"of {budget} bytes; attained k={step - 1}",
                attained_k=step - 1,
            )
        new_state = {}
        for ky, y in reps.items():
            total = 0
            for t in inv_letters:
                prev = state.get(key(G.multiply(y, t)))
                if prev is not None:
                    total += prev[1]
            new_state[ky] = (y, total)
        state = new_state
        ident = state.get(key(G.identity))
        values.append(ident[1] if ident else 0)
    tag = G.name if generators is None else f"{G.name}[images]"
    return MomentSequence(tuple(values), tag)


@dataclass
class Homomorphism:
    source: GroupModel
    target: GroupModel
    images: list
    source_spec: Any = None
    target_spec: Any = None

    def __post_init__(self):
        if len(self.images) != len(self.source.generators):
            raise HomomorphismError(
                f"{len(self.images)} images for {len(self.source.generators)} source generators"
            )
        self.images = [self.target.canonicalize(x) for x in self.images]

    def image_of_word(self, word):
        return self.target.evaluate(word, self.images)

    def spot_check(self, samples: int = 2000, max_len: int = 8, seed: int = 0) -> None:
        """Randomized well-definedness check.

        Words with equal values in the source must have equal images.
        Commutator and power words are mixed in so that typical relations
        are exercised.
        """
        rng = random.Random(seed)
        n = len(self.source.generators)
        seen: dict = {}

        def check(word):
            sv = self.source.evaluate(word)
            tv = self.image_of_word(word)
            prev = seen.setdefault(sv, (tv, word))
            if prev[0] != tv:
                raise HomomorphismError(
                    f"words {prev[1]} and {word} agree in the source but not in the target"
                )

        def rand_word(length):
            return [rng.choice([1, -1]) * rng.randint(1, n) for _ in range(length)]

        check([])
        for _ in range(samples):
            u = rand_word(rng.randint(0, max_len))
            check(u)
            v = rand_word(rng.randint(1, 3))
            w = rand_word(rng.randint(1, 3))
            check(v + w + [-x for x in reversed(v)] + [-x for x in reversed(w)])
            check(v * rng.randint(2, 6))


def load_homomorphism(data: dict) -> Homomorphism:
    def model(spec):
        if isinstance(spec, dict):
            return FiniteTableGroup.from_json(spec)
        return parse_preset(str(spec))

    try:
        source, target = model(data["source"]), model(data["target"])
        images = [target.decode(x) for x in data["images"]]
    except KeyError as exc:
        raise InvalidInputError(f"homomorphism JSON missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"malformed homomorphism JSON: {exc}") from None
    return Homomorphism(source, target, images, data["source"], data["target"])


def identity_homomorphism(G: GroupModel) -> Homomorphism:
    return Homomorphism(G, G, list(G.generators))


@dataclass
class PushForwardReport:
    source_tag: str
    target_tag: str
    source_values: tuple[int, ...]
    target_values: tuple[int, ...]
    holds: bool
    first_violation: int | None
    first_strict: int | None
    strict_indices: list[int] = field(default_factory=list)

    @property
    def kernel_nontrivial(self) -> bool:
        return self.holds and self.first_strict is not None

    @property
    def verdict(self) -> str:
        if not self.holds:
            return f"inequality violated at k={self.first_violation}"
        if self.first_strict is None:
            return f"no strictness found up to K={len(self.source_values) - 1}"
        return f"strict at k={self.first_strict}: non-trivial kernel"

    def to_json(self) -> dict:
        return {
            "source": self.source_tag,
            "target": self.target_tag,
            "source_values": [str(v) for v in self.source_values],
            "target_values": [str(v) for v in self.target_values],
            "holds": self.holds,
            "first_violation": self.first_violation,
            "first_strict": self.first_strict,
            "strict_indices": self.strict_indices,
            "kernel_nontrivial": self.kernel_nontrivial,
            "verdict": self.verdict,
        }


def compare_sequences(source: MomentSequence, target: MomentSequence) -> PushForwardReport:
    K = min(source.max_k, target.max_k)
    src, tgt = source.values[: K + 1], target.values[: K + 1]
    violation = next((k for k in range(K + 1) if src[k] > tgt[k]), None)
    strict = [k for k in range(K + 1) if src[k] < tgt[k]]
    return PushForwardReport(
        source.model_tag, target.model_tag, src, tgt,
        holds=violation is None,
        first_violation=violation,
        first_strict=strict[0] if strict else None,
        strict_indices=strict,
    )


def push_forward_check(phi: Homomorphism, K: int, budget: int | None = None,
                       samples: int = 2000) -> PushForwardReport:
    phi.spot_check(samples=samples)
    src = group_moment_sequence(phi.source, K, budget=budget)
    if phi.images == phi.target.generators:
        tgt = group_moment_sequence(phi.target, K, budget=budget)
    else:
        tgt = group_moment_sequence(phi.target, K, generators=phi.images, budget=budget)
    return compare_sequences(src, tgt)
