from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from freemoments.errors import InvalidInputError
from freemoments.partitions import (
    Partition,
    PartitionClass,
    admissible_positions,
    all_words,
    balanced,
    color_word,
    count,
    decompose_at,
    enumerate_partitions,
    in_class,
    is_noncrossing,
    join,
    juxtapose,
    nest,
    verify_block_inequality,
    word_sum,
)

from oracles import brute_class, set_partitions, union_find_join

P = Partition.from_blocks
CLASSES = ["nc", "nc2", "nc2c"]


def catalan(k):
    return comb(2 * k, k) // (k + 1)


@pytest.mark.parametrize("blocks,expected", [
    ([[1, 3], [2, 4]], False),
    ([[1, 4], [2, 3]], True),
    ([[1], [2], [3]], True),
    ([[1, 3, 5], [2], [4]], True),
    ([[1, 4], [2, 5], [3]], False),
])
def test_is_noncrossing(blocks, expected):
    assert is_noncrossing(P(blocks)) is expected


def test_partition_canonical_form():
    assert P([[4, 1], [3, 2]]) == P([[2, 3], [1, 4]])
    assert P([[4, 1], [3, 2]]).blocks == ((1, 4), (2, 3))
    with pytest.raises(InvalidInputError):
        P([[1, 2], [2, 3]])
    with pytest.raises(InvalidInputError):
        P([[1, 3]])


def test_color_word_parsing():
    assert color_word("1c1c") == "1c1c"
    assert color_word(["plain", "conj"]) == "1c"
    assert color_word("") == ""
    with pytest.raises(InvalidInputError):
        color_word("1x")


def test_enumerate_examples():
    assert enumerate_partitions("1c", "nc2c") == [P([[1, 2]])]
    assert enumerate_partitions("11", "nc2c") == []
    assert len(enumerate_partitions("1c11", "nc")) == 14
    for cls in CLASSES:
        assert enumerate_partitions("", cls) == [Partition.empty()]


def test_count_examples():
    assert count("1c1c", "nc2c") == 2
    assert count("11cc", "nc2c") == 1
    for w in ["1", "1c1", "11c1c"]:
        assert count(w, "nc2") == 0


@pytest.mark.parametrize("length", range(0, 11))
def test_enumeration_matches_brute_force(length):
    words = list(all_words(length))
    for i, eps in enumerate(words):
        # NC and NC2 ignore colors: a spread of words is enough for them
        classes = CLASSES if i % 97 == 0 or length < 8 else ["nc2c"]
        for cls in classes:
            got = enumerate_partitions(eps, cls)
            expected = brute_class(eps, cls)
            assert [p.blocks for p in got] == expected
            assert count(eps, cls) == len(expected)


def test_nc_count_is_catalan_and_color_blind():
    for k in range(0, 16):
        assert count("1" * k, "nc") == catalan(k)
        assert count("c1" * (k // 2) + "c" * (k % 2), "nc") == catalan(k)


def test_nc2c_vanishes_off_balanced_words():
    for eps in all_words(8):
        if not balanced(eps):
            assert count(eps, "nc2c") == 0


@pytest.mark.parametrize("k", range(0, 7))
def test_nc2c_word_sum(k):
    assert sum(count(w, "nc2c") for w in all_words(2 * k)) == 2**k * catalan(k)


def test_enumerate_is_deterministic_and_duplicate_free():
    a = enumerate_partitions("1c1cc1", "nc")
    b = enumerate_partitions("1c1cc1", "nc")
    assert a == b == sorted(a)
    assert len(set(a)) == len(a)


def test_in_class():
    assert in_class(P([[1, 2], [3, 4]]), "1cc1", PartitionClass.NC2C)
    assert not in_class(P([[1, 2], [3, 4]]), "11cc", PartitionClass.NC2C)
    assert in_class(P([[1, 2], [3, 4]]), "11cc", PartitionClass.NC2)
    assert not in_class(P([[1, 2, 3], [4]]), "1111", PartitionClass.NC2)


# -- join -------------------------------------------------------------------

def test_join_examples():
    assert join(P([[1, 2], [3, 4]]), P([[1, 4], [2, 3]])) == P([[1, 2, 3, 4]])
    p = P([[1, 3], [2], [4, 5]])
    assert join(p, p) == p
    assert join(p, Partition.singletons(5)) == p
    with pytest.raises(InvalidInputError):
        join(P([[1, 2]]), P([[1], [2], [3]]))


def partitions_of(k):
    return st.sampled_from([P(b, k) for b in set_partitions(k)])


@st.composite
def partition_triples(draw):
    k = draw(st.integers(0, 6))
    ps = partitions_of(k)
    return draw(ps), draw(ps), draw(ps)


def refines(p, q):
    owner = q.block_of()
    return all(len({owner[x] for x in b}) == 1 for b in p.blocks)


@given(partition_triples())
@settings(max_examples=300, deadline=None)
def test_join_lattice_laws(triple):
    p, q, r = triple
    assert join(p, q) == join(q, p)
    assert join(join(p, q), r) == join(p, join(q, r))
    assert join(p, p) == p
    pq = join(p, q)
    assert refines(p, pq) and refines(q, pq)
    assert pq.blocks == union_find_join(p.blocks, q.blocks, p.size)
    # monotone: p <= r implies p v q <= r v q
    if refines(p, r):
        assert refines(pq, join(r, q))


# -- word sums, juxtaposition, decomposition --------------------------------

def test_word_sum():
    assert word_sum("1c", "c1") == "1cc1"
    assert word_sum("1c", "") == "1c"
    assert word_sum("", "") == ""


def test_juxtapose():
    assert juxtapose(P([[1, 2]]), P([[1, 2]])) == P([[1, 2], [3, 4]])
    assert juxtapose(Partition.empty(), Partition.empty()) == Partition.empty()
    assert juxtapose(P([[1], [2]]), P([[1, 2]])) == P([[1], [2], [3, 4]])
    with pytest.raises(InvalidInputError):
        juxtapose(P([[1]]), P([[1, 2]]))


def test_decompose_at():
    assert decompose_at("1c1c1c", 2) == ("c1", "1c")
    assert decompose_at("1c1c1c", 1) == ("", "1c1c")
    assert decompose_at("1c1c1c", 3) == ("c1c1", "")
    with pytest.raises(InvalidInputError):
        decompose_at("1c1c", 3)
    with pytest.raises(InvalidInputError):
        decompose_at("1c1", 1)


@pytest.mark.parametrize("length", [2, 4, 6, 8])
def test_decompose_reassembles(length):
    for eps in all_words(length):
        for r in range(1, length // 2 + 1):
            s, s2 = decompose_at(eps, r)
            assert word_sum(word_sum(word_sum(eps[0], s), eps[2 * r - 1]), s2) == eps
            assert len(s) == 2 * r - 2


def test_admissible_positions():
    assert admissible_positions("1c1c1c") == {1, 2, 3}
    assert admissible_positions("1111") == set()
    assert admissible_positions("1c") == {1}
    with pytest.raises(InvalidInputError):
        admissible_positions("1c1")


def test_nest_examples():
    assert nest(1, Partition.empty(), P([[1, 2]])) == P([[1, 2], [3, 4]])
    inner = P([[1, 2]])
    assert nest(2, inner, Partition.empty()) == P([[1, 4], [2, 3]])
    with pytest.raises(InvalidInputError):
        nest(2, Partition.empty(), Partition.empty())


@pytest.mark.parametrize("length", [2, 4, 6, 8, 10])
def test_nest_injective_and_preserves_noncrossing(length):
    images = set()
    for r in range(1, length // 2 + 1):
        for p in enumerate_partitions("1" * (2 * r - 2), "nc"):
            for q in enumerate_partitions("1" * (length - 2 * r), "nc"):
                img = nest(r, p, q)
                assert is_noncrossing(img)
                assert img not in images
                images.add(img)


def test_verify_block_inequality_examples():
    rep = verify_block_inequality("1c1c", "nc2")
    assert (rep.lhs, rep.rhs, rep.injective) == (2, 2, True)
    rep = verify_block_inequality("1111", "nc2")
    assert (rep.lhs, rep.rhs) == (0, 2)
    assert rep.holds


@pytest.mark.parametrize("length", [2, 4, 6, 8])
def test_verify_block_inequality_small_exhaustive(length):
    for eps in all_words(length):
        for cls in CLASSES:
            assert verify_block_inequality(eps, cls).holds
