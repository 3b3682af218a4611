from math import comb

import pytest
from hypothesis import given, strategies as st

from lodaylab.grading import (
    Degree,
    GradedSpace,
    InputError,
    Vector,
    block_partitions,
    e1,
    enumerate_partitions,
    koszul_sign,
    permutation_sign,
    three_part,
    two_part,
)

degrees = st.lists(st.integers(-3, 3), min_size=2, max_size=2).map(Degree)


def bell(p):
    # Bell numbers by the triangle; ordered-by-maxima block partitions are counted by them
    row = [1]
    for _ in range(p):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def test_degree_arithmetic():
    a, b = Degree([1, 2]), Degree([3, -1])
    assert a + b == Degree([4, 1])
    assert a - b == Degree([-2, 3])
    assert -a == Degree([-1, -2])
    assert a * 3 == Degree([3, 6])
    assert a.pair(b) == 1
    assert e1(3) == Degree([1, 0, 0])
    assert e1(2).is_odd and not Degree([1, 1]).is_odd


def test_degree_rank_mismatch():
    with pytest.raises(InputError):
        Degree([1]) + Degree([1, 0])


@given(degrees, degrees)
def test_pairing_symmetric(a, b):
    assert a.pair(b) == b.pair(a)


@given(st.lists(degrees, min_size=1, max_size=5), st.data())
def test_koszul_sign_is_a_character(ds, data):
    # sign(sigma o tau) computed directly equals the product over the two steps
    n = len(ds)
    sigma = data.draw(st.permutations(range(n)))
    tau = data.draw(st.permutations(range(n)))
    direct = koszul_sign(ds, [sigma[t] for t in tau])
    mid = [ds[i] for i in sigma]
    assert direct == koszul_sign(ds, sigma) * koszul_sign(mid, tau)


def test_koszul_sign_odd_swap():
    odd, even = Degree([1]), Degree([2])
    assert koszul_sign([odd, odd], [1, 0]) == -1
    assert koszul_sign([odd, even], [1, 0]) == 1


def test_permutation_sign():
    assert permutation_sign((0, 2), (1,)) == -1
    assert permutation_sign((0, 1), (2,)) == 1
    with pytest.raises(InputError):
        permutation_sign((1, 0), ())


@pytest.mark.parametrize("m", range(0, 6))
def test_two_part_counts(m):
    assert len(two_part(m)) == 2 ** m - 1


@pytest.mark.parametrize("p", range(1, 6))
def test_three_part_counts(p):
    # I u J = {0..k1-1}, K = {k1..p-1}: sum over k1 of 2^k1
    assert len(three_part(p)) == sum(2 ** k for k in range(p))
    for js in range(p):
        assert len(three_part(p, js)) == sum(comb(k, js) for k in range(p))


@pytest.mark.parametrize("p", range(1, 7))
def test_block_partitions_are_set_partitions(p):
    parts = block_partitions(p)
    assert len(parts) == bell(p)
    for bl in parts:
        assert sorted(i for b in bl for i in b) == list(range(p))
        assert all(bl[r][-1] < bl[r + 1][-1] for r in range(len(bl) - 1))


def test_enumerate_partitions_one_based():
    assert enumerate_partitions(2, "two-part") == [((1,), (2,)), ((2,), (1,)), ((1, 2), ())]
    assert ((1,), (), (2,)) in enumerate_partitions(2, "three-part")
    assert enumerate_partitions(2, "blocks") == [((1, 2),), ((1,), (2,))]
    with pytest.raises(InputError):
        enumerate_partitions(2, "nope")


def test_space_basics():
    V = GradedSpace(2, [("a", [1, 0]), ("b", [0, 1]), ("c", [1, 0])])
    assert V.dim == 3 and V.basis_of_degree(Degree([1, 0])) == ["a", "c"]
    assert V.word_degree(("a", "b")) == Degree([1, 1])
    assert V.down().degree("b") == Degree([-1, 1])
    assert V.pair_parity("a", "a") == 1 and V.pair_parity("a", "b") == 0
    W = V.subspace(["b"])
    assert W.names == ("b",)
    with pytest.raises(InputError):
        V.direct_sum(W)
    with pytest.raises(InputError):
        GradedSpace(1, [("a", [0]), ("a", [1])])


def test_vector_homogeneity():
    V = GradedSpace(1, [("a", [0]), ("b", [1])])
    v = Vector(V, {"a": 2}) + Vector(V, {"a": -2})
    assert v.is_zero()
    assert Vector(V, {"b": "1/2"}).degree() == Degree([1])
    assert v.degree() is None
    with pytest.raises(InputError):
        Vector(V, {"a": 1, "b": 1}).degree()
