from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

from lodaylab.linalg import complement_units, independent_subset, inverse, mat_vec, nullspace, rank, rref, solve

from helpers import dense_rank

entry = st.integers(-3, 3)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = [{j: draw(entry) for j in range(c)} for _ in range(r)]
    return [{j: x for j, x in row.items() if x} for row in rows], c


@given(matrices())
def test_rank_matches_sympy(mc):
    rows, c = mc
    assert rank(rows) == dense_rank(rows, c)


@given(matrices())
def test_nullspace(mc):
    rows, c = mc
    ns = nullspace(rows, c)
    assert len(ns) == c - dense_rank(rows, c)
    for v in ns:
        assert all(x == 0 for x in mat_vec(rows, v))
    assert rank(ns) == len(ns)


@given(matrices(), st.lists(entry, min_size=5, max_size=5))
def test_solve_consistent_systems(mc, x0):
    rows, c = mc
    x = {j: Fraction(x0[j]) for j in range(c) if x0[j]}
    rhs = mat_vec(rows, x)
    sol = solve(rows, rhs, c)
    assert sol is not None
    assert mat_vec(rows, sol) == rhs


def test_solve_inconsistent():
    assert solve([{0: 1}, {0: 2}], [1, 1], 1) is None


def test_rref_pivots():
    red, piv = rref([{0: 2, 1: 4}, {0: 1, 1: 2, 2: 1}])
    assert piv == [0, 2]
    assert red[0] == {0: 1, 1: 2}


@settings(max_examples=50)
@given(st.lists(st.lists(entry, min_size=3, max_size=3), min_size=3, max_size=3))
def test_inverse_against_sympy(m):
    rows = [{j: x for j, x in enumerate(r) if x} for r in m]
    M = sympy.Matrix(m)
    inv = inverse(rows, 3)
    if M.det() == 0:
        assert inv is None
    else:
        Minv = M.inv()
        assert all(inv[i].get(j, 0) == Fraction(str(Minv[i, j])) for i in range(3) for j in range(3))


def test_independent_subset_and_complement():
    vecs = [{0: 1, 1: 1}, {0: 2, 1: 2}, {2: 1}]
    assert independent_subset(vecs) == [0, 2]
    comp = complement_units(vecs, 3)
    assert len(comp) == 1 and rank(vecs + [{comp[0]: 1}]) == 3
