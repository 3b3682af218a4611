import random
from fractions import Fraction

import pytest

from lodaylab.fixtures import dual_numbers, dual_numbers_jacobi
from lodaylab.grading import InputError, axpy, e1, sign
from lodaylab.jacobi import (
    AlphaAntisymOp,
    GradedAlgebra,
    check_jacobi_structure,
    gm_bracket,
    pullback_stem,
    square_product,
    tilde,
)
from lodaylab.multilinear import MultiMap, is_graded_antisymmetric

from helpers import algebra_population, rand_op


def _pair(A, B):
    (wa, a), (wb, b) = A.bidegree, B.bidegree
    return wa.pair(wb) + a * b


def _plug(A, name):
    """A(v, -, ..): the first argument fixed to a basis vector."""
    table = {}
    for args, val in A.op.table.items():
        if args[0] == name:
            axpy(table.setdefault(args[1:], {}), Fraction(1), val)
    m = MultiMap(A.algebra.space, A.arity_index - 1, A.weight + A.algebra.space.degree(name), table)
    return AlphaAntisymOp(A.algebra, m, check=False)


def _population(seed, count, max_a=2):
    rng = random.Random(seed)
    algs = algebra_population()
    for _ in range(count):
        alg = rng.choice(algs)
        yield alg, rng, [rand_op(rng, alg, rng.randint(-1, max_a)) for _ in range(3)]


def test_gm_equals_pullback():
    for alg, _, (A, B, _) in _population(0, 150):
        assert gm_bracket(A, B).op == pullback_stem(A, B).op


def test_tilde_is_antisymmetric():
    for alg, _, (A, _, _) in _population(1, 40):
        if A.arity_index >= 0:
            assert is_graded_antisymmetric(tilde(A))


def test_gm_output_is_alpha_antisymmetric_and_antisymmetric_bracket():
    for alg, _, (A, B, _) in _population(2, 60):
        AB = gm_bracket(A, B)
        assert is_graded_antisymmetric(AB.op, alg.alpha)
        BA = gm_bracket(B, A)
        assert AB.op == BA.op * (-sign(_pair(A, B)))


def test_gm_jacobi_identity():
    for alg, _, (A, B, C) in _population(3, 60, max_a=1):
        lhs = gm_bracket(A, gm_bracket(B, C)).op
        rhs = gm_bracket(gm_bracket(A, B), C).op + gm_bracket(B, gm_bracket(A, C)).op * sign(_pair(A, B))
        assert lhs == rhs


def test_inductive_relation_on_basis_vectors():
    # [A,B](v) = (-1)^a [A, B(v)] + (-1)^<B + alpha b, v - alpha> [A(v), B]
    for alg, _, (A, B, _) in _population(4, 60):
        if A.arity_index < 0 or B.arity_index < 0:
            continue
        AB = gm_bracket(A, B)
        wb, b = B.bidegree
        for v in alg.space.names:
            lhs = _plug(AB, v).op
            t1 = gm_bracket(A, _plug(B, v)).op * sign(A.arity_index)
            t2 = gm_bracket(_plug(A, v), B).op * sign(wb.pair(alg.space.degree(v) - alg.alpha))
            assert lhs == t1 + t2


def test_base_cases():
    alg = dual_numbers()
    v = AlphaAntisymOp.element(alg, "eps")
    w = AlphaAntisymOp.element(alg, "1")
    assert gm_bracket(v, w).is_zero() and square_product(v, w).is_zero()
    X = AlphaAntisymOp(alg, MultiMap(alg.space, 0, [0], {("1",): {"eps": 1}, ("eps",): {"eps": 2}}))
    assert square_product(X, w).op.table == {(): {"eps": -1}}
    assert gm_bracket(X, w).op.table == {(): {"eps": -1}}
    assert square_product(w, X).is_zero()
    # [v, A] = -(-1)^(<v - alpha, A + alpha a> + a) [A, v]
    for alg, _, (A, _, _) in _population(5, 40):
        for name in alg.space.names:
            el = AlphaAntisymOp.element(alg, name)
            e = _pair(el, A)  # <v - alpha, A + alpha a> + (-1)a, same parity as the + a form
            assert gm_bracket(el, A).op == gm_bracket(A, el).op * (-sign(e))


def test_unary_square_product_is_minus_composition():
    alg = dual_numbers()
    X = AlphaAntisymOp(alg, MultiMap(alg.space, 0, [0], {("1",): {"eps": 1}}))
    Y = AlphaAntisymOp(alg, MultiMap(alg.space, 0, [0], {("eps",): {"eps": 1}, ("1",): {"1": 1}}))
    sq = square_product(X, Y).op
    # Y(1) = 1, Y(eps) = eps, so X(Y(v)) = X(v)
    for v in alg.space.names:
        assert sq(v) == {y: -c for y, c in X.op(v).items()}


def test_mismatched_algebras_are_rejected():
    A = AlphaAntisymOp.element(dual_numbers(), "eps")
    B = AlphaAntisymOp.element(dual_numbers(e1(1)), "eps")
    with pytest.raises(InputError):
        gm_bracket(A, B)


def test_algebra_validation():
    V = dual_numbers().space
    with pytest.raises(InputError):
        GradedAlgebra(V, MultiMap(V, 1, [0], {("1", "1"): {"1": 1}}), "1")


def _dual_bracket(c1, c2):
    alg = dual_numbers()
    val = {k: v for k, v in (("1", c1), ("eps", c2)) if v}
    table = {("1", "eps"): val, ("eps", "1"): {k: -v for k, v in val.items()}} if val else {}
    return AlphaAntisymOp(alg, MultiMap(alg.space, 1, [0], table))


def test_dual_numbers_exhaustive():
    for c1 in (-1, 0, 1):
        for c2 in (-1, 0, 1):
            pi = _dual_bracket(c1, c2)
            assert check_jacobi_structure(pi, "jacobi").ok == (c1 == 0)
            assert check_jacobi_structure(pi, "poisson").ok == (c1 == 0 and c2 == 0)


def test_jacobi_not_poisson_fixture():
    pi = dual_numbers_jacobi()
    rep = check_jacobi_structure(pi, "jacobi")
    assert rep.ok and rep.first_order and not rep.leibniz
    rep = check_jacobi_structure(pi, "poisson")
    assert not rep.ok and rep.bracket_squares_to_zero


def test_jacobi_input_errors():
    alg = dual_numbers()
    with pytest.raises(InputError):
        check_jacobi_structure(AlphaAntisymOp(alg, MultiMap(alg.space, 0, [0], {})))
    with pytest.raises(InputError):
        AlphaAntisymOp(alg, MultiMap(alg.space, 1, [0], {("1", "eps"): {"eps": 1}}))
