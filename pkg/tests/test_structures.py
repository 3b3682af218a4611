import random

import pytest

from lodaylab.coalgebra import is_codifferential, phi
from lodaylab.fixtures import dgloda, f1, f1_broken, f2, loday_sequence, random_dgloda, random_nonlinear
from lodaylab.grading import GradedSpace, InputError, all_words, e1
from lodaylab.multilinear import MapSequence, MultiMap
from lodaylab.structures import (
    CheckFailed,
    Morphism,
    check_lod_infinity,
    check_loday,
    check_morphism,
    class_coordinates,
    compose,
    conjugate,
    direct_sum,
    full_check_arity,
    invert_morphism,
    is_quasi_isomorphism,
    linear_cohomology,
    morphism_sides_explicit,
    transport,
)

from helpers import coalgebra_morphism_sides, rand_morphism, rand_seq, rand_space


def test_f1_is_loday():
    rep = check_loday(f1())
    assert rep.ok and rep.failures == []


def test_broken_f1_fails_at_xxx():
    rep = check_loday(f1_broken())
    assert not rep.ok
    assert ("x", "x", "x") in [t for t, _ in rep.failures]


def test_check_loday_rejects_wrong_bidegree():
    V = GradedSpace(1, [("x", [0]), ("u", [1])])
    with pytest.raises(InputError):
        check_loday(MultiMap(V, 1, [1], {("x", "x"): {"u": 1}}))


def test_lod_infinity_fixtures():
    assert check_lod_infinity(loday_sequence(f1())).ok
    assert check_lod_infinity(f2()).ok
    assert check_lod_infinity(dgloda()).ok
    rep = check_lod_infinity(loday_sequence(f1_broken()))
    assert not rep.ok and rep.failing_p == 4  # s + t = 4: pi_2 composed with pi_2


def test_lod_infinity_detects_non_square_zero_differential():
    V = GradedSpace(1, [("a", [0]), ("b", [1]), ("c", [2])])
    d = MultiMap(V, 0, [1], {("a",): {"b": 1}, ("b",): {"c": 1}})
    rep = check_lod_infinity(MapSequence(V, [1], {1: d}))
    assert not rep.ok and rep.failing_p == 2


def test_lod_infinity_needs_odd_base_weight():
    V = GradedSpace(1, [("a", [0])])
    with pytest.raises(InputError):
        check_lod_infinity(MapSequence(V, [2], {}))


def test_lod_infinity_matches_codifferential():
    rng = random.Random(0)
    for _ in range(30):
        V = rand_space(rng, rng.choice((1, 2)), rng.randint(1, 2))
        seq = rand_seq(rng, V, e1(V.n), rng.randint(1, 3), 0.3)
        ok, _ = is_codifferential(phi(seq), 3)
        assert check_lod_infinity(seq, 3).ok == ok


def test_full_check_arity():
    assert full_check_arity(loday_sequence(f1())) == 3


def test_direct_sum():
    s = direct_sum(loday_sequence(f1()), f2())
    assert s.space.names == ("x", "y", "w", "u")
    assert s[2]("x", "x") == {"y": 1} and s[1]("w") == {"u": 1}
    with pytest.raises(InputError):
        direct_sum(loday_sequence(f1()), MapSequence(f2().space, [3]))


# --- morphisms -----------------------------------------------------------------------------------


def _random_triple(rng):
    n = rng.choice((1, 2))
    V = rand_space(rng, n, rng.randint(1, 2))
    W = rand_space(rng, n, rng.randint(1, 2), prefix="w")
    return rand_seq(rng, V, e1(n), 3), rand_seq(rng, W, e1(n), 3), rand_morphism(rng, V, W, 3)


def test_explicit_sides_equal_coalgebra_sides_termwise():
    # holds for arbitrary (not necessarily valid) data
    rng = random.Random(1)
    for _ in range(15):
        pi, pt, f = _random_triple(rng)
        for p in range(1, 4):
            L, R = coalgebra_morphism_sides(f, pi, pt, p)
            for word in all_words(f.source, p):
                left, right = morphism_sides_explicit(f, pi, pt, word)
                assert left == L.table.get(word, {})
                assert right == R.table.get(word, {})


def test_literal_omega_reading_breaks_the_condition():
    # the two readings first differ for a block of even length after an odd block, so p = 4
    rng = random.Random(2)
    mismatches = 0
    for _ in range(6):
        V = rand_space(rng, 1, 3, -1, 2)
        W = rand_space(rng, 1, 3, -1, 2, prefix="w")
        pi, pt = rand_seq(rng, V, e1(1), 4, 0.9), rand_seq(rng, W, e1(1), 4, 0.9)
        f = rand_morphism(rng, V, W, 4, 0.9)
        L, _ = coalgebra_morphism_sides(f, pi, pt, 4)
        for word in all_words(V, 4):
            left, _ = morphism_sides_explicit(f, pi, pt, word, omega_reading="literal")
            mismatches += left != L.table.get(word, {})
            assert morphism_sides_explicit(f, pi, pt, word)[0] == L.table.get(word, {})
    assert mismatches > 0


def test_identity_and_transport_are_morphisms():
    rng = random.Random(3)
    for _ in range(3):
        pi = random_dgloda(rng)
        assert check_morphism(Morphism.identity(pi.space), pi, pi).ok
        f = random_nonlinear(rng, pi.space)
        pt = transport(pi, f, 4)
        rep = check_morphism(f, pi, pt, 4)
        assert rep.ok and rep.coalgebraic_ok


def test_broken_morphism_is_reported():
    pi = dgloda()
    V = pi.space
    bad = Morphism(V, V, {1: MultiMap(V, 0, [0], {("x",): {"x": 2}, ("y",): {"y": 1}, ("w",): {"w": 1}, ("u",): {"u": 1}})})
    rep = check_morphism(bad, pi, pi, 3)
    assert not rep.ok and rep.failing_p == 2


def test_inverse_morphism():
    rng = random.Random(4)
    for _ in range(5):
        V = rand_space(rng, 1, 2)
        from lodaylab.fixtures import random_basis_change

        f = rand_morphism(rng, V, V, 3, linear=random_basis_change(rng, V))
        g = invert_morphism(f, 4)
        ident = Morphism.identity(V)
        assert compose(g, f, 4) == ident and compose(f, g, 4) == ident


def test_invert_requires_bijective_linear_part():
    V = GradedSpace(1, [("x", [0]), ("y", [0])])
    f = Morphism(V, V, {1: MultiMap(V, 0, [0], {("x",): {"x": 1}})})
    with pytest.raises(CheckFailed):
        invert_morphism(f, 3)


def test_conjugate_requires_identity_linear_part():
    pi = dgloda()
    V = pi.space
    f = Morphism(V, V, {1: MultiMap(V, 0, [0], {(x,): {x: 2} for x in V.names})})
    with pytest.raises(InputError):
        conjugate(pi, f)
    rng = random.Random(5)
    g = random_nonlinear(rng, V)
    out = conjugate(pi, g, 4)
    assert check_lod_infinity(out, 4).ok
    assert check_morphism(g, pi, out, 4).ok


# --- cohomology of the linear part ---------------------------------------------------------------


def test_linear_cohomology_of_fixtures():
    H = linear_cohomology(f2().space, f2()[1])
    assert all(len(h) == 0 for _, _, h in H.values())
    s = dgloda()
    H = linear_cohomology(s.space, s[1])
    assert sum(len(h) for _, _, h in H.values()) == 2


def test_projection_is_quasi_isomorphism():
    s = dgloda()
    F1 = loday_sequence(f1())
    proj = Morphism(s.space, F1.space, {1: MultiMap(s.space, 0, [0], {("x",): {"x": 1}, ("y",): {"y": 1}}, codomain=F1.space)})
    assert check_morphism(proj, s, F1, 3).ok
    assert is_quasi_isomorphism(proj, s, F1)
    assert class_coordinates(s.space, s[1], {"x": 1}) == (1, 0)
