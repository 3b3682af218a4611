"""The bundled example structures, plus random valid DGLodA instances."""
from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

from .grading import Degree, GradedSpace, all_words, e1
from .io import algebra_document, dumps, map_document, operator_document, space_to_json, structure_document
from .jacobi import AlphaAntisymOp, GradedAlgebra
from .multilinear import MapSequence, MultiMap
from .structures import Morphism, direct_sum, invert_linear, transport


def f1() -> MultiMap:
    """Two-dimensional Loday algebra: {x,x} = y, everything else zero."""
    V = GradedSpace(1, [("x", [0]), ("y", [0])])
    return MultiMap(V, 1, [0], {("x", "x"): {"y": 1}})


def f1_broken() -> MultiMap:
    """F1 plus {y,x} = x; the Jacobi identity fails at (x,x,x)."""
    V = GradedSpace(1, [("x", [0]), ("y", [0])])
    return MultiMap(V, 1, [0], {("x", "x"): {"y": 1}, ("y", "x"): {"x": 1}})


def f2() -> MapSequence:
    """Contractible complex w -> u, with u one degree above w."""
    V = GradedSpace(1, [("w", [0]), ("u", [1])])
    return MapSequence(V, e1(1), {1: MultiMap(V, 0, [1], {("w",): {"u": 1}})})


def f3() -> GradedSpace:
    """Z^2-graded space where the two generators pair trivially but are odd separately."""
    return GradedSpace(2, [("a", [1, 0]), ("b", [0, 1])])


def dual_numbers(alpha=None) -> GradedAlgebra:
    V = GradedSpace(1, [("1", [0]), ("eps", [0])])
    table = {("1", "1"): {"1": 1}, ("1", "eps"): {"eps": 1}, ("eps", "1"): {"eps": 1}}
    return GradedAlgebra(V, MultiMap(V, 1, [0], table), "1", alpha)


def dual_numbers_jacobi(c=1) -> AlphaAntisymOp:
    """{1, eps} = c eps: a Jacobi structure that is not Poisson for c != 0."""
    alg = dual_numbers()
    table = {("1", "eps"): {"eps": c}, ("eps", "1"): {"eps": -c}}
    return AlphaAntisymOp(alg, MultiMap(alg.space, 1, [0], table))


def loday_sequence(pi: MultiMap) -> MapSequence:
    return MapSequence(pi.space, e1(pi.space.n), {2: pi})


def dgloda() -> MapSequence:
    """F1 as pi_2 (pi_1 = 0) plus the contractible F2."""
    return direct_sum(loday_sequence(f1()), f2())


def random_basis_change(rng: random.Random, space: GradedSpace, coeffs=(-2, -1, 0, 1, 2)) -> MultiMap:
    """An invertible weight-0 linear map V -> V with small integer entries."""
    while True:
        table = {}
        for x in space.names:
            row = {y: Fraction(rng.choice(coeffs)) for y in space.basis_of_degree(space.degree(x))}
            row = {y: c for y, c in row.items() if c}
            if row:
                table[(x,)] = row
        m = MultiMap(space, 0, Degree.zero(space.n), table)
        if invert_linear(m) is not None:
            return m


def random_nonlinear(rng: random.Random, space: GradedSpace, max_p: int = 3, density: float = 0.4) -> Morphism:
    """A self-morphism (id, f_2, ..., f_max_p) with random small entries."""
    maps = {1: MultiMap.identity(space)}
    for p in range(2, max_p + 1):
        w = e1(space.n) * (1 - p)
        table = {}
        for args in all_words(space, p):
            row = {}
            for y in space.basis_of_degree(space.word_degree(args) + w):
                if rng.random() < density:
                    row[y] = Fraction(rng.choice((-1, 1)))
            if row:
                table[args] = row
        maps[p] = MultiMap(space, p - 1, w, table)
    return Morphism(space, space, maps)


def random_dgloda(rng: random.Random, max_arity: int = 4, nonlinear: bool = False) -> MapSequence:
    """A Loday algebra plus a contractible complex, mixed by a random change of coordinates.

    The Loday part is F1, a one-dimensional abelian algebra, or x acting on
    an odd z by {x,z} = z; the contractible part is F2. Total dimension
    stays at most 4.
    """
    loday_choices = [
        f1(),
        MultiMap(GradedSpace(1, [("x", [0])]), 1, [0], {}),
        MultiMap(GradedSpace(1, [("x", [0]), ("z", [1])]), 1, [0], {("x", "z"): {"z": 1}}),
    ]
    lod = rng.choice(loday_choices)
    seq = direct_sum(loday_sequence(lod), f2())
    f1_map = random_basis_change(rng, seq.space)
    out = transport(seq, Morphism.linear(f1_map), max_arity)
    if nonlinear:
        out = transport(out, random_nonlinear(rng, out.space), max_arity)
    return out


def write_fixtures(directory) -> list[Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    docs = {
        "f1.json": map_document(f1()),
        "f1-broken.json": map_document(f1_broken()),
        "f2.json": structure_document(f2()),
        "f3.json": {"space": space_to_json(f3())},
        "dual-numbers.json": algebra_document(dual_numbers()),
        "dual-numbers-jacobi.json": operator_document(dual_numbers_jacobi()),
        "dgloda.json": structure_document(dgloda()),
    }
    out = []
    for name, doc in docs.items():
        path = d / name
        path.write_text(dumps(doc))
        out.append(path)
    return out
