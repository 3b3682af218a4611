"""Random generators and independent oracles shared by the tests."""
from __future__ import annotations

import random
from fractions import Fraction

import sympy

from lodaylab.coalgebra import composite_corestriction, desuspend, phi
from lodaylab.grading import Degree, GradedSpace, all_words, e1
from lodaylab.jacobi import AlphaAntisymOp, GradedAlgebra, untilde
from lodaylab.multilinear import MapSequence, MultiMap, antisymmetrize
from lodaylab.structures import Morphism


def rand_space(rng: random.Random, n: int, dim: int, lo: int = -1, hi: int = 1, prefix: str = "v") -> GradedSpace:
    return GradedSpace(n, [(f"{prefix}{i}", [rng.randint(lo, hi) for _ in range(n)]) for i in range(dim)])


def rand_map(rng, V, a, weight=None, density=0.6, codomain=None, coeffs=(-2, -1, 1, 2)) -> MultiMap:
    """A random homogeneous (a+1)-linear map; the weight is read off a random
    (args, output) pair when not given, so the map is usually nonzero."""
    W = codomain or V
    if a == -1:
        y = rng.choice(W.names)
        return MultiMap(V, -1, W.degree(y), {(): {y: rng.choice(coeffs)}}, codomain=codomain)
    if weight is None:
        args = tuple(rng.choice(V.names) for _ in range(a + 1))
        weight = W.degree(rng.choice(W.names)) - V.word_degree(args)
    table = {}
    for args in all_words(V, a + 1):
        row = {y: rng.choice(coeffs) for y in W.basis_of_degree(V.word_degree(args) + weight) if rng.random() < density}
        if row:
            table[args] = row
    return MultiMap(V, a, weight, table, codomain=codomain)


def rand_seq(rng, V, Q=None, max_p=3, density=0.5) -> MapSequence:
    Q = e1(V.n) if Q is None else Degree(Q)
    return MapSequence(V, Q, {p: rand_map(rng, V, p - 1, Q + e1(V.n) * (1 - p), density) for p in range(1, max_p + 1)})


def rand_morphism(rng, V, W, max_p=3, density=0.5, linear=None) -> Morphism:
    maps = {}
    for p in range(1, max_p + 1):
        if p == 1 and linear is not None:
            maps[1] = linear
            continue
        maps[p] = rand_map(rng, V, p - 1, e1(V.n) * (1 - p), density, codomain=W)
    return Morphism(V, W, maps)


ACCEPTANCE_LINES: list[str] = []  # filled by the acceptance suite, printed by conftest


def coalgebra_morphism_sides(f, pi, pt, p):
    """(pr Q' F, pr F Q) on T^p, desuspended back to maps V^p -> V'."""
    V, W = f.source, f.target
    F, Qs, Qt = f.to_cohomomorphism(), phi(pi), phi(pt)
    Q = pi.base_weight
    left = composite_corestriction(Qt, F, p, V.down(), Q, codomain=W.down())
    right = composite_corestriction(F, Qs, p, V.down(), Q, codomain=W.down())
    return desuspend(left, V, W), desuspend(right, V, W)


def dense_rank(rows: list[dict], ncols: int) -> int:
    """Rank through sympy's dense rational matrices (independent of lodaylab.linalg)."""
    if not rows or ncols == 0:
        return 0
    M = sympy.zeros(len(rows), ncols)
    for i, r in enumerate(rows):
        for j, c in r.items():
            M[i, j] = sympy.Rational(Fraction(c).numerator, Fraction(c).denominator)
    return M.rank()


# --- graded commutative algebras -----------------------------------------------------------


def square_zero_algebra(n: int, degrees, alpha=None) -> GradedAlgebra:
    """1 + span(x_i) with all products of generators zero."""
    V = GradedSpace(n, [("1", [0] * n)] + [(f"x{i}", d) for i, d in enumerate(degrees)])
    table = {("1", x): {x: 1} for x in V.names}
    table.update({(x, "1"): {x: 1} for x in V.names})
    return GradedAlgebra(V, MultiMap(V, 1, [0] * n, table), "1", alpha)


def truncated_polynomials(n: int, degree, alpha=None) -> GradedAlgebra:
    """Q[x]/(x^3) with x of an even degree."""
    d2 = [2 * c for c in degree]
    V = GradedSpace(n, [("1", [0] * n), ("x", list(degree)), ("x2", d2)])
    power = {"1": 0, "x": 1, "x2": 2}
    name = {0: "1", 1: "x", 2: "x2"}
    table = {(a, b): {name[power[a] + power[b]]: 1} for a in V.names for b in V.names if power[a] + power[b] < 3}
    return GradedAlgebra(V, MultiMap(V, 1, [0] * n, table), "1", alpha)


def algebra_population() -> list[GradedAlgebra]:
    out = []
    for n in (1, 2):
        E = list(e1(n))
        zero = [0] * n
        for alpha in (Degree.zero(n), e1(n)):
            out.append(square_zero_algebra(n, [zero], alpha))  # dual numbers
            out.append(square_zero_algebra(n, [E], alpha))  # odd generator
            out.append(square_zero_algebra(n, [E, zero[:-1] + [1]] if n == 2 else [E, [2]], alpha))
            out.append(truncated_polynomials(n, zero, alpha))
            out.append(truncated_polynomials(n, [2] + zero[1:], alpha))
    return out


def rand_op(rng, alg: GradedAlgebra, a: int, density=0.7) -> AlphaAntisymOp:
    """A random alpha-antisymmetric operator: antisymmetrize on down A and read back."""
    if a == -1:
        y = rng.choice(alg.space.names)
        return AlphaAntisymOp.element(alg, y, rng.choice((1, 2, -1)))
    D = alg.down_space
    m = rand_map(rng, D, a, density=density)
    return untilde(antisymmetrize(m), alg)
