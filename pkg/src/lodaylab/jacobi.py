"""The Grabowski-Marmo bracket on alpha-antisymmetric operators of a graded
commutative algebra, and detection of graded Jacobi and Poisson structures.

An operator A of arity index a and weight A has bidegree (A + alpha a, a).
The map ~ reads the same table on the shifted space down A, where every
degree drops by alpha; it carries alpha-antisymmetry to plain graded
antisymmetry and is used to compare the bracket with the stem bracket.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .grading import (
    Degree,
    GradedSpace,
    InputError,
    all_words,
    axpy,
    koszul_sign,
    permutation_sign,
    sign,
)
from .multilinear import MultiMap, evaluate_vectors, is_graded_antisymmetric, stem_bracket
from itertools import combinations


class GradedAlgebra:
    """An associative, graded commutative, unital algebra given by structure constants."""

    def __init__(self, space: GradedSpace, product: MultiMap, unit: str, alpha=None, check: bool = True):
        self.space = space
        self.product = product
        self.unit = unit
        self.alpha = Degree.zero(space.n) if alpha is None else Degree(alpha)
        if len(self.alpha) != space.n:
            raise InputError("alpha has the wrong length")
        if check:
            self.validate()

    def validate(self) -> None:
        V, m = self.space, self.product
        if m.space != V or m.arity_index != 1 or any(m.weight):
            raise InputError("the product must be a weight-0 bilinear map on the algebra")
        if self.unit not in V:
            raise InputError(f"unknown unit {self.unit!r}")
        if any(self.space.degree(self.unit)):
            raise InputError("the unit must have degree 0")
        for x in V.names:
            if m(self.unit, x) != {x: 1} or m(x, self.unit) != {x: 1}:
                raise InputError(f"{self.unit} is not a unit on {x}")
        for u, v in all_words(V, 2):
            e = V.degree(u).pair(V.degree(v))
            if m(u, v) != {y: sign(e) * c for y, c in m(v, u).items()}:
                raise InputError(f"not graded commutative on ({u},{v})")
        for u, v, w in all_words(V, 3):
            left = evaluate_vectors(m, [m(u, v), {w: 1}])
            right = evaluate_vectors(m, [{u: 1}, m(v, w)])
            if left != right:
                raise InputError(f"not associative on ({u},{v},{w})")

    def mul(self, x: dict, y: dict) -> dict:
        return evaluate_vectors(self.product, [x, y])

    @property
    def down_space(self) -> GradedSpace:
        """down A: (down A)^g = A^(g + alpha)."""
        return self.space.shift(-self.alpha)


class AlphaAntisymOp:
    """An alpha-antisymmetric multilinear operator on an algebra (a >= -1)."""

    def __init__(self, algebra: GradedAlgebra, op: MultiMap, check: bool = True):
        if op.space != algebra.space or op.codomain != algebra.space:
            raise InputError("operator lives on another space")
        if op.arity_index < -2:
            raise InputError("arity index must be >= -2")
        self.algebra = algebra
        self.op = op
        if check and not is_graded_antisymmetric(op, algebra.alpha):
            raise InputError("operator is not alpha-graded antisymmetric")

    @property
    def arity_index(self) -> int:
        return self.op.arity_index

    @property
    def weight(self) -> Degree:
        return self.op.weight

    @property
    def alpha(self) -> Degree:
        return self.algebra.alpha

    @property
    def bidegree(self) -> tuple[Degree, int]:
        return (self.weight + self.alpha * self.arity_index, self.arity_index)

    def is_zero(self) -> bool:
        return self.op.is_zero()

    def __eq__(self, other) -> bool:
        return isinstance(other, AlphaAntisymOp) and self.op == other.op and self.alpha == other.alpha

    def __repr__(self) -> str:
        return f"AlphaAntisymOp(a={self.arity_index}, weight={list(self.weight)}, alpha={list(self.alpha)})"

    @classmethod
    def element(cls, algebra: GradedAlgebra, name: str, coeff=1) -> "AlphaAntisymOp":
        d = algebra.space.degree(name)
        return cls(algebra, MultiMap(algebra.space, -1, d, {(): {name: coeff}}))


def _require_same(A: AlphaAntisymOp, B: AlphaAntisymOp) -> None:
    if A.algebra.space != B.algebra.space or A.alpha != B.alpha:
        raise InputError("operators live on different algebras or use different alpha")


def _gm_pairing(A: AlphaAntisymOp, B: AlphaAntisymOp) -> int:
    (wa, a), (wb, b) = A.bidegree, B.bidegree
    return wa.pair(wb) + a * b


def _zero(A: AlphaAntisymOp, arity_index: int, weight: Degree) -> AlphaAntisymOp:
    return AlphaAntisymOp(A.algebra, MultiMap.zero(A.algebra.space, max(arity_index, -2), weight), check=False)


def square_product(A: AlphaAntisymOp, B: AlphaAntisymOp) -> AlphaAntisymOp:
    """A box B = (-1)^(1+ab) sum_{|I|=b+1,|J|=a} (-1)^(I;J) eps_down(I;J) A(B(V_I), V_J).

    Base cases: v box w = 0, A box v = (-1)^(1-a) A(v), v box A = 0.
    """
    _require_same(A, B)
    a, b = A.arity_index, B.arity_index
    space = A.algebra.space
    weight = A.weight + B.weight
    if a < 0:
        return _zero(A, a + b, weight)
    if b == -1:
        vec = B.op.table.get((), {})
        table: dict = {}
        for args, val in A.op.table.items():
            c = vec.get(args[0])
            if c:
                axpy(table.setdefault(args[1:], {}), c * sign(1 - a), val)
        table = {k: v for k, v in table.items() if v}
        return AlphaAntisymOp(A.algebra, MultiMap(space, a - 1, weight, table), check=False)
    if b < -1:
        return _zero(A, a + b, weight)
    p = a + b + 1
    down = A.algebra.down_space
    pre = sign(1 + a * b)
    splits = []
    for I in combinations(range(p), b + 1):
        J = tuple(j for j in range(p) if j not in I)
        splits.append((I, J, permutation_sign(I, J)))
    table = {}
    for args in all_words(space, p):
        degs = [down.degree(x) for x in args]
        acc: dict = {}
        for I, J, ps in splits:
            inner = B.op.table.get(tuple(args[i] for i in I))
            if not inner:
                continue
            s = pre * ps * koszul_sign(degs, I + J)
            rest = [{args[j]: 1} for j in J]
            axpy(acc, Fraction(s), evaluate_vectors(A.op, [inner] + rest))
        if acc:
            table[args] = acc
    return AlphaAntisymOp(A.algebra, MultiMap(space, a + b, weight, table, check=False), check=False)


def gm_bracket(A: AlphaAntisymOp, B: AlphaAntisymOp) -> AlphaAntisymOp:
    """[A,B] = A box B - (-1)^(<A+alpha a, B+alpha b> + ab) B box A."""
    _require_same(A, B)
    first = square_product(A, B)
    second = square_product(B, A)
    s = sign(_gm_pairing(A, B))
    op = first.op - second.op * s if first.op.arity_index == second.op.arity_index else first.op
    return AlphaAntisymOp(A.algebra, op, check=False)


def tilde(A: AlphaAntisymOp) -> MultiMap:
    """The same table on down A, with weight A + alpha a."""
    down = A.algebra.down_space
    wa, a = A.bidegree
    return MultiMap(down, a, wa, A.op.table, check=False)


def untilde(m: MultiMap, algebra: GradedAlgebra) -> AlphaAntisymOp:
    a = m.arity_index
    weight = m.weight - algebra.alpha * a
    return AlphaAntisymOp(algebra, MultiMap(algebra.space, a, weight, m.table, check=False), check=False)


def pullback_stem(A: AlphaAntisymOp, B: AlphaAntisymOp) -> AlphaAntisymOp:
    """The stem bracket of ~A and ~B on down A, read back through ~^{-1}."""
    _require_same(A, B)
    return untilde(stem_bracket(tilde(A), tilde(B)), A.algebra)


# --- graded Jacobi and Poisson structures ----------------------------------------------------


@dataclass
class JacobiReport:
    ok: bool
    kind: str
    bracket_squares_to_zero: bool
    first_order: bool  # the Leibniz rule with the -{u,1}vw correction
    leibniz: bool  # the strict Leibniz rule ({u,1} = 0)
    failures: list = field(default_factory=list)


def _leibniz_terms(pi: AlphaAntisymOp, u: str, v: str, w: str):
    """({u,vw}, {u,v}w + (-1)^<u+alpha,v> v{u,w}, {u,1}vw)."""
    alg = pi.algebra
    V, m, br = alg.space, alg.mul, pi.op
    lhs = evaluate_vectors(br, [{u: 1}, m({v: 1}, {w: 1})])
    rhs: dict = {}
    axpy(rhs, Fraction(1), m(br(u, v), {w: 1}))
    e = (V.degree(u) + alg.alpha).pair(V.degree(v))
    axpy(rhs, Fraction(sign(e)), m({v: 1}, br(u, w)))
    corr = m(br(u, alg.unit), m({v: 1}, {w: 1}))
    return lhs, rhs, corr


def check_jacobi_structure(pi: AlphaAntisymOp, kind: str = "jacobi") -> JacobiReport:
    """Is pi a graded Jacobi (or Poisson) structure of weight alpha?

    jacobi: [pi,pi] = 0 and {u,vw} = {u,v}w + (-1)^<u+alpha,v> v{u,w} - {u,1}vw;
    poisson: additionally {u,1} = 0, i.e. the strict Leibniz rule.
    Only the second slot is tested; the first follows by antisymmetry.
    """
    if kind not in ("jacobi", "poisson"):
        raise InputError("kind must be 'jacobi' or 'poisson'")
    if pi.arity_index != 1 or pi.weight != pi.alpha:
        raise InputError("a Jacobi structure is a bilinear operator of weight alpha")
    sq = gm_bracket(pi, pi)
    zero_sq = sq.is_zero()
    failures = []
    if not zero_sq:
        failures.append(("bracket", next(iter(sq.op.table))))
    first_order = strict = True
    V = pi.algebra.space
    for u, v, w in all_words(V, 3):
        lhs, rhs, corr = _leibniz_terms(pi, u, v, w)
        with_corr = dict(rhs)
        axpy(with_corr, Fraction(-1), corr)
        if lhs != with_corr:
            first_order = False
            failures.append(("first-order", (u, v, w)))
        if lhs != rhs:
            strict = False
            if kind == "poisson":
                failures.append(("leibniz", (u, v, w)))
    ok = zero_sq and first_order and (strict or kind == "jacobi")
    return JacobiReport(ok, kind, zero_sq, first_order, strict, failures)
