"""Homogeneous multilinear maps and the two stem brackets.

A :class:`MultiMap` of arity index ``a`` is an (a+1)-linear map stored as a
sparse table ``args -> {basis name: coefficient}``. Arity index -1 encodes a
plain vector (a 0-ary map, table key ``()``), and -2 the zero space, so that
brackets with elements of V stay inside one type.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product
from math import factorial
from typing import Iterable, Mapping

from .grading import (
    Degree,
    GradedSpace,
    InputError,
    Vector,
    axpy,
    e1,
    inversion_count,
    require_same_space,
    sign,
    three_part,
    to_fraction,
)


class MultiMap:
    __slots__ = ("space", "arity_index", "weight", "table", "codomain")

    def __init__(
        self,
        space: GradedSpace,
        arity_index: int,
        weight,
        table: Mapping | None = None,
        codomain: GradedSpace | None = None,
        check: bool = True,
    ):
        self.space = space
        self.codomain = space if codomain is None else codomain
        self.arity_index = int(arity_index)
        self.weight = weight if isinstance(weight, Degree) else Degree(weight)
        if self.arity_index < -2:
            raise InputError("arity index must be >= -2")
        if len(self.weight) != space.n or self.codomain.n != space.n:
            raise InputError("weight rank differs from the grading rank")
        clean: dict[tuple, dict] = {}
        for args, value in (table or {}).items():
            args = tuple(args)
            if isinstance(value, Vector):
                value = value.terms
            out = {}
            for name, c in value.items():
                c = to_fraction(c) if check else c
                if c:
                    out[name] = out.get(name, 0) + c
            out = {k: v for k, v in out.items() if v}
            if out:
                clean[args] = out
        self.table = clean
        if check:
            self._validate()

    def _validate(self) -> None:
        if self.arity_index == -2 and self.table:
            raise InputError("the arity -2 component is the zero space")
        arity = self.arity_index + 1
        for args, out in self.table.items():
            if len(args) != arity:
                raise InputError(f"entry {args} has {len(args)} arguments, expected {arity}")
            target = self.space.word_degree(args) + self.weight
            for name in out:
                if self.codomain.degree(name) != target:
                    raise InputError(
                        f"entry {args} -> {name}: degree {list(self.codomain.degree(name))} "
                        f"violates weight {list(self.weight)} (expected {list(target)})"
                    )

    # -- basic structure ---------------------------------------------------
    @property
    def arity(self) -> int:
        return self.arity_index + 1

    @property
    def bidegree(self) -> tuple[Degree, int]:
        return self.weight, self.arity_index

    @classmethod
    def zero(cls, space, arity_index, weight, codomain=None) -> "MultiMap":
        return cls(space, arity_index, weight, {}, codomain=codomain)

    @classmethod
    def element(cls, vector: Vector) -> "MultiMap":
        """A vector of V viewed in M^(A,-1)(V) = V^A."""
        d = vector.degree()
        if d is None:
            raise InputError("the zero vector has no degree; use MultiMap.zero(space, -1, A)")
        return cls(vector.space, -1, d, {(): vector.terms})

    @classmethod
    def identity(cls, space: GradedSpace) -> "MultiMap":
        return cls(space, 0, Degree.zero(space.n), {(x,): {x: 1} for x in space.names})

    @classmethod
    def from_function(cls, space, arity_index, weight, fn, codomain=None) -> "MultiMap":
        from .grading import all_words

        table = {}
        for args in all_words(space, arity_index + 1):
            val = fn(args)
            if val:
                table[args] = val
        return cls(space, arity_index, weight, table, codomain=codomain)

    def __call__(self, *args: str) -> dict:
        return self.table.get(tuple(args), {})

    def vector(self) -> Vector:
        if self.arity_index != -1:
            raise InputError("only arity -1 maps are vectors")
        return Vector(self.codomain, self.table.get((), {}))

    def is_zero(self) -> bool:
        return not self.table

    def same_kind(self, other: "MultiMap") -> bool:
        return (
            self.space == other.space
            and self.codomain == other.codomain
            and self.arity_index == other.arity_index
        )

    def _lin(self, other: "MultiMap", s: int) -> "MultiMap":
        if not self.same_kind(other):
            raise InputError("cannot add maps of different spaces or arities")
        if self.weight != other.weight and not (self.is_zero() or other.is_zero()):
            raise InputError("cannot add maps of different weights")
        weight = other.weight if self.is_zero() else self.weight
        table = {k: dict(v) for k, v in self.table.items()}
        for args, val in other.table.items():
            row = table.setdefault(args, {})
            axpy(row, Fraction(s), val)
            if not row:
                del table[args]
        return MultiMap(self.space, self.arity_index, weight, table, codomain=self.codomain, check=False)

    def __add__(self, other):
        return self._lin(other, 1)

    def __sub__(self, other):
        return self._lin(other, -1)

    def __neg__(self):
        return self * -1

    def __mul__(self, c):
        c = to_fraction(c)
        table = {k: {x: c * v for x, v in val.items()} for k, val in self.table.items()} if c else {}
        return MultiMap(self.space, self.arity_index, self.weight, table, codomain=self.codomain, check=False)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiMap) or not self.same_kind(other):
            return False
        if self.table != other.table:
            return False
        return self.is_zero() or self.weight == other.weight

    def __repr__(self) -> str:
        return (
            f"MultiMap(arity_index={self.arity_index}, weight={list(self.weight)}, "
            f"{len(self.table)} entries)"
        )

    def items(self):
        return self.table.items()

    def relabel(self, mapping: Mapping[str, str], space=None, codomain=None) -> "MultiMap":
        sp = space or self.space.relabel(mapping)
        cod = codomain or (sp if self.codomain == self.space else self.codomain.relabel(mapping))
        table = {
            tuple(mapping.get(x, x) for x in args): {mapping.get(y, y): c for y, c in val.items()}
            for args, val in self.table.items()
        }
        return MultiMap(sp, self.arity_index, self.weight, table, codomain=cod)

    def restrict(self, space: GradedSpace, codomain: GradedSpace | None = None) -> "MultiMap":
        """Restrict arguments to ``space`` and drop output terms outside ``codomain``."""
        cod = codomain or space
        table = {}
        for args, val in self.table.items():
            if all(x in space for x in args):
                out = {y: c for y, c in val.items() if y in cod}
                if out:
                    table[args] = out
        return MultiMap(space, self.arity_index, self.weight, table, codomain=cod)

    def embed(self, space: GradedSpace, codomain: GradedSpace | None = None) -> "MultiMap":
        """Same table viewed on a larger space (zero on the new basis elements)."""
        return MultiMap(space, self.arity_index, self.weight, self.table, codomain=codomain or space)


def element(vector: Vector) -> MultiMap:
    return MultiMap.element(vector)


def evaluate_vectors(A: MultiMap, vectors: Iterable[Mapping[str, Fraction]]) -> dict:
    """A(u_1, ..., u_k) for sparse coefficient dicts u_i (plain multilinearity)."""
    vectors = list(vectors)
    out: dict = {}
    for combo in product(*(list(v.items()) for v in vectors)):
        coeff = Fraction(1)
        for _, c in combo:
            coeff *= c
        val = A.table.get(tuple(x for x, _ in combo))
        if val:
            axpy(out, coeff, val)
    return out


# --- insertion and the Z^(n+1)-graded stem bracket ---------------------------


def _require_pair(A: MultiMap, B: MultiMap) -> None:
    require_same_space(A.space, B.space, "bracket operands")
    if A.codomain != A.space or B.codomain != B.space:
        raise InputError("brackets need endomorphic maps V^k -> V")


def insertion(A: MultiMap, B: MultiMap) -> MultiMap:
    """The insertion j_B A: B plugged into A, summed over unshuffles.

    (j_B A)(v_1..v_{a+b+1}) = (-1)^<A,B> sum_{I,J<K, |J|=b}
        (-1)^(<B,V_I> + b|I|) (-1)^(I;J) eps(I;J) A(V_I, B(V_J, v_k1), V_K\\k1)
    """
    _require_pair(A, B)
    a, b = A.arity_index, B.arity_index
    if a < 0 or b < 0:
        raise InputError("insertion needs arity indices >= 0")
    space = A.space
    p = a + b + 1
    par = space._parity
    wA, wB = A.weight, B.weight
    pre = sign(wA.pair(wB))
    wB_par = {x: wB.pair(space.degree(x)) % 2 for x in space.names}
    parts = [
        (I, J, K, inversion_count(I + J))
        for I, J, K in three_part(p, b)
    ]
    table: dict = {}
    Btab, Atab = B.table, A.table
    for args in product(space.names, repeat=p):
        acc: dict = {}
        for I, J, K, inv in parts:
            inner = Btab.get(tuple(args[j] for j in J) + (args[K[0]],))
            if not inner:
                continue
            e = inv + b * len(I)
            for i in I:
                e += wB_par[args[i]]
                for j in J:
                    if j < i:
                        e += par[args[i]][args[j]]
            s = pre * sign(e)
            head = tuple(args[i] for i in I)
            tail = tuple(args[k] for k in K[1:])
            for c, coef in inner.items():
                val = Atab.get(head + (c,) + tail)
                if val:
                    axpy(acc, s * coef, val)
        if acc:
            table[args] = acc
    return MultiMap(space, a + b, wA + wB, table, check=False)


def stem_pairing(A: MultiMap, B: MultiMap) -> int:
    """The Z^(n+1) pairing <(A,a),(B,b)> = <A,B> + ab."""
    return A.weight.pair(B.weight) + A.arity_index * B.arity_index


def _plug_first(A: MultiMap, v: MultiMap) -> MultiMap:
    """A(v, -, ..., -) for a vector v given as an arity -1 map."""
    vec = v.table.get((), {})
    table: dict = {}
    for args, val in A.table.items():
        c = vec.get(args[0])
        if c:
            row = table.setdefault(args[1:], {})
            axpy(row, c, val)
            if not row:
                del table[args[1:]]
    return MultiMap(A.space, A.arity_index - 1, A.weight + v.weight, table, check=False)


def stem_bracket(A: MultiMap, B: MultiMap) -> MultiMap:
    """[A,B] = j_A B - (-1)^(<A,B>+ab) j_B A on M_r(V), extended to V.

    For an element v (arity -1) the extension is [A, v] = (-1)^(1-a) A(v, ...),
    [v, A] by graded antisymmetry, and [v, w] = 0; with a Loday bracket pi this
    gives [pi, v] = pi(v, -).
    """
    _require_pair(A, B)
    a, b = A.arity_index, B.arity_index
    if a == -2 or b == -2:
        return MultiMap.zero(A.space, max(a + b, -2), A.weight + B.weight)
    if a >= 0 and b >= 0:
        return insertion(B, A) - insertion(A, B) * sign(stem_pairing(A, B))
    if a == -1 and b == -1:
        return MultiMap.zero(A.space, -2, A.weight + B.weight)
    if b == -1:
        return _plug_first(A, B) * sign(1 - a)
    # a == -1, b >= 0
    return stem_bracket(B, A) * (-sign(stem_pairing(A, B)))


# --- sequences ---------------------------------------------------------------


class MapSequence:
    """A finitely supported (pi_1, pi_2, ...) with weight(pi_p) = Q + (1-p) e1."""

    __slots__ = ("space", "base_weight", "maps")

    def __init__(self, space: GradedSpace, base_weight, maps: Mapping[int, MultiMap] | None = None):
        self.space = space
        self.base_weight = base_weight if isinstance(base_weight, Degree) else Degree(base_weight)
        if len(self.base_weight) != space.n:
            raise InputError("base weight rank differs from the grading rank")
        clean = {}
        for p, m in (maps or {}).items():
            p = int(p)
            if p < 1:
                raise InputError("sequence positions start at 1")
            if m.space != space or m.codomain != space:
                raise InputError(f"map at position {p} lives on another space")
            if m.arity_index != p - 1:
                raise InputError(f"map at position {p} must have arity index {p - 1}")
            expected = self.weight_at(p)
            if not m.is_zero() and m.weight != expected:
                raise InputError(
                    f"map at position {p} has weight {list(m.weight)}, the sequence rule requires {list(expected)}"
                )
            if not m.is_zero():
                clean[p] = MultiMap(space, p - 1, expected, m.table, check=False)
        self.maps = dict(sorted(clean.items()))

    def weight_at(self, p: int) -> Degree:
        return self.base_weight + e1(self.space.n) * (1 - p)

    def __getitem__(self, p: int) -> MultiMap:
        m = self.maps.get(p)
        return m if m is not None else MultiMap.zero(self.space, p - 1, self.weight_at(p))

    def support(self) -> list[int]:
        return list(self.maps)

    @property
    def max_position(self) -> int:
        return max(self.maps, default=0)

    def is_zero(self) -> bool:
        return not self.maps

    def truncate(self, N: int) -> "MapSequence":
        return MapSequence(self.space, self.base_weight, {p: m for p, m in self.maps.items() if p <= N})

    def _lin(self, other: "MapSequence", s: int) -> "MapSequence":
        require_same_space(self.space, other.space)
        if self.base_weight != other.base_weight and not (self.is_zero() or other.is_zero()):
            raise InputError("cannot add sequences of different degrees")
        base = other.base_weight if self.is_zero() else self.base_weight
        maps = {}
        for p in set(self.maps) | set(other.maps):
            m = self[p] + other[p] * s if p in self.maps else other[p] * s
            maps[p] = m
        return MapSequence(self.space, base, maps)

    def __add__(self, other):
        return self._lin(other, 1)

    def __sub__(self, other):
        return self._lin(other, -1)

    def __neg__(self):
        return self * -1

    def __mul__(self, c):
        return MapSequence(self.space, self.base_weight, {p: m * c for p, m in self.maps.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, MapSequence) or self.space != other.space:
            return False
        if self.maps.keys() != other.maps.keys():
            return False
        if any(self.maps[p].table != other.maps[p].table for p in self.maps):
            return False
        return self.is_zero() or self.base_weight == other.base_weight

    def __repr__(self) -> str:
        return f"MapSequence(base_weight={list(self.base_weight)}, support={self.support()})"


def single(m: MultiMap, base_weight=None) -> MapSequence:
    """The sequence concentrated at position arity(m)."""
    p = m.arity
    base = m.weight + e1(m.space.n) * (p - 1) if base_weight is None else base_weight
    return MapSequence(m.space, base, {p: m})


def sequence_bracket(pi: MapSequence, rho: MapSequence, max_position: int | None = None) -> MapSequence:
    """[pi, rho] = sum_q sum_{s+t=q+1} (-1)^(1+(s-1)<e1,rho>) [pi_s, rho_t]."""
    require_same_space(pi.space, rho.space, "sequence bracket operands")
    rho1 = rho.base_weight[0]
    acc: dict[int, MultiMap] = {}
    for s, ps in pi.maps.items():
        for t, rt in rho.maps.items():
            q = s + t - 1
            if max_position is not None and q > max_position:
                continue
            term = stem_bracket(ps, rt) * sign(1 + (s - 1) * rho1)
            acc[q] = acc[q] + term if q in acc else term
    return MapSequence(pi.space, pi.base_weight + rho.base_weight, acc)


def bracket(x, y, max_position: int | None = None):
    """Dispatch to the stem bracket on maps or on sequences."""
    if isinstance(x, MapSequence) and isinstance(y, MapSequence):
        return sequence_bracket(x, y, max_position)
    if isinstance(x, MultiMap) and isinstance(y, MultiMap):
        return stem_bracket(x, y)
    raise InputError("bracket operands must both be maps or both be sequences")


# --- graded antisymmetry -----------------------------------------------------


def _perm_character(space: GradedSpace, args: tuple, perm: tuple) -> int:
    """sgn(perm) * Koszul sign of moving args into the order args[perm[k]]."""
    e = 0
    for k in range(len(perm)):
        for ll in range(k + 1, len(perm)):
            if perm[k] > perm[ll]:
                e += 1 + space.pair_parity(args[perm[k]], args[perm[ll]])
    return sign(e)


def antisymmetrize(A: MultiMap) -> MultiMap:
    """(1/k!) sum_sigma sgn(sigma) eps(sigma) A(v_sigma(1), ..., v_sigma(k))."""
    k = A.arity
    if k <= 1:
        return A
    space = A.space
    perms = list(permutations(range(k)))
    norm = Fraction(1, factorial(k))
    table: dict = {}
    for args in product(space.names, repeat=k):
        acc: dict = {}
        for perm in perms:
            val = A.table.get(tuple(args[i] for i in perm))
            if val:
                axpy(acc, norm * _perm_character(space, args, perm), val)
        if acc:
            table[args] = acc
    return MultiMap(space, A.arity_index, A.weight, table, codomain=A.codomain, check=False)


def is_graded_antisymmetric(A: MultiMap, shift=None) -> bool:
    """A(.., u, v, ..) = -(-1)^<u+s, v+s> A(.., v, u, ..) on adjacent swaps.

    ``shift`` s defaults to 0; the alpha-antisymmetry of the Jacobi module
    uses s = alpha.
    """
    space = A.space
    s = Degree.zero(space.n) if shift is None else Degree(shift)
    for args, val in A.table.items():
        for i in range(len(args) - 1):
            u, v = args[i], args[i + 1]
            swapped = args[:i] + (v, u) + args[i + 2:]
            e = (space.degree(u) + s).pair(space.degree(v) + s)
            other = A.table.get(swapped, {})
            expect = {x: -sign(e) * c for x, c in val.items()}
            if other != expect:
                return False
    return True


def is_sequence_antisymmetric(seq: MapSequence) -> bool:
    return all(is_graded_antisymmetric(m) for m in seq.maps.values())
