"""Degrees, Koszul signs, unshuffles and finite graded vector spaces over Q.

Every sign in the package is computed from the pairing
``<u, v> = sum_i u_i v_i`` on Z^n degrees; only its parity matters.
Index sets (unshuffles) are 0-based tuples internally; the public
``enumerate_partitions`` speaks the 1-based language of N^(p).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping, Sequence


class LodayError(Exception):
    """Base class for errors raised by lodaylab."""


class InputError(LodayError, ValueError):
    """Malformed or inconsistent input (CLI exit code 2)."""


def sign(k: int) -> int:
    return -1 if k % 2 else 1


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad rational {x!r}") from exc
    if isinstance(x, float):
        raise InputError("floats are not accepted; use exact rationals")
    return Fraction(x)


class Degree(tuple):
    """An element of Z^n.

    Arithmetic is componentwise (``+``, ``-``, unary ``-``, ``k * d``);
    this deliberately replaces tuple concatenation/repetition.
    """

    __slots__ = ()

    def __new__(cls, components: Iterable[int] = ()):
        comps = tuple(int(c) for c in components)
        if not comps:
            raise InputError("a degree needs at least one component")
        return super().__new__(cls, comps)

    @classmethod
    def zero(cls, n: int) -> "Degree":
        return cls((0,) * n)

    @classmethod
    def unit(cls, n: int, i: int = 0) -> "Degree":
        return cls(1 if j == i else 0 for j in range(n))

    @property
    def n(self) -> int:
        return len(self)

    def _check(self, other) -> None:
        if len(other) != len(self):
            raise InputError(f"degree rank mismatch: {tuple(self)} vs {tuple(other)}")

    def __add__(self, other):
        self._check(other)
        return Degree(a + b for a, b in zip(self, other))

    __radd__ = __add__

    def __sub__(self, other):
        self._check(other)
        return Degree(a - b for a, b in zip(self, other))

    def __rsub__(self, other):
        self._check(other)
        return Degree(b - a for a, b in zip(self, other))

    def __neg__(self):
        return Degree(-a for a in self)

    def __mul__(self, k: int):
        return Degree(k * a for a in self)

    __rmul__ = __mul__

    def pair(self, other) -> int:
        self._check(other)
        return sum(a * b for a, b in zip(self, other))

    @property
    def parity(self) -> int:
        return self.pair(self) % 2

    @property
    def is_odd(self) -> bool:
        return self.parity == 1

    def __repr__(self) -> str:
        return f"Degree({list(self)})"


def e1(n: int) -> Degree:
    return Degree.unit(n, 0)


def koszul_sign(degrees: Sequence[Degree], order: Sequence[int]) -> int:
    """Sign of rearranging graded slots into natural order.

    ``order[k]`` is the index (into ``degrees``) of the object sitting at
    position ``k`` of the source arrangement; the target is
    ``0, 1, ..., len-1``. Each inverted pair (u, v) contributes
    ``(-1)^<u, v>``.
    """
    if len(degrees) != len(order):
        raise InputError("koszul_sign: degree list and permutation differ in length")
    if sorted(order) != list(range(len(order))):
        raise InputError(f"koszul_sign: {list(order)} is not a permutation")
    exponent = 0
    for k in range(len(order)):
        dk = degrees[order[k]]
        for ll in range(k + 1, len(order)):
            if order[k] > order[ll]:
                exponent += dk.pair(degrees[order[ll]])
    return sign(exponent)


def inversion_count(order: Sequence[int]) -> int:
    return sum(1 for k in range(len(order)) for ll in range(k + 1, len(order)) if order[k] > order[ll])


def permutation_sign(I: Sequence[int], J: Sequence[int]) -> int:
    """Signature of the permutation (I;J) -> I u J."""
    if set(I) & set(J):
        raise InputError(f"unshuffles {tuple(I)} and {tuple(J)} overlap")
    for block in (I, J):
        if any(block[k] >= block[k + 1] for k in range(len(block) - 1)):
            raise InputError(f"{tuple(block)} is not strictly increasing")
    return sign(sum(1 for i in I for j in J if i > j))


# --- unshuffle enumeration (0-based, cached) -------------------------------


@lru_cache(maxsize=None)
def two_part(m: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    """All (I, J) with I u J = {0..m-1}, I nonempty."""
    out = []
    idx = range(m)
    for size in range(1, m + 1):
        for I in combinations(idx, size):
            J = tuple(j for j in idx if j not in I)
            out.append((I, J))
    return tuple(out)


@lru_cache(maxsize=None)
def three_part(p: int, j_size: int | None = None):
    """All (I, J, K) with I u J u K = {0..p-1}, I, J < K (K nonempty).

    ``I, J < K`` forces I u J = {0..k1-1} and K = {k1..p-1}.
    """
    out = []
    for k1 in range(p):
        head = tuple(range(k1))
        K = tuple(range(k1, p))
        sizes = range(k1 + 1) if j_size is None else ([j_size] if 0 <= j_size <= k1 else [])
        for js in sizes:
            for J in combinations(head, js):
                I = tuple(i for i in head if i not in J)
                out.append((I, J, K))
    return tuple(out)


def _set_partitions(elements: tuple[int, ...]) -> Iterator[list[list[int]]]:
    if not elements:
        yield []
        return
    first, rest = elements[0], elements[1:]
    for part in _set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]
        yield [[first]] + part


@lru_cache(maxsize=None)
def block_partitions(p: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Ordered set partitions of {0..p-1} into nonempty blocks with increasing maxima."""
    out = []
    for part in _set_partitions(tuple(range(p))):
        blocks = sorted((tuple(sorted(b)) for b in part), key=lambda b: b[-1])
        out.append(tuple(blocks))
    out.sort(key=lambda bl: (len(bl), bl))
    return tuple(out)


PARTITION_SCHEMAS = ("two-part", "three-part", "blocks")


def enumerate_partitions(p: int, schema: str, j_size: int | None = None):
    """Index partitions in 1-based notation.

    ``two-part`` covers N^(p) with I nonempty (the coproduct uses p-1);
    ``three-part`` yields (I, J, K) with I, J < K, optionally |J| = j_size;
    ``blocks`` yields tuples of nonempty blocks with increasing maxima.
    """
    if p < 0:
        raise InputError("p must be nonnegative")
    shift = lambda t: tuple(i + 1 for i in t)  # noqa: E731
    if schema == "two-part":
        return [(shift(I), shift(J)) for I, J in two_part(p)]
    if schema == "three-part":
        return [(shift(I), shift(J), shift(K)) for I, J, K in three_part(p, j_size)]
    if schema == "blocks":
        return [tuple(shift(b) for b in bl) for bl in block_partitions(p)]
    raise InputError(f"unknown partition schema {schema!r}; expected one of {PARTITION_SCHEMAS}")


# --- spaces and vectors ----------------------------------------------------


class GradedSpace:
    """A finite-dimensional Z^n-graded space with a named homogeneous basis."""

    __slots__ = ("n", "basis", "_deg", "_index", "_parity", "_hash")

    def __init__(self, n: int, basis: Iterable[tuple[str, Iterable[int]]]):
        if int(n) < 1:
            raise InputError("grading rank n must be >= 1")
        self.n = int(n)
        items = []
        for name, deg in basis:
            d = deg if isinstance(deg, Degree) else Degree(deg)
            if len(d) != self.n:
                raise InputError(f"basis element {name!r} has a degree of rank {len(d)}, expected {self.n}")
            items.append((str(name), d))
        self.basis = tuple(items)
        self._deg = dict(self.basis)
        if len(self._deg) != len(self.basis):
            raise InputError("basis names must be unique")
        self._index = {name: k for k, (name, _) in enumerate(self.basis)}
        self._parity = {
            x: {y: dx.pair(dy) % 2 for y, dy in self.basis} for x, dx in self.basis
        }
        self._hash = hash((self.n, self.basis))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def degree(self, name: str) -> Degree:
        try:
            return self._deg[name]
        except KeyError:
            raise InputError(f"unknown basis element {name!r}") from None

    def index(self, name: str) -> int:
        return self._index[name]

    def __contains__(self, name) -> bool:
        return name in self._deg

    def pair_parity(self, x: str, y: str) -> int:
        return self._parity[x][y]

    def word_degree(self, word: Sequence[str]) -> Degree:
        d = Degree.zero(self.n)
        for x in word:
            d = d + self._deg[x]
        return d

    def degrees(self) -> list[Degree]:
        seen = []
        for _, d in self.basis:
            if d not in seen:
                seen.append(d)
        return seen

    def basis_of_degree(self, d) -> list[str]:
        return [name for name, dd in self.basis if dd == d]

    def shift(self, d) -> "GradedSpace":
        """Same basis, every degree moved by ``d``."""
        return GradedSpace(self.n, [(name, dd + d) for name, dd in self.basis])

    def down(self) -> "GradedSpace":
        """The desuspension: (down V)^a = V^(a + e1)."""
        return self.shift(-e1(self.n))

    def subspace(self, names: Iterable[str]) -> "GradedSpace":
        keep = set(names)
        return GradedSpace(self.n, [(x, d) for x, d in self.basis if x in keep])

    def direct_sum(self, other: "GradedSpace") -> "GradedSpace":
        if other.n != self.n:
            raise InputError("cannot add spaces with different grading rank")
        clash = set(self.names) & set(other.names)
        if clash:
            raise InputError(f"direct sum needs disjoint basis names; shared: {sorted(clash)}")
        return GradedSpace(self.n, self.basis + other.basis)

    def relabel(self, mapping: Mapping[str, str]) -> "GradedSpace":
        return GradedSpace(self.n, [(mapping.get(x, x), d) for x, d in self.basis])

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedSpace) and self.n == other.n and self.basis == other.basis

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{x}:{list(d)}" for x, d in self.basis)
        return f"GradedSpace(n={self.n}, [{inner}])"


def require_same_space(a: GradedSpace, b: GradedSpace, what: str = "operands") -> None:
    if a != b:
        raise InputError(f"{what} live on different spaces")


# sparse dict helpers shared by every module -------------------------------


def axpy(target: dict, coeff: Fraction, source: Mapping) -> None:
    """target += coeff * source, dropping zeros."""
    if not coeff:
        return
    for key, val in source.items():
        new = target.get(key, 0) + coeff * val
        if new:
            target[key] = new
        else:
            target.pop(key, None)


def add_term(target: dict, key, coeff) -> None:
    if not coeff:
        return
    new = target.get(key, 0) + coeff
    if new:
        target[key] = new
    else:
        target.pop(key, None)


class Vector:
    """A finite rational combination of basis names of one space."""

    __slots__ = ("space", "terms")

    def __init__(self, space: GradedSpace, terms: Mapping[str, object] | None = None):
        self.space = space
        clean = {}
        for name, c in (terms or {}).items():
            space.degree(name)
            c = to_fraction(c)
            if c:
                clean[name] = clean.get(name, 0) + c
        self.terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def basis_vector(cls, space: GradedSpace, name: str) -> "Vector":
        return cls(space, {name: 1})

    def degree(self) -> Degree | None:
        """The common degree of all terms; None for the zero vector.

        Raises InputError for an inhomogeneous vector.
        """
        degs = {self.space.degree(x) for x in self.terms}
        if len(degs) > 1:
            raise InputError("vector is not homogeneous")
        return degs.pop() if degs else None

    def is_zero(self) -> bool:
        return not self.terms

    def _combine(self, other: "Vector", s: int) -> "Vector":
        require_same_space(self.space, other.space)
        out = dict(self.terms)
        axpy(out, Fraction(s), other.terms)
        return Vector(self.space, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return Vector(self.space, {k: -v for k, v in self.terms.items()})

    def __mul__(self, c):
        c = to_fraction(c)
        return Vector(self.space, {k: c * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Vector) and self.space == other.space and self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{x}" for x, c in self.terms.items())


def all_words(space: GradedSpace, length: int) -> Iterator[tuple[str, ...]]:
    return product(space.names, repeat=length)
