"""Formal deformations of a canonical element, obstructions and the gauge action.

The graded Lie algebra is either (M_r(V), stem bracket) with elements
MultiMap, or the sequence algebra with elements MapSequence; the code
below only uses the bracket, linear combinations and the degree pairing,
so both cases share one implementation. Sequence cochains are truncated at
a position bound ``max_position`` (default 4) when linear systems are
solved.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from .cohomology import cell_basis, flatten
from .grading import Degree, InputError, LodayError, e1
from .linalg import solve
from .multilinear import MapSequence, MultiMap, bracket, stem_pairing


def degree_of(x) -> tuple:
    if isinstance(x, MultiMap):
        return (x.weight, x.arity_index)
    if isinstance(x, MapSequence):
        return (x.base_weight,)
    raise InputError("deformation elements must be maps or sequences")


def pairing(x, y) -> int:
    if isinstance(x, MultiMap):
        return stem_pairing(x, y)
    return x.base_weight.pair(y.base_weight)


def is_odd(x) -> bool:
    return pairing(x, x) % 2 == 1


def zero_like(x, degree=None):
    if isinstance(x, MultiMap):
        w, a = degree if degree is not None else (x.weight, x.arity_index)
        return MultiMap.zero(x.space, a, w)
    base = degree[0] if degree is not None else x.base_weight
    return MapSequence(x.space, base)


def _is_zero(x) -> bool:
    return x.is_zero()


def _flat(x) -> dict:
    if isinstance(x, MultiMap):
        return flatten(x)
    return {(p,) + k: c for p, m in x.maps.items() for k, c in flatten(m).items()}


@dataclass
class FormalDeformation:
    """pi_nu = pi + nu pi_1 + ... + nu^q pi_q."""

    base: object
    terms: list = field(default_factory=list)

    def __post_init__(self):
        deg = degree_of(self.base)
        self.terms = [t if t is not None else zero_like(self.base) for t in self.terms]
        for i, t in enumerate(self.terms, start=1):
            if not _is_zero(t) and degree_of(t) != deg:
                raise InputError(f"coefficient pi_{i} is not of the degree of pi")

    @property
    def order(self) -> int:
        return len(self.terms)

    def coefficient(self, i: int):
        if i == 0:
            return self.base
        if 1 <= i <= len(self.terms):
            return self.terms[i - 1]
        return zero_like(self.base)


def _br(x, y, max_position):
    if isinstance(x, MapSequence):
        return bracket(x, y, max_position)
    return bracket(x, y)


def _sum(items, like):
    acc = None
    for it in items:
        if it.is_zero():
            continue
        acc = it if acc is None else acc + it
    return acc if acc is not None else like


def order_condition(d: FormalDeformation, p: int, max_position: int | None = None):
    """sum_{i+j=p} {pi_i, pi_j}."""
    like = zero_like(d.base, _double_degree(d.base))
    return _sum((_br(d.coefficient(i), d.coefficient(p - i), max_position) for i in range(p + 1)), like)


def _double_degree(x):
    if isinstance(x, MultiMap):
        return (x.weight * 2, 2 * x.arity_index)
    return (x.base_weight * 2,)


@dataclass
class DeformationReport:
    ok: bool
    failing_order: int | None


def deformation_check(d: FormalDeformation, max_position: int | None = None) -> DeformationReport:
    """The order-p conditions for p = 1..q."""
    for p in range(1, d.order + 1):
        if not order_condition(d, p, max_position).is_zero():
            return DeformationReport(False, p)
    return DeformationReport(True, None)


def obstruction_cochain(d: FormalDeformation, max_position: int | None = None):
    """E_{q+1} = sum_{i+j=q+1, i,j>=1} {pi_i, pi_j}, so that the next condition is E = -2 d(pi_{q+1})."""
    q = d.order
    like = zero_like(d.base, _double_degree(d.base))
    return _sum((_br(d.coefficient(i), d.coefficient(q + 1 - i), max_position) for i in range(1, q + 1)), like)


# --- solving d(x) = target --------------------------------------------------------------------


def _unknown_basis(pi, degree, max_position):
    """Basis elements of the cochain space of the given degree."""
    if isinstance(pi, MultiMap):
        w, a = degree
        return [MultiMap(pi.space, a, w, {args: {y: 1}}, check=False) for args, y in cell_basis(pi.space, w, a)]
    (base,) = degree
    out = []
    E = e1(pi.space.n)
    for p in range(1, max_position + 1):
        w = base + E * (1 - p)
        for args, y in cell_basis(pi.space, w, p - 1):
            out.append(MapSequence(pi.space, base, {p: MultiMap(pi.space, p - 1, w, {args: {y: 1}}, check=False)}))
    return out


def solve_coboundary(pi, target, degree, max_position: int = 4):
    """Some x of the given degree with [pi, x] = target (sequences compared up to max_position), or None."""
    basis = _unknown_basis(pi, degree, max_position)
    mp = max_position if isinstance(pi, MapSequence) else None
    images = [_flat(_br(pi, b, mp)) for b in basis]
    tgt = _flat(target.truncate(max_position) if isinstance(target, MapSequence) else target)
    keys: dict = {}
    for img in images:
        for k in img:
            keys.setdefault(k, len(keys))
    for k in tgt:
        keys.setdefault(k, len(keys))
    rows = [dict() for _ in keys]
    for j, img in enumerate(images):
        for k, c in img.items():
            rows[keys[k]][j] = c
    rhs = [Fraction(0)] * len(keys)
    for k, c in tgt.items():
        rhs[keys[k]] = c
    sol = solve(rows, rhs, len(basis))
    if sol is None:
        return None
    return _sum((basis[j] * c for j, c in sol.items()), zero_like(pi, degree))


@dataclass
class ObstructionReport:
    cocycle: bool
    extendable: bool
    obstruction: object
    next_term: object | None


def obstruction_class(d: FormalDeformation, max_position: int = 4) -> ObstructionReport:
    """Is E_{q+1} a coboundary?  If so, return one pi_{q+1} with E_{q+1} = -2 d(pi_{q+1})."""
    rep = deformation_check(d, max_position if isinstance(d.base, MapSequence) else None)
    if not rep.ok:
        raise LodayError(f"not a deformation: the order-{rep.failing_order} condition fails")
    mp = max_position if isinstance(d.base, MapSequence) else None
    E = obstruction_cochain(d, mp)
    cocycle = _br(d.base, E, mp).is_zero() if not E.is_zero() else True
    if E.is_zero():
        return ObstructionReport(cocycle, True, E, zero_like(d.base))
    x = solve_coboundary(d.base, E * Fraction(-1, 2), degree_of(d.base), max_position)
    return ObstructionReport(cocycle, x is not None, E, x)


# --- gauge action -------------------------------------------------------------------------------


def _compositions(total: int, parts: int):
    """Ordered tuples of `parts` positive integers summing to total."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def gauge_action(d: FormalDeformation, chi: Sequence, order: int | None = None,
                 max_position: int | None = None) -> FormalDeformation:
    """exp(ad chi_nu) pi_nu up to nu^order; chi = [chi_1, chi_2, ...] of degree 0.

    The nu^p coefficient is sum_k 1/k! sum_{i_1+..+i_k+j=p} {chi_i1, {.., {chi_ik, pi_j}..}};
    terms with k > p vanish because every chi index is >= 1.
    """
    q = d.order if order is None else order
    zero_deg = _zero_degree(d.base)
    for i, c in enumerate(chi, start=1):
        if c is not None and not c.is_zero() and degree_of(c) != zero_deg:
            raise InputError(f"chi_{i} must have degree 0")
    chis = [None] + [c for c in chi]

    def chi_at(i):
        return chis[i] if i < len(chis) and chis[i] is not None else None

    mp = max_position if isinstance(d.base, MapSequence) else None
    terms = []
    for p in range(1, q + 1):
        acc = d.coefficient(p)
        for k in range(1, p + 1):
            coeff = Fraction(1, factorial(k))
            for j in range(0, p - k + 1):
                for idx in _compositions(p - j, k):
                    if any(chi_at(i) is None for i in idx):
                        continue
                    val = d.coefficient(j)
                    for i in reversed(idx):
                        if val.is_zero():
                            break
                        val = _br(chi_at(i), val, mp)
                    if not val.is_zero():
                        acc = acc + val * coeff
        terms.append(acc)
    return FormalDeformation(d.base, terms)


def _zero_degree(x):
    if isinstance(x, MultiMap):
        return (Degree.zero(x.space.n), 0)
    return (Degree.zero(x.space.n),)


def first_order_equivalent(pi, first: object, second: object, max_position: int = 4) -> bool:
    """pi_1 - pi_1' lies in the image of d_pi (infinitesimal equivalence)."""
    diff = first - second
    if diff.is_zero():
        return True
    return solve_coboundary(pi, diff, _zero_degree(pi), max_position) is not None


@dataclass
class StraighteningResult:
    chis: list  # one gauge series per step, each [chi_1, ..., chi_q]
    result: FormalDeformation
    residual_order: int  # every coefficient below this order vanishes


def straighten(d: FormalDeformation, max_position: int = 4) -> StraighteningResult:
    """Gauge the deformation to pi + O(nu^{q+1}) step by step.

    At step k the lowest surviving coefficient pi_k is a cocycle; when it
    is a coboundary d(chi) the gauge nu^k chi removes it without touching
    lower orders. Raises LodayError when some pi_k is not a coboundary.
    """
    cur = d
    chis = []
    for k in range(1, d.order + 1):
        term = cur.coefficient(k)
        if term.is_zero():
            continue
        x = solve_coboundary(d.base, term, _zero_degree(d.base), max_position)
        if x is None:
            raise LodayError(f"order {k} coefficient is not a coboundary; the deformation is not trivial")
        series = [None] * (k - 1) + [x]
        chis.append(series)
        cur = gauge_action(cur, series, d.order, max_position)
    for k in range(1, d.order + 1):
        if not cur.coefficient(k).is_zero():
            raise LodayError("internal: straightening left a nonzero coefficient")
    return StraighteningResult(chis, cur, d.order + 1)
