"""Coboundary operators and exact cohomology tables over finite windows.

A cell (A, a) stands for the finite-dimensional space M^(A,a)(V) of
(a+1)-linear maps of weight A; its basis is the set of pairs
(argument tuple, output basis name) of matching degree. Differentials are
arbitrary Python callables on MultiMaps, so the same table code serves
the graded Loday operator, the p-ary operator and the Lod-infinity
operator in its shifted bigrading.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .grading import Degree, GradedSpace, InputError, all_words, axpy, e1, sign
from .linalg import rank
from .multilinear import MapSequence, MultiMap, evaluate_vectors, sequence_bracket, stem_bracket
from .structures import require_loday_bidegree


def cell_basis(space: GradedSpace, weight, arity_index: int) -> list[tuple]:
    """Basis of M^(A,a)(V) as (args, output) pairs; arity -1 gives ((), y)."""
    w = Degree(weight)
    if arity_index < -1:
        return []
    out = []
    for args in all_words(space, arity_index + 1):
        target = space.word_degree(args) + w
        for y in space.basis_of_degree(target):
            out.append((args, y))
    return out


def basis_cochain(space: GradedSpace, weight, arity_index: int, element: tuple) -> MultiMap:
    args, y = element
    return MultiMap(space, arity_index, weight, {args: {y: 1}}, check=False)


def flatten(m: MultiMap) -> dict:
    """A cochain as a sparse vector keyed by (args, output)."""
    return {(args, y): c for args, val in m.table.items() for y, c in val.items()}


# --- graded Loday coboundary, written out -----------------------------------------------


def loday_coboundary(pi: MultiMap, B: MultiMap) -> MultiMap:
    """(d B)(v_1..v_{b+2}) for the bracket {-,-} = pi, term by term.

    (-1)^(b+1) {B(v_1..v_{b+1}), v_{b+2}}
    - sum_i (-1)^(i-1) (-1)^<B + v_1 + .. + v_{i-1}, v_i> {v_i, B(v_1..^v_i..v_{b+2})}
    + sum_{j <= i <= b+1} (-1)^(j+1) (-1)^<v_j, v_{j+1} + .. + v_i>
          B(v_1..^v_j..v_i, {v_j, v_{i+1}}, v_{i+2}..v_{b+2})

    For b = -1 (B a vector v) this is (d v)(w) = {v, w}.
    """
    require_loday_bidegree(pi)
    V = pi.space
    if B.space != V:
        raise InputError("cochain lives on another space")
    b = B.arity_index
    if b < -1:
        return MultiMap.zero(V, -1, B.weight)
    wB = B.weight
    table = {}
    for args in all_words(V, b + 2):
        degs = [V.degree(x) for x in args]
        acc: dict = {}
        head = B.table.get(args[: b + 1])
        if head:
            axpy(acc, Fraction(sign(b + 1)), evaluate_vectors(pi, [head, {args[b + 1]: 1}]))
        for i in range(1, b + 2):
            rest = args[: i - 1] + args[i:]
            val = B.table.get(rest)
            if not val:
                continue
            d = wB
            for k in range(i - 1):
                d = d + degs[k]
            e = (i - 1) + d.pair(degs[i - 1])
            axpy(acc, Fraction(-sign(e)), evaluate_vectors(pi, [{args[i - 1]: 1}, val]))
        for i in range(1, b + 2):
            for j in range(1, i + 1):
                inner = pi(args[j - 1], args[i])
                if not inner:
                    continue
                e = j + 1
                for k in range(j, i):
                    e += degs[j - 1].pair(degs[k])
                before = args[: j - 1] + args[j:i]
                after = args[i + 1:]
                vecs = [{x: 1} for x in before] + [inner] + [{x: 1} for x in after]
                axpy(acc, Fraction(sign(e)), evaluate_vectors(B, vecs))
        if acc:
            table[args] = acc
    return MultiMap(V, b + 1, wB, table, check=False)


def loday_differential(pi: MultiMap) -> Callable[[MultiMap], MultiMap]:
    """d_pi = [pi, -] on M(V), including the arity -1 extension."""
    require_loday_bidegree(pi)
    return lambda B: stem_bracket(pi, B)


# --- tables ---------------------------------------------------------------------------------


@dataclass
class CellReport:
    label: tuple
    cochains: int
    cocycles: int
    coboundaries: int

    @property
    def cohomology(self) -> int:
        return self.cocycles - self.coboundaries


@dataclass
class CohomologyReport:
    cells: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {c.label: c.cohomology for c in self.cells}

    def __getitem__(self, label):
        for c in self.cells:
            if c.label == label:
                return c
        raise KeyError(label)


def _image_rank(space, d, weight, arity_index) -> int:
    rows = []
    for el in cell_basis(space, weight, arity_index):
        rows.append(flatten(d(basis_cochain(space, weight, arity_index, el))))
    return _rank_keyed(rows)


def _rank_keyed(rows: Iterable[dict]) -> int:
    index: dict = {}
    out = []
    for r in rows:
        out.append({index.setdefault(k, len(index)): c for k, c in r.items()})
    return rank(out)


def cohomology_table(
    space: GradedSpace,
    d: Callable[[MultiMap], MultiMap],
    cells: Iterable[tuple],
    previous: Callable[[tuple], tuple | None],
    cochain_cell: Callable[[tuple], tuple] = lambda c: c,
) -> CohomologyReport:
    """dim H per labelled cell of a complex of multilinear maps.

    ``cochain_cell(label)`` gives the (weight, arity_index) of the cochain
    space behind a label, and ``previous(label)`` the label whose image lands
    in it (None when that space is zero). Kernels use d on the cell itself,
    images enlarge the domain by exactly one step, so no window closure
    beyond one step is ever needed.
    """
    report = CohomologyReport()
    for label in cells:
        w, a = cochain_cell(label)
        basis = cell_basis(space, w, a)
        r = _image_rank(space, d, w, a) if basis else 0
        prev = previous(label)
        if prev is None:
            im = 0
        else:
            pw, pa = cochain_cell(prev)
            im = _image_rank(space, d, pw, pa) if pa >= -1 else 0
        z = len(basis) - r
        if im > z:
            raise InputError(f"the operator does not square to zero at cell {label}")
        report.cells.append(CellReport(label, len(basis), z, im))
    return report


def window(weights: Iterable, arity_min: int, arity_max: int) -> list[tuple]:
    return [(Degree(w), a) for w in weights for a in range(arity_min, arity_max + 1)]


def loday_cohomology(pi: MultiMap, weights: Iterable, arity_min: int = -1, arity_max: int = 2) -> CohomologyReport:
    """Graded Loday cohomology of (V, pi) on the window weights x [arity_min, arity_max]."""
    if arity_min < -1:
        raise InputError("arity_min must be >= -1")
    d = loday_differential(pi)
    cells = window(weights, arity_min, arity_max)

    def previous(label):
        w, a = label
        return (w, a - 1) if a - 1 >= -1 else None

    return cohomology_table(pi.space, d, cells, previous)


# --- p-ary structures and the Lod-infinity operator -------------------------------------------


def require_p_ary(pi_p: MultiMap, p: int) -> None:
    if p % 2:
        raise InputError("p-ary Loday structures need p even")
    if pi_p.arity != p or any(pi_p.weight) or pi_p.codomain != pi_p.space:
        raise InputError(f"a {p}-ary structure is a weight-0 {p}-linear map V^{p} -> V")


def check_p_ary(pi_p: MultiMap, p: int) -> bool:
    require_p_ary(pi_p, p)
    return stem_bracket(pi_p, pi_p).is_zero()


def p_ary_sequence(pi_p: MultiMap, p: int) -> MapSequence:
    require_p_ary(pi_p, p)
    return MapSequence(pi_p.space, e1(pi_p.space.n) * (p - 1), {p: pi_p})


def plain_table(pi_p: MultiMap, p: int, weights, arity_min: int = 0, arity_max: int = 3) -> CohomologyReport:
    """Cohomology of [pi_p, -] on M_r(V) in the plain bigrading (A, a)."""
    require_p_ary(pi_p, p)
    d = lambda B: stem_bracket(pi_p, B)  # noqa: E731
    cells = window(weights, arity_min, arity_max)

    def previous(label):
        w, a = label
        return (w, a - (p - 1)) if a - (p - 1) >= 0 else None

    return cohomology_table(pi_p.space, d, cells, previous)


def shifted_table(pi_p: MultiMap, p: int, labels) -> CohomologyReport:
    """Cohomology of the sequence operator [pi, -] in the shifted bigrading.

    The cell (R, t) holds M^(R + (1-t)e1, t-1)(V), the position-t maps of
    degree-R sequences; the operator raises the label by ((p-1)e1, p-1).
    """
    seq = p_ary_sequence(pi_p, p)
    space = pi_p.space
    E = e1(space.n)

    def cochain_cell(label):
        R, t = label
        return (Degree(R) + E * (1 - t), t - 1)

    def d(B: MultiMap) -> MultiMap:
        t = B.arity
        base = B.weight + E * (t - 1)
        rho = MapSequence(space, base, {t: B})
        out = sequence_bracket(seq, rho)
        return out[t + p - 1]

    def previous(label):
        R, t = label
        if t - (p - 1) < 1:
            return None
        return (Degree(R) - E * (p - 1), t - (p - 1))

    return cohomology_table(space, d, labels, previous, cochain_cell)


def bidegree_correspondence(pi_p: MultiMap, p: int, weights, arity_max: int = 3):
    """Compare the two tables cell by cell: shifted (R, t) against plain (R + (1-t)e1, t-1).

    Returns (all equal, list of (plain label, shifted label, H plain, H shifted)).
    """
    E = e1(pi_p.space.n)
    plain = plain_table(pi_p, p, weights, 0, arity_max)
    labels = [(w + E * (a), a + 1) for w, a in (c.label for c in plain.cells)]
    shifted = shifted_table(pi_p, p, labels)
    rows = []
    ok = True
    for pc, sc in zip(plain.cells, shifted.cells):
        rows.append((pc.label, sc.label, pc.cohomology, sc.cohomology))
        ok &= pc.cohomology == sc.cohomology and pc.cochains == sc.cochains
    return ok, rows


def lod_infty_coboundary(pi: MapSequence, rho: MapSequence, max_position: int | None = None) -> MapSequence:
    """[pi, rho] with the sequence bracket."""
    return sequence_bracket(pi, rho, max_position)


def filtration_level(seq: MapSequence) -> int | None:
    """Largest k with seq in C_k (all positions >= k); None for the zero sequence."""
    return min(seq.maps, default=None)


def preserves_filtration(pi: MapSequence, rho: MapSequence) -> bool:
    k = filtration_level(rho)
    if k is None:
        return True
    out = lod_infty_coboundary(pi, rho)
    lvl = filtration_level(out)
    return lvl is None or lvl >= k
