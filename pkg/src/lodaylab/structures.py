"""Graded Loday structures, Lod-infinity structures and their morphisms.

Sequence-level operations (composition, inversion, conjugation) all go
through the coalgebra: the sequences are suspended to corestrictions on
down V, extended, composed, and read back. The explicit sign formula for
morphisms is kept as an independent check of that path.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .coalgebra import (
    Cohomomorphism,
    compose_cohomomorphisms,
    desuspend,
    intertwining_residual,
    is_codifferential,
    phi,
    suspend,
)
from .grading import (
    Degree,
    GradedSpace,
    InputError,
    LodayError,
    all_words,
    axpy,
    block_partitions,
    e1,
    inversion_count,
    require_same_space,
    sign,
    three_part,
)
from .linalg import inverse as mat_inverse, nullspace, rank, solve
from .multilinear import MapSequence, MultiMap, evaluate_vectors, sequence_bracket, stem_bracket


class CheckFailed(LodayError):
    """A mathematical check did not pass (CLI exit code 1)."""


# --- graded Loday algebras -------------------------------------------------------------


def require_loday_bidegree(pi: MultiMap) -> None:
    if pi.arity_index != 1 or any(pi.weight) or pi.codomain != pi.space:
        raise InputError("a graded Loday bracket is a weight-0 bilinear map V x V -> V (bidegree (0,1))")


def jacobi_residual(pi: MultiMap, a: str, b: str, c: str) -> dict:
    """{a,{b,c}} - {{a,b},c} - (-1)^<a,b> {b,{a,c}}."""
    V = pi.space
    out: dict = {}
    axpy(out, Fraction(1), evaluate_vectors(pi, [{a: 1}, pi(b, c)]))
    axpy(out, Fraction(-1), evaluate_vectors(pi, [pi(a, b), {c: 1}]))
    axpy(out, Fraction(-sign(V.degree(a).pair(V.degree(b)))), evaluate_vectors(pi, [{b: 1}, pi(a, c)]))
    return out


@dataclass
class LodayReport:
    ok: bool
    failures: list  # (triple, residual dict)


def check_loday(pi: MultiMap) -> LodayReport:
    """[pi, pi] = 0, reported through the Jacobi residual on failing triples."""
    require_loday_bidegree(pi)
    square = stem_bracket(pi, pi)
    failures = []
    for triple in all_words(pi.space, 3):
        res = jacobi_residual(pi, *triple)
        if res:
            failures.append((triple, res))
    ok = square.is_zero()
    if ok != (not failures):
        raise LodayError("internal: [pi,pi] and the Jacobi residual disagree")
    return LodayReport(ok, failures)


def loday_as_sequence(pi: MultiMap) -> MapSequence:
    """A graded Loday bracket as the Lod-infinity structure (0, pi, 0, ...) of weight e1."""
    require_loday_bidegree(pi)
    return MapSequence(pi.space, e1(pi.space.n), {2: pi})


# --- Lod-infinity structures -------------------------------------------------------------


def require_odd(seq: MapSequence) -> None:
    if not seq.base_weight.is_odd:
        raise InputError(f"base weight {list(seq.base_weight)} is even; Lod-infinity structures need odd weight")


@dataclass
class LodInftyReport:
    ok: bool
    failing_p: int | None  # index p of the first violated identity sum_{s+t=p}
    residual: MultiMap | None


def check_lod_infinity(seq: MapSequence, max_arity: int = 4) -> LodInftyReport:
    """sum_{s+t=p} (-1)^(1+(s-1)<e1,Q>) [pi_s, pi_t] = 0 for the identities of arity <= max_arity.

    The identity indexed by p has a (p-1)-linear left side, so p runs over
    2..max_arity+1; this is exactly Q^2 = 0 on words of length <= max_arity.
    """
    require_odd(seq)
    sq = sequence_bracket(seq, seq, max_position=max_arity)
    for q in range(1, max_arity + 1):
        m = sq.maps.get(q)
        if m is not None and not m.is_zero():
            return LodInftyReport(False, q + 1, m)
    return LodInftyReport(True, None, None)


def full_check_arity(seq: MapSequence) -> int:
    """Arity bound after which the identities of a finitely supported sequence are vacuous."""
    return max(2 * seq.max_position - 1, 1)


def check_lod_infinity_coalgebra(seq: MapSequence, max_arity: int = 4):
    require_odd(seq)
    return is_codifferential(phi(seq), max_arity)


def direct_sum(pi: MapSequence, rho: MapSequence) -> MapSequence:
    """(pi + rho)_p on V + V': blockwise, zero on mixed tuples."""
    if pi.base_weight != rho.base_weight:
        raise InputError("direct sum needs equal base weights")
    W = pi.space.direct_sum(rho.space)
    maps = {}
    for p in set(pi.maps) | set(rho.maps):
        table = dict(pi[p].table)
        table.update(rho[p].table)
        maps[p] = MultiMap(W, p - 1, pi.weight_at(p), table)
    return MapSequence(W, pi.base_weight, maps)


def chain_complex(space: GradedSpace, d: MultiMap, base_weight=None) -> MapSequence:
    base = e1(space.n) if base_weight is None else Degree(base_weight)
    return MapSequence(space, base, {1: d})


# --- morphisms ------------------------------------------------------------------------


class Morphism:
    """A sequence f = (f_1, f_2, ...) of maps V^p -> V' of weight (1-p)e1."""

    def __init__(self, source: GradedSpace, target: GradedSpace, maps: Mapping[int, MultiMap]):
        if source.n != target.n:
            raise InputError("source and target have different grading rank")
        self.source = source
        self.target = target
        self.maps: dict[int, MultiMap] = {}
        for p, m in maps.items():
            p = int(p)
            if m.space != source or m.codomain != target:
                raise InputError(f"f_{p} has the wrong source or target space")
            if m.arity != p:
                raise InputError(f"f_{p} must be {p}-linear")
            if m.is_zero():
                continue
            expected = e1(source.n) * (1 - p)
            if m.weight != expected:
                raise InputError(f"f_{p} has weight {list(m.weight)}, the morphism rule requires {list(expected)}")
            self.maps[p] = m
        self.maps = dict(sorted(self.maps.items()))

    @classmethod
    def identity(cls, space: GradedSpace) -> "Morphism":
        return cls(space, space, {1: MultiMap.identity(space)})

    @classmethod
    def linear(cls, f1: MultiMap) -> "Morphism":
        return cls(f1.space, f1.codomain, {1: f1})

    def __getitem__(self, p: int) -> MultiMap:
        m = self.maps.get(p)
        if m is None:
            return MultiMap.zero(self.source, p - 1, e1(self.source.n) * (1 - p), codomain=self.target)
        return m

    @property
    def max_position(self) -> int:
        return max(self.maps, default=0)

    def to_cohomomorphism(self) -> Cohomomorphism:
        return Cohomomorphism(
            self.source.down(), self.target.down(), {p: suspend(m) for p, m in self.maps.items()}
        )

    @classmethod
    def from_cohomomorphism(cls, F: Cohomomorphism, source: GradedSpace, target: GradedSpace) -> "Morphism":
        return cls(source, target, {p: desuspend(m, source, target) for p, m in F.maps.items()})

    def truncate(self, N: int) -> "Morphism":
        return Morphism(self.source, self.target, {p: m for p, m in self.maps.items() if p <= N})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Morphism)
            and self.source == other.source
            and self.target == other.target
            and self.maps.keys() == other.maps.keys()
            and all(self.maps[p].table == other.maps[p].table for p in self.maps)
        )

    def __repr__(self) -> str:
        return f"Morphism(support={list(self.maps)})"


def _vec_product(vectors):
    """Expand a list of sparse vectors into {word: coeff}."""
    acc = {(): Fraction(1)}
    for val in vectors:
        nxt: dict = {}
        for w, c in acc.items():
            for y, d in val.items():
                nxt[w + (y,)] = c * d
        acc = nxt
    return acc


def morphism_sides_explicit(
    f: Morphism, pi: MapSequence, pi_t: MapSequence, word, omega_reading: str = "blocks"
) -> tuple[dict, dict]:
    """Both sides of the sequence form of the morphism condition at one word.

    left  = sum over blocks I^1..I^s (increasing maxima) of
            (-1)^omega (-1)^(I^1;..;I^s) eps(I^1;..;I^s) pi'_s(f(V_I1), .., f(V_Is))
    right = sum over I, J < K of
            (-1)^lambda (-1)^(J;I) eps(I;J) f_{|I|+|K|}(V_I, pi_{|J|+1}(V_J, v_k1), V_K\\k1)

    with omega = s(s-1)/2 + sum_r (s-r)|I^r| + sum_{r>=2} <(|I^r|+1)e1, |V_I1| + .. + |V_I(r-1)|>
    (the last sum pairs with the degree sums of the earlier blocks) and
    lambda = <(1+|J|)e1, |V_I| + (p+1)e1>.

    ``omega_reading="literal"`` pairs with the single vectors v_{|I^1|}, ..,
    v_{|I^(r-1)|} instead (indices taken from the block lengths); it exists
    only so the tests can show that this reading breaks the condition.
    """
    if omega_reading not in ("blocks", "literal"):
        raise InputError("omega_reading must be 'blocks' or 'literal'")
    V = f.source
    par = V._parity
    word = tuple(word)
    p = len(word)
    first = [V.degree(x)[0] for x in word]
    left: dict = {}
    for blocks in block_partitions(p):
        s = len(blocks)
        target = pi_t.maps.get(s)
        if target is None:
            continue
        vals = []
        for b in blocks:
            m = f.maps.get(len(b))
            val = m.table.get(tuple(word[i] for i in b)) if m is not None else None
            if not val:
                break
            vals.append(val)
        else:
            order = tuple(i for b in blocks for i in b)
            omega = s * (s - 1) // 2 + sum((s - r) * len(b) for r, b in enumerate(blocks, start=1))
            seen = 0
            for r, b in enumerate(blocks):
                if r:
                    omega += (len(b) + 1) * seen
                seen += sum(first[i] for i in b) if omega_reading == "blocks" else first[len(b) - 1]
            e = omega + inversion_count(order)
            for k in range(len(order)):
                for ll in range(k + 1, len(order)):
                    if order[k] > order[ll]:
                        e += par[word[order[k]]][word[order[ll]]]
            c0 = sign(e)
            for args, c in _vec_product(vals).items():
                out = target.table.get(args)
                if out:
                    axpy(left, c0 * c, out)
    right: dict = {}
    for I, J, K in three_part(p):
        inner_map = pi.maps.get(len(J) + 1)
        outer_map = f.maps.get(len(I) + len(K))
        if inner_map is None or outer_map is None:
            continue
        inner = inner_map.table.get(tuple(word[j] for j in J) + (word[K[0]],))
        if not inner:
            continue
        vI = sum(first[i] for i in I)
        lam = (1 + len(J)) * (vI + p + 1)
        e = lam + sum(1 for j in J for i in I if j > i)
        for i in I:
            for j in J:
                if j < i:
                    e += par[word[i]][word[j]]
        c0 = sign(e)
        head = tuple(word[i] for i in I)
        tail = tuple(word[k] for k in K[1:])
        for y, c in inner.items():
            out = outer_map.table.get(head + (y,) + tail)
            if out:
                axpy(right, c0 * c, out)
    return left, right


@dataclass
class MorphismReport:
    ok: bool
    failing_p: int | None
    word: tuple | None
    coalgebraic_ok: bool


def check_morphism(f: Morphism, pi: MapSequence, pi_t: MapSequence, max_p: int = 4) -> MorphismReport:
    """The morphism condition up to arity max_p, explicitly and coalgebraically."""
    if pi.space != f.source or pi_t.space != f.target:
        raise InputError("morphism and structures live on different spaces")
    if pi.base_weight != pi_t.base_weight:
        raise InputError("source and target structures have different base weights")
    failing = None
    for p in range(1, max_p + 1):
        for word in all_words(f.source, p):
            left, right = morphism_sides_explicit(f, pi, pi_t, word)
            if left != right:
                failing = (p, word)
                break
        if failing:
            break
    coalg = intertwining_residual(phi(pi), phi(pi_t), f.to_cohomomorphism(), max_p) is None
    if coalg != (failing is None):
        raise LodayError("internal: explicit and coalgebraic morphism checks disagree")
    return MorphismReport(failing is None, failing[0] if failing else None, failing[1] if failing else None, coalg)


def compose(g: Morphism, f: Morphism, max_arity: int) -> Morphism:
    """g o f (f first), through composition of the cohomomorphisms."""
    require_same_space(f.target, g.source, "composable morphisms")
    G = compose_cohomomorphisms(g.to_cohomomorphism(), f.to_cohomomorphism(), max_arity)
    return Morphism.from_cohomomorphism(G, f.source, g.target)


def _linear_matrix(m: MultiMap, src: GradedSpace, tgt: GradedSpace) -> list[dict]:
    """Rows indexed by target basis, columns by source basis."""
    rows = [dict() for _ in range(tgt.dim)]
    for (x,), val in m.table.items():
        for y, c in val.items():
            rows[tgt.index(y)][src.index(x)] = c
    return rows


def invert_linear(m: MultiMap) -> MultiMap | None:
    src, tgt = m.space, m.codomain
    if src.dim != tgt.dim:
        return None
    inv = mat_inverse(_linear_matrix(m, src, tgt), src.dim)
    if inv is None:
        return None
    table = {}
    for i, row in enumerate(inv):
        x = src.names[i]
        for j, c in row.items():
            table.setdefault((tgt.names[j],), {})[x] = c
    return MultiMap(tgt, 0, m.weight * -1 if any(m.weight) else m.weight, table, codomain=src)


def invert_cohomomorphism(F: Cohomomorphism, max_arity: int) -> Cohomomorphism:
    """G with F o G = Id = G o F up to max_arity.

    G_1 = F_1^{-1}; G_p = -F_1^{-1} (pr F (G_{<p} extended))_p, since the
    s = 1 term of (F G)_p is F_1 G_p.
    """
    g1 = invert_linear(F[1])
    if g1 is None:
        raise CheckFailed("not an isomorphism candidate: the linear part is not bijective")
    zero = Degree.zero(F.source.n)
    maps = {1: g1}
    for p in range(2, max_arity + 1):
        partial = Cohomomorphism(F.target, F.source, maps)
        table = {}
        for word in all_words(F.target, p):
            val = F.project(partial.apply_word(word))
            if val:
                out = evaluate_vectors(g1, [val])
                if out:
                    table[word] = {y: -c for y, c in out.items()}
        maps[p] = MultiMap(F.target, p - 1, zero, table, codomain=F.source, check=False)
    return Cohomomorphism(F.target, F.source, maps)


def invert_morphism(f: Morphism, max_p: int = 4) -> Morphism:
    G = invert_cohomomorphism(f.to_cohomomorphism(), max_p)
    return Morphism.from_cohomomorphism(G, f.target, f.source)


def conjugate(pi: MapSequence, f: Morphism, max_arity: int = 4) -> MapSequence:
    """f o pi o f^{-1}: the corestrictions of F Q F^{-1} up to max_arity; needs f_1 = id."""
    if f.source != pi.space or f.target != pi.space:
        raise InputError("conjugation needs a self-map of the structure's space")
    if f[1].table != MultiMap.identity(pi.space).table:
        raise InputError("conjugation needs f_1 = id")
    return transport(pi, f, max_arity)


def transport(pi: MapSequence, f: Morphism, max_arity: int = 4) -> MapSequence:
    """The structure F Q F^{-1} on the target of an invertible f (truncated at max_arity)."""
    if f.source != pi.space:
        raise InputError("morphism source differs from the structure's space")
    F = f.to_cohomomorphism()
    G = invert_cohomomorphism(F, max_arity)
    Q = phi(pi)
    down_t = f.target.down()
    maps = {}
    for p in range(1, max_arity + 1):
        table = {}
        for word in all_words(down_t, p):
            val = F.project(Q(G.apply_word(word)))
            if val:
                table[word] = val
        maps[p] = desuspend(MultiMap(down_t, p - 1, pi.base_weight, table, check=False), f.target)
    return MapSequence(f.target, pi.base_weight, maps)


# --- cohomology of the linear part ----------------------------------------------------------


def linear_cohomology(space: GradedSpace, d: MultiMap):
    """Per degree: (cycle basis, boundary basis, harmonic representatives) for d^2 = 0.

    Vectors are sparse dicts over basis names. Harmonic representatives are
    chosen greedily among cycle basis vectors, giving deterministic output.
    """
    from .linalg import independent_subset

    out = {}
    for deg in space.degrees():
        here = space.basis_of_degree(deg)
        pre = space.basis_of_degree(deg - d.weight) if d is not None else []
        # matrix of d restricted to degree deg, rows = outputs
        nxt = space.basis_of_degree(deg + d.weight) if d is not None else []
        rows = [dict() for _ in nxt]
        for j, x in enumerate(here):
            for y, c in (d.table.get((x,), {}) if d is not None else {}).items():
                rows[nxt.index(y)][j] = c
        Z = [{here[k]: c for k, c in v.items()} for v in nullspace(rows, len(here))]
        B = []
        for x in pre:
            val = d.table.get((x,), {})
            if val:
                B.append(dict(val))
        keepB = independent_subset([_to_idx(v, space) for v in B])
        B = [B[i] for i in keepB]
        fam = [_to_idx(v, space) for v in B + Z]
        keep = independent_subset(fam)
        H = [Z[i - len(B)] for i in keep if i >= len(B)]
        out[deg] = (Z, B, H)
    return out


def _to_idx(v: Mapping, space: GradedSpace) -> dict:
    return {space.index(x): c for x, c in v.items()}


def is_quasi_isomorphism(f: Morphism, pi: MapSequence, pi_t: MapSequence) -> bool:
    """f_1 induces a degreewise bijection H(V, pi_1) -> H(V', pi'_1)."""
    return induced_map_rank_data(f[1], pi, pi_t)[0]


def induced_map_rank_data(f1: MultiMap, pi: MapSequence, pi_t: MapSequence):
    V, W = pi.space, pi_t.space
    HV = linear_cohomology(V, pi[1])
    HW = linear_cohomology(W, pi_t[1])
    for deg in set(HV) | set(HW):
        hv = HV.get(deg, ([], [], []))[2]
        hw = HW.get(deg, ([], [], []))
        if len(hv) != len(hw[2]):
            return False, deg
        if not hv:
            continue
        # images of the harmonic classes modulo boundaries must be independent
        imgs = [evaluate_vectors(f1, [h]) for h in hv]
        base = [_to_idx(b, W) for b in hw[1]]
        r0 = rank(base)
        if rank(base + [_to_idx(v, W) for v in imgs]) != r0 + len(hv):
            return False, deg
    return True, None


def class_coordinates(space: GradedSpace, d: MultiMap, vector: Mapping) -> tuple:
    """Coordinates of a cycle in the harmonic basis of its degree (boundaries dropped)."""
    if not vector:
        return ()
    deg = space.degree(next(iter(vector)))
    Z, B, H = linear_cohomology(space, d)[deg]
    cols = B + H
    n = len(cols)
    rows = [dict() for _ in range(space.dim)]
    for j, v in enumerate(cols):
        for x, c in v.items():
            rows[space.index(x)][j] = c
    rhs = [Fraction(0)] * space.dim
    for x, c in vector.items():
        rhs[space.index(x)] = c
    sol = solve(rows, rhs, n)
    if sol is None:
        raise InputError("vector is not a cycle")
    return tuple(sol.get(len(B) + k, Fraction(0)) for k in range(len(H)))
