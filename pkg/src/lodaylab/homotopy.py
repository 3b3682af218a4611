"""Minimal models: splitting of (V, pi_1), the homotopy operator, the arity-2
transfer map and the arity-by-arity decomposition into minimal + contractible.

All work after the first step happens in an adapted basis of
V = V_m + B + W, where the splitting is coordinatewise: P keeps the V_m
basis, delta sends the k-th B basis vector to the k-th W basis vector, and
pi_1 sends W onto B in the same order.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coalgebra import desuspend, phi
from .grading import Degree, GradedSpace, InputError, LodayError, add_term, all_words, axpy, e1, sign
from .linalg import complement_units, independent_subset, inverse as mat_inverse, nullspace, solve
from .multilinear import MapSequence, MultiMap, evaluate_vectors
from .structures import (
    CheckFailed,
    Morphism,
    check_lod_infinity,
    class_coordinates,
    compose,
    direct_sum,
    invert_morphism,
    is_quasi_isomorphism,
    linear_cohomology,
    transport,
)


@dataclass
class SplitComplex:
    space: GradedSpace
    Z: list  # sparse vectors over the basis names of ``space``
    B: list
    Vm: list
    W: list  # W[k] is the preimage of B[k]


@dataclass
class HomotopyData:
    delta: MultiMap
    P: MultiMap


def _vec_idx(v, space):
    return {space.index(x): c for x, c in v.items()}


def _apply(m: MultiMap, v: dict) -> dict:
    return evaluate_vectors(m, [v])


def split_complex(space: GradedSpace, d: MultiMap) -> tuple[SplitComplex, HomotopyData]:
    """Z, B, V_m, W per degree by deterministic elimination, plus delta and P.

    W is spanned by basis vectors completing Z (lowest index first), B is
    the image of that W basis, V_m completes B inside Z with nullspace
    vectors. The homotopy identity pi_1 delta + delta pi_1 = id - P is
    checked before returning.
    """
    if d.arity_index != 0 or d.space != space or d.codomain != space:
        raise InputError("the differential must be a linear map V -> V")
    if any(_apply(d, _apply(d, {x: 1})) for x in space.names):
        raise InputError("pi_1 does not square to zero")
    Z, W = [], []
    for deg in space.degrees():
        here = space.basis_of_degree(deg)
        nxt = space.basis_of_degree(deg + d.weight)
        rows = [dict() for _ in nxt]
        for j, x in enumerate(here):
            for y, c in d.table.get((x,), {}).items():
                rows[nxt.index(y)][j] = c
        z = [{here[k]: c for k, c in v.items()} for v in nullspace(rows, len(here))]
        Z += z
        comp = complement_units([{here.index(x): c for x, c in v.items()} for v in z], len(here))
        W += [{here[j]: Fraction(1)} for j in comp]
    B = [_apply(d, w) for w in W]
    fam = [_vec_idx(v, space) for v in B + Z]
    keep = independent_subset(fam)
    Vm = [Z[i - len(B)] for i in keep if i >= len(B)]
    split = SplitComplex(space, Z, B, Vm, W)
    hd = _homotopy_maps(split, d)
    for x in space.names:
        lhs = _apply(d, _apply(hd.delta, {x: 1}))
        axpy(lhs, Fraction(1), _apply(hd.delta, _apply(d, {x: 1})))
        rhs = {x: Fraction(1)}
        axpy(rhs, Fraction(-1), _apply(hd.P, {x: 1}))
        if lhs != rhs:
            raise LodayError("internal: homotopy identity fails")
    return split, hd


def _coordinates(split: SplitComplex):
    """Inverse of the adapted basis matrix: basis name -> coordinates (Vm, B, W blocks)."""
    space = split.space
    cols = split.Vm + split.B + split.W
    n = space.dim
    mat = [dict() for _ in range(n)]
    for j, v in enumerate(cols):
        for x, c in v.items():
            mat[space.index(x)][j] = c
    inv = mat_inverse(mat, n)
    if inv is None:
        raise LodayError("internal: adapted vectors are not a basis")
    # inv[j] is row j: coordinate j of e_x is inv[j][index(x)]
    coords = {x: {} for x in space.names}
    for j, row in enumerate(inv):
        for i, c in row.items():
            coords[space.names[i]][j] = c
    return cols, coords


def _homotopy_maps(split: SplitComplex, d: MultiMap) -> HomotopyData:
    space = split.space
    cols, coords = _coordinates(split)
    nm, nb = len(split.Vm), len(split.B)
    P_tab, D_tab = {}, {}
    for x in space.names:
        pv, dv = {}, {}
        for j, c in coords[x].items():
            if j < nm:
                axpy(pv, c, cols[j])
            elif j < nm + nb:
                axpy(dv, c, split.W[j - nm])
        if pv:
            P_tab[(x,)] = pv
        if dv:
            D_tab[(x,)] = dv
    zero = Degree.zero(space.n)
    P = MultiMap(space, 0, zero, P_tab, check=False)
    delta = MultiMap(space, 0, -d.weight if d.table else -e1(space.n), D_tab, check=False)
    return HomotopyData(delta, P)


# --- adapted basis ----------------------------------------------------------------------------------


@dataclass
class AdaptedBasis:
    space: GradedSpace  # the basis V_m, then B, then W
    m_names: list
    b_names: list
    w_names: list
    to_adapted: MultiMap  # linear V -> adapted space, weight 0

    @property
    def minimal_space(self) -> GradedSpace:
        return self.space.subspace(self.m_names)

    @property
    def contractible_space(self) -> GradedSpace:
        return self.space.subspace(self.b_names + self.w_names)


def adapted_basis(split: SplitComplex) -> AdaptedBasis:
    """Name the adapted vectors; a vector equal to a basis vector e_x keeps the name x."""
    space = split.space
    cols, coords = _coordinates(split)
    used = set()
    names = []
    fresh = {"m": 0, "b": 0, "w": 0}
    taken = set(space.names)
    blocks = ["m"] * len(split.Vm) + ["b"] * len(split.B) + ["w"] * len(split.W)
    for v, tag in zip(cols, blocks):
        if len(v) == 1 and next(iter(v.values())) == 1 and next(iter(v)) not in used:
            name = next(iter(v))
        else:
            while True:
                fresh[tag] += 1
                name = f"{tag}{fresh[tag]}"
                if name not in taken and name not in used:
                    break
        used.add(name)
        names.append(name)
    degs = [space.degree(next(iter(v))) for v in cols]
    U = GradedSpace(space.n, list(zip(names, degs)))
    table = {}
    for x in space.names:
        val = {names[j]: c for j, c in coords[x].items()}
        if val:
            table[(x,)] = val
    f1 = MultiMap(space, 0, Degree.zero(space.n), table, codomain=U)
    nm, nb = len(split.Vm), len(split.B)
    return AdaptedBasis(U, names[:nm], names[nm:nm + nb], names[nm + nb:], f1)


# --- the arity-2 transfer map -----------------------------------------------------------------------


def build_f2(pi: MapSequence, ab: AdaptedBasis) -> MultiMap:
    """The weight -e1 bilinear correction in the adapted basis, casewise on B/Z/W.

    With w = delta v_1 and w' = delta v_2 (alpha the degree of v_1):
      B x Z: delta pi_2(v1,v2) + P pi_2(w, v2)
      B x W: delta pi_2(v1,v2) + 1/2 P pi_2(w, v2)
      Z x B: delta pi_2(v1,v2) + (-1)^<e1,alpha> P pi_2(v1, w')
      W x B: delta pi_2(v1,v2) + (-1)^<e1,alpha> 1/2 P pi_2(v1, w')
      otherwise delta pi_2(v1, v2)
    The B x B overlap must agree between the first and third lines.
    """
    U = ab.space
    if pi.space != U:
        raise InputError("structure must be expressed in the adapted basis")
    m, b, w = set(ab.m_names), ab.b_names, ab.w_names
    delta = {bb: ww for bb, ww in zip(b, w)}
    pi2 = pi[2]
    half = Fraction(1, 2)

    def P(vec):
        return {x: c for x, c in vec.items() if x in m}

    def dl(vec):
        return {delta[x]: c for x, c in vec.items() if x in delta}

    table = {}
    for v1, v2 in all_words(U, 2):
        out = dl(pi2(v1, v2))
        in_z1, in_z2 = v1 not in ab.w_names, v2 not in ab.w_names
        alpha1 = U.degree(v1)[0]
        extra_first = extra_second = None
        if v1 in delta:
            extra_first = P(pi2(delta[v1], v2))
            if not in_z2:
                extra_first = {x: half * c for x, c in extra_first.items()}
        if v2 in delta:
            extra_second = {x: sign(alpha1) * c for x, c in P(pi2(v1, delta[v2])).items()}
            if not in_z1:
                extra_second = {x: half * c for x, c in extra_second.items()}
        if extra_first is not None and extra_second is not None:
            if extra_first != extra_second:
                raise LodayError(f"f2 is inconsistent on B x B at ({v1},{v2}); pi is not a Lod-infinity structure")
        extra = extra_first if extra_first is not None else extra_second
        if extra:
            axpy(out, Fraction(1), extra)
        if out:
            table[(v1, v2)] = out
    return MultiMap(U, 1, -e1(U.n), table)


def transfer_step(pi: MapSequence, f: Morphism, max_arity: int) -> MapSequence:
    """The structure f o pi o f^{-1} (f_1 = id)."""
    return transport(pi, f, max_arity)


def binary_transfer_formula(pi: MapSequence, f2: MultiMap) -> MultiMap:
    """-pi_1 f_2(v1,v2) + pi_2(v1,v2) - f_2(pi_1 v1, v2) - (-1)^<e1,v1> f_2(v1, pi_1 v2)."""
    U = pi.space
    pi1, pi2 = pi[1], pi[2]
    table = {}
    for v1, v2 in all_words(U, 2):
        out: dict = {}
        axpy(out, Fraction(-1), evaluate_vectors(pi1, [f2(v1, v2)]))
        axpy(out, Fraction(1), pi2(v1, v2))
        axpy(out, Fraction(-1), evaluate_vectors(f2, [pi1(v1), {v2: 1}]))
        axpy(out, Fraction(-sign(U.degree(v1)[0])), evaluate_vectors(f2, [{v1: 1}, pi1(v2)]))
        if out:
            table[(v1, v2)] = out
    return MultiMap(U, 1, Degree.zero(U.n), table, check=False)


def is_split_form(m: MultiMap, m_names) -> bool:
    """m = m' + 0: nonzero only on V_m tuples, with values in V_m."""
    ms = set(m_names)
    return all(all(x in ms for x in args) and all(y in ms for y in val) for args, val in m.table.items())


# --- higher corrections -------------------------------------------------------------------------------


def higher_correction(pi: MapSequence, ab: AdaptedBasis, k: int) -> MultiMap:
    """f_k for a structure already split below arity k.

    On down V: F_k = delta Q_k - P Q_k H with
    H = sum_i P^{(x)(i-1)} (x) delta (x) id^{(x)(k-i)} (Koszul signs from the
    odd delta), which makes the new Q_k equal to P Q_k P^{(x)k}.
    """
    U = pi.space
    Q = phi(pi)
    Qk = Q.maps.get(k)
    if Qk is None:
        return MultiMap.zero(U, k - 1, e1(U.n) * (1 - k))
    D = U.down()
    m = set(ab.m_names)
    delta = {bb: ww for bb, ww in zip(ab.b_names, ab.w_names)}
    table = {}
    for word in all_words(D, k):
        out: dict = {}
        for y, c in Qk.table.get(word, {}).items():
            if y in delta:
                add_term(out, delta[y], c)
        # H(word)
        e = 0
        for i in range(k):
            if all(x in m for x in word[:i]) and word[i] in delta:
                new = word[:i] + (delta[word[i]],) + word[i + 1:]
                s = sign(e)
                for y, c in Qk.table.get(new, {}).items():
                    if y in m:
                        add_term(out, y, -s * c)
            if word[i] not in m:
                break
            e += D.degree(word[i])[0]
        if out:
            table[word] = out
    Fk = MultiMap(D, k - 1, Degree.zero(U.n), table, check=False)
    return desuspend(Fk, U)


def solve_correction(pi: MapSequence, ab: AdaptedBasis, k: int) -> MultiMap | None:
    """Fallback: find f_k by exact elimination so that the new pi_k is split."""
    U = pi.space
    w = e1(U.n) * (1 - k)
    from .cohomology import cell_basis, flatten

    basis = cell_basis(U, w, k - 1)
    base = transport(pi, Morphism.identity(U), k)[k]
    target_keep = set(ab.m_names)

    def residual(m: MultiMap) -> dict:
        return {key: c for key, c in flatten(m).items()
                if not (all(x in target_keep for x in key[0]) and key[1] in target_keep)}

    r0 = residual(base)
    cols = []
    for args, y in basis:
        fk = MultiMap(U, k - 1, w, {args: {y: 1}}, check=False)
        f = Morphism(U, U, {1: MultiMap.identity(U), k: fk})
        new = transport(pi, f, k)[k]
        diff = residual(new)
        axpy(diff, Fraction(-1), r0)
        cols.append(diff)
    keys: dict = {}
    for col in cols + [r0]:
        for key in col:
            keys.setdefault(key, len(keys))
    rows = [dict() for _ in keys]
    for j, col in enumerate(cols):
        for key, c in col.items():
            rows[keys[key]][j] = c
    rhs = [Fraction(0)] * len(keys)
    for key, c in r0.items():
        rhs[keys[key]] = -c
    sol = solve(rows, rhs, len(basis))
    if sol is None:
        return None
    table: dict = {}
    for j, c in sol.items():
        args, y = basis[j]
        table.setdefault(args, {})[y] = c
    return MultiMap(U, k - 1, w, table)


# --- the decomposition ------------------------------------------------------------------------------------


@dataclass
class MinimalModel:
    minimal: MapSequence
    contractible: MapSequence
    iso: Morphism  # from the input structure to direct_sum(minimal, contractible)
    adapted: AdaptedBasis
    split: SplitComplex
    homotopy: HomotopyData
    corrections: dict  # arity -> "formula" | "solved"
    max_arity: int

    @property
    def direct_sum(self) -> MapSequence:
        return direct_sum(self.minimal, self.contractible)


def minimal_model(pi: MapSequence, N: int = 4, method: str = "formula") -> MinimalModel:
    """Decompose (V, pi), certified up to arity N, into minimal + contractible.

    ``method="solve"`` skips the closed-form corrections for arities >= 3
    and always uses elimination (used to test the fallback path).
    """
    if N < 2:
        raise InputError("N must be >= 2")
    if pi.base_weight != e1(pi.space.n):
        raise InputError("the minimal model construction needs base weight e1")
    rep = check_lod_infinity(pi, N)
    if not rep.ok:
        raise InputError(f"not a Lod-infinity structure: identity {rep.failing_p} fails")
    pi = pi.truncate(N)
    split, hd = split_complex(pi.space, pi[1])
    ab = adapted_basis(split)
    f1 = Morphism.linear(ab.to_adapted)
    cur = transport(pi, f1, N)
    iso = f1
    U = ab.space
    corrections = {}
    ident = MultiMap.identity(U)
    for k in range(2, N + 1):
        if k == 2 and method == "formula":
            fk = build_f2(cur, ab)
            tag = "formula"
        elif method == "formula":
            fk = higher_correction(cur, ab, k)
            tag = "formula"
        else:
            fk = None
            tag = "solved"
        step = None
        if fk is not None:
            step = Morphism(U, U, {1: ident, k: fk})
            nxt = transport(cur, step, N)
            if not is_split_form(nxt[k], ab.m_names):
                step = None
        if step is None:
            fk = solve_correction(cur, ab, k)
            if fk is None:
                raise LodayError(f"no correction found at arity {k}")
            tag = "solved"
            step = Morphism(U, U, {1: ident, k: fk})
            nxt = transport(cur, step, N)
            if not is_split_form(nxt[k], ab.m_names):
                raise LodayError(f"internal: arity {k} correction does not split the structure")
        corrections[k] = tag
        cur = nxt
        iso = compose(step, iso, N)
    Vm, Vc = ab.minimal_space, ab.contractible_space
    minimal = MapSequence(Vm, pi.base_weight, {p: cur[p].restrict(Vm) for p in range(2, N + 1)})
    contractible = MapSequence(Vc, pi.base_weight, {1: cur[1].restrict(Vc)})
    return MinimalModel(minimal, contractible, iso, ab, split, hd, corrections, N)


# --- quasi-inverse --------------------------------------------------------------------------------------------


def inclusion(sub: GradedSpace, whole: GradedSpace) -> Morphism:
    table = {(x,): {x: 1} for x in sub.names}
    return Morphism(sub, whole, {1: MultiMap(sub, 0, Degree.zero(sub.n), table, codomain=whole)})


def projection(whole: GradedSpace, sub: GradedSpace) -> Morphism:
    table = {(x,): {x: 1} for x in sub.names}
    return Morphism(whole, sub, {1: MultiMap(whole, 0, Degree.zero(whole.n), table, codomain=sub)})


@dataclass
class QuasiInverse:
    g: Morphism
    source_model: MinimalModel
    target_model: MinimalModel
    f_minimal: Morphism


def quasi_inverse(f: Morphism, pi: MapSequence, pi_t: MapSequence, N: int = 3) -> QuasiInverse:
    """g = h^{-1} i (f^m)^{-1} p h' with f^m = p h' f h^{-1} i."""
    if not is_quasi_isomorphism(f, pi, pi_t):
        raise CheckFailed("f is not a quasi-isomorphism")
    mm = minimal_model(pi, max(N, 2))
    mt = minimal_model(pi_t, max(N, 2))
    h_inv = invert_morphism(mm.iso, N)
    hi = compose(h_inv, inclusion(mm.minimal.space, mm.adapted.space), N)
    hp = compose(projection(mt.adapted.space, mt.minimal.space), mt.iso, N)
    fm = compose(hp, compose(f, hi, N), N)
    fm_inv = invert_morphism(fm, N)
    g = compose(hi, compose(fm_inv, hp, N), N)
    return QuasiInverse(g, mm, mt, fm)


def induced_is_inverse(f: Morphism, g: Morphism, pi: MapSequence, pi_t: MapSequence) -> bool:
    """g_1# o f_1# = id on the harmonic basis of H(V, pi_1)."""
    H = linear_cohomology(pi.space, pi[1])
    for deg, (_, _, reps) in H.items():
        for h in reps:
            back = evaluate_vectors(g[1], [evaluate_vectors(f[1], [h])])
            if class_coordinates(pi.space, pi[1], back) != class_coordinates(pi.space, pi[1], h):
                return False
    return True
