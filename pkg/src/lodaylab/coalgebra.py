"""The graded dual Leibniz tensor coalgebra (T(V), Delta) and its morphisms.

Tensors are sparse dicts ``word -> Fraction`` with words tuples of basis
names (length >= 1; there is no length-0 part). Coderivations and
cohomomorphisms are never materialised as matrices: they are functions on
words, reconstructed from their corestriction maps. Only the length-one
projection of a composite is needed to read off corestrictions, and the
word length never grows under a coderivation or a cohomomorphism, so every
computation below is exact at each arity.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .grading import (
    Degree,
    GradedSpace,
    InputError,
    add_term,
    all_words,
    axpy,
    block_partitions,
    require_same_space,
    sign,
    three_part,
    two_part,
)
from .multilinear import MapSequence, MultiMap

Tensor = dict


def _arrangement_sign(space: GradedSpace, word, order) -> int:
    """Koszul sign of moving word[order[0]], word[order[1]], ... into natural order."""
    par = space._parity
    e = 0
    for k in range(len(order)):
        x = word[order[k]]
        for ll in range(k + 1, len(order)):
            if order[k] > order[ll]:
                e += par[x][word[order[ll]]]
    return sign(e)


def tensor_degree(space: GradedSpace, word) -> Degree:
    return space.word_degree(word)


# --- coproduct -----------------------------------------------------------------


def coproduct_word(space: GradedSpace, word, koszul: bool = True) -> dict:
    """Delta(v_1..v_p) = sum_{I u J = N^(p-1), I != 0} eps(I;J) V_I (x) V_J v_p."""
    word = tuple(word)
    p = len(word)
    out: dict = {}
    last = word[-1:]
    for I, J in two_part(p - 1):
        s = _arrangement_sign(space, word, I + J) if koszul else 1
        key = (tuple(word[i] for i in I), tuple(word[j] for j in J) + last)
        add_term(out, key, s)
    return out


def coproduct(space: GradedSpace, tensor: Mapping, koszul: bool = True) -> dict:
    out: dict = {}
    for word, c in tensor.items():
        axpy(out, c, coproduct_word(space, word, koszul))
    return out


def _twist_sign(space: GradedSpace, x, y) -> int:
    return sign(space.word_degree(x).pair(space.word_degree(y)))


def dual_leibniz_sides(space: GradedSpace, word, koszul: bool = True) -> tuple[dict, dict]:
    """(id (x) Delta) Delta w and (Delta (x) id) Delta w + (T (x) id)(Delta (x) id) Delta w."""
    first = coproduct_word(space, word, koszul)
    lhs: dict = {}
    rhs: dict = {}
    for (x, y), c in first.items():
        for (y1, y2), d in coproduct_word(space, y, koszul).items():
            add_term(lhs, (x, y1, y2), c * d)
        for (x1, x2), d in coproduct_word(space, x, koszul).items():
            add_term(rhs, (x1, x2, y), c * d)
            add_term(rhs, (x2, x1, y), c * d * _twist_sign(space, x1, x2))
    return lhs, rhs


def check_dual_leibniz(space: GradedSpace, max_length: int, koszul: bool = True):
    """Verify the dual Leibniz identity on all basis words of length <= max_length.

    Returns (ok, first failing word or None). ``koszul=False`` drops the
    Koszul sign from the coproduct (kept in the twist), which is how the
    tests demonstrate that the identity is sign-sensitive.
    """
    if max_length < 1:
        raise InputError("max_length must be >= 1")
    for p in range(1, max_length + 1):
        for word in all_words(space, p):
            lhs, rhs = dual_leibniz_sides(space, word, koszul)
            if lhs != rhs:
                return False, word
    return True, None


# --- suspension ------------------------------------------------------------------


def desuspension_sign(space: GradedSpace, word) -> int:
    """(-1)^(sum_s <(p-s) e1, v_s>) for a word of V (not of down V)."""
    p = len(word)
    e = 0
    for s, x in enumerate(word, start=1):
        e += (p - s) * space.degree(x)[0]
    return sign(e)


def down_tensor(space: GradedSpace, tensor: Mapping) -> dict:
    """down^{(x)p} applied wordwise; names are shared by V and down V."""
    return {w: c * desuspension_sign(space, w) for w, c in tensor.items()}


def up_tensor(space: GradedSpace, tensor: Mapping) -> dict:
    """The inverse of down_tensor, i.e. (-1)^(p(p-1)/2) up^{(x)p}; ``space`` is V."""
    return {w: c * desuspension_sign(space, w) for w, c in tensor.items()}


def suspend(A: MultiMap) -> MultiMap:
    """sigma^{-1}: a map pi_p on V of weight Q + (1-p)e1 to Q_p on down V of weight Q.

    Q_p(down v) = (-1)^(p(p-1)/2) down pi_p(up^{(x)p} down v), which on a basis
    word reduces to Q_p(w) = desuspension_sign(w) * pi_p(w).
    """
    V, W = A.space, A.codomain
    p = A.arity
    table = {args: {y: c * desuspension_sign(V, args) for y, c in val.items()} for args, val in A.table.items()}
    e = Degree.unit(V.n) * (p - 1)
    return MultiMap(V.down(), A.arity_index, A.weight + e, table, codomain=W.down(), check=False)


def desuspend(Qp: MultiMap, space: GradedSpace, codomain: GradedSpace | None = None) -> MultiMap:
    """sigma: Q_p on down V back to pi_p = up Q_p down^{(x)p} on V."""
    cod = codomain or space
    p = Qp.arity
    table = {args: {y: c * desuspension_sign(space, args) for y, c in val.items()} for args, val in Qp.table.items()}
    e = Degree.unit(space.n) * (p - 1)
    return MultiMap(space, Qp.arity_index, Qp.weight - e, table, codomain=cod, check=False)


# --- coderivations -----------------------------------------------------------------


class Coderivation:
    """A weight Q coderivation of (T(U), Delta) given by its corestrictions Q_p."""

    def __init__(self, space: GradedSpace, weight, maps: Mapping[int, MultiMap] | None = None):
        self.space = space
        self.weight = weight if isinstance(weight, Degree) else Degree(weight)
        self.maps: dict[int, MultiMap] = {}
        for p, m in (maps or {}).items():
            if m.space != space or m.codomain != space:
                raise InputError("corestriction lives on another space")
            if m.arity != p:
                raise InputError(f"corestriction Q_{p} must be {p}-linear")
            if m.is_zero():
                continue
            if m.weight != self.weight:
                raise InputError(f"corestriction Q_{p} has weight {list(m.weight)}, expected {list(self.weight)}")
            self.maps[p] = m

    @property
    def max_arity(self) -> int:
        return max(self.maps, default=0)

    def apply_word(self, word) -> dict:
        """The coderivation extension of the corestriction family on one word."""
        word = tuple(word)
        p = len(word)
        par = self.space._parity
        Qpar = {x: self.weight.pair(self.space.degree(x)) % 2 for x in set(word)}
        out: dict = {}
        for I, J, K in three_part(p):
            m = self.maps.get(len(J) + 1)
            if m is None:
                continue
            val = m.table.get(tuple(word[j] for j in J) + (word[K[0]],))
            if not val:
                continue
            e = sum(Qpar[word[i]] for i in I)
            for i in I:
                for j in J:
                    if j < i:
                        e += par[word[i]][word[j]]
            s = sign(e)
            head = tuple(word[i] for i in I)
            tail = tuple(word[k] for k in K[1:])
            for y, c in val.items():
                add_term(out, head + (y,) + tail, s * c)
        return out

    def __call__(self, tensor: Mapping) -> dict:
        out: dict = {}
        for word, c in tensor.items():
            axpy(out, c, self.apply_word(word))
        return out

    def project_word(self, word) -> dict:
        """pr o Q on one word, i.e. Q_{|word|}(word)."""
        m = self.maps.get(len(word))
        return dict(m.table.get(tuple(word), {})) if m is not None else {}

    def project(self, tensor: Mapping) -> dict:
        out: dict = {}
        for word, c in tensor.items():
            m = self.maps.get(len(word))
            if m is not None:
                val = m.table.get(tuple(word))
                if val:
                    axpy(out, c, val)
        return out

    def corestriction(self, p: int) -> MultiMap:
        """Recompute Q_p from the extension: pr o Q restricted to T^p."""
        table = {}
        for word in all_words(self.space, p):
            val = {w[0]: c for w, c in self.apply_word(word).items() if len(w) == 1}
            if val:
                table[word] = val
        return MultiMap(self.space, p - 1, self.weight, table, check=False)

    def is_zero(self) -> bool:
        return not self.maps

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Coderivation)
            and self.space == other.space
            and self.maps.keys() == other.maps.keys()
            and all(self.maps[p].table == other.maps[p].table for p in self.maps)
            and (self.is_zero() or self.weight == other.weight)
        )


def composite_corestriction(outer, inner, p: int, space_in: GradedSpace, weight, codomain=None) -> MultiMap:
    """pr o outer o inner on T^p as a p-linear map; outer needs ``project``."""
    table = {}
    for word in all_words(space_in, p):
        val = outer.project(inner.apply_word(word))
        if val:
            table[word] = val
    return MultiMap(space_in, p - 1, weight, table, codomain=codomain, check=False)


def commutator(Q: Coderivation, R: Coderivation, max_arity: int | None = None) -> Coderivation:
    """Corestrictions of Q o R - (-1)^<Q,R> R o Q, by composing extensions."""
    require_same_space(Q.space, R.space, "coderivations")
    top = Q.max_arity + R.max_arity - 1
    if max_arity is not None:
        top = min(top, max_arity)
    s = sign(Q.weight.pair(R.weight))
    w = Q.weight + R.weight
    maps = {}
    for p in range(1, top + 1):
        table = {}
        for word in all_words(Q.space, p):
            val = Q.project(R.apply_word(word))
            axpy(val, -s, R.project(Q.apply_word(word)))
            if val:
                table[word] = val
        maps[p] = MultiMap(Q.space, p - 1, w, table, check=False)
    return Coderivation(Q.space, w, maps)


def square_residual(Q: Coderivation, max_arity: int):
    """First (p, word, value) with (Q o Q)_p(word) != 0, p <= max_arity; None if all vanish.

    (Q o Q)_p is the sum over I, J < K of
    eps(I;J) (-1)^<Q,V_I> Q_{|I|+|K|}(V_I, Q_{|J|+1}(V_J, v_k1), V_K\\k1).
    """
    for p in range(1, max_arity + 1):
        for word in all_words(Q.space, p):
            val = Q.project(Q.apply_word(word))
            if val:
                return p, word, val
    return None


def is_codifferential(Q: Coderivation, max_arity: int):
    """(ok, residual) for Q^2 = 0 up to arity max_arity; Q must have odd weight."""
    if not Q.weight.is_odd:
        raise InputError("codifferential requires odd weight")
    res = square_residual(Q, max_arity)
    return res is None, res


# --- suspension of maps and sequences --------------------------------------------------


def phi(x) -> Coderivation:
    """The coderivation of down V attached to a map (single corestriction) or a sequence."""
    if isinstance(x, MultiMap):
        if x.arity_index < 0:
            raise InputError("phi needs arity index >= 0")
        q = suspend(x)
        return Coderivation(q.space, q.weight, {x.arity: q})
    if isinstance(x, MapSequence):
        down = x.space.down()
        maps = {p: suspend(m) for p, m in x.maps.items()}
        return Coderivation(down, x.base_weight, maps)
    raise InputError("phi expects a MultiMap or a MapSequence")


def phi_inverse(Q: Coderivation, space: GradedSpace) -> MapSequence:
    """Back from a coderivation of down V to the sequence on V."""
    if Q.space != space.down():
        raise InputError("coderivation does not live on the desuspension of this space")
    maps = {p: desuspend(m, space) for p, m in Q.maps.items()}
    return MapSequence(space, Q.weight, maps)


# --- cohomomorphisms --------------------------------------------------------------------


class Cohomomorphism:
    """A coalgebra cohomomorphism T(U) -> T(U') given by weight 0 corestrictions F_p."""

    def __init__(self, source: GradedSpace, target: GradedSpace, maps: Mapping[int, MultiMap]):
        if source.n != target.n:
            raise InputError("source and target have different grading rank")
        self.source = source
        self.target = target
        self.maps: dict[int, MultiMap] = {}
        zero = Degree.zero(source.n)
        for p, m in maps.items():
            if m.space != source or m.codomain != target:
                raise InputError(f"F_{p} has the wrong source or target")
            if m.arity != p:
                raise InputError(f"F_{p} must be {p}-linear")
            if m.is_zero():
                continue
            if m.weight != zero:
                raise InputError(f"F_{p} must have weight 0")
            self.maps[p] = m

    @classmethod
    def identity(cls, space: GradedSpace) -> "Cohomomorphism":
        return cls(space, space, {1: MultiMap.identity(space)})

    @property
    def max_arity(self) -> int:
        return max(self.maps, default=0)

    def apply_word(self, word) -> dict:
        """Sum over block partitions with increasing maxima of eps F(V_I1) (x) ... (x) F(V_Is)."""
        word = tuple(word)
        out: dict = {}
        for blocks in block_partitions(len(word)):
            pieces = []
            for b in blocks:
                m = self.maps.get(len(b))
                val = m.table.get(tuple(word[i] for i in b)) if m is not None else None
                if not val:
                    break
                pieces.append(val)
            else:
                order = tuple(i for b in blocks for i in b)
                s = _arrangement_sign(self.source, word, order)
                acc = {(): Fraction(s)}
                for val in pieces:
                    nxt = {}
                    for w, c in acc.items():
                        for y, d in val.items():
                            nxt[w + (y,)] = c * d
                    acc = nxt
                for w, c in acc.items():
                    add_term(out, w, c)
        return out

    def __call__(self, tensor: Mapping) -> dict:
        out: dict = {}
        for word, c in tensor.items():
            axpy(out, c, self.apply_word(word))
        return out

    def project(self, tensor: Mapping) -> dict:
        out: dict = {}
        for word, c in tensor.items():
            m = self.maps.get(len(word))
            if m is not None:
                val = m.table.get(tuple(word))
                if val:
                    axpy(out, c, val)
        return out

    def corestriction(self, p: int) -> MultiMap:
        table = {}
        for word in all_words(self.source, p):
            val = {w[0]: c for w, c in self.apply_word(word).items() if len(w) == 1}
            if val:
                table[word] = val
        return MultiMap(self.source, p - 1, Degree.zero(self.source.n), table, codomain=self.target, check=False)

    def __getitem__(self, p: int) -> MultiMap:
        m = self.maps.get(p)
        if m is None:
            return MultiMap.zero(self.source, p - 1, Degree.zero(self.source.n), codomain=self.target)
        return m


def compose_cohomomorphisms(F: Cohomomorphism, G: Cohomomorphism, max_arity: int) -> Cohomomorphism:
    """Corestrictions of F o G up to max_arity (G applied first)."""
    require_same_space(G.target, F.source, "composable cohomomorphisms")
    zero = Degree.zero(G.source.n)
    maps = {
        p: composite_corestriction(F, G, p, G.source, zero, codomain=F.target)
        for p in range(1, max_arity + 1)
    }
    return Cohomomorphism(G.source, F.target, maps)


def intertwining_residual(Qs: Coderivation, Qt: Coderivation, F: Cohomomorphism, max_arity: int, full: bool = False):
    """First word w (length <= max_arity) with Q' F w != F Q w, else None.

    By default only the length-one projections are compared, which decides
    the identity because Q'F - FQ is an (F, F)-coderivation; ``full=True``
    compares the complete tensors.
    """
    for p in range(1, max_arity + 1):
        for word in all_words(F.source, p):
            if full:
                left = Qt(F.apply_word(word))
                right = F(Qs.apply_word(word))
            else:
                left = Qt.project(F.apply_word(word))
                right = F.project(Qs.apply_word(word))
            if left != right:
                return p, word, left, right
    return None
