"""Exact sparse linear algebra over Q.

Rows are dicts ``column -> Fraction``. Ranks use fraction-free integer
elimination (rows scaled to primitive integer vectors); kernels and
solutions use Gauss-Jordan over Fraction. Pivots are chosen by the lowest
column index, so every result is deterministic in the basis order.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

Row = dict


def _primitive(row: Mapping) -> dict[int, int]:
    den = 1
    for c in row.values():
        den = lcm(den, Fraction(c).denominator)
    ints = {k: int(Fraction(c) * den) for k, c in row.items() if c}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    if g > 1:
        ints = {k: v // g for k, v in ints.items()}
    return ints


def rank(rows: Iterable[Mapping]) -> int:
    """Rank via fraction-free elimination on primitive integer rows."""
    pivots: dict[int, dict[int, int]] = {}
    r = 0
    for row in rows:
        cur = _primitive(row)
        while cur:
            col = min(cur)
            piv = pivots.get(col)
            if piv is None:
                pivots[col] = cur
                r += 1
                break
            a, b = piv[col], cur[col]
            new = {}
            for k in set(cur) | set(piv):
                v = a * cur.get(k, 0) - b * piv.get(k, 0)
                if v:
                    new[k] = v
            cur = _primitive(new) if new else {}
    return r


def rref(rows: Iterable[Mapping]) -> tuple[list[dict], list[int]]:
    """Reduced row echelon form; returns (rows, pivot columns), rows sorted by pivot."""
    basis: dict[int, dict] = {}
    for row in rows:
        cur = {k: Fraction(v) for k, v in row.items() if v}
        # basis rows vanish on each other's pivots, so one pass suffices
        for col in sorted(set(cur) & set(basis)):
            c = cur[col]
            for k, v in basis[col].items():
                nv = cur.get(k, 0) - c * v
                if nv:
                    cur[k] = nv
                else:
                    cur.pop(k, None)
        if not cur:
            continue
        col = min(cur)
        inv = 1 / cur[col]
        cur = {k: v * inv for k, v in cur.items()}
        for other in basis.values():
            c = other.get(col)
            if c:
                for k, v in cur.items():
                    nv = other.get(k, 0) - c * v
                    if nv:
                        other[k] = nv
                    else:
                        other.pop(k, None)
        basis[col] = cur
    pivots = sorted(basis)
    return [basis[c] for c in pivots], pivots


def nullspace(rows: Iterable[Mapping], ncols: int) -> list[dict]:
    """Basis of {x : row . x = 0 for all rows}, one vector per free column."""
    red, pivots = rref(rows)
    pset = set(pivots)
    out = []
    for free in range(ncols):
        if free in pset:
            continue
        vec = {free: Fraction(1)}
        for prow, pc in zip(red, pivots):
            c = prow.get(free)
            if c:
                vec[pc] = -c
        out.append(vec)
    return out


def solve(rows: Sequence[Mapping], rhs: Sequence, ncols: int) -> dict | None:
    """One solution x of M x = rhs (free variables set to 0), or None."""
    aug = ncols
    ext = []
    for row, b in zip(rows, rhs):
        r = dict(row)
        if b:
            r[aug] = Fraction(b)
        ext.append(r)
    red, pivots = rref(ext)
    if aug in pivots:
        return None
    x = {}
    for prow, pc in zip(red, pivots):
        b = prow.get(aug)
        if b:
            x[pc] = b
    return x


def mat_vec(rows: Sequence[Mapping], x: Mapping) -> list[Fraction]:
    return [sum((c * x.get(k, 0) for k, c in row.items()), Fraction(0)) for row in rows]


def transpose(rows: Sequence[Mapping], ncols: int) -> list[dict]:
    cols: list[dict] = [{} for _ in range(ncols)]
    for i, row in enumerate(rows):
        for k, c in row.items():
            if c:
                cols[k][i] = Fraction(c)
    return cols


def independent_subset(vectors: Sequence[Mapping]) -> list[int]:
    """Indices of a greedy maximal independent subfamily (earliest first)."""
    keep = []
    basis: dict[int, dict] = {}
    for idx, v in enumerate(vectors):
        cur = {k: Fraction(c) for k, c in v.items() if c}
        while cur:
            col = min(cur)
            piv = basis.get(col)
            if piv is None:
                inv = 1 / cur[col]
                basis[col] = {k: c * inv for k, c in cur.items()}
                keep.append(idx)
                break
            c = cur[col]
            for k, pv in piv.items():
                nv = cur.get(k, 0) - c * pv
                if nv:
                    cur[k] = nv
                else:
                    cur.pop(k, None)
    return keep


def complement_units(vectors: Sequence[Mapping], ncols: int) -> list[int]:
    """Unit columns e_j extending span(vectors) to the whole space, lowest j first."""
    fam = [dict(v) for v in vectors]
    start = len(independent_subset(fam))
    out = []
    for j in range(ncols):
        trial = fam + [{j: Fraction(1)}]
        if len(independent_subset(trial)) > start:
            fam = trial
            start += 1
            out.append(j)
    return out


def inverse(rows: Sequence[Mapping], n: int) -> list[dict] | None:
    """Inverse of a square n x n matrix, or None when singular."""
    ext = []
    for i, row in enumerate(rows):
        r = {k: Fraction(v) for k, v in row.items() if v}
        r[n + i] = Fraction(1)
        ext.append(r)
    red, pivots = rref(ext)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        return None
    return [{k - n: v for k, v in red[i].items() if k >= n} for i in range(n)]
