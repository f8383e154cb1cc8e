"""Dense linear algebra over a small finite field (plain row operations)."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .gf import GF


def rref(F: GF, rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv(m[r][c])
        m[r] = [F.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(F: GF, rows: list[list[int]]) -> int:
    return len(rref(F, rows)[1])


def kernel_basis(F: GF, rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Basis of the right kernel of the matrix given by ``rows``."""
    red, pivots = rref(F, rows)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = F.neg(red[r][fc])
        basis.append(v)
    return basis


_NP_TABLE_MAX_Q = 256


@lru_cache(maxsize=None)
def np_field_tables(F: GF) -> tuple[np.ndarray, np.ndarray]:
    """(add, mul) tables as q-by-q uint8 arrays, for vectorized sweeps."""
    q = F.q
    if q > _NP_TABLE_MAX_Q:
        raise ValueError(f"field too large for table-driven sweeps (q={q})")
    add = np.zeros((q, q), dtype=np.uint8)
    mul = np.zeros((q, q), dtype=np.uint8)
    for a in range(q):
        for b in range(q):
            add[a, b] = F.add(a, b)
            mul[a, b] = F.mul(a, b)
    return add, mul
