"""Pure-Python census backend (numpy-vectorized counting, exact decisions).

This is the fallback twin of the compiled kernel: identical contract,
identical results, no build step.  Point counting is table-driven and
fast; the smooth-mode decision falls back to the reference
`is_smooth`, so exhaustive smooth censuses of large spaces are slow
here — that is the price of a no-compiler environment, and the
benchmark script quantifies it.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..gf import GF
from ..linalg import np_field_tables
from ..plane import enumerate_p2, p2_size
from ..poly import TernaryForm, monomial_count, monomials
from ..smooth import is_smooth

_CHUNK = 1 << 16


@lru_cache(maxsize=None)
def _monomial_values(field: GF, d: int) -> np.ndarray:
    """(n_points, N) array: value of each degree-d monomial at each
    rational point, in enumeration order."""
    pts = enumerate_p2(field)
    N = monomial_count(d)
    out = np.zeros((len(pts), N), dtype=np.uint8)
    for i, P in enumerate(pts):
        x, y, z = P.coords
        for j, (a, b, c) in enumerate(monomials(d)):
            out[i, j] = field.mul(field.mul(field.pow(x, a), field.pow(y, b)), field.pow(z, c))
    return out


@lru_cache(maxsize=None)
def _parity_masks(field: GF, d: int) -> np.ndarray:
    """For q = 2 only: per-point bitmasks over coefficient bits."""
    mv = _monomial_values(field, d)
    N = mv.shape[1]
    weights = (1 << np.arange(N, dtype=np.int64))
    return (mv.astype(np.int64) * weights[None, :]).sum(axis=1)


def _point_hits(field: GF, d: int, idx: np.ndarray) -> np.ndarray:
    """Number of rational points on each candidate curve (idx nonzero)."""
    q = field.q
    if q == 2:
        masks = _parity_masks(field, d)
        par = np.bitwise_count(idx[:, None] & masks[None, :]).astype(np.uint8) & 1
        return (par == 0).sum(axis=1).astype(np.int64)
    add_t, mul_t = np_field_tables(field)
    N = monomial_count(d)
    mv = _monomial_values(field, d)
    digits = np.empty((len(idx), N), dtype=np.uint8)
    rest = idx.copy()
    for j in range(N):
        digits[:, j] = rest % q
        rest //= q
    hits = np.zeros(len(idx), dtype=np.int64)
    for p in range(mv.shape[0]):
        acc = np.zeros(len(idx), dtype=np.uint8)
        for j in range(N):
            m = mv[p, j]
            if m:
                acc = add_t[acc, mul_t[m, digits[:, j]]]
        hits += acc == 0
    return hits


def census(
    field: GF,
    d: int,
    mode: str,
    start: int,
    stop: int,
    mask: np.ndarray | None = None,
) -> np.ndarray:
    """Histogram of rational point counts over candidate indices in
    [start, stop).  mode 'all' counts every nonzero form; mode 'smooth'
    counts only forms smooth over the closure.  ``mask`` (optional,
    smooth mode) is a boolean prescan: True entries are known-singular
    and skipped without a decision."""
    if mode not in ("all", "smooth"):
        raise ValueError(f"unknown census mode {mode!r}")
    nslots = p2_size(field.q) + 1
    counts = np.zeros(nslots, dtype=np.int64)
    if mode == "all":
        for lo in range(start, stop, _CHUNK):
            hi = min(lo + _CHUNK, stop)
            idx = np.arange(lo, hi, dtype=np.int64)
            if lo == 0:
                idx = idx[1:]
            if len(idx) == 0:
                continue
            t = _point_hits(field, d, idx)
            counts += np.bincount(t, minlength=nslots)
        return counts
    for lo in range(start, stop, _CHUNK):
        hi = min(lo + _CHUNK, stop)
        idx = np.arange(lo, hi, dtype=np.int64)
        if lo == 0:
            idx = idx[1:]
        if len(idx) == 0:
            continue
        if mask is not None:
            idx = idx[~mask[idx]]
            if len(idx) == 0:
                continue
        keep = np.fromiter(
            (is_smooth(TernaryForm.from_index(field, d, int(n))).smooth for n in idx),
            dtype=bool,
            count=len(idx),
        )
        idx = idx[keep]
        if len(idx):
            t = _point_hits(field, d, idx)
            counts += np.bincount(t, minlength=nslots)
    return counts
