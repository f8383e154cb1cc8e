"""Census kernels: a compiled fast path and a pure-Python twin.

The compiled extension specializes the binary field (coefficients as
machine words); everything else runs on the pure backend.  Both expose
the same contract and return identical integer histograms — the test
suite holds them to that — so which one runs is purely a speed matter.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..gf import GF, make_field
from ..plane import p2_size
from ..poly import TernaryForm, monomial_count, monomials
from ..smooth import is_smooth
from . import _purepy

try:
    from . import _fast
except ImportError:  # pragma: no cover - build-environment dependent
    _fast = None

HAVE_FAST = _fast is not None


def available_backends() -> tuple[str, ...]:
    return ("fast", "pure") if HAVE_FAST else ("pure",)


def fast_eligible(field: GF, d: int, mode: str) -> bool:
    """Can the compiled kernel run this job?  (Binary prime field only;
    smooth decisions are specialized to d <= 5, where every intermediate
    of the fraction-free elimination fits the word size.)"""
    if not HAVE_FAST or field.p != 2 or field.k != 1:
        return False
    if mode == "all":
        return monomial_count(d) <= 63
    return d <= 5


@lru_cache(maxsize=None)
def _q2_tables(d: int):
    F2 = make_field(2)
    pm = _purepy._parity_masks(F2, d).astype(np.int64)
    N = monomial_count(d)
    tab = np.full((3, N, 6), -1, dtype=np.int32)
    for ch in range(3):
        rest = [v for v in range(3) if v != ch]
        for j, mono in enumerate(monomials(d)):
            e1, e2 = mono[rest[0]], mono[rest[1]]
            tab[ch, j, 0] = e2  # slot index = second-affine-variable degree
            tab[ch, j, 1] = e1
            if e1 % 2 == 1:
                tab[ch, j, 2] = e2
                tab[ch, j, 3] = e1 - 1
            if e2 % 2 == 1:
                tab[ch, j, 4] = e2 - 1
                tab[ch, j, 5] = e1
    return pm, tab


def census(
    field: GF,
    d: int,
    mode: str,
    start: int,
    stop: int,
    *,
    mask: np.ndarray | None = None,
    backend: str | None = None,
) -> np.ndarray:
    """Histogram (indexed by rational point count t) of the nonzero
    candidates in [start, stop): every form in mode 'all', only the
    smooth ones in mode 'smooth'.  ``mask`` is an optional known-singular
    prescan; ``backend`` forces 'fast' or 'pure' (None picks)."""
    if mode not in ("all", "smooth"):
        raise ValueError(f"unknown census mode {mode!r}")
    if backend not in (None, "fast", "pure"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "fast" and not fast_eligible(field, d, mode):
        raise ValueError("compiled kernel unavailable or ineligible for this job")
    use_fast = fast_eligible(field, d, mode) if backend is None else backend == "fast"
    if not use_fast:
        return _purepy.census(field, d, mode, start, stop, mask=mask)
    pm, tab = _q2_tables(d)
    mask8 = None if mask is None else np.ascontiguousarray(mask).view(np.uint8)

    def fallback(n: int) -> bool:
        return is_smooth(TernaryForm.from_index(field, d, int(n))).smooth

    counts = _fast.census_q2(d, start, stop, mode == "smooth", mask8, pm, tab, fallback)
    out = np.zeros(p2_size(field.q) + 1, dtype=np.int64)
    out[: len(counts)] = counts
    return out


def decide_smooth(field: GF, d: int, n: int, *, backend: str | None = None) -> bool:
    """Single-candidate smoothness decision through the chosen backend."""
    if backend == "fast" or (backend is None and fast_eligible(field, d, "smooth")):
        if not fast_eligible(field, d, "smooth"):
            raise ValueError("compiled kernel unavailable or ineligible for this job")
        _, tab = _q2_tables(d)
        v = _fast.decide_q2(n, tab)
        if v != 2:
            return bool(v)
    return is_smooth(TernaryForm.from_index(field, d, n)).smooth
