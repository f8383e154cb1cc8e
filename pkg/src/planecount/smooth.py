"""Deciding smoothness of plane curves over the algebraic closure.

A curve {F = 0} is singular at a point exactly when the order-2 jet
(value and both chart partials) vanishes there, and smoothness over the
closure is a statement about all three affine charts at once.  The
decision here is exact and never leaves exact arithmetic:

* cheap rational scan first (it also yields a replayable witness),
* per chart, resultants of the jet system collapse the two-variable
  question to a one-variable one,
* a common-root analysis on the gcd of those constraints answers the
  one-variable question without polynomial factorization, by dynamic
  evaluation: work modulo a composite modulus and split it whenever a
  leading coefficient fails to be invertible,
* in the rare degenerate case (all resultant constraints identically
  zero) the chart falls back to an ideal-triviality test.

An independent scan oracle (`singular_scan_oracle`) and a batch
linear-algebra route (`singular_mask`) provide two further ways to the
same answers; the test suite plays the routes against each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf import GF, ext_coords, make_field
from .linalg import kernel_basis, np_field_tables
from .plane import ProjPoint, closed_points, enumerate_p2, jet_at
from .poly import (
    AffinePoly,
    TernaryForm,
    ideal_trivial,
    monomial_count,
    resultant_y,
    uadd,
    udivmod,
    ugcd,
    umul,
    unorm,
    uscale,
)


@dataclass(frozen=True)
class SmoothnessVerdict:
    """Outcome of a smoothness decision.

    ``witness`` is a singular point when one was cheaply available
    (always replayable through ``is_singular_at``); a None witness on a
    singular verdict means the singularity lives in an extension and was
    established by elimination rather than by exhibiting the point.
    """

    smooth: bool
    witness: ProjPoint | None = None
    witness_degree: int | None = None

    def __bool__(self) -> bool:
        return self.smooth


def is_singular_at(form: TernaryForm, P: ProjPoint) -> bool:
    """True iff the curve {form = 0} is singular at P (the jet vanishes)."""
    return jet_at(form, P) == (0, 0, 0)


def singular_scan_oracle(form: TernaryForm, max_e: int | None = None) -> list[ProjPoint]:
    """Brute-force search for singular points: walk closed points of
    degree e = 1..max_e (default (d-1)^2) and return the singular ones,
    one representative per closed point, in enumeration order.

    This is the slow, independently-trustworthy route; `is_smooth` is the
    fast one.  The two are compared exhaustively in the acceptance tests.
    Extensions are built through the usual field-size guard, so an
    over-ambitious bound fails loudly rather than silently truncating.
    """
    if form.is_zero:
        raise ValueError("the zero form does not cut out a curve")
    if max_e is None:
        max_e = (form.d - 1) ** 2
    found = []
    for e in range(1, max_e + 1):
        for P in closed_points(form.field, e):
            if is_singular_at(form, P):
                found.append(P)
    return found


# ---------------------------------------------------------------------------
# The exact decision.
# ---------------------------------------------------------------------------


def is_smooth(form: TernaryForm) -> SmoothnessVerdict:
    """Decide smoothness of {form = 0} over the algebraic closure."""
    if form.is_zero:
        raise ValueError("the zero form does not cut out a curve")
    F = form.field
    for P in enumerate_p2(F):
        if jet_at(form, P) == (0, 0, 0):
            return SmoothnessVerdict(False, witness=P, witness_degree=1)
    if form.d == 1:
        return SmoothnessVerdict(True)
    for chart in range(3):
        if _chart_has_singular_point(form.dehomogenize(chart)):
            return SmoothnessVerdict(False)
    return SmoothnessVerdict(True)


def _chart_has_singular_point(f: AffinePoly) -> bool:
    """Does {f = f_x1 = f_x2 = 0} have a solution over the closure?"""
    F = f.field
    g1 = f.partial(0)
    g2 = f.partial(1)
    if f.degree() <= 0:
        return False  # nonzero constant: no zero at all in this chart
    if g1.is_zero and g2.is_zero:
        return True  # nonconstant f with identically vanishing gradient
    for g in (g1, g2):
        if not g.is_zero and g.degree() == 0:
            return False  # a unit constraint kills the system
    system = [f] + [g for g in (g1, g2) if not g.is_zero]
    involved = [u for u in system if u.deg_y() >= 1]
    pure = [u.ymajor()[0] for u in system if u.deg_y() == 0]
    if not involved:
        g: list[int] = []
        for u in pure:
            g = ugcd(F, g, u)
        return len(g) - 1 >= 1
    involved.sort(key=lambda u: u.deg_y())
    base = involved[0].ymajor()
    constraints = list(pure)
    for u in involved[1:]:
        constraints.append(resultant_y(F, base, u.ymajor()))
    if not any(constraints):
        # every elimination constraint vanished identically; ask the ideal
        return not ideal_trivial(system)
    g = []
    for c in constraints:
        if c:
            g = ugcd(F, g, c)
    if len(g) - 1 == 0:
        return False
    return exists_common_root_mod(F, g, [u.ymajor() for u in system])


# ---------------------------------------------------------------------------
# Dynamic evaluation: the one-variable root analysis.  Polynomials in y
# over F[x]/(m) are lists of reduced x-polynomials, low y-degree first,
# with exact-zero top coefficients stripped.
# ---------------------------------------------------------------------------


def _umod(F: GF, a: list[int], m: list[int]) -> list[int]:
    return udivmod(F, a, m)[1]


def _inv_mod(F: GF, c: list[int], m: list[int]) -> list[int]:
    """Inverse of c modulo m; caller guarantees gcd(c, m) = 1."""
    r0, r1 = unorm(list(c)), unorm(list(m))
    s0, s1 = [1], []
    while r1:
        qt, rem = udivmod(F, r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, uadd(F, s0, uscale(F, F.neg(1), umul(F, qt, s1)))
    assert len(r0) == 1
    return _umod(F, uscale(F, F.inv(r0[0]), s0), m)


def _reduce_ymajor(F: GF, poly: list[list[int]], m: list[int]) -> list[list[int]]:
    out = [_umod(F, c, m) for c in poly]
    while out and not out[-1]:
        out.pop()
    return out


def _yrem(F: GF, a: list[list[int]], b: list[list[int]], m: list[int]) -> list[list[int]]:
    """Remainder of a modulo b in (F[x]/m)[y]; b must be monic in y."""
    r = [c[:] for c in a]
    db = len(b) - 1
    while len(r) - 1 >= db:
        lead = r[-1]
        if lead:
            shift = len(r) - 1 - db
            for i in range(db):
                if b[i]:
                    t = _umod(F, umul(F, lead, b[i]), m)
                    r[shift + i] = _umod(F, uadd(F, r[shift + i], uscale(F, F.neg(1), t)), m)
        r.pop()
        while r and not r[-1]:
            r.pop()
    return r


def exists_common_root_mod(F: GF, modulus: list[int], polys: list[list[list[int]]]) -> bool:
    """Is there an irreducible factor w of ``modulus`` and a point (a, b),
    with w(a) = 0 and b in the algebraic closure, at which every poly in
    ``polys`` (given x2-major over F[x1]) vanishes?

    The modulus is never factored: it splits lazily when some leading
    coefficient turns out not to be invertible, so the control flow is
    deterministic and every answer is exact.
    """
    stack = [unorm(list(modulus))]
    while stack:
        m = stack.pop()
        if len(m) - 1 < 1:
            continue
        reduced = [_reduce_ymajor(F, p, m) for p in polys]
        if all(not r for r in reduced):
            return True  # every constraint vanishes identically mod m
        # Constants in y must vanish at the root: shrink m accordingly.
        consts = [r[0] for r in reduced if len(r) == 1]
        if consts:
            cur = m
            for c in consts:
                cur = ugcd(F, c, cur)
                if len(cur) - 1 == 0:
                    break
            if len(cur) - 1 >= 1:
                stack.append(cur)
            continue
        live = [r for r in reduced if r]
        # Monicize every live poly so y-degrees are stable modulo every
        # irreducible factor of m; splits restart with smaller moduli.
        monic = []
        pieces = None
        for r in live:
            lc = r[-1]
            w = ugcd(F, lc, m)
            if len(w) - 1 >= 1:
                other, rem = udivmod(F, m, w)
                assert not rem
                pieces = [w, unorm(other)]
                break
            inv = _inv_mod(F, lc, m)
            mr = [_umod(F, umul(F, inv, c), m) for c in r]
            mr[-1] = [1]
            monic.append(mr)
        if pieces is not None:
            stack.extend(p for p in pieces if len(p) - 1 >= 1)
            continue
        g = monic[0]
        for r in monic[1:]:
            g, split_w = _ygcd_pair(F, g, r, m)
            if split_w is not None:
                other, rem = udivmod(F, m, split_w)
                assert not rem
                stack.extend(p for p in (split_w, unorm(other)) if len(p) - 1 >= 1)
                g = None
                break
            if len(g) == 1:
                break  # unit gcd already
        if g is None:
            continue
        if len(g) - 1 >= 1:
            return True
        # g is the unit polynomial: no common y-root modulo any factor.
    return False


def _ygcd_pair(F: GF, a, b, m):
    """gcd of two y-polynomials modulo m, both monic in y on entry.

    Returns (gcd, None) with the gcd monic in y (so a trailing [1] means
    the unit), or (None, w) when the modulus must split at the proper
    factor w.
    """
    while b:
        lc = b[-1]
        w = ugcd(F, lc, m)
        if len(w) - 1 >= 1:
            return None, w
        inv = _inv_mod(F, lc, m)
        bm = [_umod(F, umul(F, inv, c), m) for c in b]
        bm[-1] = [1]
        r = _yrem(F, a, bm, m)
        a, b = bm, r
    return a, None


# ---------------------------------------------------------------------------
# Batch route: mark every coefficient vector whose curve is singular at
# some closed point of the given degrees.  One linear-algebra kernel per
# closed point, enumerated with table-driven numpy.
# ---------------------------------------------------------------------------

_MASK_MAX_INDICES = 1 << 31


def singular_mask(field: GF, d: int, degrees) -> np.ndarray:
    """Boolean array over all q^N coefficient vectors of degree-d forms:
    True exactly for curves singular at some closed point whose degree
    lies in ``degrees``.  (Index 0, the zero form, is marked.)

    Exact by construction: the order-2 jet at a point is linear in the
    coefficients, so the forms singular there are precisely a kernel.
    """
    N = monomial_count(d)
    q = field.q
    total = q**N
    if total > _MASK_MAX_INDICES:
        raise ValueError(f"mask over {total} candidates is out of reach")
    add_t, mul_t = np_field_tables(field)
    weights = q ** np.arange(N, dtype=np.int64)
    mask = np.zeros(total, dtype=bool)
    basis_forms = [
        TernaryForm(field, d, [1 if i == j else 0 for i in range(N)]) for j in range(N)
    ]
    for e in sorted(set(degrees)):
        ext = make_field(field.p, field.k * e)
        xc = ext_coords(field, ext) if e > 1 else None
        for P in closed_points(field, e):
            rows: list[list[int]] = [[] for _ in range(3 * e)]
            for bf in basis_forms:
                jet = jet_at(bf, P)
                for comp in range(3):
                    coords = xc(jet[comp]) if e > 1 else (jet[comp],)
                    for r, val in enumerate(coords):
                        rows[comp * e + r].append(val)
            kern = kernel_basis(field, rows, N)
            digits = np.zeros((1, N), dtype=np.uint8)
            for v in kern:
                varr = np.array(v, dtype=np.uint8)
                blocks = [digits]
                for c in range(1, q):
                    cv = mul_t[c, varr]
                    blocks.append(add_t[digits, cv[None, :]])
                digits = np.concatenate(blocks, axis=0)
            idx = digits.astype(np.int64) @ weights
            mask[idx] = True
    return mask
