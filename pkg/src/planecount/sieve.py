"""Exact density computations for local smoothness conditions on plane curves.

The machinery here turns "what fraction of degree-d forms satisfies these
local conditions" into finite linear algebra:

* A :class:`JetConditions` object names finitely many rational points of the
  projective plane and, at each, an order: 1 ("the value of the form at the
  point") or 2 ("the value and both first partials in the point's chart").
  Stacking these coordinates gives a linear map from the coefficient space of
  degree-d forms onto a product of jet spaces.

* :func:`jet_matrix` writes that map down, one column per monomial, and a
  rank computation decides surjectivity.  When the map is surjective every
  fiber has the same cardinality, so the fraction of forms whose jets land in
  a prescribed target set equals |target| / q^dim **exactly** — no
  enumeration, no asymptotics.  That is :func:`fiber_density`.

* :func:`truncated_sieve_density` multiplies such a fiber density by the
  exact per-point smoothness factors (1 - q^(-3 deg P)) over all closed
  points of degree < r away from the conditioned points; the result is the
  exact density of forms that meet the local targets and are smooth at every
  closed point of degree below the cutoff, valid once the degree is large
  enough for the underlying jet map to be surjective.

* :func:`zeta_plane` / :func:`zeta_complement` give the exact rational zeta
  values whose reciprocal at s=3 is the limiting smooth density, and
  :func:`tail_bounds` gives the two explicit upper bounds that control the
  contribution of medium- and high-degree singular points.

Everything is exact: densities are `fractions.Fraction`, never floats.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Tuple

from .gf import GF
from .linalg import rank as matrix_rank
from .plane import ProjPoint, closed_point_count, enumerate_p2, jet_at, p2_size
from .poly import TernaryForm, monomial_count, monomials


class NonSurjectiveError(ValueError):
    """The jet evaluation map is not onto, so fibers need not be equal.

    Carries ``rank`` and ``dim`` so the caller can tell how far short the
    map fell (and, typically, retry with a larger degree).
    """

    def __init__(self, rank: int, dim: int, d: int):
        self.rank = rank
        self.dim = dim
        self.d = d
        super().__init__(
            f"jet map at degree {d} has rank {rank} < {dim}; "
            f"fiber counting needs surjectivity"
        )


class DegreeBoundError(ValueError):
    """The degree is below the threshold that guarantees the exact formula."""


class PointConstraint(Enum):
    """Per-point membership condition on an order-2 jet (value, d1, d2).

    Each kind knows its cardinality inside the point's jet space, so a
    product over points gives the target-set size in closed form.
    ``VALUE_*`` kinds only read the value coordinate and therefore make
    sense at order-1 points too; the jet kinds need order 2.
    """

    VALUE_ZERO = "value=0"
    VALUE_NONZERO = "value!=0"
    JET_ZERO = "jet=0"
    JET_NONZERO = "jet!=0"
    ON_CURVE_SMOOTH = "value=0,gradient!=0"
    FREE = "free"

    @property
    def min_order(self) -> int:
        if self in (PointConstraint.VALUE_ZERO, PointConstraint.VALUE_NONZERO,
                    PointConstraint.FREE):
            return 1
        return 2

    def cardinality(self, q: int, order: int) -> int:
        """Number of jet tuples satisfying this constraint.

        The ambient space is the order-1 jet space (q values) or the
        order-2 jet space (q^3 triples) of a rational point.
        """
        if order == 1:
            if self is PointConstraint.VALUE_ZERO:
                return 1
            if self is PointConstraint.VALUE_NONZERO:
                return q - 1
            if self is PointConstraint.FREE:
                return q
            raise ValueError(f"{self.value!r} needs an order-2 point")
        if order == 2:
            return {
                PointConstraint.VALUE_ZERO: q * q,
                PointConstraint.VALUE_NONZERO: (q - 1) * q * q,
                PointConstraint.JET_ZERO: 1,
                PointConstraint.JET_NONZERO: q ** 3 - 1,
                PointConstraint.ON_CURVE_SMOOTH: q * q - 1,
                PointConstraint.FREE: q ** 3,
            }[self]
        raise ValueError(f"order must be 1 or 2, got {order}")


@dataclass(frozen=True)
class JetConditions:
    """Finitely many rational points, each with a jet order (1 or 2).

    ``dim`` is the total number of linear coordinates being pinned: one per
    order-1 point, three per order-2 point.  Only rational points are
    allowed; conditions at higher-degree closed points enter the theory
    through counting alone (see :func:`truncated_sieve_density`), never
    through coordinates.
    """

    entries: Tuple[Tuple[ProjPoint, int], ...]

    def __post_init__(self):
        seen = set()
        for pt, order in self.entries:
            if order not in (1, 2):
                raise ValueError(f"jet order must be 1 or 2, got {order}")
            if pt in seen:
                raise ValueError(f"duplicate point {pt}")
            seen.add(pt)

    @staticmethod
    def of(*entries: Tuple[ProjPoint, int]) -> "JetConditions":
        return JetConditions(tuple(entries))

    @staticmethod
    def empty() -> "JetConditions":
        return JetConditions(())

    @property
    def dim(self) -> int:
        return sum(1 if order == 1 else 3 for _, order in self.entries)

    @property
    def points(self) -> Tuple[ProjPoint, ...]:
        return tuple(pt for pt, _ in self.entries)

    def describe(self) -> str:
        """Canonical human-readable form, stable across runs."""
        return ";".join(f"{pt}:{order}" for pt, order in self.entries)

    def digest(self) -> str:
        return hashlib.sha256(self.describe().encode()).hexdigest()[:12]


def all_rational_points(field: GF, order: int) -> JetConditions:
    """Conditions at every rational point of the plane, all at one order."""
    return JetConditions(tuple((pt, order) for pt in enumerate_p2(field)))


class JetMatrix:
    """The linear map (form coefficients) -> (pinned jet coordinates).

    Rows are ordered by condition entry; an order-1 entry contributes its
    value row, an order-2 entry contributes value, d/dx1, d/dx2 rows (in the
    point's own affine chart).  Columns follow the monomial order of
    :class:`TernaryForm`.  Row r applied to a coefficient vector gives the
    same number as evaluating the corresponding jet coordinate of the form.
    """

    def __init__(self, field: GF, d: int, conditions: JetConditions,
                 rows: Tuple[Tuple[int, ...], ...]):
        self.field = field
        self.d = d
        self.conditions = conditions
        self.rows = rows
        self._rank: Optional[int] = None

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return monomial_count(self.d)

    @property
    def dim(self) -> int:
        return self.conditions.dim

    def rank(self) -> int:
        if self._rank is None:
            self._rank = matrix_rank(self.field, [list(r) for r in self.rows])
        return self._rank

    def is_surjective(self) -> bool:
        return self.rank() == self.dim


def jet_matrix(field: GF, d: int, conditions: JetConditions) -> JetMatrix:
    """Write down the jet evaluation map at degree d as a matrix over F_q."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    rows = []
    unit_forms = _unit_forms(field, d)
    for pt, order in conditions.entries:
        jets = [jet_at(f, pt) for f in unit_forms]
        rows.append(tuple(j[0] for j in jets))
        if order == 2:
            rows.append(tuple(j[1] for j in jets))
            rows.append(tuple(j[2] for j in jets))
    return JetMatrix(field, d, conditions, tuple(rows))


@lru_cache(maxsize=None)
def _unit_forms(field: GF, d: int) -> Tuple[TernaryForm, ...]:
    """The monomial basis of the degree-d coefficient space, in column order."""
    n = monomial_count(d)
    forms = []
    for j in range(n):
        coeffs = [0] * n
        coeffs[j] = 1
        forms.append(TernaryForm(field, d, tuple(coeffs)))
    return tuple(forms)


@dataclass(frozen=True)
class TargetSet:
    """One membership constraint per conditioned point.

    The target is a product set inside the product of jet spaces; its
    cardinality is the product of per-point cardinalities, each available in
    closed form.
    """

    conditions: JetConditions
    constraints: Tuple[PointConstraint, ...]

    def __post_init__(self):
        if len(self.constraints) != len(self.conditions.entries):
            raise ValueError("one constraint per conditioned point required")
        for (pt, order), c in zip(self.conditions.entries, self.constraints):
            if c.min_order > order:
                raise ValueError(
                    f"constraint {c.value!r} at {pt} needs order {c.min_order}, "
                    f"point has order {order}")

    def cardinality(self, q: int) -> int:
        total = 1
        for (_, order), c in zip(self.conditions.entries, self.constraints):
            total *= c.cardinality(q, order)
        return total

    def describe(self) -> str:
        return ";".join(c.value for c in self.constraints)


def uniform_target(conditions: JetConditions, kind: PointConstraint) -> TargetSet:
    """The same constraint at every conditioned point."""
    return TargetSet(conditions, tuple(kind for _ in conditions.entries))


def fiber_density(field: GF, d: int, conditions: JetConditions,
                  target: TargetSet) -> Fraction:
    """Exact fraction of degree-d forms whose jets land in the target set.

    Requires (and checks, by an explicit rank computation) that the jet
    evaluation map is surjective at this degree; a surjective linear map has
    all fibers of equal size q^(N - dim), so the density is exactly
    |target| / q^dim.  Raises :class:`NonSurjectiveError` otherwise.
    """
    if target.conditions is not conditions and target.conditions != conditions:
        raise ValueError("target set built for different conditions")
    m = jet_matrix(field, d, conditions)
    if not m.is_surjective():
        raise NonSurjectiveError(m.rank(), m.dim, d)
    return Fraction(target.cardinality(field.q), field.q ** conditions.dim)


def points_off_conditions(field: GF, e: int, conditions: JetConditions) -> int:
    """Closed points of degree e of the plane minus the conditioned points.

    Conditioned points are rational, so only the degree-1 count changes.
    """
    n = closed_point_count(field, e)
    if e == 1:
        n -= len(conditions.entries)
    return n


def sieve_degree_bound(r: int, conditions: JetConditions, field: GF) -> int:
    """Smallest degree at which the truncated sieve formula is guaranteed.

    The guarantee needs the jet map onto the order-2 jets of every closed
    point of degree < r (away from the conditioned points) jointly with the
    conditioned coordinates; 3*r*s + dim - 1 suffices, where s counts those
    closed points.
    """
    s = sum(points_off_conditions(field, e, conditions) for e in range(1, r))
    return 3 * r * s + conditions.dim - 1


def truncated_sieve_density(field: GF, d: int, r: int,
                            conditions: JetConditions, target: TargetSet,
                            ) -> Fraction:
    """Exact density of forms meeting the target AND smooth at every closed
    point of degree < r away from the conditioned points.

    Valid (and exact, not asymptotic) once d is at least
    :func:`sieve_degree_bound`; below that threshold the formula may still
    be correct but is not guaranteed, so a :class:`DegreeBoundError` is
    raised — use :func:`certified_truncated_density` for an explicit
    rank-certified alternative when every relevant point is rational.

    The value is (|target| / q^dim) * prod over those closed points P of
    (1 - q^(-3 deg P)).
    """
    if r < 0:
        raise ValueError("cutoff r must be >= 0")
    bound = sieve_degree_bound(r, conditions, field)
    if d < bound:
        raise DegreeBoundError(
            f"degree {d} below guaranteed threshold {bound} for cutoff r={r}")
    dens = fiber_density(field, d, conditions, target)
    q = field.q
    for e in range(1, r):
        n_e = points_off_conditions(field, e, conditions)
        dens *= (1 - Fraction(1, q ** (3 * e))) ** n_e
    return dens


def certified_truncated_density(field: GF, d: int,
                                conditions: JetConditions, target: TargetSet,
                                ) -> Fraction:
    """Rank-certified version of the r=2 truncated sieve density.

    Smoothness at degree < 2 means smoothness at the rational points only,
    and those conditions live in jet coordinates we can write down.  So
    instead of trusting a degree threshold, augment the conditions with
    order-2 jets at every rational point not already conditioned, check
    surjectivity of the whole stacked map by explicit rank, and read off

        (|target| / q^dim) * ((q^3 - 1) / q^3)^m

    with m the number of augmented points.  Raises
    :class:`NonSurjectiveError` (with the achieved rank) if the certificate
    fails at this degree.  Where the degree threshold of
    :func:`truncated_sieve_density` also holds, the two routes agree.
    """
    q = field.q
    conditioned = set(conditions.points)
    extra = [pt for pt in enumerate_p2(field) if pt not in conditioned]
    joint = JetConditions(tuple(conditions.entries)
                          + tuple((pt, 2) for pt in extra))
    m = jet_matrix(field, d, joint)
    if not m.is_surjective():
        raise NonSurjectiveError(m.rank(), m.dim, d)
    dens = Fraction(target.cardinality(q), q ** conditions.dim)
    dens *= Fraction(q ** 3 - 1, q ** 3) ** len(extra)
    return dens


def smallest_surjective_d(field: GF, conditions: JetConditions,
                          d_max: int = 24) -> Optional[int]:
    """Smallest degree at which the jet map for these conditions is onto.

    Scans d = 1, 2, ... up to d_max; returns None if never surjective in
    range.  Rank is monotone in d here (degree-d columns embed into degree-
    (d+1) columns after multiplying by a linear form that is nonzero at
    every conditioned point — such a form exists only when q is large
    enough, so monotonicity is NOT assumed: every degree is checked).
    """
    for d in range(1, d_max + 1):
        m = jet_matrix(field, d, conditions)
        if m.is_surjective():
            return d
    return None


def zeta_plane(field: GF, s: int) -> Fraction:
    """Zeta value of the projective plane at an integer s >= 3, exactly.

    The Euler product over closed points collapses to
    1 / ((1 - q^-s)(1 - q^(1-s))(1 - q^(2-s))); it converges only for
    s > 2, hence the bound.  The reciprocal at s = 3 is the limiting
    density of smooth forms.
    """
    if s <= 2:
        raise ValueError("zeta of the plane needs s >= 3")
    q = field.q
    val = Fraction(1)
    for a in range(3):
        val /= 1 - Fraction(1, q ** (s - a))
    return val


def zeta_complement(field: GF, s: int, conditions: JetConditions) -> Fraction:
    """Zeta value of the plane minus the conditioned (rational) points.

    Removing a rational point divides the Euler product by its local factor
    1/(1 - q^-s).
    """
    val = zeta_plane(field, s)
    q = field.q
    for _ in conditions.entries:
        val *= 1 - Fraction(1, q ** s)
    return val


def smooth_density_limit(field: GF) -> Fraction:
    """Limiting fraction of smooth forms as the degree grows: 1/zeta(3)."""
    return 1 / zeta_plane(field, 3)


def tail_bounds(field: GF, d: int, r: int) -> Tuple[Fraction, Fraction]:
    """The two explicit tail estimates, as exact rationals.

    medium: an upper bound for the density of forms singular at some closed
    point of degree in [r, d/3], namely 2 q^-r / (1 - q^-1).

    high: an upper bound for the density of forms singular at some closed
    point of degree > d/3, namely
    3 (d-1)^2 q^(-min(floor(d/p)+1, floor(d/3))) + 3 d q^(-floor((d-1)/p)-1).
    All floors are integer-arithmetic floors; flooring the d/3 exponent only
    enlarges the bound, so it stays a valid bound.

    Both are often >= 1 at small scale, i.e. vacuous; callers must check
    before claiming a validation.
    """
    if d < 1 or r < 1:
        raise ValueError("need d >= 1 and r >= 1")
    q = field.q
    p = field.p
    medium = 2 * Fraction(1, q ** r) / (1 - Fraction(1, q))
    exp1 = min(d // p + 1, d // 3)
    exp2 = (d - 1) // p + 1
    high = (3 * (d - 1) ** 2 * Fraction(1, q ** exp1)
            + 3 * d * Fraction(1, q ** exp2))
    return medium, high


def singular_point_degree_range(d: int, r: int) -> Tuple[int, int]:
    """Closed-point degree window [r, floor(d/3)] covered by the medium bound.

    Degrees are integers, so the window is empty exactly when floor(d/3) < r.
    """
    return r, d // 3
