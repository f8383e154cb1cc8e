"""The projective plane over a small field: points, counting, jets.

Points are kept in normalized form (first nonzero coordinate scaled to 1),
so equality is plain tuple equality and the enumeration order — ascending
lex on the normalized triple — is canonical: [0:0:1], then the q points
[0:1:c], then the q^2 points [1:b:c].
"""

from __future__ import annotations

from functools import lru_cache

from .gf import GF, embed, make_field
from .poly import AffinePoly, TernaryForm


class ProjPoint:
    """A point of P^2 over ``field``, stored with normalized coordinates."""

    __slots__ = ("field", "coords")

    def __init__(self, field: GF, coords):
        coords = tuple(coords)
        if len(coords) != 3 or all(c == 0 for c in coords):
            raise ValueError("projective coordinates must be a nonzero triple")
        lead = next(c for c in coords if c != 0)
        if lead != 1:
            inv = field.inv(lead)
            coords = tuple(field.mul(inv, c) for c in coords)
        self.field = field
        self.coords = coords

    @property
    def chart(self) -> int:
        """Index of the first nonzero (= leading 1) coordinate."""
        return next(i for i, c in enumerate(self.coords) if c != 0)

    def affine(self) -> tuple[int, int]:
        """The two coordinates after the chart one, in index order."""
        ch = self.chart
        rest = [self.coords[v] for v in range(3) if v != ch]
        return (rest[0], rest[1])

    def frobenius(self) -> "ProjPoint":
        F = self.field
        return ProjPoint(F, tuple(F.frobenius(c) for c in self.coords))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ProjPoint)
            and self.field == other.field
            and self.coords == other.coords
        )

    def __hash__(self) -> int:
        return hash((self.field, self.coords))

    def __str__(self) -> str:
        return "[" + ":".join(str(c) for c in self.coords) + "]"

    def __repr__(self) -> str:
        return f"ProjPoint({self.field!r}, {self})"


def p2_size(q: int) -> int:
    return q * q + q + 1


@lru_cache(maxsize=None)
def enumerate_p2(field: GF) -> tuple[ProjPoint, ...]:
    """All points of P^2(field) in ascending lex order on normalized triples."""
    pts = [ProjPoint(field, (0, 0, 1))]
    for c in field.elements():
        pts.append(ProjPoint(field, (0, 1, c)))
    for b in field.elements():
        for c in field.elements():
            pts.append(ProjPoint(field, (1, b, c)))
    assert len(pts) == p2_size(field.q)
    return tuple(pts)


def point_count(form: TernaryForm, e: int = 1, *, size_limit=None) -> int:
    """Number of points of P^2(F_{q^e}) lying on the curve {form = 0}."""
    if form.is_zero:
        raise ValueError("the zero form does not cut out a curve")
    F = form.field
    if e == 1:
        K = F
    else:
        kwargs = {} if size_limit is None else {"size_limit": size_limit}
        K = make_field(F.p, F.k * e, **kwargs)
    return sum(1 for P in enumerate_p2(K) if form.evaluate(P.coords, K) == 0)


def _base_frobenius(base: GF, ext: GF, x: int) -> int:
    return ext.pow(x, base.q)


def point_degree(base: GF, P: ProjPoint) -> int:
    """Degree over ``base`` of the closed point under P (P lives in an
    extension of base): least j with the q-power Frobenius fixing P."""
    ext = P.field
    cur = P
    for j in range(1, ext.k // base.k + 1):
        cur = ProjPoint(ext, tuple(_base_frobenius(base, ext, c) for c in cur.coords))
        if cur == P:
            return j
    raise AssertionError("Frobenius orbit did not close")


@lru_cache(maxsize=None)
def closed_points(base: GF, e: int) -> tuple[ProjPoint, ...]:
    """One representative (the enumeration-least point of its Frobenius
    orbit) for each closed point of degree exactly e, given over F_{q^e}."""
    if e == 1:
        return enumerate_p2(base)
    ext = make_field(base.p, base.k * e)
    reps = []
    for P in enumerate_p2(ext):
        orbit = [P]
        cur = P
        while True:
            cur = ProjPoint(ext, tuple(_base_frobenius(base, ext, c) for c in cur.coords))
            if cur == P:
                break
            orbit.append(cur)
        if len(orbit) == e and min(orbit, key=lambda t: t.coords) == P:
            reps.append(P)
    assert len(reps) == closed_point_count(base, e)
    return tuple(reps)


def _mobius(n: int) -> int:
    out, f = 1, 2
    while f * f <= n:
        if n % f == 0:
            n //= f
            if n % f == 0:
                return 0
            out = -out
        f += 1
    if n > 1:
        out = -out
    return out


def closed_point_count(field: GF, e: int) -> int:
    """Number of closed points of P^2 over ``field`` of degree exactly e."""
    q = field.q
    total = 0
    for j in range(1, e + 1):
        if e % j == 0:
            total += _mobius(e // j) * p2_size(q**j)
    assert total % e == 0
    return total // e


def jet_at(form: TernaryForm, P: ProjPoint) -> tuple[int, int, int]:
    """Order-2 jet of the curve equation at P: the value and the two
    chart partials, computed in the chart of P's leading coordinate.
    Entries live in P's field (the form is embedded if P is an
    extension point)."""
    ch = P.chart
    f = form.dehomogenize(ch)
    a = P.affine()
    K = P.field
    return (
        f.evaluate(a, K),
        f.partial(0).evaluate(a, K),
        f.partial(1).evaluate(a, K),
    )


def genus(d: int) -> int:
    """Genus of a smooth plane curve of degree d."""
    return (d - 1) * (d - 2) // 2
