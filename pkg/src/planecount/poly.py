"""Ternary forms, their chart polynomials, and elimination tools.

A degree-d form in X, Y, Z is a coefficient tuple over the monomials in
graded-lex order with X > Y > Z, listed descending — (d,0,0) first,
(0,0,d) last.  The whole coefficient space is walked by a base-q odometer:
candidate n has digit j (of q^j weight) equal to the j-th coefficient, so
n = 0 is the zero form and n = q^N - 1 is the all-(q-1)s form.
"""

from __future__ import annotations

from functools import lru_cache

from .gf import GF, embed


def monomial_count(d: int) -> int:
    return (d + 1) * (d + 2) // 2


@lru_cache(maxsize=None)
def monomials(d: int) -> tuple[tuple[int, int, int], ...]:
    """Exponent triples of degree d, graded-lex descending (X > Y > Z)."""
    out = []
    for a in range(d, -1, -1):
        for b in range(d - a, -1, -1):
            out.append((a, b, d - a - b))
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(d: int) -> dict[tuple[int, int, int], int]:
    return {m: j for j, m in enumerate(monomials(d))}


_VARS = ("X", "Y", "Z")


class TernaryForm:
    """A homogeneous polynomial of degree d in X, Y, Z over a small field."""

    __slots__ = ("field", "d", "coeffs")

    def __init__(self, field: GF, d: int, coeffs):
        coeffs = tuple(coeffs)
        if d < 0:
            raise ValueError("degree must be >= 0")
        if len(coeffs) != monomial_count(d):
            raise ValueError(
                f"degree {d} needs {monomial_count(d)} coefficients, got {len(coeffs)}"
            )
        if any(not 0 <= c < field.q for c in coeffs):
            raise ValueError("coefficient out of field range")
        self.field = field
        self.d = d
        self.coeffs = coeffs

    # -- encodings -----------------------------------------------------------

    @classmethod
    def from_index(cls, field: GF, d: int, n: int) -> "TernaryForm":
        q = field.q
        count = monomial_count(d)
        if not 0 <= n < q**count:
            raise ValueError(f"candidate index {n} out of range for degree {d}")
        coeffs = []
        for _ in range(count):
            coeffs.append(n % q)
            n //= q
        return cls(field, d, coeffs)

    def to_index(self) -> int:
        q = self.field.q
        n = 0
        for c in reversed(self.coeffs):
            n = n * q + c
        return n

    @classmethod
    def from_terms(cls, field: GF, d: int, terms: dict) -> "TernaryForm":
        idx = monomial_index(d)
        coeffs = [0] * monomial_count(d)
        for mono, c in terms.items():
            coeffs[idx[tuple(mono)]] = c % field.q if isinstance(c, int) else c
        return cls(field, d, coeffs)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    # -- algebra ---------------------------------------------------------------

    def evaluate(self, coords, field: GF | None = None) -> int:
        """Value at projective coordinates given in ``field`` (default: base)."""
        K = field if field is not None else self.field
        phi = embed(self.field, K)
        x, y, z = coords
        d = self.d
        px = _powers(K, x, d)
        py = _powers(K, y, d)
        pz = _powers(K, z, d)
        acc = 0
        for (a, b, c), co in zip(monomials(d), self.coeffs):
            if co:
                term = K.mul(K.mul(px[a], py[b]), pz[c])
                acc = K.add(acc, K.mul(phi(co), term))
        return acc

    def partial(self, var: int) -> "TernaryForm":
        """Formal partial derivative with respect to X, Y or Z (var 0/1/2)."""
        if self.d == 0:
            raise ValueError("cannot differentiate a degree-0 form")
        F = self.field
        d = self.d
        out = [0] * monomial_count(d - 1)
        tgt = monomial_index(d - 1)
        for (a, b, c), co in zip(monomials(d), self.coeffs):
            e = (a, b, c)[var]
            if co and e % F.p != 0:
                m = list((a, b, c))
                m[var] -= 1
                out[tgt[tuple(m)]] = F.smul(e, co)
        return TernaryForm(F, d - 1, out)

    def dehomogenize(self, chart: int) -> "AffinePoly":
        """Set coordinate ``chart`` to 1; remaining coordinates, in index
        order, become the affine variables (x1, x2)."""
        rest = [v for v in range(3) if v != chart]
        terms: dict[tuple[int, int], int] = {}
        for mono, co in zip(monomials(self.d), self.coeffs):
            if co:
                key = (mono[rest[0]], mono[rest[1]])
                terms[key] = self.field.add(terms.get(key, 0), co)
        return AffinePoly(self.field, terms)

    def scale(self, c: int) -> "TernaryForm":
        F = self.field
        return TernaryForm(F, self.d, [F.mul(c, co) for co in self.coeffs])

    def add(self, other: "TernaryForm") -> "TernaryForm":
        if other.d != self.d or other.field != self.field:
            raise ValueError("can only add forms of the same degree and field")
        F = self.field
        return TernaryForm(F, self.d, [F.add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def mul_var(self, var: int) -> "TernaryForm":
        """Multiply by the coordinate ``var``, raising the degree by one."""
        tgt = monomial_index(self.d + 1)
        out = [0] * monomial_count(self.d + 1)
        for mono, co in zip(monomials(self.d), self.coeffs):
            if co:
                m = list(mono)
                m[var] += 1
                out[tgt[tuple(m)]] = co
        return TernaryForm(self.field, self.d + 1, out)

    # -- plumbing ----------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TernaryForm)
            and self.field == other.field
            and self.d == other.d
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.field, self.d, self.coeffs))

    def __str__(self) -> str:
        parts = []
        for (a, b, c), co in zip(monomials(self.d), self.coeffs):
            if not co:
                continue
            vars_txt = "".join(
                f"{v}^{e}" if e > 1 else v
                for v, e in zip(_VARS, (a, b, c))
                if e
            )
            if not vars_txt:
                parts.append(str(co))
            elif co == 1:
                parts.append(vars_txt)
            else:
                parts.append(f"{co}*{vars_txt}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"TernaryForm({self.field!r}, d={self.d}, {self})"


def _powers(K: GF, x: int, d: int) -> list[int]:
    out = [1]
    for _ in range(d):
        out.append(K.mul(out[-1], x))
    return out


class AffinePoly:
    """A polynomial in two affine variables x1, x2 over a small field."""

    __slots__ = ("field", "terms")

    def __init__(self, field: GF, terms: dict):
        self.field = field
        self.terms = {k: v for k, v in terms.items() if v}

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree (-1 for the zero polynomial)."""
        return max((i + j for i, j in self.terms), default=-1)

    def deg_x(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    def deg_y(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def evaluate(self, coords, field: GF | None = None) -> int:
        K = field if field is not None else self.field
        phi = embed(self.field, K)
        x, y = coords
        dx = self.deg_x()
        dy = self.deg_y()
        px = _powers(K, x, max(dx, 0))
        py = _powers(K, y, max(dy, 0))
        acc = 0
        for (i, j), co in self.terms.items():
            acc = K.add(acc, K.mul(phi(co), K.mul(px[i], py[j])))
        return acc

    def partial(self, var: int) -> "AffinePoly":
        F = self.field
        out: dict[tuple[int, int], int] = {}
        for (i, j), co in self.terms.items():
            e = (i, j)[var]
            if e % F.p != 0:
                key = (i - 1, j) if var == 0 else (i, j - 1)
                out[key] = F.smul(e, co)
        return AffinePoly(F, out)

    def homogenize(self, d: int, chart: int) -> TernaryForm:
        if self.degree() > d:
            raise ValueError("degree budget too small to homogenize")
        rest = [v for v in range(3) if v != chart]
        terms = {}
        for (i, j), co in self.terms.items():
            mono = [0, 0, 0]
            mono[rest[0]] = i
            mono[rest[1]] = j
            mono[chart] = d - i - j
            terms[tuple(mono)] = co
        return TernaryForm.from_terms(self.field, d, terms)

    def ymajor(self) -> list[list[int]]:
        """Coefficients as x-polynomials indexed by x2-degree (normalized)."""
        dy = self.deg_y()
        out: list[list[int]] = [[] for _ in range(dy + 1)]
        for (i, j), co in self.terms.items():
            row = out[j]
            while len(row) <= i:
                row.append(0)
            row[i] = co
        return [unorm(r) for r in out]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AffinePoly)
            and self.field == other.field
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.field, tuple(sorted(self.terms.items()))))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j) in sorted(self.terms, key=lambda m: (-(m[0] + m[1]), -m[0])):
            co = self.terms[(i, j)]
            vars_txt = "".join(
                f"{v}^{e}" if e > 1 else v for v, e in (("x1", i), ("x2", j)) if e
            )
            if not vars_txt:
                parts.append(str(co))
            elif co == 1:
                parts.append(vars_txt)
            else:
                parts.append(f"{co}*{vars_txt}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"AffinePoly({self.field!r}, {self})"


# ---------------------------------------------------------------------------
# Univariate polynomials over a field: plain lists, low degree first,
# normalized so the last entry is nonzero ([] is the zero polynomial).
# ---------------------------------------------------------------------------


def unorm(c: list[int]) -> list[int]:
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return c[:n]


def udeg(c: list[int]) -> int:
    return len(c) - 1


def uadd(F: GF, a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return unorm(out)


def uscale(F: GF, c: int, a: list[int]) -> list[int]:
    if c == 0:
        return []
    return [F.mul(c, x) for x in a]


def umul(F: GF, a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = F.add(out[i + j], F.mul(ai, bj))
    return unorm(out)


def udivmod(F: GF, a: list[int], b: list[int]) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    inv = F.inv(b[-1])
    quot = [0] * max(len(a) - db, 0)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        if c:
            f = F.mul(c, inv)
            quot[i - db] = f
            for j in range(db + 1):
                r[i - db + j] = F.sub(r[i - db + j], F.mul(f, b[j]))
    return unorm(quot), unorm(r)


def ugcd(F: GF, a: list[int], b: list[int]) -> list[int]:
    """Monic gcd (the zero polynomial when both inputs are zero)."""
    a, b = unorm(list(a)), unorm(list(b))
    while b:
        _, r = udivmod(F, a, b)
        a, b = b, r
    if a:
        a = uscale(F, F.inv(a[-1]), a)
    return a


def ueval(F: GF, a: list[int], x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


# ---------------------------------------------------------------------------
# Resultants.  The resultant of two univariate polynomials is the
# determinant of their Sylvester matrix; it vanishes exactly when they
# share a root over the algebraic closure (or when a degenerate
# specialization killed both leading coefficients — callers that
# specialize must interpret zeros accordingly).
# ---------------------------------------------------------------------------


class FieldOps:
    """Ring protocol for Bareiss elimination with field scalars."""

    def __init__(self, F: GF):
        self.F = F
        self.zero = 0
        self.one = 1

    def is_zero(self, a) -> bool:
        return a == 0

    def add(self, a, b):
        return self.F.add(a, b)

    def sub(self, a, b):
        return self.F.sub(a, b)

    def mul(self, a, b):
        return self.F.mul(a, b)

    def divexact(self, a, b):
        return self.F.div(a, b)

    def neg(self, a):
        return self.F.neg(a)


class PolyOps:
    """Ring protocol for Bareiss elimination with univariate-poly entries."""

    def __init__(self, F: GF):
        self.F = F
        self.zero: list[int] = []
        self.one = [1]

    def is_zero(self, a) -> bool:
        return not a

    def add(self, a, b):
        return uadd(self.F, a, b)

    def sub(self, a, b):
        return uadd(self.F, a, uscale(self.F, self.F.neg(1), b))

    def mul(self, a, b):
        return umul(self.F, a, b)

    def divexact(self, a, b):
        quot, rem = udivmod(self.F, a, b)
        if rem:
            raise ArithmeticError("inexact division in fraction-free elimination")
        return quot

    def neg(self, a):
        return uscale(self.F, self.F.neg(1), a)


def bareiss_det(ops, matrix):
    """Fraction-free determinant over an integral domain given by ``ops``."""
    m = [row[:] for row in matrix]
    n = len(m)
    if n == 0:
        return ops.one
    sign = False
    prev = ops.one
    for k in range(n - 1):
        if ops.is_zero(m[k][k]):
            piv = next((r for r in range(k + 1, n) if not ops.is_zero(m[r][k])), None)
            if piv is None:
                return ops.zero
            m[k], m[piv] = m[piv], m[k]
            sign = not sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = ops.sub(ops.mul(m[i][j], m[k][k]), ops.mul(m[i][k], m[k][j]))
                m[i][j] = ops.divexact(num, prev)
            m[i][k] = ops.zero
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return ops.neg(det) if sign else det


def sylvester_matrix(ops, f: list, g: list) -> list[list]:
    """Sylvester matrix of f (degree m) and g (degree n): n rows of f
    coefficients then m rows of g coefficients, high degree leftmost."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    frow = list(reversed(f))
    grow = list(reversed(g))
    for i in range(n):
        rows.append([ops.zero] * i + frow + [ops.zero] * (n - 1 - i))
    for i in range(m):
        rows.append([ops.zero] * i + grow + [ops.zero] * (m - 1 - i))
    for r in rows:
        assert len(r) == size
    return rows


def resultant(F: GF, f: list[int], g: list[int]) -> int:
    """Resultant of univariate polynomials with coefficients in F."""
    f, g = unorm(list(f)), unorm(list(g))
    if not f and not g:
        raise ValueError("resultant of two zero polynomials is undefined")
    if not f or not g:
        return 0
    m, n = udeg(f), udeg(g)
    if m == 0:
        return F.pow(f[0], n)
    if n == 0:
        return F.pow(g[0], m)
    return bareiss_det(FieldOps(F), sylvester_matrix(FieldOps(F), f, g))


def resultant_y_direct(F: GF, fy: list[list[int]], gy: list[list[int]]) -> list[int]:
    """Resultant in x2 of two x2-major bivariate polynomials, by
    fraction-free elimination over F[x1]."""
    fy = [unorm(list(c)) for c in fy]
    gy = [unorm(list(c)) for c in gy]
    while fy and not fy[-1]:
        fy.pop()
    while gy and not gy[-1]:
        gy.pop()
    if not fy and not gy:
        raise ValueError("resultant of two zero polynomials is undefined")
    if not fy or not gy:
        return []
    m, n = len(fy) - 1, len(gy) - 1
    ops = PolyOps(F)
    if m == 0:
        return _upow(F, fy[0], n)
    if n == 0:
        return _upow(F, gy[0], m)
    return bareiss_det(ops, sylvester_matrix(ops, fy, gy))


def _upow(F: GF, a: list[int], e: int) -> list[int]:
    out = [1]
    for _ in range(e):
        out = umul(F, out, a)
    return out


def resultant_y(F: GF, fy: list[list[int]], gy: list[list[int]]) -> list[int]:
    """Same resultant as :func:`resultant_y_direct`, computed by
    specializing x1 at enough points of an extension, taking scalar
    Sylvester determinants there, and interpolating back.

    Specialization commutes with the determinant, so no leading-term
    bookkeeping is needed at bad points.
    """
    from .gf import ext_coords, make_field

    fy = [unorm(list(c)) for c in fy]
    gy = [unorm(list(c)) for c in gy]
    while fy and not fy[-1]:
        fy.pop()
    while gy and not gy[-1]:
        gy.pop()
    if not fy and not gy:
        raise ValueError("resultant of two zero polynomials is undefined")
    if not fy or not gy:
        return []
    m, n = len(fy) - 1, len(gy) - 1
    if m == 0:
        return _upow(F, fy[0], n)
    if n == 0:
        return _upow(F, gy[0], m)
    dxf = max(udeg(c) for c in fy)
    dxg = max(udeg(c) for c in gy)
    bound = n * dxf + m * dxg  # each f-row holds deg<=dxf entries, etc.
    npts = bound + 1
    e = 1
    while F.q**e < npts:
        e += 1
    K = make_field(F.p, F.k * e) if e > 1 else F
    phi = embed(F, K)
    fy_emb = [[phi(c) for c in row] for row in fy]
    gy_emb = [[phi(c) for c in row] for row in gy]
    xs = list(range(npts))
    vals = []
    for a in xs:
        fa = [ueval(K, row, a) for row in fy_emb]
        ga = [ueval(K, row, a) for row in gy_emb]
        vals.append(_scalar_sylvester_det(K, fa, ga))
    out_ext = _lagrange(K, xs, vals)
    try:
        return unorm([phi.invert(c) for c in out_ext])
    except KeyError as exc:  # pragma: no cover - would indicate a bug
        raise AssertionError("interpolated resultant left the base field") from exc


def _scalar_sylvester_det(K: GF, f: list[int], g: list[int]) -> int:
    """det of the Sylvester matrix of already-specialized coefficient
    vectors (built with the ORIGINAL degrees, trailing zeros kept)."""
    ops = FieldOps(K)
    rows = sylvester_matrix(ops, f if f[-1] is not None else f, g)
    # Plain Gaussian elimination over the field.
    n = len(rows)
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = K.neg(det)
        pivval = rows[col][col]
        det = K.mul(det, pivval)
        inv = K.inv(pivval)
        for r in range(col + 1, n):
            if rows[r][col]:
                fac = K.mul(rows[r][col], inv)
                rows[r] = [K.sub(x, K.mul(fac, y)) for x, y in zip(rows[r], rows[col])]
    return det


def _lagrange(K: GF, xs: list[int], ys: list[int]) -> list[int]:
    """Interpolating polynomial through (xs[i], ys[i]) over K."""
    n = len(xs)
    # Build the full node polynomial, then divide out each root.
    node = [1]
    for x in xs:
        node = umul(K, node, [K.neg(x), 1])
    out: list[int] = []
    for i in range(n):
        if ys[i] == 0:
            continue
        li, _ = udivmod(K, node, [K.neg(xs[i]), 1])
        denom = ueval(K, li, xs[i])
        out = uadd(K, out, uscale(K, K.div(ys[i], denom), li))
    return out


# ---------------------------------------------------------------------------
# Ideal triviality over the algebraic closure: Buchberger in two variables,
# graded reverse-lex order, normal pair-selection, coprime-leading-term and
# chain criteria.  1 lies in the ideal iff the generators have no common
# zero over the closure, which is exactly the question the smoothness
# decision needs in its degenerate branch.
# ---------------------------------------------------------------------------


def _ltkey(mono: tuple[int, int]) -> tuple[int, int]:
    i, j = mono
    return (i + j, i)


def _lt(poly: dict) -> tuple[int, int]:
    return max(poly, key=_ltkey)


def _mono_mul(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    return (a[0] + b[0], a[1] + b[1])


def _mono_divides(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return a[0] <= b[0] and a[1] <= b[1]


def _mono_lcm(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    return (max(a[0], b[0]), max(a[1], b[1]))


def _reduce(F: GF, poly: dict, basis: list[dict]) -> dict:
    rem: dict = {}
    work = dict(poly)
    while work:
        mono = _lt(work)
        co = work[mono]
        for g in basis:
            lg = _lt(g)
            if _mono_divides(lg, mono):
                shift = (mono[0] - lg[0], mono[1] - lg[1])
                fac = F.div(co, g[lg])
                for gm, gc in g.items():
                    tm = _mono_mul(gm, shift)
                    upd = F.sub(work.get(tm, 0), F.mul(fac, gc))
                    if upd:
                        work[tm] = upd
                    else:
                        work.pop(tm, None)
                break
        else:
            rem[mono] = co
            del work[mono]
    return rem


def ideal_trivial(gens: list[AffinePoly]) -> bool:
    """True iff the affine polynomials generate the unit ideal, i.e. have
    no common zero over the algebraic closure.  Raises on all-zero input
    (the common zero locus would be the whole plane)."""
    live = [g for g in gens if not g.is_zero]
    if not live:
        raise ValueError("ideal generated by zero polynomials only")
    F = live[0].field
    if any(g.field != F for g in live):
        raise ValueError("mixed fields in ideal generators")
    if any((0, 0) == _lt(g.terms) for g in live):
        return True
    basis: list[dict] = []
    for g in live:
        r = _reduce(F, g.terms, basis)
        if r:
            if _lt(r) == (0, 0):
                return True
            basis.append(r)
    pairs = [(i, j) for j in range(len(basis)) for i in range(j)]
    while pairs:
        # Normal strategy: smallest lcm of leading terms first.
        pairs.sort(key=lambda ij: _ltkey(_mono_lcm(_lt(basis[ij[0]]), _lt(basis[ij[1]]))), reverse=True)
        i, j = pairs.pop()
        li, lj = _lt(basis[i]), _lt(basis[j])
        lcm = _mono_lcm(li, lj)
        if lcm == _mono_mul(li, lj):
            continue  # coprime leading terms: s-poly reduces to zero
        if _chain_skip(basis, pairs, i, j, lcm):
            continue
        spoly = _spoly(F, basis[i], basis[j], li, lj, lcm)
        r = _reduce(F, spoly, basis)
        if r:
            if _lt(r) == (0, 0):
                return True
            basis.append(r)
            new = len(basis) - 1
            pairs.extend((t, new) for t in range(new))
    return False


def _spoly(F: GF, gi: dict, gj: dict, li, lj, lcm) -> dict:
    out: dict = {}
    si = (lcm[0] - li[0], lcm[1] - li[1])
    sj = (lcm[0] - lj[0], lcm[1] - lj[1])
    ci = F.inv(gi[li])
    cj = F.inv(gj[lj])
    for m, c in gi.items():
        tm = _mono_mul(m, si)
        out[tm] = F.add(out.get(tm, 0), F.mul(ci, c))
    for m, c in gj.items():
        tm = _mono_mul(m, sj)
        out[tm] = F.sub(out.get(tm, 0), F.mul(cj, c))
    return {m: c for m, c in out.items() if c}


def _chain_skip(basis, pairs, i, j, lcm) -> bool:
    """Buchberger's chain criterion: drop (i,j) if some k with both
    (i,k) and (j,k) already handled has leading term dividing the lcm."""
    for k in range(len(basis)):
        if k in (i, j):
            continue
        if not _mono_divides(_lt(basis[k]), lcm):
            continue
        ik = (min(i, k), max(i, k))
        jk = (min(j, k), max(j, k))
        if ik not in pairs and jk not in pairs:
            return True
    return False
