"""Arithmetic in small finite fields F_{p^k} and their extensions.

Field elements are plain ints in ``range(q)``: the base-p digits of an
element are its coordinates in the power basis of the defining modulus,
least significant digit first.  Hence 0 and 1 are the additive and
multiplicative identities of every field, and the prime subfield is
always ``0..p-1`` with its usual arithmetic.

Every field is an absolute extension F_p[t]/(m); relative extensions are
realised through :func:`embed`, never as towers.  The modulus is not a
free choice: for each (p, k) it is the first monic irreducible found when
coefficient tuples are enumerated with the constant term varying fastest,
which pins element encodings and makes every downstream enumeration
reproducible.
"""

from __future__ import annotations

from functools import lru_cache

DEFAULT_SIZE_LIMIT = 1 << 20

_ADD_TABLE_MAX_Q = 256


class FieldSizeError(ValueError):
    """Requested field exceeds the size guard."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def parse_field_spec(spec: str) -> tuple[int, int]:
    """Parse a field label like ``"2"`` or ``"3^2"`` into (p, k)."""
    text = spec.strip()
    if "^" in text:
        base, _, exp = text.partition("^")
        p, k = int(base), int(exp)
    else:
        p, k = int(text), 1
    if not is_prime(p):
        raise ValueError(f"field characteristic must be prime, got {p}")
    if k < 1:
        raise ValueError(f"field extension degree must be >= 1, got {k}")
    return p, k


# ---------------------------------------------------------------------------
# F_p[t] helpers used only for modulus selection.  Polynomials are tuples of
# ints mod p, least significant coefficient first, no trailing zeros.
# ---------------------------------------------------------------------------


def _pnorm(c: tuple[int, ...]) -> tuple[int, ...]:
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return c[:n]


def _pmulmod(a, b, m, p):
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # m is monic; reduce by long division
    dm = len(m) - 1
    for i in range(len(prod) - 1, dm - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(dm):
                prod[i - dm + j] = (prod[i - dm + j] - c * m[j]) % p
    return _pnorm(tuple(prod))


def _ppowmod(a, e, m, p):
    result = (1,)
    base = a
    while e:
        if e & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _pnorm(a), _pnorm(b)
    while b:
        inv = pow(b[-1], p - 2, p) if p > 2 else 1
        r = list(a)
        db, da = len(b) - 1, len(r) - 1
        while da >= db and any(r):
            lead = r[da]
            if lead:
                f = (lead * inv) % p
                for j in range(db + 1):
                    r[da - db + j] = (r[da - db + j] - f * b[j]) % p
            da -= 1
        a, b = b, _pnorm(tuple(r))
    return a


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(m: tuple[int, ...], p: int) -> bool:
    # Rabin's test: x^(p^k) == x mod m, and x^(p^(k/r)) - x coprime to m
    # for every prime r dividing k.
    k = len(m) - 1
    fr = (0, 1)
    frob_steps = [None] * (k + 1)
    for i in range(1, k + 1):
        fr = _ppowmod(fr, p, m, p)
        frob_steps[i] = fr
    fk = list(frob_steps[k]) + [0, 0]
    fk[1] = (fk[1] - 1) % p
    if _pnorm(tuple(fk)):
        return False
    for r in _prime_factors(k):
        fr_sub = frob_steps[k // r]
        diff = list(fr_sub) + [0, 0]
        diff[1] = (diff[1] - 1) % p
        g = _pgcd(_pnorm(tuple(diff)), m, p)
        if len(g) != 1:
            return False
    return True


def _find_modulus(p: int, k: int) -> tuple[int, ...]:
    """First monic irreducible of degree k, constant term varying fastest."""
    if k == 1:
        return (0, 1)
    for n in range(p**k):
        coeffs = []
        t = n
        for _ in range(k):
            coeffs.append(t % p)
            t //= p
        m = tuple(coeffs) + (1,)
        if _is_irreducible(m, p):
            return m
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------
# The field itself.
# ---------------------------------------------------------------------------


class GF:
    """The finite field with q = p**k elements.  Build via :func:`make_field`."""

    __slots__ = ("p", "k", "q", "modulus", "gen", "_exp", "_log", "_add", "_neg")

    def __init__(self, p: int, k: int, modulus: tuple[int, ...]):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus
        self._build_log_tables()
        self._add = None
        self._neg = None
        if p > 2 and self.q <= _ADD_TABLE_MAX_Q:
            q = self.q
            self._add = [self._add_digits(a, b) for a in range(q) for b in range(q)]
            self._neg = [self._add_digits(0, self._sub_digits(0, a)) for a in range(q)]

    # -- construction ------------------------------------------------------

    def _mul_raw(self, a: int, b: int) -> int:
        """Schoolbook product of digit vectors, reduced by the modulus."""
        p, k = self.p, self.k
        if k == 1:
            return (a * b) % p
        da = self.coeffs(a)
        db = self.coeffs(b)
        prod = [0] * (2 * k - 1)
        for i, ai in enumerate(da):
            if ai:
                for j, bj in enumerate(db):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        m = self.modulus
        for i in range(2 * k - 2, k - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(k):
                    prod[i - k + j] = (prod[i - k + j] - c * m[j]) % p
        out = 0
        for c in reversed(prod[:k]):
            out = out * p + c
        return out

    def _pow_raw(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._mul_raw(r, a)
            a = self._mul_raw(a, a)
            e >>= 1
        return r

    def _build_log_tables(self) -> None:
        q = self.q
        order_factors = _prime_factors(q - 1) if q > 2 else []
        gen = None
        for g in range(2, q) if q > 2 else [1]:
            if all(self._pow_raw(g, (q - 1) // r) != 1 for r in order_factors):
                gen = g
                break
        if gen is None:  # q == 2
            gen = 1
        self.gen = gen
        exp = [1] * (2 * q)
        log = [-1] * q
        acc = 1
        for i in range(q - 1):
            exp[i] = acc
            log[acc] = i
            acc = self._mul_raw(acc, gen)
        if acc != 1:
            raise AssertionError("generator order mismatch")
        for i in range(q - 1, 2 * q):
            exp[i] = exp[i - (q - 1)]
        self._exp = exp
        self._log = log

    # -- element encoding ---------------------------------------------------

    def coeffs(self, a: int) -> tuple[int, ...]:
        """Base-p digits of a: coordinates in the power basis, low first."""
        p = self.p
        out = []
        for _ in range(self.k):
            out.append(a % p)
            a //= p
        return tuple(out)

    def from_coeffs(self, digits) -> int:
        p = self.p
        out = 0
        for c in reversed(list(digits)):
            out = out * p + c % p
        return out

    def elements(self) -> range:
        return range(self.q)

    # -- arithmetic ----------------------------------------------------------

    def _add_digits(self, a: int, b: int) -> int:
        p = self.p
        s, m = 0, 1
        for _ in range(self.k):
            s += ((a + b) % p) * m
            a //= p
            b //= p
            m *= p
        return s

    def _sub_digits(self, a: int, b: int) -> int:
        p = self.p
        s, m = 0, 1
        for _ in range(self.k):
            s += ((a - b) % p) * m
            a //= p
            b //= p
            m *= p
        return s

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self._add is not None:
            return self._add[a * self.q + b]
        return self._add_digits(a, b)

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self._neg is not None:
            return self._neg[a]
        return self._sub_digits(0, a)

    def sub(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self._exp[self.q - 1 - self._log[a]]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e > 0:
                return 0
            if e == 0:
                return 1
            raise ZeroDivisionError("0 has no inverse")
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def smul(self, n: int, a: int) -> int:
        """n·a for an integer n (prime-subfield scaling)."""
        c = n % self.p
        if c == 0:
            return 0
        return self.mul(c, a)

    # -- plumbing -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GF)
            and self.p == other.p
            and self.k == other.k
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def __repr__(self) -> str:
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k})"

    def spec(self) -> str:
        return str(self.p) if self.k == 1 else f"{self.p}^{self.k}"

    def modulus_str(self) -> str:
        """The defining modulus as readable text, e.g. ``t^2 + 2*t + 2``."""
        if self.k == 1:
            return "t"
        parts = []
        for i in range(self.k, -1, -1):
            c = 1 if i == self.k else self.modulus[i]
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                v = "t" if i == 1 else f"t^{i}"
                parts.append(v if c == 1 else f"{c}*{v}")
        return " + ".join(parts)


@lru_cache(maxsize=None)
def _build_field(p: int, k: int) -> GF:
    return GF(p, k, _find_modulus(p, k))


def make_field(p: int, k: int = 1, *, size_limit: int | None = DEFAULT_SIZE_LIMIT) -> GF:
    """Return the canonical F_{p^k}, enforcing the size guard.

    Fields are cached, so repeated calls hand back the same object and
    table construction is paid once per field.
    """
    if not is_prime(p):
        raise ValueError(f"field characteristic must be prime, got {p}")
    if k < 1:
        raise ValueError(f"extension degree must be >= 1, got {k}")
    q = p**k
    if size_limit is not None and q > size_limit:
        raise FieldSizeError(
            f"F_{p}^{k} has {q} elements, beyond the guard of {size_limit}; "
            "raise size_limit explicitly if this is intended"
        )
    return _build_field(p, k)


class Embedding:
    """The canonical inclusion of one field into an extension.

    Callable on elements of the base; ``invert`` maps elements of the
    image back down (KeyError outside the image).
    """

    def __init__(self, base: GF, ext: GF, table: list[int]):
        self.base = base
        self.ext = ext
        self.table = table
        self._section = {img: a for a, img in enumerate(table)}

    def __call__(self, a: int) -> int:
        return self.table[a]

    def invert(self, b: int) -> int:
        return self._section[b]

    def in_image(self, b: int) -> bool:
        return b in self._section

    def __repr__(self) -> str:
        return f"Embedding({self.base!r} -> {self.ext!r})"


class ExtCoords:
    """Coordinates of an extension as a vector space over an embedded base.

    The basis is chosen greedily in element-enumeration order, so it is
    the same on every run.  ``coords(x)`` returns the tuple (a_1..a_e)
    of base-field elements with x = sum a_j * basis_j.
    """

    def __init__(self, base: GF, ext: GF):
        self.base = base
        self.ext = ext
        self.emb = embed(base, ext)
        self.dim = ext.k // base.k
        p, n = base.p, ext.k
        # F_p generators of base-scalar multiples: powers of the embedded
        # base primitive element t (just 1 when the base is prime).
        t_img = self.emb(base.p % base.q) if base.k > 1 else 1
        s_pows = [1]
        for _ in range(base.k - 1):
            s_pows.append(ext.mul(s_pows[-1], t_img))
        pivots: dict[int, list[int]] = {}

        def reduce(v: list[int]) -> list[int]:
            for c in range(n):
                if v[c] and c in pivots:
                    f, row = v[c], pivots[c]
                    for j in range(c, n):
                        v[j] = (v[j] - f * row[j]) % p
            return v

        def insert(v: list[int]) -> None:
            v = reduce(v)
            for c in range(n):
                if v[c]:
                    inv = pow(v[c], p - 2, p) if p > 2 else 1
                    pivots[c] = [(x * inv) % p for x in v]
                    return

        basis: list[int] = []
        columns: list[list[int]] = []
        for x in ext.elements():
            if x == 0:
                continue
            if not any(reduce(list(ext.coeffs(x)))):
                continue
            basis.append(x)
            for s in s_pows:
                y = ext.mul(s, x)
                columns.append(list(ext.coeffs(y)))
                insert(list(ext.coeffs(y)))
            if len(basis) == self.dim:
                break
        self.basis = tuple(basis)
        # Invert the change-of-basis matrix mod p (columns -> digit vectors).
        aug = [[columns[j][i] for j in range(n)] + [1 if i == j else 0 for j in range(n)] for i in range(n)]
        for col in range(n):
            piv = next(r for r in range(col, n) if aug[r][col])
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = pow(aug[col][col], p - 2, p) if p > 2 else 1
            aug[col] = [(x * inv) % p for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [(a - f * b) % p for a, b in zip(aug[r], aug[col])]
        self._minv = [row[n:] for row in aug]
        self._table = [self._coords_slow(x) for x in ext.elements()] if ext.q <= 4096 else None

    def _coords_slow(self, x: int) -> tuple[int, ...]:
        p, n, k = self.base.p, self.ext.k, self.base.k
        dg = self.ext.coeffs(x)
        y = [sum(row[j] * dg[j] for j in range(n)) % p for row in self._minv]
        return tuple(self.base.from_coeffs(y[j * k : (j + 1) * k]) for j in range(self.dim))

    def __call__(self, x: int) -> tuple[int, ...]:
        if self._table is not None:
            return self._table[x]
        return self._coords_slow(x)


@lru_cache(maxsize=None)
def ext_coords(base: GF, ext: GF) -> ExtCoords:
    if base.p != ext.p or ext.k % base.k != 0:
        raise ValueError(f"{base!r} has no coordinate map on {ext!r}")
    return ExtCoords(base, ext)


@lru_cache(maxsize=None)
def embed(base: GF, ext: GF) -> Embedding:
    """Embed ``base`` into ``ext`` by sending t to the first root of the
    base modulus in enumeration order (the identity when the fields match)."""
    if base.p != ext.p:
        raise ValueError("fields of different characteristic do not embed")
    if ext.k % base.k != 0:
        raise ValueError(f"{base!r} is not a subfield of {ext!r}")
    if base is ext or base == ext:
        return Embedding(base, ext, list(range(base.q)))
    # Constants 0..p-1 are encoded identically in every field, so the
    # modulus coefficients can be used in ext arithmetic as-is.
    mod = base.modulus
    root = None
    for r in ext.elements():
        acc = 0
        for c in reversed(mod):
            acc = ext.add(ext.mul(acc, r), c)
        if acc == 0:
            root = r
            break
    if root is None:
        raise AssertionError("base modulus has no root in extension")
    table = []
    for a in base.elements():
        img = 0
        rp = 1
        for c in base.coeffs(a):
            if c:
                img = ext.add(img, ext.mul(c, rp))
            rp = ext.mul(rp, root)
        table.append(img)
    return Embedding(base, ext, table)
