# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Bit-packed census kernel for the binary field.

A degree-d form over F_2 (d <= 5) is the uint64 of its coefficient bits;
chart polynomials are arrays of uint64 x-polynomials indexed by
x2-degree.  The decision logic mirrors the pure reference exactly:
trivial cases, then resultants by fraction-free elimination (entry
degrees stay below 64 bits for d <= 5; the one oversized intermediate —
the dividend of the exact-division step — is carried in two words), then
a modulus-splitting common-root analysis.  The rare all-resultants-zero
case defers to a Python callback.
"""

import numpy as np

cdef extern from *:
    int __builtin_clzll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil

ctypedef unsigned long long u64

DEF MAXY = 8       # y-degree slots (degree <= 5 needs 6)
DEF MAXS = 12      # Sylvester dimension bound (5 + 5 = 10)
DEF STACKSZ = 64   # modulus-splitting worklist bound


cdef inline int udeg(u64 a) nogil:
    if a == 0:
        return -1
    return 63 - __builtin_clzll(a)


cdef inline u64 pmod(u64 a, u64 m) nogil:
    cdef int dm = udeg(m)
    cdef int da = udeg(a)
    while da >= dm:
        a ^= m << (da - dm)
        da = udeg(a)
    return a


cdef inline u64 pgcd(u64 a, u64 b) nogil:
    cdef u64 t
    while b:
        t = pmod(a, b)
        a = b
        b = t
    return a


cdef inline u64 pmul(u64 a, u64 b) nogil:
    # caller guarantees deg a + deg b <= 63
    cdef u64 r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


cdef inline u64 pmulmod(u64 a, u64 b, u64 m) nogil:
    cdef u64 r = 0
    cdef int dm = udeg(m)
    a = pmod(a, m)
    b = pmod(b, m)
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if (a >> dm) & 1:
            a ^= m
    return r


cdef u64 pdivrem(u64 a, u64 b, u64* rem) nogil:
    cdef u64 q = 0
    cdef int db = udeg(b)
    cdef int da = udeg(a)
    while da >= db:
        q ^= (<u64>1) << (da - db)
        a ^= b << (da - db)
        da = udeg(a)
    rem[0] = a
    return q


cdef u64 pinvmod(u64 c, u64 m) nogil:
    # inverse of c modulo m; caller guarantees gcd(c, m) = 1
    cdef u64 r0 = m, r1 = pmod(c, m), s0 = 0, s1 = 1, q, rem, t
    while r1:
        q = pdivrem(r0, r1, &rem)
        r0 = r1
        r1 = rem
        t = s0 ^ pmul(q, s1)
        s0 = s1
        s1 = t
    return pmod(s0, m)


cdef void pmul128(u64 a, u64 b, u64* hi, u64* lo) nogil:
    cdef u64 rhi = 0, rlo = 0, ahi = 0, alo = a
    while b:
        if b & 1:
            rlo ^= alo
            rhi ^= ahi
        ahi = (ahi << 1) | (alo >> 63)
        alo <<= 1
        b >>= 1
    hi[0] = rhi
    lo[0] = rlo


cdef u64 pdivexact128(u64 hi, u64 lo, u64 b) nogil:
    # exact division of a two-word polynomial by b (quotient fits a word)
    cdef u64 q = 0
    cdef int db = udeg(b)
    cdef int sh, da
    while hi:
        da = 64 + udeg(hi)
        sh = da - db
        if sh >= 64:
            hi ^= b << (sh - 64)
        else:
            lo ^= b << sh
            hi ^= b >> (64 - sh)
        q ^= (<u64>1) << sh
    da = udeg(lo)
    while da >= db:
        sh = da - db
        q ^= (<u64>1) << sh
        lo ^= b << sh
        da = udeg(lo)
    return q


cdef u64 bareiss_det(u64 M[MAXS][MAXS], int n) nogil:
    # fraction-free determinant; char 2, so row swaps carry no sign
    cdef u64 prev = 1, h1, l1, h2, l2, t
    cdef int k, i, j, r
    if n == 0:
        return 1
    for k in range(n - 1):
        if M[k][k] == 0:
            r = -1
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    r = i
                    break
            if r < 0:
                return 0
            for j in range(n):
                t = M[k][j]
                M[k][j] = M[r][j]
                M[r][j] = t
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                pmul128(M[i][j], M[k][k], &h1, &l1)
                pmul128(M[i][k], M[k][j], &h2, &l2)
                h1 ^= h2
                l1 ^= l2
                if h1 == 0 and l1 == 0:
                    M[i][j] = 0
                else:
                    M[i][j] = pdivexact128(h1, l1, prev)
            M[i][k] = 0
        prev = M[k][k]
    return M[n - 1][n - 1]


cdef u64 sylvester_resultant(u64* a, int da, u64* b, int db) nogil:
    # resultant in y of two y-major x-poly arrays, y-degrees da, db >= 1
    cdef u64 M[MAXS][MAXS]
    cdef int n = da + db
    cdef int i, j
    for i in range(n):
        for j in range(n):
            M[i][j] = 0
    for i in range(db):
        for j in range(da + 1):
            M[i][i + j] = a[da - j]
    for i in range(da):
        for j in range(db + 1):
            M[db + i][i + j] = b[db - j]
    return bareiss_det(M, n)


cdef inline int ytop(u64* p, int cap) nogil:
    cdef int i
    for i in range(cap - 1, -1, -1):
        if p[i] != 0:
            return i
    return -1


cdef int d5_exists_root(u64 G, u64 sys0[3][MAXY], int nsys) nogil:
    """1 iff some irreducible factor w of G admits a root a and some b in
    the closure with all nsys system polynomials vanishing at (a, b);
    0 if none does; -1 on (unreachable) worklist exhaustion."""
    cdef u64 stack[STACKSZ]
    cdef u64 red[3][MAXY]
    cdef u64 a[MAXY]
    cdef u64 b[MAXY]
    cdef u64 m, cur, w, inv, lead, other, rem, t
    cdef int sp = 0, i, s, top, da, db, allzero, dead, split
    stack[sp] = G
    sp += 1
    while sp > 0:
        sp -= 1
        m = stack[sp]
        if udeg(m) < 1:
            continue
        # reduce the system modulo m
        allzero = 1
        for s in range(nsys):
            for i in range(MAXY):
                red[s][i] = pmod(sys0[s][i], m)
                if red[s][i]:
                    allzero = 0
        if allzero:
            return 1
        # y-constant residues must vanish at the root: shrink m
        cur = m
        dead = 0
        for s in range(nsys):
            top = ytop(red[s], MAXY)
            if top == 0:
                w = pgcd(red[s][0], cur)
                if udeg(w) == 0:
                    dead = 1
                    break
                cur = w
        if dead:
            continue
        if cur != m:
            if sp >= STACKSZ:
                return -1
            stack[sp] = cur
            sp += 1
            continue
        # every live residue has positive y-degree: monicize them all
        split = 0
        for s in range(nsys):
            top = ytop(red[s], MAXY)
            if top < 1:
                continue
            lead = red[s][top]
            if lead != 1:
                w = pgcd(lead, m)
                if udeg(w) >= 1:
                    split = 1
                    break
                inv = pinvmod(lead, m)
                for i in range(top + 1):
                    red[s][i] = pmulmod(inv, red[s][i], m)
                red[s][top] = 1
        if split:
            other = pdivrem(m, w, &rem)
            if sp + 2 > STACKSZ:
                return -1
            if udeg(w) >= 1:
                stack[sp] = w
                sp += 1
            if udeg(other) >= 1:
                stack[sp] = other
                sp += 1
            continue
        # fold the y-gcd of the monic residues
        da = -1
        split = 0
        for s in range(nsys):
            top = ytop(red[s], MAXY)
            if top < 1:
                continue
            if da < 0:
                for i in range(MAXY):
                    a[i] = red[s][i]
                da = top
                continue
            for i in range(MAXY):
                b[i] = red[s][i]
            db = top
            # gcd(a, b) with D5 inversions; result left in a/da
            while db >= 0:
                lead = b[db]
                if lead != 1:
                    w = pgcd(lead, m)
                    if udeg(w) >= 1:
                        split = 1
                        break
                    inv = pinvmod(lead, m)
                    for i in range(db + 1):
                        b[i] = pmulmod(inv, b[i], m)
                    b[db] = 1
                while da >= db:
                    lead = a[da]
                    if lead:
                        for i in range(db):
                            a[da - db + i] ^= pmulmod(lead, b[i], m)
                    a[da] = 0
                    da = ytop(a, da)
                # deg a < deg b now: swap roles
                for i in range(MAXY):
                    t = a[i]
                    a[i] = b[i]
                    b[i] = t
                i = da
                da = db
                db = i
            if split:
                break
            if da == 0:
                break  # unit gcd: no common y-root modulo any factor
        if split:
            other = pdivrem(m, w, &rem)
            if sp + 2 > STACKSZ:
                return -1
            if udeg(w) >= 1:
                stack[sp] = w
                sp += 1
            if udeg(other) >= 1:
                stack[sp] = other
                sp += 1
            continue
        if da >= 1:
            return 1
    return 0


cdef int decide_chart(u64 fp[MAXY], u64 g1[MAXY], u64 g2[MAXY]) nogil:
    """0: no singular point in this chart; 1: singular point exists;
    2: degenerate (resultant constraints all vanished), caller decides."""
    cdef int fd = ytop(fp, MAXY)
    cdef int d1 = ytop(g1, MAXY)
    cdef int d2 = ytop(g2, MAXY)
    cdef u64 sys0[3][MAXY]
    cdef u64 cons[4]
    cdef u64 G, R
    cdef int ncons = 0, ninv = 0, npure = 0, i, s, base, nsys = 0
    cdef int inv_idx[3]
    cdef u64 pure[3]
    # f is a nonzero constant: nothing vanishes here
    if fd == 0 and udeg(fp[0]) == 0:
        return 0
    if d1 < 0 and d2 < 0:
        return 1  # nonconstant f with identically zero gradient
    if (d1 == 0 and udeg(g1[0]) == 0) or (d2 == 0 and udeg(g2[0]) == 0):
        return 0  # a unit constraint kills the system
    # collect the system (f always nonzero here)
    for i in range(MAXY):
        sys0[nsys][i] = fp[i]
    nsys += 1
    if d1 >= 0:
        for i in range(MAXY):
            sys0[nsys][i] = g1[i]
        nsys += 1
    if d2 >= 0:
        for i in range(MAXY):
            sys0[nsys][i] = g2[i]
        nsys += 1
    for s in range(nsys):
        i = ytop(sys0[s], MAXY)
        if i >= 1:
            inv_idx[ninv] = s
            ninv += 1
        else:
            pure[npure] = sys0[s][0]
            npure += 1
    if ninv == 0:
        # every constraint is an x-polynomial: shared root iff gcd nonconstant
        G = pure[0]
        for i in range(1, npure):
            G = pgcd(G, pure[i])
        return 1 if udeg(G) >= 1 else 0
    # base member: smallest y-degree
    base = inv_idx[0]
    for i in range(1, ninv):
        if ytop(sys0[inv_idx[i]], MAXY) < ytop(sys0[base], MAXY):
            base = inv_idx[i]
    for i in range(ninv):
        s = inv_idx[i]
        if s == base:
            continue
        R = sylvester_resultant(
            &sys0[base][0], ytop(sys0[base], MAXY), &sys0[s][0], ytop(sys0[s], MAXY)
        )
        cons[ncons] = R
        ncons += 1
    for i in range(npure):
        cons[ncons] = pure[i]
        ncons += 1
    if ncons == 0:
        return 2  # cannot happen for a 2+-member system; stay safe
    G = 0
    for i in range(ncons):
        if cons[i]:
            G = cons[i] if G == 0 else pgcd(G, cons[i])
    if G == 0:
        return 2  # every elimination constraint vanished identically
    if udeg(G) == 0:
        return 0
    return d5_exists_root(G, sys0, nsys)


cdef int decide_form(u64 n, const int[:, :, ::1] tab) nogil:
    """1 smooth over the closure, 0 singular, 2 needs the Python fallback."""
    cdef u64 fp[MAXY]
    cdef u64 g1[MAXY]
    cdef u64 g2[MAXY]
    cdef u64 rest
    cdef int ch, i, j, r
    for ch in range(3):
        for i in range(MAXY):
            fp[i] = 0
            g1[i] = 0
            g2[i] = 0
        rest = n
        while rest:
            j = __builtin_ctzll(rest)
            rest &= rest - 1
            fp[tab[ch, j, 0]] ^= (<u64>1) << tab[ch, j, 1]
            if tab[ch, j, 2] >= 0:
                g1[tab[ch, j, 2]] ^= (<u64>1) << tab[ch, j, 3]
            if tab[ch, j, 4] >= 0:
                g2[tab[ch, j, 4]] ^= (<u64>1) << tab[ch, j, 5]
        r = decide_chart(fp, g1, g2)
        if r != 0:
            return 0 if r == 1 else 2
    return 1


def decide_q2(long long n, tab):
    """Single-form smoothness verdict: 1 smooth, 0 singular, 2 degenerate."""
    cdef const int[:, :, ::1] t = tab
    return decide_form(<u64>n, t)


def census_q2(
    int d,
    long long start,
    long long stop,
    bint smooth_mode,
    mask_arr,
    point_masks_arr,
    tab_arr,
    fallback,
):
    """Histogram of rational point counts for candidates in [start, stop).

    mask_arr: optional uint8 prescan (1 = known singular, skipped);
    point_masks_arr: int64 parity masks for the 7 rational points;
    tab_arr: (3, N, 6) int32 chart construction table;
    fallback: callable(n) -> bool for degenerate forms.
    """
    counts_np = np.zeros(8, dtype=np.int64)  # t ranges over 0..7 for q = 2
    cdef long long[::1] counts = counts_np
    cdef const long long[::1] pmasks = point_masks_arr
    cdef const int[:, :, ::1] tab = tab_arr
    cdef const unsigned char[::1] mask
    cdef bint have_mask = mask_arr is not None
    if have_mask:
        mask = mask_arr
    cdef int npts = pmasks.shape[0]
    cdef long long n
    cdef u64 un
    cdef int t, i, verdict
    for n in range(start, stop):
        if n == 0:
            continue
        un = <u64>n
        t = 0
        for i in range(npts):
            if (__builtin_popcountll(un & (<u64>pmasks[i])) & 1) == 0:
                t += 1
        if not smooth_mode:
            counts[t] += 1
            continue
        if have_mask and mask[n]:
            continue
        verdict = decide_form(un, tab)
        if verdict == 2:
            verdict = 1 if fallback(n) else 0
        if verdict:
            counts[t] += 1
    return counts_np
