"""Ternary forms, univariate/bivariate polynomial kernels, elimination."""

import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from planecount.gf import make_field
from planecount.poly import (
    AffinePoly,
    FieldOps,
    TernaryForm,
    bareiss_det,
    ideal_trivial,
    monomial_count,
    monomial_index,
    monomials,
    resultant,
    resultant_y,
    resultant_y_direct,
    sylvester_matrix,
    uadd,
    udeg,
    udivmod,
    ueval,
    ugcd,
    umul,
    unorm,
)

F2 = make_field(2)
F3 = make_field(3)
F4 = make_field(2, 2)
F5 = make_field(5)


# ---------------------------------------------------------------------------
# monomial order and indexing
# ---------------------------------------------------------------------------


def test_monomials_degree_2_order_is_pinned():
    # graded-lex, X > Y > Z, listed descending: this order is load-bearing
    # (candidate indices and report columns are defined against it).
    assert monomials(2) == (
        (2, 0, 0),
        (1, 1, 0),
        (1, 0, 1),
        (0, 2, 0),
        (0, 1, 1),
        (0, 0, 2),
    )
    assert monomials(1) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))


@pytest.mark.parametrize("d", range(1, 8))
def test_monomial_count_matches_enumeration(d):
    assert monomial_count(d) == len(monomials(d)) == (d + 1) * (d + 2) // 2
    assert monomial_index(d) == {m: i for i, m in enumerate(monomials(d))}


def test_from_index_digits_are_little_endian():
    # index 5 over F3 is 2 + 1*3: digit j is the coefficient of monomial j.
    f = TernaryForm.from_index(F3, 2, 5)
    assert f.coeffs == (2, 1, 0, 0, 0, 0)
    assert f.to_index() == 5
    assert TernaryForm.from_index(F3, 2, 0).is_zero


@given(st.sampled_from([(F2, 3), (F3, 2), (F4, 2)]), st.data())
def test_index_roundtrip(fd, data):
    F, d = fd
    n = data.draw(st.integers(0, F.q ** monomial_count(d) - 1))
    f = TernaryForm.from_index(F, d, n)
    assert f.to_index() == n
    g = TernaryForm.from_terms(F, d, dict(zip(monomials(d), f.coeffs)))
    assert g.coeffs == f.coeffs


# ---------------------------------------------------------------------------
# evaluation and derivatives
# ---------------------------------------------------------------------------


def test_evaluate_hand_case_over_f4():
    # X^2 + XY + Y^2 at (1, g, 0) where g generates F4: 1 + g + g^2 = 0.
    f = TernaryForm.from_terms(F4, 2, {(2, 0, 0): 1, (1, 1, 0): 1, (0, 2, 0): 1})
    g = 2  # the class of t
    assert F4.pow(g, 2) == F4.add(g, 1)
    assert f.evaluate((1, g, 0)) == 0
    assert f.evaluate((1, 1, 0)) == 1


def test_evaluate_into_extension_field():
    # a base-field form evaluated at extension points maps coefficients in
    f = TernaryForm.from_terms(F2, 2, {(2, 0, 0): 1, (0, 1, 1): 1})
    assert f.evaluate((2, 1, 3), field=F4) == F4.add(F4.mul(2, 2), 3)


def test_partial_respects_characteristic():
    # d/dX of X^3 vanishes over F3; d/dX of X^2 Y is 2XY.
    f = TernaryForm.from_terms(F3, 3, {(3, 0, 0): 1})
    assert f.partial(0).is_zero
    g = TernaryForm.from_terms(F3, 3, {(2, 1, 0): 1})
    assert g.partial(0) == TernaryForm.from_terms(F3, 2, {(1, 1, 0): 2})
    assert g.partial(2).is_zero


@given(
    st.sampled_from([(F2, 3), (F2, 4), (F3, 3), (F4, 2)]),
    st.data(),
)
def test_euler_identity(fd, data):
    # d*f == X*fX + Y*fY + Z*fZ for homogeneous f of degree d.
    F, d = fd
    n = data.draw(st.integers(0, F.q ** monomial_count(d) - 1))
    f = TernaryForm.from_index(F, d, n)
    rhs = f.partial(0).mul_var(0)
    rhs = rhs.add(f.partial(1).mul_var(1))
    rhs = rhs.add(f.partial(2).mul_var(2))
    assert rhs == f.scale(d % F.p)


@given(st.data())
def test_evaluate_is_homogeneous(data):
    F, d = F3, 3
    n = data.draw(st.integers(1, F.q ** monomial_count(d) - 1))
    f = TernaryForm.from_index(F, d, n)
    v = data.draw(st.tuples(*[st.integers(0, F.q - 1)] * 3))
    lam = data.draw(st.integers(1, F.q - 1))
    scaled = tuple(F.mul(lam, c) for c in v)
    assert f.evaluate(scaled) == F.mul(F.pow(lam, d), f.evaluate(v))


@given(st.data())
def test_dehomogenize_evaluate_consistency(data):
    F, d = F4, 3
    n = data.draw(st.integers(0, 4 ** monomial_count(d) - 1))
    f = TernaryForm.from_index(F, d, n)
    x, y = data.draw(st.tuples(st.integers(0, 3), st.integers(0, 3)))
    for chart in range(3):
        coords = [x, y]
        coords.insert(chart, 1)
        assert f.dehomogenize(chart).evaluate((x, y)) == f.evaluate(tuple(coords))


@given(st.data())
def test_dehomogenize_homogenize_roundtrip(data):
    F, d = F3, 4
    n = data.draw(st.integers(0, 3 ** monomial_count(d) - 1))
    f = TernaryForm.from_index(F, d, n)
    for chart in range(3):
        assert f.dehomogenize(chart).homogenize(d, chart) == f


def test_homogenize_rejects_overflow():
    g = AffinePoly(F2, {(2, 1): 1})
    with pytest.raises(ValueError):
        g.homogenize(2, 2)


# ---------------------------------------------------------------------------
# univariate kernel
# ---------------------------------------------------------------------------


def _rand_upoly(F, rng, maxdeg):
    return unorm([rng.randrange(F.q) for _ in range(rng.randrange(maxdeg + 2))])


def test_udivmod_and_gcd_properties():
    rng = random.Random(20260801)
    for F in (F2, F3, F4, F5):
        for _ in range(120):
            a = _rand_upoly(F, rng, 6)
            b = _rand_upoly(F, rng, 4)
            if not b:
                continue
            q, r = udivmod(F, a, b)
            assert unorm(uadd(F, umul(F, q, b), r)) == a
            assert udeg(r) < udeg(b) or not r
            g = ugcd(F, a, b)
            if a or b:
                assert not g or g[-1] == 1  # monic normalization
                if g:
                    assert not udivmod(F, a, g)[1]
                    assert not udivmod(F, b, g)[1]


def test_ueval_hand_case():
    # 1 + x + x^3 over F2 at x=1 -> 1; at x=0 -> 1
    assert ueval(F2, [1, 1, 0, 1], 1) == 1
    assert ueval(F3, [1, 2, 1], 2) == (1 + 4 + 4) % 3


def test_resultant_hand_cases():
    # x^2+x+1 and x+1 share no root in any extension of F2 -> nonzero.
    assert resultant(F2, [1, 1, 1], [1, 1]) == 1
    # x^2+x = x(x+1) shares the root 1 with x+1 -> zero.
    assert resultant(F2, [0, 1, 1], [1, 1]) == 0
    # res(f, const c) = c^deg f
    assert resultant(F3, [1, 0, 2], [2]) == F3.pow(2, 2)
    with pytest.raises(ValueError):
        resultant(F2, [], [])


def test_resultant_vanishes_iff_common_root():
    rng = random.Random(77)
    for F in (F2, F3, F4):
        for _ in range(150):
            a = _rand_upoly(F, rng, 4)
            b = _rand_upoly(F, rng, 4)
            if not a or not b or (udeg(a) == 0 and udeg(b) == 0):
                continue
            share = udeg(ugcd(F, a, b)) >= 1
            assert (resultant(F, a, b) == 0) == share


def _rand_bipoly(F, rng, dx, dy):
    terms = {}
    for i in range(rng.randrange(dx + 1) + 1):
        for j in range(rng.randrange(dy + 1) + 1):
            terms[(i, j)] = rng.randrange(F.q)
    return AffinePoly(F, terms)


def test_resultant_y_two_routes_agree():
    # interpolation route vs fraction-free elimination route
    rng = random.Random(4242)
    for F in (F2, F3):
        for _ in range(60):
            f = _rand_bipoly(F, rng, 3, 3)
            g = _rand_bipoly(F, rng, 3, 3)
            fy, gy = f.ymajor(), g.ymajor()
            if not any(fy) or not any(gy):
                continue
            assert resultant_y(F, fy, gy) == resultant_y_direct(F, fy, gy)


def test_resultant_y_specialization_commutes():
    # whenever neither top y-coefficient vanishes at x=a, plugging a into
    # the bivariate resultant equals the univariate resultant at a.
    rng = random.Random(99)
    for F in (F2, F3, F5):
        for _ in range(80):
            f = _rand_bipoly(F, rng, 2, 3)
            g = _rand_bipoly(F, rng, 2, 3)
            fy, gy = f.ymajor(), g.ymajor()
            if len(fy) < 2 or len(gy) < 2 or not fy[-1] or not gy[-1]:
                continue
            R = resultant_y(F, fy, gy)
            for a in F.elements():
                if ueval(F, fy[-1], a) == 0 or ueval(F, gy[-1], a) == 0:
                    continue
                fa = unorm([ueval(F, c, a) for c in fy])
                ga = unorm([ueval(F, c, a) for c in gy])
                assert ueval(F, R, a) == resultant(F, fa, ga)


def test_bareiss_det_matches_evaluation():
    # determinant over F[x] specializes to the determinant of the
    # specialized matrix (cross-checks the fraction-free elimination).
    from planecount.poly import PolyOps

    rng = random.Random(5)
    F = F5
    ops = PolyOps(F)
    for _ in range(30):
        mat = [[_rand_upoly(F, rng, 2) for _ in range(3)] for _ in range(3)]
        det = bareiss_det(ops, [row[:] for row in mat])
        for a in F.elements():
            spec = [[ueval(F, mat[i][j], a) for j in range(3)] for i in range(3)]
            want = _det3(F, spec)
            assert ueval(F, det, a) == want


def _det3(F, m):
    total = 0
    for perm, sign in (
        ((0, 1, 2), 1),
        ((1, 2, 0), 1),
        ((2, 0, 1), 1),
        ((0, 2, 1), -1),
        ((1, 0, 2), -1),
        ((2, 1, 0), -1),
    ):
        term = 1
        for r, c in enumerate(perm):
            term = F.mul(term, m[r][c])
        total = F.add(total, term if sign == 1 else F.neg(term))
    return total


def test_sylvester_matrix_shape():
    m = sylvester_matrix(FieldOps(F2), [1, 1, 1], [1, 0, 1, 1])
    assert len(m) == 5 and all(len(r) == 5 for r in m)


# ---------------------------------------------------------------------------
# unit-ideal decision (common roots over the closure)
# ---------------------------------------------------------------------------


def test_ideal_trivial_hand_cases():
    x = AffinePoly(F2, {(1, 0): 1})
    y = AffinePoly(F2, {(0, 1): 1})
    one = AffinePoly(F2, {(0, 0): 1})
    # x and y vanish together at the origin
    assert not ideal_trivial([x, y])
    # x^2+x+1 has roots only in F4, but they are still common roots with y
    f = AffinePoly(F2, {(2, 0): 1, (1, 0): 1, (0, 0): 1})
    assert not ideal_trivial([f, y])
    # x^2 and x+1 cannot vanish simultaneously anywhere
    xsq = AffinePoly(F2, {(2, 0): 1})
    xp1 = AffinePoly(F2, {(1, 0): 1, (0, 0): 1})
    assert ideal_trivial([xsq, xp1])
    assert ideal_trivial([one])
    assert ideal_trivial([x, y, one])
    with pytest.raises(ValueError):
        ideal_trivial([AffinePoly(F2, {})])


def _to_sympy(poly, xs):
    x, y = xs
    expr = 0
    for (i, j), co in poly.terms.items():
        expr += int(co) * x**i * y**j
    return expr


@pytest.mark.parametrize("p", [2, 3])
def test_ideal_trivial_against_sympy_groebner(p):
    F = make_field(p)
    rng = random.Random(1000 + p)
    x, y = sympy.symbols("x y")
    checked = 0
    for _ in range(40):
        gens = [_rand_bipoly(F, rng, 2, 2) for _ in range(rng.randrange(1, 4))]
        if all(g.is_zero for g in gens):
            continue
        exprs = [_to_sympy(g, (x, y)) for g in gens if not g.is_zero]
        gb = sympy.groebner(exprs, x, y, modulus=p, order="grevlex")
        want = list(gb.exprs) == [1]
        assert ideal_trivial(gens) == want
        checked += 1
    assert checked >= 30
