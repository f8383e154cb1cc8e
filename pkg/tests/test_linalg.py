"""Dense linear algebra over small fields."""

import random

import numpy as np
import pytest

from planecount.gf import make_field
from planecount.linalg import kernel_basis, np_field_tables, rank, rref

F2 = make_field(2)
F3 = make_field(3)
F4 = make_field(2, 2)
F9 = make_field(3, 2)


def test_rref_hand_case_f2():
    rows, pivots = rref(F2, [[1, 1, 0], [1, 0, 1]])
    assert pivots == [0, 1]
    assert rows == [[1, 0, 1], [0, 1, 1]]


def test_rref_hand_case_f3():
    rows, pivots = rref(F3, [[2, 1], [1, 1]])
    assert pivots == [0, 1]
    assert rows == [[1, 0], [0, 1]]
    # a dependent pair ([1,2] = 2*[2,1] mod 3) collapses to one pivot row
    rows, pivots = rref(F3, [[2, 1], [1, 2]])
    assert pivots == [0]
    assert rows == [[1, 2]]


def test_rank_hand_cases():
    assert rank(F2, []) == 0
    assert rank(F2, [[0, 0, 0]]) == 0
    assert rank(F3, [[1, 2], [2, 4 % 3]]) == 1  # second row = 2 * first
    assert rank(F2, [[1, 0], [0, 1], [1, 1]]) == 2


def _matvec(F, rows, v):
    out = []
    for r in rows:
        acc = 0
        for a, b in zip(r, v):
            acc = F.add(acc, F.mul(a, b))
        out.append(acc)
    return out


@pytest.mark.parametrize("F", [F2, F3, F4])
def test_kernel_basis_properties(F):
    rng = random.Random(314)
    for _ in range(60):
        m = rng.randrange(1, 5)
        n = rng.randrange(1, 6)
        rows = [[rng.randrange(F.q) for _ in range(n)] for _ in range(m)]
        ker = kernel_basis(F, rows, n)
        assert len(ker) == n - rank(F, rows)
        for v in ker:
            assert _matvec(F, rows, v) == [0] * m
        # the kernel vectors are themselves independent
        assert rank(F, [list(v) for v in ker]) == len(ker)


def test_kernel_of_identity_is_zero():
    assert kernel_basis(F3, [[1, 0], [0, 1]], 2) == []


@pytest.mark.parametrize("F", [F2, F3, F4, F9])
def test_np_field_tables_match_scalar_ops(F):
    add_t, mul_t = np_field_tables(F)
    assert add_t.shape == mul_t.shape == (F.q, F.q)
    for a in F.elements():
        for b in F.elements():
            assert int(add_t[a, b]) == F.add(a, b)
            assert int(mul_t[a, b]) == F.mul(a, b)


def test_np_field_tables_vectorized_use():
    add_t, mul_t = np_field_tables(F4)
    a = np.arange(4, dtype=np.int64)
    assert list(mul_t[a, a]) == [F4.mul(x, x) for x in range(4)]
