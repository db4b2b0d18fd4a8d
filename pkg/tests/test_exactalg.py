import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poissonz.exactalg import (
    Mat,
    merge_sign,
    pfaffian,
    rank_kernel,
    rref,
    sub_pfaffian_vector,
    SpanSolver,
    intersect_dim,
    vectors_rank,
)


def det_by_permutations(m):
    """Independent determinant oracle: straight permutation expansion."""
    n = m.rows
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        prod = Fraction(1)
        for i in range(n):
            prod *= m[i, perm[i]]
        total += sign * prod
    return total


def test_rank_kernel_zero_matrix():
    r, ker = rank_kernel(Mat.zeros(2, 2))
    assert r == 0
    assert ker == [(1, 0), (0, 1)]


def test_rank_kernel_kronecker_block():
    # form on (v1; v2, v3) with A(v1, v2) = 1 only
    a = Mat([[0, 1, 0], [-1, 0, 0], [0, 0, 0]])
    r, ker = rank_kernel(a)
    assert r == 2
    assert ker == [(0, 0, 1)]


def test_rank_kernel_pencil_member():
    # A + 2B with B(v1, v3) = 1: solve y + 2z = 0, x = 0
    m = Mat([[0, 1, 2], [-1, 0, 0], [-2, 0, 0]])
    r, ker = rank_kernel(m)
    assert r == 2
    assert len(ker) == 1
    v = ker[0]
    assert v[0] == 0 and v[1] == -2 * v[2]
    assert m.mul_vec(v) == (0, 0, 0)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(1, 5),
    st.integers(1, 5),
    st.lists(st.integers(-6, 6), min_size=25, max_size=25),
)
def test_rank_plus_kernel_is_cols(rows, cols, entries):
    m = Mat([[entries[i * 5 + j] for j in range(cols)] for i in range(rows)])
    r, ker = rank_kernel(m)
    assert r + len(ker) == cols
    for v in ker:
        assert all(x == 0 for x in m.mul_vec(v))


def test_pfaffian_sign_convention():
    assert pfaffian(Mat([[0, 1], [-1, 0]])) == 1
    block = Mat(
        [
            [0, 3, 0, 0],
            [-3, 0, 0, 0],
            [0, 0, 0, 5],
            [0, 0, -5, 0],
        ]
    )
    assert pfaffian(block) == 15


def test_pfaffian_odd_size_rejected():
    with pytest.raises(ValueError, match="pfaffian undefined"):
        pfaffian(Mat.zeros(3, 3))


def test_pfaffian_squared_is_det():
    rng = random.Random(11)
    for _ in range(20):
        n = 4
        a = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                a[i][j] = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
                a[j][i] = -a[i][j]
        m = Mat(a)
        assert pfaffian(m) ** 2 == det_by_permutations(m)


def wedge_square_oracle(m):
    """Brute-force square of the 2-form sum_{i<j} M_ij e_i ^ e_j."""
    n = m.rows
    acc = {}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                for l in range(k + 1, n):
                    if len({i, j, k, l}) < 4:
                        continue
                    coeff = m[i, j] * m[k, l]
                    if not coeff:
                        continue
                    seq = (i, j, k, l)
                    key = tuple(sorted(seq))
                    sign = 1
                    lst = list(seq)
                    for a in range(4):
                        for b in range(a + 1, 4):
                            if lst[a] > lst[b]:
                                sign = -sign
                    acc[key] = acc.get(key, Fraction(0)) + sign * coeff
    return {k: v for k, v in acc.items() if v}


def test_sub_pfaffian_top_power_of_symplectic():
    m = Mat(
        [
            [0, 1, 0, 0],
            [-1, 0, 0, 0],
            [0, 0, 0, 1],
            [0, 0, -1, 0],
        ]
    )
    vec = sub_pfaffian_vector(m, 4)
    assert vec == {(0, 1, 2, 3): 1}


def test_sub_pfaffian_zero_row():
    m = Mat(
        [
            [0, 0, 0, 0],
            [0, 0, 2, 0],
            [0, -2, 0, 0],
            [0, 0, 0, 0],
        ]
    )
    vec = sub_pfaffian_vector(m, 2)
    for subset, value in vec.items():
        if 0 in subset or 3 in subset:
            assert value == 0


def test_sub_pfaffian_matches_wedge_square():
    rng = random.Random(5)
    n = 6
    a = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a[i][j] = Fraction(rng.randint(-5, 5))
            a[j][i] = -a[i][j]
    m = Mat(a)
    vec = sub_pfaffian_vector(m, 4)
    oracle = wedge_square_oracle(m)
    # the wedge square equals 2! times the sub-pfaffian vector
    for key in set(vec) | set(oracle):
        assert oracle.get(key, Fraction(0)) == 2 * vec.get(key, Fraction(0))


def test_sub_pfaffian_zero_iff_rank_below():
    # rank-2 skew matrix on 4 coordinates: every 4-subset pfaffian vanishes
    m = Mat(
        [
            [0, 1, 2, 0],
            [-1, 0, 3, 0],
            [-2, -3, 0, 0],
            [0, 0, 0, 0],
        ]
    )
    assert m.rank() == 2
    assert all(v == 0 for v in sub_pfaffian_vector(m, 4).values())
    assert any(v != 0 for v in sub_pfaffian_vector(m, 2).values())


def test_span_solver_roundtrip():
    basis = [(1, 0, 2), (0, 1, 1)]
    s = SpanSolver(basis)
    assert s.coords((2, 3, 7)) == (2, 3)
    assert not s.contains((0, 0, 1))


def test_intersect_dim():
    u = [(1, 0, 0), (0, 1, 0)]
    v = [(0, 1, 0), (0, 0, 1)]
    assert intersect_dim(u, v) == 1


def test_merge_sign():
    assert merge_sign((0, 1), (2, 3)) == 1
    assert merge_sign((2,), (0, 1)) == 1
    assert merge_sign((1,), (0, 2)) == -1


def test_det_matches_oracle():
    rng = random.Random(3)
    for _ in range(15):
        n = rng.randint(1, 5)
        m = Mat([[rng.randint(-6, 6) for _ in range(n)] for _ in range(n)])
        assert m.det() == det_by_permutations(m)


def test_inverse():
    m = Mat([[2, 1], [1, 1]])
    assert m.inverse() @ m == Mat.identity(2)
