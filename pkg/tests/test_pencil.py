import random
from fractions import Fraction

import pytest

from poissonz.exactalg import Mat
from poissonz.pencil import (
    Pencil,
    bound_and_sumdim_check,
    direct_sum,
    generic_rank_and_L,
    jk_summary,
    jordan_block,
    kronecker_block,
    orthogonality_check,
    random_congruence,
    read_pencil_file,
    restricted_rank,
    singular_members,
)


def mixed_pencil():
    return direct_sum([kronecker_block(1), jordan_block(1, 1)])


def test_kronecker_block_invariants():
    p = direct_sum([kronecker_block(1)])
    m, l_basis = generic_rank_and_L(p)
    assert m == 2 and len(l_basis) == 2  # dim L = k + 1
    assert singular_members(p, m=m).params == []


def test_nondegenerate_pencil_trivial_L():
    j = Mat([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])
    p = Pencil(j, j)
    m, l_basis = generic_rank_and_L(p)
    assert m == 4 and len(l_basis) == 0
    # A + bB = (1+b)A degenerates only at b = -1
    assert singular_members(p, m=m).params == [Fraction(-1)]


def test_mixed_example_numbers():
    p = mixed_pencil()
    m, l_basis = generic_rank_and_L(p)
    assert m == 4 and len(l_basis) == 2
    sd = singular_members(p, m=m)
    assert sd.params == [Fraction(1)]
    assert not sd.b_member_singular and not sd.nonrational_possible


def test_mixed_example_bound_and_dims():
    res = bound_and_sumdim_check(mixed_pencil(), 1)
    assert res["dim_U"] == 3
    assert res["restricted_rank"] == 2 == res["dim_U"] - (5 - res["m"])
    assert res["bound_holds"]
    assert res["a4_applicable"] and res["a4_holds"]
    assert res["dim_L_cap_U"] == 1
    assert res["dim_L"] == 1 + (5 - 3) // 2 + 0  # (n-m) + (n-dimU)/2


def test_jordan4_fails_a4_hypothesis():
    # a single size-4 regular block: the restriction of A to ker C is zero
    p = direct_sum([jordan_block(2, 2)])
    res = bound_and_sumdim_check(p, 2)
    assert res["restricted_rank"] == 0
    assert res["bound_holds"]
    assert not res["a4_applicable"]


def test_bound_check_rejects_regular_member():
    with pytest.raises(ValueError, match="regular"):
        bound_and_sumdim_check(mixed_pencil(), 7)


def test_jk_summary_blocks():
    assert jk_summary(direct_sum([kronecker_block(1)]))["d_prime"] == 1
    info = jk_summary(mixed_pencil())
    assert info["d_prime"] == 1
    assert info["sum_block_sizes"] == 1
    assert info["singular_params"] == [Fraction(1)]
    assert info["kernel_dims"][Fraction(1)] == 3
    j = Mat([[0, 1], [-1, 0]])
    assert jk_summary(Pencil(j, j))["d_prime"] == 0


def test_orthogonality_on_random_block_pencils():
    rng = random.Random(10)
    for trial in range(6):
        blocks = [kronecker_block(rng.randint(1, 2))]
        if rng.random() < 0.8:
            blocks.append(jordan_block(rng.randint(-3, 3), rng.randint(1, 2)))
        p = random_congruence(direct_sum(blocks), seed=trial)
        ok, witness = orthogonality_check(p)
        assert ok, (trial, witness)


def test_randomized_ground_truth():
    rng = random.Random(7)
    for trial in range(8):
        ks = [rng.randint(1, 2) for _ in range(rng.randint(1, 2))]
        lam = rng.randint(-4, 4)
        jordans = [(lam, rng.randint(1, 2)) for _ in range(rng.randint(0, 1))]
        blocks = [kronecker_block(k) for k in ks] + [
            jordan_block(l, h) for l, h in jordans
        ]
        p = random_congruence(direct_sum(blocks), seed=100 + trial)
        n = p.n
        m, l_basis = generic_rank_and_L(p)
        d_prime = n - m
        assert d_prime == len(ks)
        assert len(l_basis) == sum(ks) + len(ks)
        sd = singular_members(p, m=m)
        if jordans:
            assert sd.params == [Fraction(lam)]
        else:
            assert sd.params == []


def test_restricted_rank_invariant_under_member_choice():
    p = mixed_pencil()
    r1, _ = restricted_rank(p, 1)
    q = Pencil(p.a + p.b.scale(5), p.b)  # same pencil, shifted basis member
    r2, _ = restricted_rank(q, -4)
    assert r1 == r2


def test_b_member_singular_line():
    # Kronecker + nondegenerate Jordan: B regular; singular set empty
    p = direct_sum([kronecker_block(2)])
    sd = singular_members(p)
    assert sd.params == [] and not sd.b_member_singular


def test_pencil_file_roundtrip(tmp_path):
    p = mixed_pencil()
    path = tmp_path / "pencil.txt"
    lines = [str(p.n)]
    for mat in (p.a, p.b):
        for row in mat.data:
            lines.append(" ".join(str(x) for x in row))
    path.write_text("# mixed example\n" + "\n".join(lines) + "\n")
    q = read_pencil_file(path)
    assert q.a == p.a and q.b == p.b


def test_pencil_file_errors(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("2\n0 1\n-1 0\n")
    with pytest.raises(ValueError, match="tokens"):
        read_pencil_file(path)


def test_pencil_requires_skew():
    with pytest.raises(ValueError, match="skew"):
        Pencil(Mat([[1, 0], [0, 1]]), Mat([[0, 1], [-1, 0]]))


def test_nonrational_singular_member_flagged():
    # two Jordan parameters +i/-i packaged rationally: det(J - b) = b^2 + 1
    a = Mat(
        [
            [0, 0, 0, 1],
            [0, 0, -1, 0],
            [0, 1, 0, 0],
            [-1, 0, 0, 0],
        ]
    )
    b = Mat(
        [
            [0, 0, -1, 0],
            [0, 0, 0, -1],
            [1, 0, 0, 0],
            [0, 1, 0, 0],
        ]
    )
    p = Pencil(a, b)
    m, _ = generic_rank_and_L(p)
    sd = singular_members(p, m=m)
    assert sd.params == []
    assert sd.nonrational_possible
