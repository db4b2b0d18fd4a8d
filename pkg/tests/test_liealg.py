import random
from fractions import Fraction

import pytest

from poissonz.exactalg import Mat
from poissonz.liealg import (
    DEFAULT_PAIRS,
    build_algebra,
    build_chain_pairs,
    build_symmetric_pair,
    centralizer,
    parse_pair_key,
    random_vector,
    sampled_algebra_index,
    table_entry,
    _flatten,
)


def coords_of(alg, mat):
    return alg.solver().coords(_flatten(mat))


def test_sl2_structure_constants():
    g = build_algebra("sl2")
    e, h, f = g.labels.index("E12"), g.labels.index("H1"), g.labels.index("E21")
    # [h, e] = 2e, [h, f] = -2f, [e, f] = h
    assert table_entry(g.table, h, e) == {e: 2}
    assert table_entry(g.table, h, f) == {f: -2}
    assert table_entry(g.table, e, f) == {h: 1}


def test_so4_dimension_and_index():
    g = build_algebra("so4")
    assert g.dim == 6
    assert sampled_algebra_index(g, trials=5, seed=2) == 2


def test_sl3_constructor_verifies():
    g = build_algebra("sl3")
    assert g.dim == 8
    assert g.verify()


def test_algebra_rejects_bad_descriptor():
    with pytest.raises(ValueError):
        build_algebra("e8")
    with pytest.raises(ValueError):
        build_algebra("sp3")


def test_ai3_pair_dimensions():
    p = build_symmetric_pair("AI:3")
    assert (p.n0, p.n1) == (3, 5)
    assert (p.rank, p.rank0) == (2, 1)
    assert not p.inner


def test_aiii12_pair_dimensions():
    p = build_symmetric_pair("AIII:1,2")
    assert (p.n0, p.n1) == (4, 4)
    assert p.rank0 == 2
    assert p.inner


def test_double_pair_diagonal():
    p = build_symmetric_pair("DBL:sl2")
    assert p.dim == 6 and p.n0 == 3
    # the fixed copy consists of block-diagonal (X, X)
    for i in range(p.n0):
        m = p.g.basis_mats[i]
        top = m.submatrix(range(2), range(2))
        bottom = m.submatrix(range(2, 4), range(2, 4))
        assert top == bottom


def test_grading_and_orthogonality_over_registry():
    for key in ["AI:2", "AI:3", "AIII:1,2", "BDI:3,2", "CII:1,1", "DBL:sl2"]:
        p = build_symmetric_pair(key)
        assert p.verify()
        assert p.trdeg_z == (p.n1 + p.rank + p.rank0) // 2


def test_regular_semisimple_in_fixed_part():
    rng = random.Random(4)
    for key in ["AI:3", "AIII:1,2", "BDI:3,2"]:
        p = build_symmetric_pair(key)
        found = False
        for _ in range(5):
            x0 = tuple(
                Fraction(rng.randint(-9, 9)) if i < p.n0 else Fraction(0)
                for i in range(p.dim)
            )
            d, _, tag = centralizer(p.g, x0)
            if d == p.rank:
                found = True
                break
        assert found, key


def test_centralizer_of_zero():
    g = build_algebra("sl3")
    d, _, tag = centralizer(g, tuple(Fraction(0) for _ in range(g.dim)))
    assert d == g.dim


def test_centralizer_regular_diag_sl3():
    g = build_algebra("sl3")
    x = coords_of(g, Mat([[1, 0, 0], [0, 2, 0], [0, 0, -3]]))
    d, _, tag = centralizer(g, x)
    assert d == 2 and tag == "regular"


def test_centralizer_subregular_diag_sl4():
    g = build_algebra("sl4")
    x = coords_of(
        g, Mat([[5, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, -5]])
    )
    d, _, tag = centralizer(g, x)
    assert d == 5 and tag == "subregular"


def test_sampled_index_abelian():
    g = build_algebra("so2+so2")
    assert g.dim == 2
    assert sampled_algebra_index(g, trials=3, seed=0) == 2


def test_sampled_index_sl3():
    g = build_algebra("sl3")
    assert sampled_algebra_index(g, trials=5, seed=1) == 2


def test_pair_key_parsing():
    assert parse_pair_key("AI:3").key == "AI:3"
    assert parse_pair_key("BDI:1,3").key == "BDI:3,1"
    assert parse_pair_key("DBL:sl2").key == "DBL:sl2"
    for bad in ["XX:1", "AI:1", "BDI:1,1", "AI:x"]:
        with pytest.raises(KeyError):
            parse_pair_key(bad)


def test_registry_builds():
    for key in DEFAULT_PAIRS:
        p = build_symmetric_pair(key)
        assert p.dim == p.n0 + p.n1


def test_chain_prefix_structure():
    pairs = build_chain_pairs(["so5", "so4", "so2+so2"])
    assert [p.dim for p in pairs] == [10, 6]
    assert [p.n0 for p in pairs] == [6, 2]
    # bottom is abelian
    assert not pairs[-1].g0.table
    # level-2 algebra is literally the prefix subalgebra of level 1
    assert pairs[1].g.basis_mats == pairs[0].g.basis_mats[:6]


def test_chain_rejects_nonabelian_bottom():
    with pytest.raises(ValueError):
        build_chain_pairs(["so5", "so4"])
