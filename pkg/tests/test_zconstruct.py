import random
from fractions import Fraction

import pytest

from poissonz.exactalg import vectors_rank
from poissonz.invariants import basic_invariants, sigma_normalize
from poissonz.liealg import build_algebra, build_symmetric_pair, random_vector
from poissonz.polyring import Poly, jacobian_at
from poissonz.zconstruct import (
    GeneratorFamily,
    cartan_subspace,
    chain_maximal_pc,
    lemma_sum_reg_verify,
    manakov_restrict,
    mf_generators,
    verify_commutativity,
    verify_trdeg_freeness,
    z_generators,
    z_infty_generators,
    ztilde_generators,
)


def normalized(key):
    pair = build_symmetric_pair(key)
    norm = sigma_normalize(basic_invariants(pair.g), pair)
    return pair, norm


def test_sl2_special_family():
    pair, norm = normalized("AI:2")
    fam = z_generators(pair, norm)
    assert fam.size == 2
    assert fam.gens[0] == Poly.variable(3, 0)  # the fixed coordinate
    assert fam.gens[1].terms == {(0, 1, 1): norm.polys[0].terms[(0, 1, 1)]}


def test_ai3_bidegrees():
    pair, norm = normalized("AI:3")
    fam = z_generators(pair, norm)
    bidegrees = sorted(p[2] for p in fam.provenance)
    assert bidegrees == [(0, 2), (0, 3), (2, 0), (2, 1)]
    assert fam.expected_trdeg == 4


def test_aiii12_bidegrees_even_pattern():
    pair, norm = normalized("AIII:1,2")
    fam = z_generators(pair, norm)
    bidegrees = sorted(p[2] for p in fam.provenance)
    assert bidegrees == [(0, 2), (1, 2), (2, 0), (3, 0)]
    assert all((d1 % 2 == 0) for _, d1 in bidegrees)


def test_generator_count_formula():
    for key in ("AI:3", "AI:4", "AII:2", "BDI:3,2", "DBL:sl2"):
        pair, norm = normalized(key)
        fam = z_generators(pair, norm)
        count = sum(
            d1 // 2 + 1 if eps == 1 else (d1 + 1) // 2
            for eps, d1 in zip(norm.sigma_eigs, norm.g1_degrees)
        )
        assert fam.size == count == pair.trdeg_z, key


def test_symbolic_commutativity_ai3():
    pair, norm = normalized("AI:3")
    fam = z_generators(pair, norm)
    rep = verify_commutativity(fam, pair, mode="symbolic")
    assert rep.passed


def test_sampled_commutativity_matches_symbolic():
    pair, norm = normalized("AIII:1,2")
    fam = z_generators(pair, norm)
    assert verify_commutativity(fam, pair, mode="symbolic").passed
    assert verify_commutativity(fam, pair, mode="sampled", seed=3).passed


def test_commutativity_negative_control():
    pair, norm = normalized("AI:3")
    fam = z_generators(pair, norm)
    bad = GeneratorFamily(
        fam.gens + [Poly.variable(pair.dim, pair.n0)],  # an odd coordinate
        fam.provenance + [("injected", pair.n0)],
        fam.expected_trdeg + 1,
        pair.dim,
    )
    rep = verify_commutativity(bad, pair, mode="symbolic")
    assert not rep.passed
    failing = [c for c in rep.checks if not c.passed]
    assert failing and failing[0].computed  # witness pairs are reported


def test_rank_negative_control():
    pair, norm = normalized("AI:3")
    fam = z_generators(pair, norm)
    dup = GeneratorFamily(
        fam.gens + [fam.gens[0]],
        fam.provenance + [fam.provenance[0]],
        fam.expected_trdeg + 1,
        pair.dim,
    )
    rep = verify_trdeg_freeness(dup, pair, trials=4, seed=1)
    assert not rep.passed
    rank_check = [c for c in rep.checks if c.name == "jacobian-rank"][0]
    assert rank_check.computed == fam.expected_trdeg


def test_trdeg_ai3():
    pair, norm = normalized("AI:3")
    fam = z_generators(pair, norm)
    rep = verify_trdeg_freeness(fam, pair, trials=4, seed=0)
    assert rep.passed
    assert fam.expected_trdeg == (pair.n1 + pair.rank + pair.rank0) // 2 == 4


def test_ztilde_onto_pair_adds_nothing():
    pair, norm = normalized("AI:3")
    zfam = z_generators(pair, norm)
    ztfam = ztilde_generators(pair, norm)
    assert ztfam.size == zfam.size
    rng = random.Random(5)
    xi = random_vector(rng, pair.dim, 97)
    stacked = vectors_rank(jacobian_at(zfam.gens + ztfam.gens, xi))
    assert stacked == zfam.expected_trdeg


def test_ztilde_not_onto_pair_differs():
    pair, norm = normalized("AI:4")
    zfam = z_generators(pair, norm)
    ztfam = ztilde_generators(pair, norm)
    assert ztfam.size == zfam.size == 7
    rep = verify_trdeg_freeness(ztfam, pair, trials=4, seed=2)
    assert rep.passed


def test_zinfty_inner_is_fixed_coordinates():
    pair, norm = normalized("AIII:1,2")
    fam = z_infty_generators(pair, norm)
    assert fam.size == 4
    assert all(p[0] == "coordinate" for p in fam.provenance)


def test_zinfty_outer_adds_mixed_components():
    pair, norm = normalized("AI:3")
    fam = z_infty_generators(pair, norm)
    assert fam.size == 4  # dim g0 + (l - rk g0) = 3 + 1
    kinds = [p[0] for p in fam.provenance]
    assert kinds.count("coordinate") == 3 and kinds.count("bihom") == 1


def test_zinfty_sl2_is_fixed_line():
    pair, norm = normalized("AI:2")
    fam = z_infty_generators(pair, norm)
    assert fam.size == 1
    assert fam.gens[0] == Poly.variable(3, 0)


def test_mf_sl2():
    g = build_algebra("sl2")
    inv = basic_invariants(g)
    rng = random.Random(1)
    gamma = random_vector(rng, 3, 9)
    fam = mf_generators(g, gamma, inv)
    assert fam.size == 2  # the magic number of sl2
    assert sorted(p.degree() for p in fam.gens) == [1, 2]


def test_mf_rejects_irregular_direction():
    g = build_algebra("sl4")
    inv = basic_invariants(g)
    # a subregular direction: diag(1,0,0,-1)
    sub = (
        build_algebra("sl4")
        .solver()
        .coords(
            tuple(
                x
                for row in [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, -1]]
                for x in row
            )
        )
    )
    with pytest.raises(ValueError, match="not regular"):
        mf_generators(g, sub, inv)


def test_mf_so5_degree_multiset():
    g = build_algebra("so5")
    inv = basic_invariants(g)
    rng = random.Random(6)
    gamma = random_vector(rng, g.dim, 9)
    fam = mf_generators(g, gamma, inv)
    assert fam.degrees() == [4, 3, 2, 2, 1, 1]
    rep = verify_trdeg_freeness(
        fam, build_symmetric_pair("BDI:4,1"), trials=3, seed=2
    )
    rank_check = [c for c in rep.checks if c.name == "jacobian-rank"][0]
    assert rank_check.computed == 6


def test_cartan_subspace_ai3():
    pair = build_symmetric_pair("AI:3")
    c1, l_basis, rank_l = cartan_subspace(pair, seed=2)
    assert len(c1) == 2  # maximal-rank pair
    assert len(l_basis) == 0 and rank_l == 0
    for u in c1:
        for v in c1:
            assert not any(pair.g.bracket(u, v))


def test_cartan_subspace_double():
    pair = build_symmetric_pair("DBL:sl2")
    c1, l_basis, rank_l = cartan_subspace(pair, seed=4)
    assert len(c1) == 1
    assert rank_l == pair.rank - len(c1) == 1


def test_manakov_ai3():
    pair, norm = normalized("AI:3")
    fam = z_generators(pair, norm)
    rep = manakov_restrict(fam, pair, seed=2)
    assert rep.passed
    trdeg = [c for c in rep.checks if c.name == "restricted-trdeg"][0]
    assert trdeg.expected == 2  # the magic number of so3


def test_manakov_zero_slice_degenerates():
    pair, norm = normalized("AI:3")
    fam = z_generators(pair, norm)
    eta = tuple(Fraction(0) for _ in range(pair.dim))
    rep = manakov_restrict(fam, pair, seed=2, eta=eta)
    trdeg = [c for c in rep.checks if c.name == "restricted-trdeg"][0]
    assert not trdeg.passed  # rank drops on the degenerate slice


def test_chain_so5():
    fam, rep, pairs = chain_maximal_pc(["so5", "so4", "so2+so2"], seed=3)
    assert rep.passed
    assert fam.degrees() == [4, 2, 2, 2, 1, 1]
    assert fam.size == 6


def test_chain_sl2():
    fam, rep, pairs = chain_maximal_pc(["sl2", "so2"], seed=1)
    assert rep.passed
    assert fam.degrees() == [2, 1]


def test_chain_count_identity():
    # trdeg(ztilde) - rk(g0) summed over levels plus the abelian bottom
    fam, rep, pairs = chain_maximal_pc(["so5", "so4", "so2+so2"], seed=3)
    total = pairs[-1].g0.dim
    for p in pairs:
        total += p.trdeg_z - p.rank0
    magic = (pairs[0].g.dim + pairs[0].g.rank) // 2
    assert total == fam.size == magic


def test_lemma_sum_reg_ai3():
    pair, norm = normalized("AI:3")
    fam = z_generators(pair, norm)
    rep = lemma_sum_reg_verify(pair, fam, seed=5)
    assert rep.passed
    dims = {c.name: c.computed for c in rep.checks}
    assert dims["dim-kernel-sum"] == 4
    assert dims["dim-intersection-with-degenerate-kernel"] == 2


def test_lemma_sum_reg_aiii12():
    pair, norm = normalized("AIII:1,2")
    fam = z_generators(pair, norm)
    rep = lemma_sum_reg_verify(pair, fam, seed=5)
    assert rep.passed
    dims = {c.name: c.computed for c in rep.checks}
    assert dims["dim-kernel-sum"] == 4
    assert dims["dim-intersection-with-degenerate-kernel"] == 2


def test_t_uniformity_of_commuting_family():
    pair, norm = normalized("AI:3")
    fam = z_generators(pair, norm)
    rep = verify_commutativity(fam, pair, mode="sampled", seed=8, samples=3)
    assert rep.passed  # sampled mode includes random finite parameters
