import random
from fractions import Fraction

import pytest

from poissonz.brackets import INFINITY, tensor_at
from poissonz.identities import (
    det_ad_factor_check,
    kostant_identity_at,
    kostant_identity_suite,
    q_factor_check,
)
from poissonz.invariants import basic_invariants, sigma_normalize
from poissonz.liealg import build_symmetric_pair, random_vector


def normalized(key):
    pair = build_symmetric_pair(key)
    norm = sigma_normalize(basic_invariants(pair.g), pair)
    return pair, norm


def test_sl2_full_identity_by_hand():
    # basis (h; e, f): H = c(h^2 + 4ef); at xi = (1,1,1) the three covector
    # entries are gradients against the three 2x2 pfaffians of pi(xi)
    pair, norm = normalized("AI:2")
    h = norm.polys[0]
    c = h.terms[(2, 0, 0)]
    xi = (Fraction(1), Fraction(1), Fraction(1))
    ev = kostant_identity_at(pair, xi, "full", norm)
    assert ev.passed
    # hand expansion: dH = (2c, 4c, 4c); pi(xi) entries 2, -2, 1
    assert ev.left[(0, 1)] == 4 * c and ev.right[(0, 1)] == 2
    assert ev.left[(0, 2)] == -4 * c and ev.right[(0, 2)] == -2
    assert ev.left[(1, 2)] == 2 * c and ev.right[(1, 2)] == 1
    assert ev.scalar == 2 * c


def test_full_identity_sl2_sl3_suites():
    for key in ("AI:2", "AI:3"):
        pair, norm = normalized(key)
        rep = kostant_identity_suite(pair, norm, "full", seed=17, points=5)
        assert rep.passed, key


def test_full_identity_scalar_constant_across_points():
    pair, norm = normalized("AI:3")
    rng = random.Random(23)
    scalars = set()
    for _ in range(3):
        xi = random_vector(rng, pair.dim, 97)
        ev = kostant_identity_at(pair, xi, "full", norm)
        assert ev.passed
        scalars.add(ev.scalar)
    assert len(scalars) == 1


def test_full_identity_vanishes_at_singular_point():
    # at the origin the tensor rank drops below n - l and both sides vanish
    pair, norm = normalized("AI:2")
    zero = tuple(Fraction(0) for _ in range(3))
    ev = kostant_identity_at(pair, zero, "full", norm)
    assert not ev.passed
    assert ev.note == "both sides vanished at the point"


def test_inner_identity_aiii():
    pair, norm = normalized("AIII:1,2")
    rep = kostant_identity_suite(pair, norm, "inner", seed=4, points=5)
    assert rep.passed


def test_outer_identity_ai3():
    pair, norm = normalized("AI:3")
    rep = kostant_identity_suite(pair, norm, "outer", seed=4, points=5)
    assert rep.passed


def test_variant_requires_matching_type():
    pair, norm = normalized("AI:3")
    with pytest.raises(ValueError):
        kostant_identity_at(pair, (1,) * pair.dim, "inner", norm)
    pair2, norm2 = normalized("AIII:1,2")
    with pytest.raises(ValueError):
        kostant_identity_at(pair2, (1,) * pair2.dim, "outer", norm2)


def test_det_ad_factor_aiii():
    pair, norm = normalized("AIII:1,2")
    rep = det_ad_factor_check(pair, norm, seed=4, points=3)
    assert rep.passed


def test_det_ad_homogeneity():
    # det(ad(2 xi)|odd) = 2^(dim odd) det(ad(xi)|odd)
    from poissonz.identities import _ad_on_odd_part, _dual_fixed_element

    pair, norm = normalized("AIII:1,2")
    rng = random.Random(3)
    xi0 = random_vector(rng, pair.n0, 9)
    x = _dual_fixed_element(pair, xi0)
    x2 = tuple(2 * c for c in x)
    d1 = _ad_on_odd_part(pair, x).det()
    d2 = _ad_on_odd_part(pair, x2).det()
    assert d2 == 2 ** pair.n1 * d1


def test_q_factor_onto_pair_constant():
    pair, norm = normalized("AI:3")
    rep = q_factor_check(pair, norm, seed=4, points=5)
    assert rep.passed
    assert any(c.name == "ratio-constant" for c in rep.checks)


def test_q_factor_ai4_proportional_to_pfaffian():
    pair, norm = normalized("AI:4")
    rep = q_factor_check(pair, norm, seed=4, points=5)
    assert rep.passed
    names = [c.name for c in rep.checks]
    assert "ratio-proportional-to-pfaffian" in names
    assert "ratio-not-constant" in names


def test_sl2_is_inner_variant():
    pair, norm = normalized("AI:2")
    rep = kostant_identity_suite(pair, norm, "inner", seed=9, points=4)
    assert rep.passed
