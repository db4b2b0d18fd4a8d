import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poissonz.polyring import (
    Poly,
    bihom_component,
    bihom_decompose,
    evaluate_and_differential,
    jacobian_at,
    restrict,
)


def sl2_invariant():
    # h^2 + 4ef in coordinates (h, e, f)
    return Poly(3, {(2, 0, 0): 1, (0, 1, 1): 4})


def random_poly(rng, n=3, deg=3, terms=5):
    p = Poly.zero(n)
    for _ in range(terms):
        e = [0] * n
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(n)] += 1
        p = p + Poly(n, {tuple(e): rng.randint(-5, 5)})
    return p


def test_partial_derivative():
    f = sl2_invariant()
    assert f.partial(0) == Poly(3, {(1, 0, 0): 2})
    assert f.partial(1) == Poly(3, {(0, 0, 1): 4})


def test_product_and_bidegree():
    h = Poly.variable(3, 0)
    ef = Poly(3, {(0, 1, 1): 1})
    p = h * ef
    assert p == Poly(3, {(1, 1, 1): 1})
    assert p.g0_degree(1) == 1 and p.g1_degree(1) == 2


def test_high_derivative_vanishes():
    f = sl2_invariant()
    g = f.partial(0).partial(0).partial(0)
    assert g.is_zero()


def test_bihom_decompose_sl2():
    f = sl2_invariant()
    comps = bihom_decompose(f, 1)
    assert set(comps) == {(2, 0), (0, 2)}
    assert comps[(2, 0)] == Poly(3, {(2, 0, 0): 1})
    assert comps[(0, 2)] == Poly(3, {(0, 1, 1): 4})
    assert f.g1_degree(1) == 2


def test_bihom_components_sum_to_input():
    rng = random.Random(1)
    for _ in range(10):
        f = random_poly(rng, n=4)
        comps = bihom_decompose(f, 2)
        total = Poly.zero(4)
        for c in comps.values():
            total = total + c
        assert total == f


def test_pure_even_polynomial_single_component():
    f = Poly(4, {(2, 1, 0, 0): 3})
    comps = bihom_decompose(f, 2)
    assert list(comps) == [(3, 0)]


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=6, max_size=6), st.integers(1, 3))
def test_euler_identity(coords, deg):
    # for homogeneous F of degree d: sum_i x_i dF/dx_i = d F
    rng = random.Random(sum(coords) + deg)
    f = Poly.zero(3)
    for _ in range(4):
        e = [0] * 3
        for _ in range(deg):
            e[rng.randrange(3)] += 1
        f = f + Poly(3, {tuple(e): rng.randint(-5, 5)})
    point = tuple(Fraction(c) for c in coords[:3])
    value, grad = evaluate_and_differential(f, point)
    assert sum(p * g for p, g in zip(point, grad)) == deg * value


def test_evaluate_and_differential_example():
    f = sl2_invariant()  # coordinates (h, e, f)
    value, grad = evaluate_and_differential(f, (0, 1, 0))
    assert value == 0
    assert grad == (0, 0, 4)


def test_constant_gradient_zero():
    f = Poly.const(3, 7)
    value, grad = evaluate_and_differential(f, (1, 2, 3))
    assert value == 7 and grad == (0, 0, 0)


def test_restrict_modes():
    f = sl2_invariant()
    assert restrict(f, 1, "r0") == Poly(1, {(2,): 1})
    assert restrict(f, 1, "r1") == Poly(2, {(1, 1): 4})
    sliced = restrict(Poly(3, {(0, 1, 1): 1}), 1, "affine", (2, 5))
    assert sliced == Poly.const(1, 10)


def test_restrict_is_ring_homomorphism():
    rng = random.Random(9)
    for mode, n0 in (("r0", 2), ("r1", 2)):
        for _ in range(8):
            f, g = random_poly(rng, n=4), random_poly(rng, n=4)
            assert restrict(f + g, n0, mode) == restrict(f, n0, mode) + restrict(
                g, n0, mode
            )
            assert restrict(f * g, n0, mode) == restrict(f, n0, mode) * restrict(
                g, n0, mode
            )


def test_phi_s_scaling():
    f = sl2_invariant()
    s2 = f.phi_s(1, 2)
    assert s2 == Poly(3, {(2, 0, 0): 1, (0, 1, 1): 16})
    assert f.phi_s(1, 1) == f
    with pytest.raises(ValueError):
        f.phi_s(1, 0)


def test_sigma_image_parity():
    f = sl2_invariant()
    assert f.sigma_image(1) == f  # both monomials have even odd-part degree
    g = Poly(3, {(1, 1, 0): 1})
    assert g.sigma_image(1) == -g


def test_embed_and_text():
    f = Poly(2, {(1, 1): Fraction(1, 2)})
    g = f.embed(4)
    assert g.n == 4 and g.terms == {(1, 1, 0, 0): Fraction(1, 2)}
    assert f.text(["x", "y"]) == "1/2*x*y"
    assert Poly.zero(2).text() == "0"


def test_canonical_text_ordering():
    f = Poly(2, {(2, 0): 1, (0, 1): -3})
    assert f.text(["a", "b"]) == "-3*b + a^2"


def test_jacobian_at():
    f = Poly(2, {(1, 0): 1})
    g = Poly(2, {(0, 2): 1})
    rows = jacobian_at([f, g], (2, 3))
    assert rows == [(1, 0), (0, 6)]
