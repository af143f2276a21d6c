import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsat_transfer.rootsolve import (
    BothZero,
    ConstantPolynomial,
    GammaPair,
    UniPoly,
    all_roots,
    find_root,
    gamma,
    p_ij,
    specialize_univariate,
    strip_common_zeros,
)
from qsat_transfer.transfer import MultiPoly, WPoly


def test_unipoly_strip_and_degree():
    assert UniPoly([1, 2, 0, 1e-20]).degree == 1
    assert UniPoly([0, 0]).is_zero()
    assert UniPoly([]).degree == -1


def test_find_root_known():
    q = UniPoly(np.poly([2, -1j, 3])[::-1])
    x = find_root(q)
    assert abs(q(x)) <= 1e-12 * q.norm1() * max(1, abs(x)) ** q.degree
    # smallest modulus first, then nonnegative imaginary part
    assert np.isclose(x, -1j)
    assert np.allclose(sorted(all_roots(q), key=abs), [-1j, 2, 3])


def test_constant_polynomial_raises():
    with pytest.raises(ConstantPolynomial):
        find_root(UniPoly([3.0]))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000), st.integers(1, 30))
def test_find_root_contract(seed, deg):
    rng = np.random.default_rng(seed)
    q = UniPoly(rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1))
    x = find_root(q)
    assert abs(q(x)) <= 1e-10 * q.norm1() * max(1.0, abs(x)) ** q.degree


def test_strip_common_zeros():
    p = UniPoly(np.poly([1, 2])[::-1])
    q = UniPoly(np.poly([1, 5])[::-1])
    g = strip_common_zeros(GammaPair(p, q, np.array([1, 0]), np.array([0, 1])))
    assert g.p.degree == 1 and g.q.degree == 1
    assert np.isclose(np.roots(g.p.coeffs[::-1])[0], 2)
    assert np.isclose(np.roots(g.q.coeffs[::-1])[0], 5)


def test_strip_zero_component_and_both_zero():
    p = UniPoly(np.poly([1, 2])[::-1])
    g = strip_common_zeros(GammaPair(p, UniPoly([]), np.array([1, 0]), np.array([0, 1])))
    assert g.p.degree == 0
    with pytest.raises(BothZero):
        strip_common_zeros(GammaPair(UniPoly([]), UniPoly([]), np.array([1, 0]), np.array([0, 1])))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_specialize_matches_direct_evaluation(seed):
    rng = np.random.default_rng(seed)
    b = int(rng.integers(1, 4))
    terms = {
        tuple(int(x) for x in rng.integers(0, 3, 2 * b)): complex(*rng.standard_normal(2)) for _ in range(6)
    }
    h = MultiPoly(b, terms)
    base = rng.standard_normal((b, 2)) + 1j * rng.standard_normal((b, 2))
    d = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    coord = int(rng.integers(1, b + 1))
    u = specialize_univariate(h, base, d, coord)
    for x in (0.3, -1.2 + 0.5j):
        pt = base.copy()
        pt[coord - 1] = base[coord - 1] + x * d
        assert np.isclose(u(x), h(pt))


def test_gamma_in_rotated_basis():
    # g(v1, v2) = v2 scaled by (x1 of v1): gamma along w = w1 + x w2 is (a1)*(w1 + x w2)
    b = 2
    x1 = MultiPoly.variable(b, 1)
    g = [WPoly(x1 * MultiPoly.variable(b, 3), x1 * MultiPoly.variable(b, 4))]
    w1, w2 = np.array([1, 1j]) / np.sqrt(2), np.array([1, -1j]) / np.sqrt(2)
    gm = gamma(1, [[2.0, 0.0]], g, w1, w2)
    for x in (0.0, 1.5, -2j):
        assert np.allclose(gm.vector(x), 2 * (w1 + x * w2))


def test_p_ij_collinearity_polynomial():
    b = 2
    g = [
        WPoly(MultiPoly.variable(b, 3), MultiPoly.variable(b, 4)),
        WPoly(MultiPoly.variable(b, 3), MultiPoly.variable(b, 3)),
    ]
    # gamma_1 = (1, x), gamma_2 = (1, 1): determinant 1 - x vanishes at x = 1
    P = p_ij(1, 2, [[1.0, 0.0]], g)
    assert P.degree == 1
    assert np.isclose(find_root(P), 1.0)
