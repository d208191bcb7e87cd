import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellwk import domain as dom
from ellwk import weyl
from ellwk.errors import NotInCStar, NotInvertible, OnRemovedDivisor
from ellwk.rootsys import build_system


def boundary_point(sys):
    # z_alpha = 0, u_a = 1, u_b = i, s_a = -i, s_b = 1
    return dom.point(sys, [0, 1, 1j, -1j, 1])


def test_boundary_point_classification(a1):
    cl = dom.classify(a1, boundary_point(a1))
    assert cl["in_D"] and cl["in_D2"]
    assert abs(cl["quadric_residual"]) == 0
    # <alpha, x> = 0 puts it on a reflection hyperplane
    assert not cl["in_D2_open"]


def test_quadric_hand_value(a1):
    x = dom.point(a1, [0.5, 1, 1j, 0, 0])
    # -z^2/2 with z = 1/2
    assert dom.quadric(a1, x) == pytest.approx(-0.125)


def test_removed_divisor(a1):
    x = dom.point(a1, [0, 0, 1j, 0, 1])
    assert not dom.classify(a1, x)["in_D"]


def test_wrong_half_plane(a1):
    x = dom.point(a1, [0, 1, -1j, 1j, 1])
    cl = dom.classify(a1, x)
    assert not cl["in_D"] and not cl["in_D2"]


def test_point_shape(a1):
    with pytest.raises(ValueError):
        dom.point(a1, [1, 2, 3])


def test_sampling_deterministic(a1):
    assert np.array_equal(dom.sample_D2(a1, 9).coords, dom.sample_D2(a1, 9).coords)
    assert not np.array_equal(dom.sample_D2(a1, 9).coords, dom.sample_D2(a1, 10).coords)


@pytest.mark.parametrize("base,l", [("A", 1), ("A", 2), ("D", 4)])
def test_samples_on_quadric(base, l):
    sys = build_system(base, l)
    for seed in range(100):
        x = dom.sample_D2(sys, seed)
        assert abs(dom.quadric(sys, x)) < 1e-12
        assert dom.classify(sys, x)["in_D2"]


def test_sample_fixed_tau(a1):
    assert dom.sample_D2(a1, 3, tau=2j).tau == pytest.approx(2j)


def test_act_identity(a1):
    x = dom.sample_D2(a1, 1)
    assert np.array_equal(dom.act(weyl.identity(a1), x).coords, x.coords)


def test_act_reflection(a1):
    x = dom.sample_D2(a1, 1)
    y = dom.act(weyl.reflect(a1, a1.simple_roots[0]), x)
    assert y.coords[0] == pytest.approx(-x.coords[0])
    assert y.pair_a == x.pair_a and y.pair_b == x.pair_b


def test_act_rho_shift(a1):
    # s_b picks up t c u_a, s_a picks up -t c u_b, radical values fixed
    x = dom.sample_D2(a1, 2)
    c, t = -1, 0.4 - 0.3j
    y = dom.act(weyl.rho(a1, c, t), x)
    assert y.pair_a == pytest.approx(x.pair_a) and y.pair_b == pytest.approx(x.pair_b)
    assert y.coords[a1.ibs] == pytest.approx(x.coords[a1.ibs] + t * c * x.pair_a)
    assert y.coords[a1.ias] == pytest.approx(x.coords[a1.ias] - t * c * x.pair_b)


def test_act_singular_matrix(a1):
    g = weyl.OrthogonalElement(np.zeros((5, 5), dtype=complex))
    with pytest.raises(NotInvertible):
        dom.act(g, dom.sample_D2(a1, 1))


def test_scale(a1):
    x = dom.sample_D2(a1, 4)
    assert np.array_equal(dom.scale(1, x).coords, x.coords)
    y = dom.scale(2 - 1j, x)
    assert y.tau == pytest.approx(x.tau)
    assert dom.quadric(a1, y) == pytest.approx((2 - 1j) ** 2 * dom.quadric(a1, x), abs=1e-13)
    with pytest.raises(NotInCStar):
        dom.scale(0, x)


def test_normalize(a1):
    x = dom.sample_D2(a1, 5)
    xa = dom.normalize(dom.A_SECTION, x)
    assert xa.pair_a == pytest.approx(1)
    assert np.allclose(dom.normalize(dom.A_SECTION, xa).coords, xa.coords, atol=1e-15)
    xb = dom.normalize(dom.B_SECTION, x)
    assert xb.pair_b == pytest.approx(1) and xb.pair_a == pytest.approx(1 / x.tau)


def test_normalize_on_divisor(a1):
    x = dom.point(a1, [0, 0, 1j, 0, 1])
    with pytest.raises(OnRemovedDivisor):
        dom.normalize(dom.A_SECTION, x)
    with pytest.raises(ValueError):
        dom.SectionSpec(0, 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 5),
       st.complex_numbers(min_magnitude=0.2, max_magnitude=5, allow_nan=False, allow_infinity=False))
def test_actions_commute_and_preserve(seed, length, alpha):
    sys = build_system("A", 2)
    x = dom.sample_D2(sys, seed)
    g = weyl.random_word(sys, random.Random(seed), length)
    lhs = dom.act(g, dom.scale(alpha, x)).coords
    rhs = dom.scale(alpha, dom.act(g, x)).coords
    assert np.max(np.abs(lhs - rhs)) < 1e-12 * max(1, np.max(np.abs(lhs)))
    assert dom.classify(sys, dom.act(g, x))["in_D2"]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_weight_transfer(a1, k):
    x = dom.sample_D2(a1, 6)
    F = lambda y: y.pair_a ** (k - 1) * y.pair_b  # noqa: E731  homogeneous of degree k
    f, g = dom.SectionSpec(1, 2), dom.SectionSpec(0.5j, -1)
    assert dom.weight_transfer_residual(F, k, f, g, x) < 1e-12
