import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellwk import domain as dom
from ellwk import tensors as ten
from ellwk import weyl
from ellwk.errors import NotOnSection, NotTangent


@pytest.fixture
def samples(a1):
    rng = np.random.default_rng(0)
    out = []
    for s in range(20):
        x = dom.sample_D2(a1, s)
        out.append((x, ten.random_tangent(a1, x, rng), ten.random_tangent(a1, x, rng)))
    return out


def test_dual_form_hyperbolic_entry(a1):
    e = np.eye(5)
    # the dual of a hyperbolic pair is again a unit pairing
    assert ten.eval_I_D(a1, None, e[a1.ia], e[a1.ias]) == 1
    assert ten.eval_I_D(a1, None, e[0], e[0]) == pytest.approx(-0.5)


def test_dual_form_matches_exact_inverse(a1):
    from ellwk._linalg import frac_inv, to_complex
    h = to_complex(frac_inv(a1.space.gram)).real
    assert np.array_equal(h, a1.space.dual_gram_float)


def test_symmetric(a1, samples):
    for x, v, w in samples:
        assert ten.eval_I_D(a1, x, v, w) == pytest.approx(ten.eval_I_D(a1, x, w, v), abs=1e-14)


def test_fiber_direction_in_radical(a1, samples):
    for x, _, w in samples:
        assert abs(ten.eval_I_D2(a1, x, x.coords, w)) < 1e-12


def test_not_tangent(a1):
    x = dom.sample_D2(a1, 0)
    v = np.conj(a1.space.dual_gram_float @ x.coords)
    with pytest.raises(NotTangent):
        ten.eval_I_D2(a1, x, v, v)


def test_tangent_basis(a1):
    x = dom.sample_D2(a1, 3)
    b = ten.tangent_basis(a1, x)
    assert b.shape == (5, 4)
    for col in b.T:
        assert ten.tangency_residual(a1, x, col) < 1e-13
    assert np.linalg.matrix_rank(b) == 4


def test_radical_rank_one(a1, a2):
    for sys in (a1, a2):
        for s in range(10):
            rep = ten.radical_report(sys, dom.sample_D2(sys, s))
            assert rep["radical_dim"] == 1 and rep["fiber_residual"] < 1e-10


def test_equivariance_reflections(a1, samples):
    rng = random.Random(1)
    for _ in range(10):
        g = weyl.random_word(a1, rng, rng.randint(1, 4))
        for tid in ("I_D", "I_D2"):
            assert ten.check_equivariance(a1, tid, g, samples) < 1e-10
    g = weyl.reflect(a1, a1.simple_roots[0])
    assert ten.check_equivariance(a1, "I_D", g, samples) < 1e-10


def test_equivariance_rho(a1, samples):
    assert ten.check_equivariance(a1, "I_D2", weyl.rho(a1, -1, 0.7 + 0.2j), samples) < 1e-10


def test_psi_weights(a1, samples):
    # pullback by psi(2) scales the form by 4, the dual tensor by 1/4
    x, v, w = samples[0]
    y = dom.scale(2, x)
    assert ten.eval_I_D(a1, y, 2 * v, 2 * w) == pytest.approx(4 * ten.eval_I_D(a1, x, v, w))
    rng = np.random.default_rng(2)
    cot = [(x, ten.random_cotangent(a1, x, rng), ten.random_cotangent(a1, x, rng))
           for x, _, _ in samples]
    for alpha in (2, 0.3 - 1.1j):
        assert ten.check_equivariance(a1, "I_D", alpha, samples) < 1e-10
        assert ten.check_equivariance(a1, "I_D2*", alpha, cot) < 1e-10
    assert ten.check_equivariance(a1, "I_D2*", weyl.rho(a1, -1, 1.5), cot) < 1e-10


def test_unknown_tensor(a1, samples):
    with pytest.raises(ValueError):
        ten.check_equivariance(a1, "I_X", 2.0, samples)


def _a_section_pair(sys, seed):
    rng = np.random.default_rng(seed)
    xa = dom.normalize(dom.A_SECTION, dom.sample_D2(sys, seed))
    v = rng.normal(size=sys.n) + 1j * rng.normal(size=sys.n)
    w = rng.normal(size=sys.n) + 1j * rng.normal(size=sys.n)
    v[sys.ia] = w[sys.ia] = 0
    return xa, v, w


def test_induced_form_agrees_with_lift(a1):
    for s in range(50):
        xa, v, w = _a_section_pair(a1, s)
        lv, lw = ten.lift_to_D2a(a1, xa, v), ten.lift_to_D2a(a1, xa, w)
        assert abs(ten.eval_I_D2(a1, xa, lv, lw) - ten.eval_I_D1a(a1, xa, v, w)) < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([(0, 0), (1, 0), (-1, 2)]))
def test_induced_form_w_invariant(seed, shift):
    from ellwk.rootsys import build_system
    sys = build_system("A", 1)
    xa, v, w = _a_section_pair(sys, seed)
    g = weyl.reflect(sys, sys.root((1,), *shift))
    m = dom.covector_map(g)
    got = ten.eval_I_D1a(sys, dom.act(g, xa), m @ v, m @ w)
    assert abs(got - ten.eval_I_D1a(sys, xa, v, w)) < 1e-10


def test_induced_form_radical(a1):
    xa, _, w = _a_section_pair(a1, 0)
    a_dir = np.zeros(5, dtype=complex)
    a_dir[a1.ias] = 1  # the class of a, as a covector
    assert ten.eval_I_D1a(a1, xa, a_dir, w) == 0


def test_induced_form_requires_section(a1):
    x = dom.scale(2, dom.normalize(dom.A_SECTION, dom.sample_D2(a1, 0)))
    with pytest.raises(NotOnSection):
        ten.eval_I_D1a(a1, x, np.zeros(5), np.zeros(5))
    xa, v, w = _a_section_pair(a1, 1)
    v[a1.ia] = 1
    with pytest.raises(NotTangent):
        ten.eval_I_D1a(a1, xa, v, w)
