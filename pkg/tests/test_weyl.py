import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellwk import weyl
from ellwk._kernels import BACKEND, _fallback
from ellwk._linalg import exact_equal, frac_array, frac_eye
from ellwk.errors import BudgetExhausted, FlagViolation, IsotropicVector
from ellwk.rootsys import build_system


def vec(*xs):
    return frac_array(list(xs))


def tensor(u, v):
    return weyl.ESTensor(((u, v),))


# reflections -----------------------------------------------------------------------

def test_reflection_hand_values(a1):
    al = a1.simple_roots[0]
    w = weyl.reflect(a1, al)
    assert exact_equal(w.apply(al), vec(-1, 0, 0, 0, 0))
    assert exact_equal(w.apply(a1.a), vec(*a1.a))
    assert exact_equal(w.apply(a1.a_star), vec(*a1.a_star))
    assert exact_equal(w.matrix.dot(w.matrix), frac_eye(5))


def test_affine_reflection_moves_dual_vector(a1):
    beta = a1.root((1,), 1, 0)
    img = weyl.reflect(a1, beta).apply(a1.a_star)
    # a* + (alpha + a)
    assert exact_equal(img, vec(1, 1, 0, 1, 0))


def test_isotropic_rejected(a1):
    with pytest.raises(IsotropicVector):
        weyl.reflect(a1, a1.a)


def test_word_labels(a1):
    g = weyl.words_from(a1, [a1.root((1,), 1, -1), a1.root((1,))])
    assert g.word == ("[1+1a-1b]", "[1+0a+0b]")


roots_a2 = st.tuples(st.integers(0, 5), st.integers(-3, 3), st.integers(-3, 3))


@settings(max_examples=60, deadline=None)
@given(st.lists(roots_a2, min_size=1, max_size=6), roots_a2)
def test_group_identities_property(word, target):
    sys = build_system("A", 2)
    fr = sys.finite_roots
    refl = [weyl.reflect(sys, sys.root(fr[i], n, m)) for i, n, m in word]
    g = weyl.identity(sys)
    for r in refl:
        g = g @ r
    assert weyl.orthogonality_residual(sys, g) == 0
    assert weyl.preserves_flag(sys, g)
    beta = sys.root(fr[target[0]], target[1], target[2])
    lhs = weyl.reflect(sys, tuple(int(v) for v in g.apply(beta)))
    rhs = g @ weyl.reflect(sys, beta) @ weyl.inverse(sys, g)
    assert lhs == rhs


# Eichler-Siegel ---------------------------------------------------------------------

def test_es_zero_is_identity(a1):
    assert exact_equal(weyl.es(a1, weyl.ESTensor.zero(5)).matrix, frac_eye(5))


def test_es_a_b(a1):
    m = weyl.es(a1, tensor(a1.a, a1.b)).matrix
    assert exact_equal(m.dot(vec(*a1.b_star)), vec(0, -1, 0, 0, 1))
    for i in range(a1.rank_F):
        e = vec(*a1.unit(i))
        assert exact_equal(m.dot(e), e)


def test_es_wedge(a1):
    m = weyl.es(a1, weyl.wedge_ab(a1)).matrix
    assert exact_equal(m.dot(vec(*a1.a_star)), vec(0, 0, 1, 1, 0))
    assert exact_equal(m.dot(vec(*a1.b_star)), vec(0, -1, 0, 0, 1))


def test_es_product_examples(a1):
    t = tensor(a1.a, a1.b)
    assert weyl.es_product(a1, t, weyl.ESTensor.zero(5)) == t
    assert weyl.es_product(a1, t, tensor(a1.b, a1.a)) == t + tensor(a1.b, a1.a)
    t1, t2 = tensor(a1.a_star, a1.a), tensor(a1.a, a1.a_star)
    assert weyl.es_product(a1, t1, t2) == t1 + t2


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 3), st.integers(1, 3))
def test_es_semigroup_property(seed, k1, k2):
    rng = random.Random(seed)
    sys = build_system("A", 1 + seed % 2)
    t1, t2 = weyl.random_tensor(sys, rng, k1), weyl.random_tensor(sys, rng, k2)
    lhs = weyl.es(sys, weyl.es_product(sys, t1, t2))
    assert lhs == weyl.es(sys, t1) @ weyl.es(sys, t2)


def test_tensor_hash_is_canonical(a1):
    t = tensor(a1.a, a1.b)
    assert hash(t + weyl.ESTensor.zero(5)) == hash(t)
    assert t.scaled(2) == t + t


# projection and the kernel ------------------------------------------------------------

def test_pi2_restrict(a1):
    _, flag = weyl.pi2_restrict(a1, weyl.reflect(a1, a1.simple_roots[0]))
    assert not flag
    r, flag = weyl.pi2_restrict(a1, weyl.es(a1, weyl.wedge_ab(a1, Fraction(3, 2))))
    assert flag and exact_equal(r, frac_eye(a1.rank_F))
    assert weyl.pi2_restrict(a1, weyl.identity(a1))[1]


def test_pi2_flag_violation(a1):
    m = frac_eye(5)
    m[a1.ias, 0] = Fraction(1)  # alpha picks up an a* component, leaving F
    with pytest.raises(FlagViolation):
        weyl.pi2_restrict(a1, weyl.OrthogonalElement(m))


def test_b_translation_closed_form(a1):
    # w_{alpha+b} w_alpha = es(b(x)mu - mu(x)b + I(mu,mu)/2 b(x)b) with mu = alpha
    al = a1.simple_roots[0]
    t = (tensor(a1.b, al) + tensor(al, a1.b).scaled(-1)
         + tensor(a1.b, a1.b).scaled(a1.pair(al, al) / 2))
    assert weyl.es(a1, t) == weyl.translation(a1, al, a1.b)


def test_commutator_in_kernel(a1):
    al = a1.simple_roots[0]
    k = weyl.commutator(a1, weyl.translation(a1, al, a1.a), weyl.translation(a1, al, a1.b))
    assert weyl.pi2_restrict(a1, k)[1]
    c = weyl.kernel_coefficient(a1, k)
    assert c != 0 and weyl.es(a1, weyl.wedge_ab(a1, c)) == k


def test_g0_a1():
    res = weyl.compute_g0(build_system("A", 1), 8)
    assert res.coefficient == -1 and res.multiple == 1
    assert res.witness_word == ("[1-1a-1b]", "[1-1a+0b]", "[1+0a+0b]", "[1+0a-1b]")
    # the witness reproduces the generator exactly
    a1 = build_system("A", 1)
    g = weyl.words_from(a1, [weyl_root(a1, w) for w in res.witness_word])
    assert weyl.kernel_coefficient(a1, g) == res.coefficient


def weyl_root(sys, label):
    fin, rest = label[1:-1].split("a")
    n_part = fin[sys.l:]
    return sys.root(tuple(int(c) for c in fin[: sys.l]), int(n_part), int(rest[:-1]))


@pytest.mark.parametrize("budget", [2, 3])
def test_g0_budget_exhausted(a1, budget):
    with pytest.raises(BudgetExhausted):
        weyl.compute_g0(a1, budget)


@pytest.mark.parametrize("scale,expected", [(1, Fraction(-1)), (2, Fraction(-1, 2)),
                                            (Fraction(1, 2), Fraction(-2))])
def test_g0_gram_scale(scale, expected):
    assert weyl.compute_g0(build_system("A", 1, gram_scale=scale), 6).coefficient == expected


def test_g0_a2():
    assert weyl.compute_g0(build_system("A", 2), 6).coefficient == -1


def test_g0_as_dict(a1):
    d = weyl.compute_g0(a1, 4).as_dict()
    assert d["coefficient"] == "-1/1" and d["multiple"] == "1/1"


# rho -------------------------------------------------------------------------------------

def test_rho_examples(a1):
    assert weyl.rho_exact(a1, -1, 0) == weyl.identity(a1)
    assert weyl.rho_exact(a1, -1, 1) @ weyl.rho_exact(a1, -1, -1) == weyl.identity(a1)
    for c in (Fraction(-1), Fraction(3, 2)):
        t = Fraction(2, 7)
        img = weyl.rho_exact(a1, c, t).apply(a1.b_star)
        assert exact_equal(img, vec(0, -t * c, 0, 0, 1))


@settings(max_examples=40, deadline=None)
@given(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_rho_one_parameter_group(s, t):
    a1 = build_system("A", 1)
    lhs = (weyl.rho(a1, -1, s) @ weyl.rho(a1, -1, t)).matrix
    assert np.max(np.abs(lhs - weyl.rho(a1, -1, s + t).matrix)) < 1e-12


def test_rho_in_kernel_preserves_form(a1):
    r = weyl.rho(a1, -1, 0.3 + 0.4j)
    assert weyl.orthogonality_residual(a1, r) < 1e-14
    assert weyl.preserves_flag(a1, r)


# kernels ---------------------------------------------------------------------------------

def _gens(sys, shift=1):
    from ellwk._linalg import to_complex
    return np.array([to_complex(weyl.reflect(sys, r).matrix).real.astype(np.int64)
                     for r in weyl.generating_roots(sys, shift)])


@pytest.mark.skipif(BACKEND != "cython", reason="compiled core not built")
@pytest.mark.parametrize("base,l,depth", [("A", 1, 5), ("A", 2, 4)])
def test_backends_agree(base, l, depth):
    from ellwk._kernels import _core
    gens = _gens(build_system(base, l))
    fast = _core.bfs_ball(gens, depth)
    slow = _fallback.bfs_ball(gens, depth)
    for x, y in zip(fast, slow):
        assert np.array_equal(np.asarray(x), np.asarray(y))


def test_fallback_ball_contract(a1):
    gens = _gens(a1)
    elems, parent, gen, length = _fallback.bfs_ball(gens, 3)
    assert np.array_equal(elems[0], np.eye(5, dtype=np.int64))
    for i in range(1, len(elems)):
        assert np.array_equal(elems[parent[i]] @ gens[gen[i]], elems[i])
        assert length[i] == length[parent[i]] + 1
    assert len({e.tobytes() for e in elems}) == len(elems)


def test_pure_python_backend_selected_by_env():
    import os
    import subprocess
    import sys
    code = ("from ellwk import _kernels, weyl; from ellwk.rootsys import build_system;"
            "r = weyl.compute_g0(build_system('A', 1), 8);"
            "print(_kernels.BACKEND, r.coefficient, r.backend)")
    env = dict(os.environ, ELLWK_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)
    assert out.stdout.split() == ["python", "-1", "python"]
