import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from ellwk import domain as dom
from ellwk import invariants as inv
from ellwk.errors import NonConvergentTruncation
from ellwk.rootsys import build_system

C = Fraction(-1)  # g0 coefficient for A1 and A2 at unit Gram scale


def jacobi_theta(m, j, tau, z, R=60):
    """Classical theta_{m,j}(tau, z) = sum over r = j mod 2m of q^{r^2/4m} zeta^r."""
    return sum(cmath.exp(2j * math.pi * (r * r / (4 * m) * tau + r * z))
               for r in range(-R, R + 1) if (r - j) % (2 * m) == 0)


def class_count(m):
    """|{j mod 2m}/(j ~ -j)|."""
    return len({min(j % (2 * m), -j % (2 * m)) for j in range(2 * m)})


@pytest.fixture(scope="module")
def points(a1_mod):
    return [dom.sample_D2(a1_mod, s, tau=t) for s, t in enumerate((2j, 1j, 0.3 + 1j))]


@pytest.fixture(scope="module")
def a1_mod():
    return build_system("A", 1)


def test_radical_linear(a1, points):
    x = points[0]
    assert inv.evaluate(inv.radical_linear(1, 0), x) == x.pair_a
    f = inv.product(inv.radical_linear(1, 0), inv.radical_inverse(1, 0))
    assert f.bidegree == (0, 0) and f(x) == 1


def test_radical_linear_bidegree_exact(a1, points):
    r = inv.check_bidegree(inv.radical_linear(1, 0), a1, points[0], C)
    assert r.r_W == 0 and r.r_rho == 0
    assert r.r_psi < 1e-15


def test_bidegree_additivity(a1):
    th = inv.theta_orbit(a1, (0,), 1, C, N=10)
    assert inv.multiply(th, th).bidegree == (0, 2)
    assert inv.multiply(inv.radical_linear(1, 0), th).bidegree == (-1, 1)


def test_theta_rejects_bad_input(a1):
    with pytest.raises(ValueError):
        inv.theta_orbit(a1, (0,), 0, C)
    with pytest.raises(ValueError):
        inv.theta_orbit(a1, (0, 0), 1, C)


@pytest.mark.parametrize("m", [1, 2])
def test_theta_residuals(a1, points, m):
    f = inv.theta_orbit(a1, (0,), m, C, N=25)
    for x in points:
        r = inv.check_bidegree(f, a1, x, C)
        assert r.r_psi < 1e-12 and r.r_rho < 1e-10 and r.r_W < 1e-6


def test_theta_self_convergence(a1):
    x = dom.sample_D2(a1, 0, tau=2j)
    v20 = inv.evaluate(inv.theta_orbit(a1, (0,), 1, C, N=20), x)
    v30 = inv.evaluate(inv.theta_orbit(a1, (0,), 1, C, N=30), x)
    assert np.isfinite(v20) and abs(v20 - v30) < 1e-9


def test_truncation_error_nonincreasing(a1, points):
    def r_w(N):
        f = inv.theta_orbit(a1, (0,), 1, C, N=N)
        return max(inv.check_bidegree(f, a1, x, C).r_W for x in points)
    errs = [r_w(N) for N in (3, 5, 10, 15, 25)]
    assert all(a >= b for a, b in zip(errs, errs[1:]))
    assert errs[0] > errs[-1]


@pytest.mark.parametrize("sign", [-1, 1])
def test_seed_sign_sweep(a1, points, sign):
    from ellwk.weyl import rho
    worst = 0.0
    for x in points:
        for t in (0.13, -0.41, 0.77):
            got = inv.seed(a1, (0,), 1, C, dom.act(rho(a1, C, t), x), sign=sign)
            want = cmath.exp(-2j * math.pi * t) * inv.seed(a1, (0,), 1, C, x, sign=sign)
            worst = max(worst, abs(got - want) / abs(want))
    if sign == inv.SEED_SIGN:
        assert worst < 1e-12
    else:
        assert worst > 1e-1


def test_wrong_sign_orbit_diverges(a1, points, monkeypatch):
    orig = inv.seed_kappa
    monkeypatch.setattr(inv, "seed_kappa", lambda s, m, c, sign=1: orig(s, m, c, -inv.SEED_SIGN))
    with pytest.raises(NonConvergentTruncation):
        inv.evaluate(inv.theta_orbit(a1, (0,), 1, C, N=20), points[0])


def test_seed_rho_weight(a1):
    x = dom.sample_D2(a1, 4)
    from ellwk.weyl import rho
    t = 0.37
    got = inv.seed(a1, (0,), 2, C, dom.act(rho(a1, C, t), x))
    want = cmath.exp(-2j * math.pi * 2 * t) * inv.seed(a1, (0,), 2, C, x)
    assert abs(got - want) < 1e-13


def test_weyl_orbit(a1, a2):
    om = inv.fundamental_weights(a1)[0]
    assert om == (Fraction(-1, 2),)
    assert inv.weyl_orbit(a1, om) == [(Fraction(-1, 2),), (Fraction(1, 2),)]
    assert len(inv.weyl_orbit(a2, inv.fundamental_weights(a2)[0])) == 3
    assert len(inv.weyl_orbit(a2, (1, 1))) == 6  # a root


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_dimension_matches_class_count(a1, m):
    rep = inv.invariant_space_dim(a1, m, C)
    assert rep.rank == class_count(m) == m + 1
    assert rep.determinate and rep.gap_ratio >= 10


def test_dimension_m0(a1):
    assert inv.invariant_space_dim(a1, 0, C).rank == 1


@pytest.mark.parametrize("m", [1, 2, 3])
def test_span_equals_classical_thetas(a1, m):
    tau = 0.1 + 1.2j
    pts = inv.section_points(a1, 3 * (m + 1), tau, 0.3 - 0.2j, 11)
    ours = np.array([[inv.evaluate(inv.theta_orbit(a1, w, m, C), x)
                      for w in inv.candidate_weights(a1, m)] for x in pts])
    classic = np.array([[jacobi_theta(m, j, tau, x.coords[0] / 2) + jacobi_theta(m, -j, tau, x.coords[0] / 2)
                         for j in range(m + 1)] for x in pts])
    both = np.hstack([ours / np.linalg.norm(ours, axis=0), classic / np.linalg.norm(classic, axis=0)])
    assert inv.numeric_rank(classic).rank == m + 1
    assert inv.numeric_rank(both).rank == m + 1


def test_a2_dimensions(a2):
    assert inv.invariant_space_dim(a2, 1, C).rank == 3
    assert inv.invariant_space_dim(a2, 2, C).rank == 6


def test_threads_do_not_change_rank(a1, monkeypatch):
    base = inv.invariant_space_dim(a1, 2, C)
    monkeypatch.setenv("ELLWK_THREADS", "3")
    threaded = inv.invariant_space_dim(a1, 2, C)
    assert threaded.singular_values == base.singular_values


def test_numeric_rank_gap():
    m = np.diag([1.0, 1e-3, 1e-13])
    rep = inv.numeric_rank(m)
    assert rep.rank == 2 and rep.determinate


def test_euler_eigenvalues(a1):
    unit = inv.product(inv.radical_linear(1, 0), inv.radical_inverse(1, 0))
    assert inv.euler_apply(unit, 5).eigenvalue == 0
    th3 = inv.multiply(inv.theta_orbit(a1, (0,), 1, C), inv.theta_orbit(a1, (0,), 2, C))
    assert inv.euler_apply(th3, 3).eigenvalue == 1
    with pytest.raises(ValueError):
        inv.euler_apply(th3, 0)


def test_euler_difference_estimate(a1):
    x = dom.sample_D2(a1, 2, tau=1.5j)
    rep = inv.euler_apply(inv.theta_orbit(a1, (0,), 1, C), 1, sys=a1, c=C, x=x)
    assert abs(rep.estimate - 1) < 1e-6 and not rep.flagged
