"""Bigraded W-invariant functions on D^2: radical-linear ones, theta orbit sums, products.

A function f has bidegree (k, m) when it is invariant under the lifted
reflections, picks up exp(-2 pi i m t) under rho(t), and satisfies
f(alpha x) = alpha^{-k} f(x).
"""

from __future__ import annotations

import cmath
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._config import thread_count
from ._linalg import frac_array, frac_inv
from .domain import SEED_SIGN, DomainPoint, act, point, scale
from .errors import NonConvergentTruncation
from .rootsys import EllipticRootSystem, cartan_matrix, enumerate_roots
from .weyl import reflect, rho

DEFAULT_N = 20
DIVERGENCE_RATIO = 1e6


@dataclass(frozen=True, eq=False)
class GradedInvariant:
    kind: str  # radical_linear | radical_inverse | theta_orbit | product
    bidegree: tuple[int, int]
    pq: tuple[complex, complex] = (0, 0)
    weight: tuple[Fraction, ...] = ()
    N: int = 0
    sys: EllipticRootSystem | None = field(default=None, repr=False)
    c: Fraction = Fraction(0)
    factors: tuple["GradedInvariant", ...] = ()

    @property
    def m(self) -> int:
        return self.bidegree[1]

    @property
    def k(self) -> int:
        return self.bidegree[0]

    def __call__(self, x: DomainPoint) -> complex:
        return evaluate(self, x)


def radical_linear(p: complex, q: complex) -> GradedInvariant:
    return GradedInvariant("radical_linear", (-1, 0), pq=(p, q))


def radical_inverse(p: complex, q: complex) -> GradedInvariant:
    return GradedInvariant("radical_inverse", (1, 0), pq=(p, q))


def theta_orbit(sys: EllipticRootSystem, weight: Sequence, m: int, c,
                N: int = DEFAULT_N) -> GradedInvariant:
    """Orbit sum of the seed exp(2 pi i [<lambda, y> + kappa <b*, y>]) with y = x / <a, x>.

    ``weight`` gives lambda in simple-root coordinates; ``c`` is the g0 coefficient.
    """
    if m < 1:
        raise ValueError("theta orbit sums need m >= 1")
    w = tuple(Fraction(v) for v in weight)
    if len(w) != sys.l:
        raise ValueError(f"weight needs {sys.l} entries")
    return GradedInvariant("theta_orbit", (0, m), weight=w, N=N, sys=sys, c=Fraction(c))


def multiply(f: GradedInvariant, g: GradedInvariant) -> GradedInvariant:
    factors = (f.factors if f.kind == "product" else (f,)) + \
              (g.factors if g.kind == "product" else (g,))
    return GradedInvariant("product", (f.k + g.k, f.m + g.m), factors=factors)


def product(*fs: GradedInvariant) -> GradedInvariant:
    out = fs[0]
    for g in fs[1:]:
        out = multiply(out, g)
    return out


# --- theta machinery -----------------------------------------------------------------

def fundamental_weights(sys: EllipticRootSystem) -> list[tuple[Fraction, ...]]:
    """omega_i in simple-root coordinates, normalized by I(omega_i, alpha_j) = delta_ij."""
    cinv = frac_inv(frac_array(cartan_matrix(sys.base_type, sys.l)))
    return [tuple(-cinv[i, j] for j in range(sys.l)) for i in range(sys.l)]


def weyl_orbit(sys: EllipticRootSystem, weight: Sequence[Fraction]) -> list[tuple[Fraction, ...]]:
    """Orbit of a finite-block vector under the finite Weyl group (exact)."""
    cartan = cartan_matrix(sys.base_type, sys.l)
    start = tuple(Fraction(v) for v in weight)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for i in range(sys.l):
            # I(v, alpha_i^vee) = sum_j v_j C_ji for the negative-definite form
            coef = sum(v[j] * int(cartan[j, i]) for j in range(sys.l))
            if coef:
                img = tuple(v[j] - (coef if j == i else 0) for j in range(sys.l))
                if img not in seen:
                    seen.add(img)
                    stack.append(img)
    return sorted(seen)


def _translation_covector_maps(sys: EllipticRootSystem, N: int) -> np.ndarray:
    """Stack of act-matrices for t_b(mu), mu in the root lattice with |coeffs| <= N.

    t_b(mu) = ES(b(x)mu - mu(x)b + I(mu, mu)/2 b(x)b) computed with the unscaled
    Gram; the matrix is independent of the Gram scale.  act uses t_b(mu)^{-T} = t_b(-mu)^T.
    """
    g = sys.base_gram.astype(float)
    n, l = sys.n, sys.l
    b = np.zeros(n)
    b[sys.ib] = 1.0
    mats = []
    for ks in itertools.product(range(-N, N + 1), repeat=l):
        mu = np.zeros(n)
        mu[:l] = -np.array(ks, dtype=float)  # t_b(mu)^{-1} = t_b(-mu)
        t = np.outer(b, mu) - np.outer(mu, b) + 0.5 * (mu @ g @ mu) * np.outer(b, b)
        mats.append((np.eye(n) - t @ g).T)
    return np.array(mats)


_TRANSLATION_CACHE: dict[tuple, np.ndarray] = {}


def _translations(sys: EllipticRootSystem, N: int) -> np.ndarray:
    key = (sys.base_type, sys.l, N)
    if key not in _TRANSLATION_CACHE:
        _TRANSLATION_CACHE[key] = _translation_covector_maps(sys, N)
    return _TRANSLATION_CACHE[key]


def seed_kappa(sys: EllipticRootSystem, m: int, c: Fraction, sign: int = SEED_SIGN) -> float:
    """Coefficient of <b*, y> in the seed so that rho(t) acts by exp(-2 pi i m t)."""
    return float(sign * m / (Fraction(c) * sys.gram_scale))


def seed(sys: EllipticRootSystem, weight: Sequence, m: int, c, x: DomainPoint,
         sign: int = SEED_SIGN) -> complex:
    y = x.coords / x.pair_a
    lam = np.array([float(v) for v in weight])
    kappa = seed_kappa(sys, m, Fraction(c), sign)
    return cmath.exp(2j * math.pi * (lam @ y[: sys.l] + kappa * y[sys.ibs]))


def theta_terms(inv: GradedInvariant, x: DomainPoint) -> np.ndarray:
    sys = inv.sys
    y = x.coords / x.pair_a
    ys = _translations(sys, inv.N) @ y  # (M, n)
    orbit = np.array([[float(v) for v in w] for w in weyl_orbit(sys, inv.weight)])
    kappa = seed_kappa(sys, inv.m, inv.c)
    phase = ys[:, : sys.l] @ orbit.T + kappa * ys[:, sys.ibs][:, None]
    with np.errstate(over="ignore", invalid="ignore"):
        return np.exp(2j * np.pi * phase).reshape(-1)


def _theta_eval(inv: GradedInvariant, x: DomainPoint) -> complex:
    terms = theta_terms(inv, x)
    if not np.all(np.isfinite(terms)):
        raise NonConvergentTruncation(f"N={inv.N}: overflow in orbit terms")
    # exactly rounded sums; independent of term order
    total = complex(math.fsum(terms.real), math.fsum(terms.imag))
    biggest = float(np.max(np.abs(terms)))
    if biggest > DIVERGENCE_RATIO * abs(total):
        raise NonConvergentTruncation(f"N={inv.N}: largest term {biggest:.3e}, sum {abs(total):.3e}")
    return total


def evaluate(inv: GradedInvariant, x: DomainPoint) -> complex:
    if inv.kind == "radical_linear":
        p, q = inv.pq
        return p * x.pair_a + q * x.pair_b
    if inv.kind == "radical_inverse":
        p, q = inv.pq
        return 1 / (p * x.pair_a + q * x.pair_b)
    if inv.kind == "theta_orbit":
        return _theta_eval(inv, x)
    if inv.kind == "product":
        out = complex(1)
        for f in inv.factors:
            out *= evaluate(f, x)
        return out
    raise ValueError(f"unknown invariant kind {inv.kind!r}")


# --- checks ------------------------------------------------------------------------

@dataclass(frozen=True)
class BidegreeResiduals:
    r_W: float
    r_rho: float
    r_psi: float

    def as_dict(self) -> dict:
        return {"r_W": self.r_W, "r_rho": self.r_rho, "r_psi": self.r_psi}


def check_bidegree(inv: GradedInvariant, sys: EllipticRootSystem, x: DomainPoint, c,
                   trials: int = 10, seed_: int = 0, radius: int = 2) -> BidegreeResiduals:
    rng = np.random.default_rng(seed_)
    k, m = inv.bidegree
    fx = evaluate(inv, x)
    roots = enumerate_roots(sys, radius)
    r_w = r_rho = r_psi = 0.0
    for _ in range(trials):
        beta = roots[int(rng.integers(len(roots)))]
        r_w = max(r_w, abs(evaluate(inv, act(reflect(sys, beta), x)) - fx))
        t = float(rng.uniform(-1, 1))
        want = cmath.exp(-2j * math.pi * m * t) * fx
        r_rho = max(r_rho, abs(evaluate(inv, act(rho(sys, c, t), x)) - want))
        alpha = complex(rng.uniform(0.5, 2.0), rng.uniform(-1, 1))
        r_psi = max(r_psi, abs(evaluate(inv, scale(alpha, x)) - alpha ** (-k) * fx))
    return BidegreeResiduals(r_w, r_rho, r_psi)


def candidate_weights(sys: EllipticRootSystem, m: int) -> list[tuple[Fraction, ...]]:
    """sum_i j_i omega_i with 0 <= j_i < m * det(Cartan): covers P / (m Q)."""
    omegas = fundamental_weights(sys)
    det = round(float(np.linalg.det(cartan_matrix(sys.base_type, sys.l).astype(float))))
    out = []
    for js in itertools.product(range(m * det), repeat=sys.l):
        out.append(tuple(sum((j * w[i] for j, w in zip(js, omegas)), Fraction(0))
                         for i in range(sys.l)))
    return out


def section_points(sys: EllipticRootSystem, count: int, tau: complex, s_b: complex,
                   seed_: int = 0) -> list[DomainPoint]:
    """Points of D^2 with <a, x> = 1, fixed tau and s_b, and real finite coordinates in [0, 1).

    Real finite coordinates keep every orbit term of unit size, so the
    evaluation matrix is not dominated by a few exponentially large columns.
    """
    rng = np.random.default_rng(seed_)
    h = sys.space.dual_gram_float
    pts = []
    for _ in range(count):
        c = np.zeros(sys.n, dtype=complex)
        c[: sys.l] = rng.random(sys.l)
        c[sys.ia], c[sys.ib], c[sys.ibs] = 1, tau, s_b
        c[sys.ias] = -(c @ h @ c) / (2 * (h @ c)[sys.ias])
        pts.append(point(sys, c))
    return pts


@dataclass(frozen=True)
class RankReport:
    rank: int
    gap_ratio: float
    singular_values: tuple[float, ...]
    determinate: bool

    def as_dict(self) -> dict:
        return {"rank": self.rank, "gap_ratio": self.gap_ratio,
                "singular_values": list(self.singular_values), "determinate": self.determinate}


def numeric_rank(matrix: np.ndarray, rel: float = 1e-6, min_gap: float = 10.0) -> RankReport:
    sv = np.linalg.svd(matrix, compute_uv=False)
    if sv[0] == 0:
        return RankReport(0, math.inf, tuple(sv.tolist()), True)
    rank = int(np.sum(sv > rel * sv[0]))
    gap = math.inf if rank == len(sv) else float(sv[rank - 1] / max(sv[rank], 1e-300))
    return RankReport(rank, gap, tuple(float(s) for s in sv), gap >= min_gap)


def invariant_space_dim(sys: EllipticRootSystem, m: int, c, basis_size: int | None = None,
                        samples: int | None = None, N: int = DEFAULT_N,
                        tau: complex = 0.1 + 1.2j, s_b: complex = 0.3 - 0.2j,
                        seed_: int = 7) -> RankReport:
    """Numeric rank of theta orbit sums over P / (mQ) candidates at fixed (tau, s_b)."""
    if m == 0:
        weights = [tuple(Fraction(0) for _ in range(sys.l))]
    else:
        weights = candidate_weights(sys, m)
    basis_size = basis_size or len(weights)
    samples = max(samples or 0, 2 * basis_size)
    pts = section_points(sys, samples, tau, s_b, seed_)
    if m == 0:
        mat = np.ones((len(pts), 1), dtype=complex)
    else:
        invs = [theta_orbit(sys, w, m, c, N) for w in weights]
        row = lambda x: [evaluate(f, x) for f in invs]  # noqa: E731
        workers = thread_count()
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                mat = np.array(list(pool.map(row, pts)))
        else:
            mat = np.array([row(x) for x in pts])
        # W-equivalent candidates differ by q-power factors; rescale columns
        mat = mat / np.linalg.norm(mat, axis=0)
    return numeric_rank(mat)


# --- Euler operator ------------------------------------------------------------------

@dataclass(frozen=True)
class EulerReport:
    eigenvalue: Fraction
    estimate: complex | None
    discrepancy: float | None
    flagged: bool


def euler_apply(inv: GradedInvariant, c1, *, sys: EllipticRootSystem | None = None,
                c=None, x: DomainPoint | None = None, h: float = 1e-3,
                tol: float = 1e-5) -> EulerReport:
    """Eigenvalue m / c1 and, given (sys, c, x), a five-point difference estimate.

    E f = (-1/c1)(1/2 pi i) d/dt f(rho(t) x) at t = 0.
    """
    c1 = Fraction(c1)
    if c1 <= 0:
        raise ValueError("c1 must be positive")
    eig = Fraction(inv.m) / c1
    if sys is None or x is None:
        return EulerReport(eig, None, None, False)

    def f_at(t: float) -> complex:
        return evaluate(inv, act(rho(sys, c, t), x))

    def deriv(step: float) -> complex:
        return (f_at(-2 * step) - 8 * f_at(-step) + 8 * f_at(step) - f_at(2 * step)) / (12 * step)

    d1, d2 = deriv(h), deriv(h / 2)
    d = d2 + (d2 - d1) / 15  # Richardson on the O(h^4) stencil
    fx = evaluate(inv, x)
    est = (-1 / float(c1)) * d / (2j * math.pi) / fx if fx != 0 else complex(0)
    disc = abs(est - float(eig)) / max(abs(float(eig)), 1.0)
    return EulerReport(eig, est, disc, disc > tol)
