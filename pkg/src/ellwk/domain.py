"""Points of D, D^2 and the open part, the actions phi and psi, and section normalization.

A point x is stored by its values on the fixed basis (finite block, a, b, a*, b*),
so ``coords[i] = <e_i, x>``.  The radical coordinates are u_a = <a, x>, u_b = <b, x>
and the dual ones s_a = <a*, x>, s_b = <b*, x>.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._linalg import frac_inv, to_complex
from .errors import NotInCStar, NotInvertible, OnRemovedDivisor, SamplingFailed
from .rootsys import EllipticRootSystem, enumerate_roots
from .weyl import OrthogonalElement

# Sign linking rho's shift of s_b to the character exp(-2 pi i m t); pinned by the
# sign-sweep test in tests/test_invariants.py and shared with the invariants module.
SEED_SIGN = -1

TOL_QUADRIC = 1e-10


@dataclass(frozen=True, eq=False)
class DomainPoint:
    coords: np.ndarray
    ia: int
    ib: int

    @property
    def pair_a(self) -> complex:
        return complex(self.coords[self.ia])

    @property
    def pair_b(self) -> complex:
        return complex(self.coords[self.ib])

    @property
    def tau(self) -> complex:
        return self.pair_b / self.pair_a

    def with_coords(self, coords) -> "DomainPoint":
        return DomainPoint(np.asarray(coords, dtype=complex), self.ia, self.ib)

    def as_json(self) -> list[list[float]]:
        return [[float(z.real), float(z.imag)] for z in self.coords]


def point(sys: EllipticRootSystem, coords) -> DomainPoint:
    c = np.asarray(coords, dtype=complex)
    if c.shape != (sys.n,):
        raise ValueError(f"expected {sys.n} coordinates, got shape {c.shape}")
    return DomainPoint(c, sys.ia, sys.ib)


@dataclass(frozen=True)
class SectionSpec:
    """Radical functional x -> p <a, x> + q <b, x>."""

    p: complex
    q: complex

    def __post_init__(self):
        if self.p == 0 and self.q == 0:
            raise ValueError("section functional must be nonzero")

    def value(self, x: DomainPoint) -> complex:
        return self.p * x.pair_a + self.q * x.pair_b


def quadric(sys: EllipticRootSystem, x: DomainPoint) -> complex:
    c = x.coords
    return complex(c @ sys.space.dual_gram_float @ c)


def classify(sys: EllipticRootSystem, x: DomainPoint, radius: int = 3,
             tol: float = TOL_QUADRIC) -> dict:
    ua, ub = x.pair_a, x.pair_b
    in_d = ua != 0 and ub != 0 and (ub / ua).imag > 0
    q = quadric(sys, x)
    scale = max(float(np.vdot(x.coords, x.coords).real), 1e-300)
    in_d2 = in_d and abs(q) < tol * scale
    open_ = False
    if in_d2:
        roots = np.array(enumerate_roots(sys, radius), dtype=float)
        pairings = roots @ x.coords
        open_ = bool(np.min(np.abs(pairings)) > tol * np.sqrt(scale))
    return {"in_D": bool(in_d), "in_D2": bool(in_d2), "in_D2_open": open_,
            "quadric_residual": q, "radius": radius}


def _inverse_matrix(g: OrthogonalElement) -> np.ndarray:
    if g.exact:
        return to_complex(frac_inv(g.matrix))
    m = np.asarray(g.matrix, dtype=complex)
    if abs(np.linalg.det(m)) < 1e-14:
        raise NotInvertible()
    return np.linalg.inv(m)


def covector_map(g: OrthogonalElement) -> np.ndarray:
    """Matrix M with act(g, x).coords = M @ x.coords, namely g^{-T}."""
    return _inverse_matrix(g).T


def act(g: OrthogonalElement, x: DomainPoint) -> DomainPoint:
    """x o g^{-1}: the value on v becomes <g^{-1} v, x>."""
    return x.with_coords(covector_map(g) @ x.coords)


def scale(alpha: complex, x: DomainPoint) -> DomainPoint:
    if alpha == 0:
        raise NotInCStar()
    return x.with_coords(complex(alpha) * x.coords)


def normalize(f: SectionSpec, x: DomainPoint) -> DomainPoint:
    v = f.value(x)
    if v == 0:
        raise OnRemovedDivisor(f"p={f.p}, q={f.q}")
    return scale(1 / v, x)


A_SECTION = SectionSpec(1, 0)
B_SECTION = SectionSpec(0, 1)


def sample_D2(sys: EllipticRootSystem, seed: int, *, tau: complex | None = None) -> DomainPoint:
    """Deterministic pseudorandom point of D^2 (solved for s_a)."""
    rng = np.random.default_rng(seed)
    h = sys.space.dual_gram_float
    for _ in range(100):
        c = np.zeros(sys.n, dtype=complex)
        for i in range(sys.l):
            c[i] = _disc(rng, 1.0)
        ua = _disc(rng, 1.0) + 1.0
        if abs(ua) < 1e-3:
            continue
        t = tau if tau is not None else 1j + _disc(rng, 0.5)
        c[sys.ia] = ua
        c[sys.ib] = t * ua
        c[sys.ibs] = _disc(rng, 1.0)
        lin = (h @ c)[sys.ias]
        if abs(lin) < 1e-12:
            continue
        # H[a*, a*] == 0, so the quadric is affine in s_a
        c[sys.ias] = -(c @ h @ c) / (2 * lin)
        return DomainPoint(c, sys.ia, sys.ib)
    raise SamplingFailed(f"seed {seed}")


def _disc(rng: np.random.Generator, r: float) -> complex:
    rad = r * np.sqrt(rng.random())
    ang = 2 * np.pi * rng.random()
    return complex(rad * np.cos(ang), rad * np.sin(ang))


def weight_transfer_residual(F: Callable[[DomainPoint], complex], k: int, f: SectionSpec,
                             g: SectionSpec, x: DomainPoint) -> float:
    """|F(x/g) - (f/g)^k F(x/f)| for F homogeneous of degree k (F(alpha x) = alpha^k F(x))."""
    lhs = F(normalize(g, x))
    rhs = (f.value(x) / g.value(x)) ** k * F(normalize(f, x))
    return abs(lhs - rhs)

