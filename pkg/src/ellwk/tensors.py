"""Pointwise evaluation of the invariant metrics on D, D^2 and the a-section, with equivariance checks.

Tangent vectors at x are covectors on F^2 (same coordinates as points); the
metric I_D is the constant dual form H = Gram^{-1}.  Cotangent vectors are
vectors of F^2 paired through the Gram itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .domain import DomainPoint, act, covector_map, scale
from .errors import NotOnSection, NotTangent
from .rootsys import EllipticRootSystem
from .weyl import OrthogonalElement

TOL_TANGENT = 1e-10


@dataclass(frozen=True, eq=False)
class TangentVector:
    at: DomainPoint
    components: np.ndarray


def _dual(sys: EllipticRootSystem) -> np.ndarray:
    return sys.space.dual_gram_float


def eval_I_D(sys: EllipticRootSystem, x: DomainPoint | None, v, w) -> complex:
    """Constant dual form v^T H w; ``x`` is carried only for provenance."""
    return complex(np.asarray(v, dtype=complex) @ _dual(sys) @ np.asarray(w, dtype=complex))


def tangency_residual(sys: EllipticRootSystem, x: DomainPoint, v) -> float:
    v = np.asarray(v, dtype=complex)
    norm = np.linalg.norm(x.coords) * max(np.linalg.norm(v), 1e-300)
    return abs(x.coords @ _dual(sys) @ v) / norm


def tangent_basis(sys: EllipticRootSystem, x: DomainPoint) -> np.ndarray:
    """Columns span {v : I*(x, v) = 0}."""
    row = (_dual(sys) @ x.coords)[None, :]
    _, _, vh = np.linalg.svd(row)
    return vh[1:].conj().T


def project_tangent(sys: EllipticRootSystem, x: DomainPoint, v) -> np.ndarray:
    """Remove the component along a transversal so that I*(x, v) = 0.

    The transversal is y with I*(x, y) = 1 chosen along H x conjugated, which
    keeps the projection well conditioned; the map fixes tangent vectors.
    """
    v = np.asarray(v, dtype=complex)
    hx = _dual(sys) @ x.coords
    y = np.conj(hx) / (hx @ np.conj(hx))
    return v - (hx @ v) * y


def eval_I_D2(sys: EllipticRootSystem, x: DomainPoint, v, w,
              tol: float = TOL_TANGENT) -> complex:
    for vec in (v, w):
        if tangency_residual(sys, x, vec) > tol:
            raise NotTangent()
    return eval_I_D(sys, x, v, w)


def radical_report(sys: EllipticRootSystem, x: DomainPoint, rel: float = 1e-8) -> dict:
    """Rank defect of I_D restricted to T_x D^2 and how far x is from spanning the radical."""
    basis = tangent_basis(sys, x)
    restricted = basis.T @ _dual(sys) @ basis
    sv = np.linalg.svd(restricted, compute_uv=False)
    defect = int(np.sum(sv < rel * sv[0]))
    # x lies in the tangent space; its coefficient vector should span the kernel
    coeffs, *_ = np.linalg.lstsq(basis, x.coords, rcond=None)
    fiber_in_radical = float(np.linalg.norm(restricted @ coeffs) / np.linalg.norm(coeffs))
    return {"radical_dim": defect, "fiber_residual": fiber_in_radical,
            "singular_values": sv.tolist()}


# --- a-section --------------------------------------------------------------------

def _check_a_section(sys: EllipticRootSystem, x: DomainPoint, tol: float = 1e-12):
    if abs(x.pair_a - 1) > tol:
        raise NotOnSection(f"<a, x> = {x.pair_a}")


def eval_I_D1a(sys: EllipticRootSystem, x: DomainPoint, v, w) -> complex:
    """Induced form on F^a / C a: the dual form on covectors with zero a-slot.

    The a*-slot pairs only with the a-slot, so it drops out; this is why the
    class of a (the covector I(a, .), supported on the a*-slot) lies in the radical.
    """
    _check_a_section(sys, x)
    v = np.asarray(v, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if abs(v[sys.ia]) > TOL_TANGENT or abs(w[sys.ia]) > TOL_TANGENT:
        raise NotTangent("a-component must vanish on the a-section")
    return eval_I_D(sys, x, v, w)


def lift_to_D2a(sys: EllipticRootSystem, x: DomainPoint, v) -> np.ndarray:
    """Representative of the class of v tangent to D^2_a (solves for the a*-slot)."""
    _check_a_section(sys, x)
    v = np.array(v, dtype=complex)
    h = _dual(sys)
    v[sys.ias] = 0
    coef = (x.coords @ h)[sys.ias]
    v[sys.ias] = -(x.coords @ h @ v) / coef
    return v


def push_tangent(g: OrthogonalElement, v) -> np.ndarray:
    return covector_map(g) @ np.asarray(v, dtype=complex)


# --- equivariance ------------------------------------------------------------------

def check_equivariance(sys: EllipticRootSystem, tensor_id: str, transformation,
                       samples: Sequence[tuple[DomainPoint, np.ndarray, np.ndarray]]) -> float:
    """Max |pullback - expected| over (x, v, w) samples.

    ``transformation`` is an OrthogonalElement (phi(g), weight 0) or a nonzero
    complex number (psi(alpha), weight +2 on I_D and I_D2 tangents, -2 on the
    dual tensor ``I_D2*``).  For ``I_D2*`` the pair (v, w) holds cotangent
    vectors annihilating x.
    """
    worst = 0.0
    gram = sys.space.gram_float
    for x, v, w in samples:
        if isinstance(transformation, OrthogonalElement):
            m = covector_map(transformation)
            y = act(transformation, x)
            if tensor_id == "I_D":
                got, want = eval_I_D(sys, y, m @ v, m @ w), eval_I_D(sys, x, v, w)
            elif tensor_id == "I_D2":
                got, want = eval_I_D2(sys, y, m @ v, m @ w), eval_I_D2(sys, x, v, w)
            elif tensor_id == "I_D2*":
                # cotangent vectors transform by the inverse transpose of m, i.e. by g
                mi = np.linalg.inv(m).T
                got, want = (mi @ v) @ gram @ (mi @ w), v @ gram @ w
            else:
                raise ValueError(f"unknown tensor {tensor_id!r}")
        else:
            alpha = complex(transformation)
            y = scale(alpha, x)
            if tensor_id == "I_D":
                got = eval_I_D(sys, y, alpha * v, alpha * w)
                want = alpha ** 2 * eval_I_D(sys, x, v, w)
            elif tensor_id == "I_D2":
                got = eval_I_D2(sys, y, alpha * v, alpha * w)
                want = alpha ** 2 * eval_I_D2(sys, x, v, w)
            elif tensor_id == "I_D2*":
                got = (v / alpha) @ gram @ (w / alpha)
                want = alpha ** -2 * (v @ gram @ w)
            else:
                raise ValueError(f"unknown tensor {tensor_id!r}")
        worst = max(worst, abs(complex(got) - complex(want)))
    return worst


def random_tangent(sys: EllipticRootSystem, x: DomainPoint, rng: np.random.Generator) -> np.ndarray:
    raw = rng.normal(size=sys.n) + 1j * rng.normal(size=sys.n)
    return project_tangent(sys, x, raw)


def random_cotangent(sys: EllipticRootSystem, x: DomainPoint, rng: np.random.Generator) -> np.ndarray:
    """Vector u in F^2 with <u, x> = 0."""
    raw = rng.normal(size=sys.n) + 1j * rng.normal(size=sys.n)
    c = x.coords
    return raw - (raw @ c) * np.conj(c) / (c @ np.conj(c))
