"""Finite-difference differential geometry for structures (o, e, E, g) on open sets of C^n.

Conventions: Christoffel symbols are stored as gamma[k, i, j] = Gamma^k_ij, and the
curvature as R[k, l, i, j] with R(d_i, d_j) d_l = R^k_lij d_k,
R^k_lij = d_i Gamma^k_jl - d_j Gamma^k_il + Gamma^k_ip Gamma^p_jl - Gamma^k_jp Gamma^p_il.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import MetricSingular

# --- differences -----------------------------------------------------------------


def central1(f: Callable[[float], np.ndarray], h: float) -> np.ndarray:
    """Fourth-order first derivative at 0."""
    return (f(-2 * h) - 8 * f(-h) + 8 * f(h) - f(2 * h)) / (12 * h)


def central2(f: Callable[[float], np.ndarray], h: float) -> np.ndarray:
    """Fourth-order second derivative at 0."""
    return (-f(-2 * h) + 16 * f(-h) - 30 * f(0.0) + 16 * f(h) - f(2 * h)) / (12 * h * h)


def derivative(F: Callable[[np.ndarray], np.ndarray], t, h: float) -> np.ndarray:
    """Array dF[m, ...] = d_m F at t, Richardson-extrapolated from steps h and h/2."""
    t = np.asarray(t, dtype=complex)
    n = t.shape[0]
    out = []
    for m in range(n):
        e = np.zeros(n)
        e[m] = 1.0
        g = lambda s, e=e: F(t + s * e)  # noqa: E731
        a, b = central1(g, h), central1(g, h / 2)
        out.append(b + (b - a) / 15)
    return np.array(out)


# --- structures ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Structure:
    """Multiplication c^k_ij ([i, j, k]), metric g_ij, constant unit e, linear Euler field."""

    n: int
    mult: Callable[[np.ndarray], np.ndarray]
    metric: Callable[[np.ndarray], np.ndarray]
    unit: np.ndarray
    euler_d: tuple
    euler_r: tuple
    name: str = "structure"
    christoffel: Callable[[np.ndarray], np.ndarray] | None = None

    def euler_at(self, t) -> np.ndarray:
        return np.array([complex(d) * ti + complex(r)
                         for d, r, ti in zip(self.euler_d, self.euler_r, np.asarray(t, dtype=complex))])

    def lower(self, t) -> np.ndarray:
        """c_ijk = g(d_i o d_j, d_k)."""
        return np.einsum("ijl,lk->ijk", self.mult(t), self.metric(t))


def christoffel_fd(metric: Callable, t, h: float) -> np.ndarray:
    g = np.asarray(metric(t), dtype=complex)
    if abs(np.linalg.det(g)) < 1e-14:
        raise MetricSingular(f"det g = {np.linalg.det(g):.3e}")
    dg = derivative(metric, t, h)  # [m, i, j]
    ginv = np.linalg.inv(g)
    # Gamma_kij (first kind) = (d_i g_jk + d_j g_ik - d_k g_ij) / 2
    first = 0.5 * (np.einsum("ijk->kij", dg) + np.einsum("jik->kij", dg) - dg)
    return np.einsum("kl,lij->kij", ginv, first)


def riemann_from_christoffel(gamma_fn: Callable, t, h: float) -> np.ndarray:
    gam = gamma_fn(t)
    dgam = derivative(gamma_fn, t, h)  # [m, k, i, j] = d_m Gamma^k_ij
    # d_i Gamma^k_jl -> [k, l, i, j]
    term1 = np.einsum("ikjl->klij", dgam)
    term2 = np.einsum("jkil->klij", dgam)
    quad1 = np.einsum("kip,pjl->klij", gam, gam)
    quad2 = np.einsum("kjp,pil->klij", gam, gam)
    return term1 - term2 + quad1 - quad2


def riemann_fd(metric: Callable, t, h: float) -> np.ndarray:
    """Riemann tensor from nested central differences of the metric."""
    return riemann_from_christoffel(lambda s: christoffel_fd(metric, s, h), t, h)


def riemann_adaptive(metric: Callable, t, h: float = 2e-2, rel: float = 1e-4,
                     max_halvings: int = 6) -> tuple[np.ndarray, float]:
    """Halve h until two successive estimates agree to ``rel`` (relative to scale)."""
    prev = riemann_fd(metric, t, h)
    for _ in range(max_halvings):
        h /= 2
        cur = riemann_fd(metric, t, h)
        scale = max(float(np.max(np.abs(cur))), 1.0)
        if float(np.max(np.abs(cur - prev))) <= rel * scale:
            return cur, h
        prev = cur
    return prev, h


# --- residuals for the six axioms -------------------------------------------------


def lie_mult_residual(s: Structure, t, h: float) -> float:
    """max |Lie_E(o) - o| with Lie_E c^k_ij = E(c^k_ij) + (d_i + d_j - d_k) c^k_ij."""
    t = np.asarray(t, dtype=complex)
    E = s.euler_at(t)
    dc = derivative(s.mult, t, h)
    ec = np.einsum("m,mijk->ijk", E, dc)
    d = np.array([complex(v) for v in s.euler_d])
    shift = d[:, None, None] + d[None, :, None] - d[None, None, :]
    c = s.mult(t)
    return float(np.max(np.abs(ec + shift * c - c)))


def lie_metric(s: Structure, t, h: float) -> np.ndarray:
    """(Lie_E g)_ij = E(g_ij) + (d_i + d_j) g_ij."""
    t = np.asarray(t, dtype=complex)
    E = s.euler_at(t)
    dg = derivative(s.metric, t, h)
    d = np.array([complex(v) for v in s.euler_d])
    g = s.metric(t)
    return np.einsum("m,mij->ij", E, dg) + (d[:, None] + d[None, :]) * g


def check_structure(s: Structure, points: np.ndarray, h: float = 1e-3,
                    curvature_h: float = 2e-2) -> dict:
    """Six axiom residuals for a general structure, plus the fitted metric weight D."""
    res = {"metric_invariance": 0.0, "potentiality": 0.0, "flatness": 0.0, "unit": 0.0,
           "associativity": 0.0, "homogeneity": 0.0}
    n = s.n
    eye = np.eye(n)
    lie_g, gs = [], []
    for t in points:
        t = np.asarray(t, dtype=complex)
        c = s.mult(t)
        g = s.metric(t)
        gam = christoffel_fd(s.metric, t, h)
        # metric invariance
        a = np.einsum("ijk,kl->ijl", c, g)
        b = np.einsum("ik,jlk->ijl", g, c)
        res["metric_invariance"] = max(res["metric_invariance"], float(np.max(np.abs(a - b))))
        # potentiality: nabla c (lower) symmetric in the derivative slot and the first slot
        low = s.lower
        dlow = derivative(low, t, h)  # [m, i, j, k]
        cl = low(t)
        nab = (dlow - np.einsum("pmi,pjk->mijk", gam, cl) - np.einsum("pmj,ipk->mijk", gam, cl)
               - np.einsum("pmk,ijp->mijk", gam, cl))
        res["potentiality"] = max(res["potentiality"],
                                  float(np.max(np.abs(nab - np.swapaxes(nab, 0, 1)))))
        # flatness
        R, _ = riemann_adaptive(s.metric, t, curvature_h)
        res["flatness"] = max(res["flatness"], float(np.max(np.abs(R))))
        # unit: e o X = X and nabla e = 0 (e has constant components)
        u = np.einsum("i,ijk->jk", s.unit, c) - eye
        nabla_e = np.einsum("kij,j->ki", gam, s.unit)
        res["unit"] = max(res["unit"], float(np.max(np.abs(u))), float(np.max(np.abs(nabla_e))))
        # associativity
        lhs = np.einsum("abm,mcd->abcd", c, c)
        rhs = np.einsum("bcm,amd->abcd", c, c)
        res["associativity"] = max(res["associativity"], float(np.max(np.abs(lhs - rhs))))
        res["homogeneity"] = max(res["homogeneity"], lie_mult_residual(s, t, h))
        lie_g.append(lie_metric(s, t, h).reshape(-1))
        gs.append(g.reshape(-1))
    # Lie_E g = D g with one constant D across all points
    lg = np.concatenate(lie_g)
    gg = np.concatenate(gs)
    D = complex(np.vdot(gg, lg) / np.vdot(gg, gg))
    res["homogeneity"] = max(res["homogeneity"], float(np.max(np.abs(lg - D * gg))))
    return {"residuals": res, "fitted_D": D}
