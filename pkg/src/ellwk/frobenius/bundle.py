"""Trivial C*-bundle L = M x C* over a Frobenius chart, its sections and the good-section test.

With fiber coordinate lambda the structure is (p*o, p*e, p*E, lambda^2 p*J).  A
C*-equivariant function g = lambda * gamma_g(t) cuts out the section
lambda = 1 / gamma_g(t), along which J pulls back to gamma_g^{-2} J.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import RatioSingular
from . import geometry
from .chart import FrobeniusChart, check_frobenius, intersection_form, rescaled, sample_box
from .deform import ConformalMetric, homogeneity_degree
from .polynomial import Poly

WEIGHTS = {"o": 0, "e": 0, "E": 0, "J": 2}


@dataclass(frozen=True, eq=False)
class BundleChart:
    base: FrobeniusChart

    # tensors on L at (t, lambda)
    def mult(self, t, lam) -> np.ndarray:
        return self.base.mult(t)

    def unit(self, t, lam) -> np.ndarray:
        return self.base.unit_vector

    def euler(self, t, lam) -> np.ndarray:
        return self.base.euler_at(t)

    def metric(self, t, lam) -> np.ndarray:
        return lam ** 2 * self.base.eta

    def intersection(self, t, lam) -> np.ndarray:
        return intersection_form(self.base, t) / lam ** 2

    def measured_weights(self, t, lam: complex = 1.3, alpha: complex = 2.0) -> dict:
        """psi-weights read off from values at lambda and alpha * lambda."""
        out = {}
        for key, fn in (("o", self.mult), ("e", self.unit), ("E", self.euler),
                        ("J", self.metric), ("I*", self.intersection)):
            a, b = fn(t, lam), fn(t, alpha * lam)
            idx = np.unravel_index(np.argmax(np.abs(a)), a.shape)
            out[key] = math.log(abs(b[idx] / a[idx])) / math.log(abs(alpha))
        return out


@dataclass(frozen=True, eq=False)
class Section:
    """g = scale * lambda * gamma(t) with gamma an affine (or polynomial) function on the chart."""

    gamma: Poly
    scale: complex = 1.0
    label: str = ""

    def value(self, t) -> complex:
        return self.scale * self.gamma(t)


def trivial_section(n: int) -> Section:
    return Section(Poly.const(n, 1), 1.0, "f")


def pullback_structure(bundle: BundleChart, g: Section) -> geometry.Structure:
    metric = ConformalMetric(bundle.base.eta / complex(g.scale) ** 2, g.gamma)
    b = bundle.base
    return geometry.Structure(n=b.n, mult=b.mult, metric=metric, unit=b.unit_vector,
                              euler_d=b.euler_d, euler_r=b.euler_r, name=f"iota({g.label})",
                              christoffel=metric.christoffel)


@dataclass(frozen=True)
class GoodSectionResult:
    good: bool
    c: complex
    residual: float

    def as_dict(self) -> dict:
        return {"good": self.good, "c": [self.c.real, self.c.imag], "residual": self.residual}


def good_section_test(bundle: BundleChart, f: Section, g: Section, points: np.ndarray,
                      tol: float = 1e-8) -> GoodSectionResult:
    """d((f/g)^{-1}) = c (iota(f)*J)(iota(f)*e), fitted by least squares over ``points``."""
    eta = bundle.base.eta
    e = bundle.base.unit_vector
    lhs, rhs = [], []
    grad_f = f.gamma.grad()
    grad_g = g.gamma.grad()
    for t in points:
        fv, gv = f.value(t), g.value(t)
        if abs(fv) < 1e-12 or abs(gv) < 1e-12:
            raise RatioSingular(f"at t = {np.round(t, 6).tolist()}")
        dfv = f.scale * np.array([p(t) for p in grad_f])
        dgv = g.scale * np.array([p(t) for p in grad_g])
        lhs.append((dgv * fv - gv * dfv) / fv ** 2)  # d(g / f)
        rhs.append((eta.T @ e) / fv ** 2)  # iota(f)*J = f^{-2} J, contracted with e
    L = np.concatenate(lhs)
    R = np.concatenate(rhs)
    c = complex(np.vdot(R, L) / np.vdot(R, R))
    resid = float(np.max(np.abs(L - c * R)))
    return GoodSectionResult(resid < tol, c, resid)


@dataclass(frozen=True)
class ConformalReport:
    weights: dict
    weights_ok: bool
    sections: dict
    rescaling_residual: float
    passed: bool

    def as_dict(self) -> dict:
        return {"weights": self.weights, "weights_ok": self.weights_ok,
                "sections": self.sections, "rescaling_residual": self.rescaling_residual,
                "passed": self.passed}


def section_report(bundle: BundleChart, g: Section, points: np.ndarray, tol: float = 1e-6) -> dict:
    st = pullback_structure(bundle, g)
    out = geometry.check_structure(st, points)
    res = out["residuals"]
    return {"residuals": res, "fitted_D": [out["fitted_D"].real, out["fitted_D"].imag],
            "passed": all(v < tol for v in res.values()),
            "homogeneous": homogeneity_degree(bundle.base, g.gamma) is not None}


def check_conformal_structure(bundle: BundleChart, sections: list[Section], samples: int = 6,
                              seed: int = 5, c=2, tol: float = 1e-6) -> ConformalReport:
    pts = sample_box(bundle.base.n, samples, seed)
    measured = bundle.measured_weights(pts[0])
    expected = dict(WEIGHTS, **{"I*": -2})
    weights_ok = all(abs(measured[k] - v) < 1e-12 for k, v in expected.items())
    rep = {}
    for g in sections:
        rep[g.label or repr(g.gamma)] = section_report(bundle, g, pts, tol)
    # base structure also passes the exact axiom check
    base_ok = check_frobenius(bundle.base, points=pts).passed
    r = rescaled(bundle.base, c)
    resc = max(float(np.max(np.abs(intersection_form(r, t) - intersection_form(bundle.base, t))))
               for t in pts)
    passed = weights_ok and base_ok and resc == 0.0 and all(v["passed"] for v in rep.values())
    return ConformalReport(measured, weights_ok, rep, resc, passed)
