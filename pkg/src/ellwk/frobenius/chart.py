"""Frobenius charts in flat coordinates and the axiom verifier."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from ..errors import MetricDegenerate, SpecFileError
from . import geometry
from .polynomial import Poly


@dataclass(frozen=True, eq=False)
class FrobeniusChart:
    """(o, e, E, J, D) on an open set of C^n given in flat coordinates of J.

    The multiplication comes either from ``potential`` (c_ijk = d_i d_j d_k F)
    or from a raw evaluator ``cijk(t)`` returning the lower-index array.
    ``unit`` defaults to the coordinate field of ``unit_index``.
    """

    n: int
    eta: np.ndarray
    potential: Poly | None = None
    unit_index: int = 0
    euler_d: tuple = ()
    euler_r: tuple = ()
    weight_D: complex = 0
    cijk: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)
    unit: tuple | None = None
    name: str = "chart"

    def __post_init__(self):
        eta = np.asarray(self.eta, dtype=complex)
        object.__setattr__(self, "eta", eta)
        if eta.shape != (self.n, self.n) or not np.allclose(eta, eta.T):
            raise MetricDegenerate("eta must be a symmetric n x n matrix")
        if abs(np.linalg.det(eta)) < 1e-14:
            raise MetricDegenerate()
        if (self.potential is None) == (self.cijk is None):
            raise ValueError("give exactly one of potential or cijk")
        d = tuple(self.euler_d) or (0,) * self.n
        r = tuple(self.euler_r) or (0,) * self.n
        object.__setattr__(self, "euler_d", tuple(_num(v) for v in d))
        object.__setattr__(self, "euler_r", tuple(_num(v) for v in r))
        if self.unit is None:
            object.__setattr__(self, "unit", tuple(float(i == self.unit_index) for i in range(self.n)))
        if self.potential is not None:
            third = {}
            for i, j, k in itertools.combinations_with_replacement(range(self.n), 3):
                third[(i, j, k)] = self.potential.diff(i).diff(j).diff(k)
            object.__setattr__(self, "_third", third)

    @property
    def eta_inv(self) -> np.ndarray:
        return np.linalg.inv(self.eta)

    @property
    def unit_vector(self) -> np.ndarray:
        return np.asarray(self.unit, dtype=complex)

    def lower(self, t) -> np.ndarray:
        """c_ijk = J(d_i o d_j, d_k) at t."""
        if self.cijk is not None:
            return np.asarray(self.cijk(np.asarray(t, dtype=complex)), dtype=complex)
        out = np.zeros((self.n,) * 3, dtype=complex)
        for key, p in self._third.items():
            v = p(t)
            for perm in set(itertools.permutations(key)):
                out[perm] = v
        return out

    def mult(self, t) -> np.ndarray:
        """c^k_ij as an array indexed [i, j, k]."""
        return np.einsum("ijl,lk->ijk", self.lower(t), self.eta_inv)

    def product(self, t, X, Y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", X, Y, self.mult(t))

    def euler_at(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=complex)
        return np.array([complex(d) * ti + complex(r)
                         for d, r, ti in zip(self.euler_d, self.euler_r, t)])

    def with_euler(self, d: Sequence, r: Sequence | None = None) -> "FrobeniusChart":
        return replace(self, euler_d=tuple(d), euler_r=tuple(r) if r is not None else self.euler_r)

    def structure(self) -> "geometry.Structure":
        eta = self.eta
        return geometry.Structure(
            n=self.n, mult=self.mult, metric=lambda t: eta, unit=self.unit_vector,
            euler_d=self.euler_d, euler_r=self.euler_r, name=self.name,
            christoffel=lambda t: np.zeros((self.n,) * 3, dtype=complex))

    def to_json(self) -> dict:
        if self.potential is None:
            raise ValueError("only potential charts serialize")
        return {
            "n": self.n,
            "eta": [[[complex(v).real, complex(v).imag] for v in row] for row in self.eta],
            "potential": self.potential.as_list(),
            "unit_index": self.unit_index,
            "euler": {"d": [_jnum(v) for v in self.euler_d], "r": [_jnum(v) for v in self.euler_r]},
            "weight_D": _jnum(self.weight_D),
            "name": self.name,
        }


def _num(v):
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v).limit_denominator(10**9)
    return complex(v)


def _jnum(v) -> float | list:
    z = complex(v)
    return z.real if z.imag == 0 else [z.real, z.imag]


def load_chart(path: str | Path) -> FrobeniusChart:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise SpecFileError(f"{path}: file not found") from exc
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    return chart_from_dict(data, str(path))


def chart_from_dict(data: dict, where: str = "<chart>") -> FrobeniusChart:
    """Validate a parsed chart file field by field; errors name the offending field."""
    if not isinstance(data, dict):
        raise SpecFileError(f"{where}: top level must be an object")

    def field_(name, parse, default=None, required=True):
        if name not in data:
            if required:
                raise SpecFileError(f"{where}: missing field {name!r}")
            return default
        try:
            return parse(data[name])
        except (TypeError, ValueError, IndexError) as exc:
            raise SpecFileError(f"{where}: field {name!r}: {exc}") from exc

    n = field_("n", _parse_dim)
    eta = field_("eta", lambda v: _parse_eta(v, n))
    potential = field_("potential", lambda v: Poly.from_list(n, v))
    unit_index = field_("unit_index", lambda v: _parse_index(v, n), 0, required=False)
    euler = field_("euler", dict, {}, required=False)
    d = field_("euler", lambda v: _parse_vec(v.get("d", []), n, "d"), (), required=False)
    r = field_("euler", lambda v: _parse_vec(v.get("r", []), n, "r"), (), required=False)
    wd = field_("weight_D", _parse_num, 0, required=False)
    del euler
    try:
        return FrobeniusChart(n=n, eta=eta, potential=potential, unit_index=unit_index,
                              euler_d=d, euler_r=r, weight_D=wd,
                              name=str(data.get("name", Path(where).stem)))
    except ValueError as exc:
        raise SpecFileError(f"{where}: field 'eta': {exc}") from exc


def _parse_dim(v) -> int:
    if not isinstance(v, int) or isinstance(v, bool) or v < 1:
        raise ValueError("must be a positive integer")
    return v


def _parse_eta(v, n: int) -> np.ndarray:
    if len(v) != n or any(len(row) != n for row in v):
        raise ValueError(f"must be {n} x {n}")
    return np.array([[complex(*z) if isinstance(z, list) else complex(z) for z in row] for row in v])


def _parse_index(v, n: int) -> int:
    if not isinstance(v, int) or not 0 <= v < n:
        raise ValueError(f"must be an integer in [0, {n})")
    return v


def _parse_vec(v, n: int, key: str) -> tuple:
    if v and len(v) != n:
        raise ValueError(f"'{key}' needs {n} entries")
    return tuple(_parse_num(x) for x in v)


def _parse_num(v):
    return complex(*v) if isinstance(v, list) else _num(v)


# --- exact bookkeeping for polynomial charts ---------------------------------------

def _euler_field(chart: FrobeniusChart) -> list[Poly]:
    n = chart.n
    return [Poly.var(n, i) * chart.euler_d[i] + chart.euler_r[i] for i in range(n)]


def homogeneity_polys(chart: FrobeniusChart) -> dict[tuple[int, int, int], Poly]:
    """Components of Lie_E(o) - o for a polynomial chart with diagonal eta weights.

    Lie_E of the (2,1) tensor c^k_ij is E(c^k_ij) + (d_i + d_j - d_k) c^k_ij.
    The raised index uses the constant eta^{-1}, kept exact when eta is real-rational.
    """
    n = chart.n
    einv = _exact_inverse(chart.eta)
    third = {}
    for i, j, l in itertools.product(range(n), repeat=3):
        third[(i, j, l)] = chart._third[tuple(sorted((i, j, l)))]
    field_ = _euler_field(chart)
    d = chart.euler_d
    out = {}
    for i, j, k in itertools.product(range(n), repeat=3):
        ck = Poly(n)
        for l in range(n):
            if einv[l][k] != 0:
                ck = ck + third[(i, j, l)] * einv[l][k]
        res = ck.apply_field(field_) + ck * (d[i] + d[j] - d[k] - 1)
        out[(i, j, k)] = res
    return out


def _exact_inverse(eta: np.ndarray):
    if np.all(eta.imag == 0) and np.all(eta.real == np.round(eta.real * 2**20) / 2**20):
        from .._linalg import frac_array, frac_inv
        return frac_inv(frac_array([[Fraction(float(v.real)) for v in row] for row in eta])).tolist()
    return np.linalg.inv(eta).tolist()


def metric_weight_residual(chart: FrobeniusChart) -> float:
    """max |(d_i + d_j - D) eta_ij| (E linear part), plus shifts paired with eta."""
    n = chart.n
    worst = 0.0
    for i, j in itertools.product(range(n), repeat=2):
        v = chart.eta[i, j]
        if v != 0:
            worst = max(worst, abs(complex(chart.euler_d[i] + chart.euler_d[j]) - complex(chart.weight_D)) * abs(v))
    return worst


# --- axiom report ------------------------------------------------------------------

AXIOMS = ("metric_invariance", "potentiality", "flatness", "unit", "associativity", "homogeneity")


@dataclass(frozen=True)
class AxiomReport:
    residuals: dict
    tol: float
    points: int

    @property
    def passed(self) -> bool:
        return all(v < self.tol for v in self.residuals.values())

    def failing(self) -> list[str]:
        return [k for k, v in self.residuals.items() if not v < self.tol]

    def as_dict(self) -> dict:
        return {"residuals": dict(self.residuals), "tol": self.tol, "points": self.points,
                "passed": self.passed}


def sample_box(n: int, count: int, seed: int = 0, lo: float = 0.5, hi: float = 1.5,
               complex_part: float = 0.0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    pts = rng.uniform(lo, hi, size=(count, n)).astype(complex)
    if complex_part:
        pts += 1j * rng.uniform(-complex_part, complex_part, size=(count, n))
    return pts


def check_frobenius(chart: FrobeniusChart, sample_count: int = 50, h: float = 1e-3,
                    seed: int = 0, tol: float = 1e-9, points: np.ndarray | None = None) -> AxiomReport:
    """Residuals of the six axioms; exact bookkeeping where the chart is polynomial."""
    pts = sample_box(chart.n, sample_count, seed) if points is None else np.asarray(points)
    res = {k: 0.0 for k in AXIOMS}
    n = chart.n
    e = chart.unit_vector
    eye = np.eye(n)
    for t in pts:
        c = chart.mult(t)
        # J(X o Y, Z) - J(X, Y o Z) on basis fields
        a = np.einsum("ijk,kl->ijl", c, chart.eta)
        b = np.einsum("ik,jlk->ijl", chart.eta, c)
        res["metric_invariance"] = max(res["metric_invariance"], float(np.max(np.abs(a - b))))
        unit_err = np.max(np.abs(np.einsum("i,ijk->jk", e, c) - eye))
        res["unit"] = max(res["unit"], float(unit_err))
        lhs = np.einsum("abm,mcd->abcd", c, c)
        rhs = np.einsum("bcm,amd->abcd", c, c)
        res["associativity"] = max(res["associativity"], float(np.max(np.abs(lhs - rhs))))
        if chart.potential is None:
            res["potentiality"] = max(res["potentiality"], _raw_potentiality(chart, t, h))
            res["homogeneity"] = max(res["homogeneity"], geometry.lie_mult_residual(
                chart.structure(), t, h))
    if chart.potential is not None:
        hom = homogeneity_polys(chart)
        worst = 0.0
        for p in hom.values():
            if not p.is_zero:
                worst = max(worst, float(np.max(np.abs(p.eval_many(pts)))))
        res["homogeneity"] = worst
    res["homogeneity"] = max(res["homogeneity"], metric_weight_residual(chart))
    return AxiomReport(res, tol, len(pts))


def _raw_potentiality(chart: FrobeniusChart, t, h: float) -> float:
    """max |d_m c_ijk - d_i c_mjk| by Richardson-extrapolated central differences."""
    d = geometry.derivative(chart.lower, t, h)  # [m, i, j, k]
    return float(np.max(np.abs(d - np.swapaxes(d, 0, 1))))


# --- intersection form -----------------------------------------------------------

def intersection_form(chart: FrobeniusChart, t) -> np.ndarray:
    """I*(dt^i, dt^j) = J(E, J*dt^i o J*dt^j) = E^p eta^{ia} eta^{jb} c_pab."""
    E = chart.euler_at(t)
    ei = chart.eta_inv
    return np.einsum("p,ia,jb,pab->ij", E, ei, ei, chart.lower(t))


@dataclass(frozen=True)
class EShiftReport:
    first: float  # |e.I* - d_e J*|
    second: float  # |e^2 I*|
    richardson_gap: float

    def as_dict(self) -> dict:
        return {"e_I_minus_Jstar": self.first, "e2_I": self.second,
                "richardson_gap": self.richardson_gap}


def check_e_shift(chart: FrobeniusChart, samples: int = 30, h: float = 1e-2,
                  seed: int = 1, points: np.ndarray | None = None,
                  expected_scale: complex = 1.0) -> EShiftReport:
    """Directional derivatives of I* along e, against J* (times ``expected_scale``)."""
    pts = sample_box(chart.n, samples, seed) if points is None else np.asarray(points)
    e = chart.unit_vector
    jstar = chart.eta_inv * expected_scale
    first = second = gap = 0.0
    f = lambda s, t: intersection_form(chart, t + s * e)  # noqa: E731
    for t in pts:
        d1h = geometry.central1(lambda s: f(s, t), h)
        d1h2 = geometry.central1(lambda s: f(s, t), h / 2)
        d1 = d1h2 + (d1h2 - d1h) / 15
        d2h = geometry.central2(lambda s: f(s, t), h)
        d2h2 = geometry.central2(lambda s: f(s, t), h / 2)
        d2 = d2h2 + (d2h2 - d2h) / 15
        first = max(first, float(np.max(np.abs(d1 - jstar))))
        second = max(second, float(np.max(np.abs(d2))))
        gap = max(gap, float(np.max(np.abs(d1h2 - d1h))))
    return EShiftReport(first, second, gap)


def rescaled(chart: FrobeniusChart, c) -> FrobeniusChart:
    """The tuple (c^{-1} o, c e, E, c^{-1} J): eta / c, F / c^2, unit c e."""
    c = _num(c)
    cc = complex(c)
    pot = chart.potential / (c * c) if chart.potential is not None else None
    cijk = None
    if chart.cijk is not None:
        base = chart.cijk
        cijk = lambda t: base(t) / (cc * cc)  # noqa: E731
    return FrobeniusChart(
        n=chart.n, eta=chart.eta / cc, potential=pot, unit_index=chart.unit_index,
        euler_d=chart.euler_d, euler_r=chart.euler_r, weight_D=chart.weight_D, cijk=cijk,
        unit=tuple(cc * complex(v) for v in chart.unit), name=f"{chart.name}/c={c}")
