"""Validated charts and fixture families shared by the suite, the CLI and the tests.

Both three-dimensional potentials were checked symbolically: the WDVV system
holds identically and the potential has E-degree D + 1.
"""

from __future__ import annotations

from fractions import Fraction
from importlib import resources

import numpy as np

from .bundle import Section
from .chart import FrobeniusChart, chart_from_dict, load_chart
from .deform import DeformationSpec
from .polynomial import Poly

ANTI = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]])


def _data(name: str):
    return resources.files("ellwk") / "data" / name


def a3_chart() -> FrobeniusChart:
    """F = t1^2 t3/2 + t1 t2^2/2 + t2^2 t3^2/4 + t3^5/60, E = t1 d1 + 3/4 t2 d2 + 1/2 t3 d3, D = 3/2."""
    return load_chart(_data("a3_chart.json"))


def d1_chart() -> FrobeniusChart:
    """F = t1^2 t3/2 + t1 t2^2/2 + t2^4/7, E = t1 d1 + 1/2 t2 d2, D = 1 (t3 has weight 0)."""
    return load_chart(_data("d1_chart.json"))


def one_dim_chart() -> FrobeniusChart:
    return FrobeniusChart(1, [[1]], Poly(1, [(Fraction(1, 6), (3,))]), 0, (1,), (), 2, name="t^3/6")


def perturbed_potential(chart: FrobeniusChart) -> FrobeniusChart:
    """t3^5/60 replaced by t3^5/59."""
    p = chart.potential + Poly(3, [(Fraction(1, 59) - Fraction(1, 60), (0, 0, 5))])
    return FrobeniusChart(chart.n, chart.eta, p, chart.unit_index, chart.euler_d, chart.euler_r,
                          chart.weight_D, name=f"{chart.name} /59")


def wrong_euler(chart: FrobeniusChart) -> FrobeniusChart:
    return chart.with_euler((1, Fraction(1, 2), Fraction(1, 2)))


def perturbed_metric(chart: FrobeniusChart, eps: float = 0.01) -> FrobeniusChart:
    eta = np.array(chart.eta)
    eta[1, 1] += eps
    return FrobeniusChart(chart.n, eta, chart.potential, chart.unit_index, chart.euler_d,
                          chart.euler_r, chart.weight_D, name=f"{chart.name} eta+{eps}")


def deformation_family(chart: FrobeniusChart) -> dict[str, DeformationSpec]:
    """Named phi = sigma^{-1} fixtures on the A3-type chart (unit d1, eta(e, .) = dt3)."""
    return {
        "constant": DeformationSpec.constant(3, 2),
        "kappa_t3": DeformationSpec.affine([0, 0, 2], label="2 t3"),
        "quadratic": DeformationSpec.quadratic(ANTI, (-1, 0, -1), label="eta(t-c, t-c), c=(-1,0,-1)"),
        "affine_null": DeformationSpec.affine([2, 2, -1], 5, label="2t1 + 2t2 - t3 + 5"),
        "t2": DeformationSpec.affine([0, 1, 0], label="t2"),
        "one_plus_t3": DeformationSpec.affine([0, 0, 1], 1, label="1 + t3"),
        "generic": DeformationSpec.affine([1, 1, 1], label="t1 + t2 + t3"),
    }


CURVATURE_FAMILIES = ("constant", "quadratic", "affine_null")
CURVED = ("t2", "generic")


def sections() -> dict[str, Section]:
    """Sections of the bundle over the D = 1 chart; only ``good`` is along eta(e, .)."""
    lin = Poly.linear
    return {
        "good": Section(lin([0, 0, Fraction(1, 2)], 1), 1, "1 + t3/2"),
        "generic_t1": Section(lin([1, 0, 0], 1), 1, "1 + t1"),
        "generic_t2": Section(lin([0, 1, 0], 1), 1, "1 + t2"),
        "generic_mix": Section(lin([1, 1, 1], 1), 1, "1 + t1 + t2 + t3"),
    }


def build_chart_files(target) -> None:
    """Regenerate the JSON chart files (used once to freeze the data)."""
    import json
    from pathlib import Path

    frac = Fraction
    a3 = FrobeniusChart(3, ANTI, Poly(3, [(frac(1, 2), (2, 0, 1)), (frac(1, 2), (1, 2, 0)),
                                          (frac(1, 4), (0, 2, 2)), (frac(1, 60), (0, 0, 5))]),
                        0, (1, frac(3, 4), frac(1, 2)), (), frac(3, 2), name="a3")
    d1 = FrobeniusChart(3, ANTI, Poly(3, [(frac(1, 2), (2, 0, 1)), (frac(1, 2), (1, 2, 0)),
                                          (frac(1, 7), (0, 4, 0))]),
                        0, (1, frac(1, 2), 0), (), 1, name="d1")
    for name, ch in (("a3_chart.json", a3), ("d1_chart.json", d1)):
        body = ",\n".join(f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in ch.to_json().items())
        Path(target, name).write_text("{\n" + body + "\n}\n")


__all__ = ["a3_chart", "d1_chart", "one_dim_chart", "perturbed_potential", "wrong_euler",
           "perturbed_metric", "deformation_family", "sections", "chart_from_dict"]
