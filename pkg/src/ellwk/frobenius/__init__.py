"""Numerical verifier for Frobenius structures, conformal deformations and good sections."""

from .bundle import (BundleChart, Section, check_conformal_structure, good_section_test,
                     pullback_structure, trivial_section)
from .chart import (AxiomReport, FrobeniusChart, check_e_shift, check_frobenius,
                    intersection_form, load_chart, rescaled, sample_box)
from .deform import DeformationSpec, conformal_deform, flatness_residual
from .polynomial import Poly

__all__ = [
    "AxiomReport", "BundleChart", "DeformationSpec", "FrobeniusChart", "Poly", "Section",
    "check_conformal_structure", "check_e_shift", "check_frobenius", "conformal_deform",
    "flatness_residual", "good_section_test", "intersection_form", "load_chart",
    "pullback_structure", "rescaled", "sample_box", "trivial_section",
]
