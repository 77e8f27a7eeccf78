"""Gamma approximation of the eta full conditional and its accuracy study."""
from hblasso.eta.approx import (
    ETA_FLOOR,
    GammaApprox,
    compute_p,
    fixed_point_residual,
    sample_eta,
    solve_ab,
    true_eta_logpdf_unnorm,
)
from hblasso.eta.discrepancy import MEASURES, approximation_study, discrepancy, divergences, eta_density_table

__all__ = [
    "GammaApprox", "ETA_FLOOR", "compute_p", "solve_ab", "fixed_point_residual",
    "true_eta_logpdf_unnorm", "sample_eta",
    "MEASURES", "divergences", "discrepancy", "approximation_study", "eta_density_table",
]
