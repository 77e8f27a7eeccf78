"""Posterior summaries, MCMC diagnostics and evaluation metrics."""
from hblasso.diagnostics.metrics import SimMetrics, loocv_metrics, prediction_errors, sim_metrics
from hblasso.diagnostics.summary import Summary, acf, average_ess, ess, inefficiency_factor, summarize

__all__ = [
    "Summary", "summarize", "ess", "acf", "inefficiency_factor", "average_ess",
    "SimMetrics", "sim_metrics", "prediction_errors", "loocv_metrics",
]
