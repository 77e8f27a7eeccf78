"""Simulation, sensitivity, multimodality and timing experiments."""
from hblasso.experiments.multimodal import (
    MultimodalResult,
    count_local_maxima,
    multimodal_data,
    profile_log_posterior,
    run_multimodality_demo,
)
from hblasso.experiments.scenarios import MODEL_SETTINGS, ScenarioSpec, default_truth, gen_scenario
from hblasso.experiments.sensitivity import SensitivityResult, logistic_features, run_sensitivity
from hblasso.experiments.simulation import SimulationResult, run_simulation_study, specs_from_config
from hblasso.experiments.timing import check_ratio_band, run_timing, timing_ratios

__all__ = [
    "ScenarioSpec", "MODEL_SETTINGS", "default_truth", "gen_scenario",
    "SimulationResult", "run_simulation_study", "specs_from_config",
    "SensitivityResult", "logistic_features", "run_sensitivity",
    "MultimodalResult", "multimodal_data", "profile_log_posterior", "count_local_maxima",
    "run_multimodality_demo",
    "run_timing", "timing_ratios", "check_ratio_band",
]
