"""Sampling time per method as the dimension grows (Model-1 data, n = 200)."""
import logging
from typing import Sequence

import numpy as np
import pandas as pd

from hblasso.core.config import FitConfig
from hblasso.core.errors import TimingError
from hblasso.experiments.scenarios import ScenarioSpec, gen_scenario
from hblasso.samplers import canonical_kind, run_chain

logger = logging.getLogger(__name__)

#: leading coefficients; the rest are zero and the intercept is 0
TIMING_BETA = (3.0, 0.5, 1.0, 1.5, 1.0)
RATIO_BAND = (0.5, 2.0)


def timing_truth(p: int) -> list:
    beta = np.zeros(p)
    head = min(p, len(TIMING_BETA))
    beta[:head] = TIMING_BETA[:head]
    return [0.0] + beta.tolist()


def run_timing(n: int = 200, p_grid: Sequence[int] = (5, 10, 20, 50, 100),
               methods: Sequence[str] = ("BL", "mBL", "tBL", "HBL"), iterations: int = 15000,
               burn_in: int = 5000, runs: int = 10, seed: int = 0) -> pd.DataFrame:
    """Mean and standard deviation of sampling seconds over `runs` chains per (method, p).
    Logs a warning when the HBL time leaves RATIO_BAND times the mBL or tBL time;
    timing_ratios and check_ratio_band turn that into a table and a failure.
    Returns:
        pd.DataFrame: Columns method, p, seconds, sd, runs
    """
    base = FitConfig(iterations=iterations, burn_in=burn_in, seed=seed)
    rows = []
    for p in p_grid:
        spec = ScenarioSpec(model_id=1, n=n, p=p, beta_truth=tuple(timing_truth(p)), replications=runs, seed=seed)
        data, _ = gen_scenario(spec, 0)
        for index, method in enumerate(methods):
            seconds = []
            for run in range(runs):
                config = base.updated(sampler_kind=canonical_kind(method), stream=1 + run * len(methods) + index)
                seconds.append(run_chain(data, config).info["seconds"])
            rows.append({"method": method, "p": p, "seconds": float(np.mean(seconds)),
                         "sd": float(np.std(seconds, ddof=1)) if runs > 1 else 0.0, "runs": runs})
            logger.info("%s at p=%d: %.3f s", method, p, rows[-1]["seconds"])
    table = pd.DataFrame(rows)
    ratios = timing_ratios(table)
    for row in ratios.itertuples(index=False):
        if not row.within_band:
            logger.warning("HBL/%s time ratio %.2f at p=%d is outside [%.1f, %.1f]",
                           row.reference, row.ratio, row.p, *RATIO_BAND)
    return table


def timing_ratios(table: pd.DataFrame, references: Sequence[str] = ("mBL", "tBL")) -> pd.DataFrame:
    """HBL seconds over each reference method's seconds, per p.
    Returns:
        pd.DataFrame: Columns p, reference, ratio, within_band; empty without HBL rows
    """
    columns = ["p", "reference", "ratio", "within_band"]
    wide = table.pivot(index="p", columns="method", values="seconds")
    if "HBL" not in wide:
        return pd.DataFrame(columns=columns)
    rows = []
    for reference in references:
        if reference not in wide:
            continue
        for p, ratio in (wide["HBL"] / wide[reference]).items():
            rows.append({"p": int(p), "reference": reference, "ratio": float(ratio),
                         "within_band": bool(RATIO_BAND[0] <= ratio <= RATIO_BAND[1])})
    return pd.DataFrame(rows, columns=columns)


def check_ratio_band(ratios: pd.DataFrame):
    """Raise TimingError listing every (p, reference) pair outside RATIO_BAND."""
    outside = ratios[~ratios["within_band"].astype(bool)]
    if len(outside):
        pairs = ", ".join(f"HBL/{row.reference}={row.ratio:.2f} at p={row.p}"
                          for row in outside.itertuples(index=False))
        raise TimingError(f"time ratios outside [{RATIO_BAND[0]}, {RATIO_BAND[1]}]: {pairs}")
