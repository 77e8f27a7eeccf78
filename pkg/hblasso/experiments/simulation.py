"""Replicated simulation study comparing HBL with the BL / mBL / tBL baselines."""
import logging
from dataclasses import dataclass
from functools import partial
from typing import Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd

from hblasso.core.config import FitConfig, build
from hblasso.core.errors import HBLassoError
from hblasso.core.parallel import parallel_map
from hblasso.diagnostics.metrics import sim_metrics
from hblasso.diagnostics.summary import INTERVAL
from hblasso.experiments.scenarios import ScenarioSpec, gen_scenario
from hblasso.samplers import canonical_kind, run_chain

logger = logging.getLogger(__name__)

METHODS = ("BL", "mBL", "tBL", "HBL")
#: chain streams live above the data streams (which use the replication index)
CHAIN_STREAM_OFFSET = 2 ** 32
METRIC_COLUMNS = ["method", "n", "RMSE", "AL", "CP", "model", "replications", "failed"]


@dataclass
class SimulationResult:
    """Aggregated metrics, per-replication rows, HBL eta medians and failures."""
    metrics: pd.DataFrame
    replications: pd.DataFrame
    eta_medians: pd.DataFrame
    failures: pd.DataFrame


def _fit_one(task: Tuple[ScenarioSpec, int], methods: Sequence[str], config: FitConfig) -> List[Dict]:
    spec, rep = task
    data, truth = gen_scenario(spec, rep)
    rows = []
    for index, method in enumerate(methods):
        stream = CHAIN_STREAM_OFFSET + rep * len(methods) + index
        fit_config = config.updated(sampler_kind=canonical_kind(method), seed=spec.seed, stream=stream)
        row = {"model": spec.model_id, "n": spec.n, "rep": rep, "method": method}
        try:
            samples = run_chain(data, fit_config)
        except HBLassoError as exc:
            logger.error("Replication failed (model=%d, n=%d, rep=%d, method=%s): %s",
                         spec.model_id, spec.n, rep, method, exc)
            rows.append({**row, "error": str(exc)})
            continue
        coef = samples.coefficients()
        lower, median, upper = np.quantile(coef, [INTERVAL[0], 0.5, INTERVAL[1]], axis=0)
        metrics = sim_metrics(median, truth, np.column_stack([lower, upper]))
        row.update(RMSE=metrics.rmse, AL=metrics.al, CP=metrics.cp, error=None)
        if "eta" in samples.names:
            row["eta_median"] = float(np.median(samples.column("eta")))
        rows.append(row)
    return rows


def run_simulation_study(specs: Sequence[ScenarioSpec], methods: Sequence[str] = METHODS,
                         config: FitConfig = None, num_workers: int = 1,
                         progress: bool = False) -> SimulationResult:
    """Fit every method on every replication of every scenario.
    Args:
        specs (list): Scenarios; each carries its replication count and seed
        methods (list): Method names ("BL", "mBL", "tBL", "HBL", ...)
        config (FitConfig, optional): Chain settings; defaults to 2500 iterations / 500 burn-in
        num_workers (int): Worker processes over (scenario, replication) tasks
        progress (bool): Show a progress bar
    Returns:
        SimulationResult: Mean RMSE / AL / CP per (method, model, n), eta medians and failures
    """
    config = config if config is not None else FitConfig()
    tasks = [(spec, rep) for spec in specs for rep in range(spec.replications)]
    worker = partial(_fit_one, methods=list(methods), config=config)
    results = parallel_map(worker, tasks, num_workers, desc="simulation", progress=progress)
    reps = pd.DataFrame([row for rows in results for row in rows])
    reps = reps.reindex(columns=["model", "n", "rep", "method", "RMSE", "AL", "CP", "eta_median", "error"])

    ok = reps[reps["error"].isna()]
    failed = reps[reps["error"].notna()][["model", "n", "rep", "method", "error"]].reset_index(drop=True)
    metrics = (ok.groupby(["method", "model", "n"], sort=False)[["RMSE", "AL", "CP"]].mean()
               .reset_index())
    counts = ok.groupby(["method", "model", "n"], sort=False).size().rename("replications").reset_index()
    failures = failed.groupby(["method", "model", "n"]).size().rename("failed").reset_index()
    metrics = metrics.merge(counts, on=["method", "model", "n"])
    metrics = metrics.merge(failures, on=["method", "model", "n"], how="left")
    metrics["failed"] = metrics["failed"].fillna(0).astype(int)
    if failed.shape[0]:
        logger.warning("%d fits failed and were excluded", failed.shape[0])

    eta = ok[ok["eta_median"].notna()][["model", "n", "rep", "method", "eta_median"]]
    return SimulationResult(metrics=metrics[METRIC_COLUMNS], replications=reps,
                            eta_medians=eta.reset_index(drop=True), failures=failed)


def specs_from_config(config) -> List[ScenarioSpec]:
    """One ScenarioSpec per (model, n) in the "simulation" section."""
    section = config.get("simulation", default={})
    return [build(ScenarioSpec, {"model_id": int(model), "n": int(n), "p": int(section.get("p", 20)),
                                 "replications": int(section.get("replications", 50)),
                                 "seed": int(section.get("seed", 0))})
            for model in section.get("models", [1]) for n in section.get("n_values", [100])]
