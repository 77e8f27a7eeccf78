"""Command-line interface for the hblasso package.
"""
import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from hblasso import __version__
from hblasso.core.config import DATA_COMMANDS, Config, FitConfig, RunConfig, build
from hblasso.core.errors import ConfigError
from hblasso.core.pipeline import Pipeline, cross_validate
from hblasso.data.loaders import load_csv, standardize
from hblasso.eta.discrepancy import approximation_study
from hblasso.experiments import (check_ratio_band, run_multimodality_demo, run_sensitivity, run_simulation_study,
                                 run_timing, specs_from_config, timing_ratios)
from hblasso.export import get_exporter
from hblasso.influence.functions import influence_grid
from hblasso.model.losses import loss_table

logger = logging.getLogger(__name__)

#: config section that --seed, --iters and --burn-in write to
_SECTIONS = {
    "fit": "sampler",
    "simulate": "simulation",
    "validate-approx": "approx",
    "cv": "cv",
    "influence": "influence",
    "demo-multimodal": "multimodal",
    "timing": "timing",
    "sensitivity": "sensitivity",
    "losses": None,
}

#: argparse dest -> (section, key) for command-specific flags
_FLAG_KEYS = {
    "thin": ("sampler", "thin"),
    "full_state": ("sampler", "store_full_state"),
    "t_df": ("sampler", "t_df"),
    "quantile": ("sampler", "quantile"),
    "eta": ("hyper", "eta"),
    "lam": ("hyper", "lambda"),
    "model": ("simulation", "models"),
    "n_values": ("simulation", "n_values"),
    "reps": ("simulation", "replications"),
    "p": ("simulation", "p"),
    "n_grid": ("approx", "n_grid"),
    "ab_grid": ("approx", "ab_grid"),
    "datasets": ("approx", "datasets"),
    "mc_size": ("approx", "mc_size"),
    "length_factor": ("cv", "length_factor"),
    "eta_list": ("influence", "eta_list"),
    "x_values": ("influence", "x_values"),
    "g_draws": ("influence", "g_draws"),
    "p_grid": ("timing", "p_grid"),
    "runs": ("timing", "runs"),
    "parameters": ("sensitivity", "parameters"),
    "values": ("sensitivity", "values"),
}


def _eta_or_learn(value: str):
    if value.lower() in ("learn", "learned"):
        return "learn"
    try:
        return float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'learn' or a number, got {value!r}")


def _common(parser: argparse.ArgumentParser, chain: bool = True):
    parser.add_argument("-v", "--verbose", action="store_true", help="Enable verbose output")
    parser.add_argument("-c", "--config", type=str, default=None,
                        help="Path to the configuration file (JSON format)")
    parser.add_argument("-o", "--out", type=str, required=True, help="Output directory")
    parser.add_argument("--seed", type=int, default=None, help="Base seed")
    parser.add_argument("--workers", type=int, default=None, help="Worker processes")
    if chain:
        parser.add_argument("--iters", type=int, default=None, help="Gibbs iterations per chain")
        parser.add_argument("--burn-in", type=int, default=None, help="Discarded initial iterations")


def _data(parser: argparse.ArgumentParser):
    parser.add_argument("--data", type=str, required=True, help="Numeric CSV with a header row")
    parser.add_argument("--response", type=str, required=True, help="Response column name")
    parser.add_argument("--no-standardize", action="store_true",
                        help="Fit the data as given instead of standardizing y and X")
    parser.add_argument("--eta", type=_eta_or_learn, default=None, help="'learn' or a fixed eta")
    parser.add_argument("--lambda", dest="lam", type=_eta_or_learn, default=None,
                        help="'learn' or a fixed lambda")
    parser.add_argument("--t-df", type=float, default=None, help="Degrees of freedom of tBL")
    parser.add_argument("--quantile", type=float, default=None, help="Quantile level of mBL")


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command-line arguments."""
    parser = argparse.ArgumentParser(
        description="Bayesian Huberized lasso CLI",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    fit = commands.add_parser("fit", help="Fit one model and write samples, summary and manifest")
    _common(fit)
    _data(fit)
    fit.add_argument("--method", type=str.lower, default="hbl",
                     choices=["hbl", "hbl_fixed", "bl", "mbl", "tbl"], help="Sampler")
    fit.add_argument("--thin", type=int, default=None, help="Keep every thin-th draw")
    fit.add_argument("--full-state", action="store_const", const=True, default=None,
                     help="Also store tau2 and the latent scales")

    simulate = commands.add_parser("simulate", help="Replicated simulation study")
    _common(simulate)
    simulate.add_argument("--model", type=int, nargs="+", choices=[1, 2, 3, 4], default=None)
    simulate.add_argument("--n", dest="n_values", type=int, nargs="+", default=None)
    simulate.add_argument("--reps", type=int, default=None, help="Replications per scenario")
    simulate.add_argument("--p", type=int, default=None, help="Number of predictors")
    simulate.add_argument("--methods", type=str, nargs="+", default=None)

    approx = commands.add_parser("validate-approx", help="Accuracy of the gamma approximation of eta")
    _common(approx, chain=False)
    approx.add_argument("--n-grid", type=int, nargs="+", default=None)
    approx.add_argument("--ab-grid", type=float, nargs="+", default=None)
    approx.add_argument("--datasets", type=int, default=None)
    approx.add_argument("--mc-size", type=int, default=None)

    cv = commands.add_parser("cv", help="Leave-one-out prediction errors per method")
    _common(cv, chain=False)
    _data(cv)
    cv.add_argument("--methods", type=str, nargs="+", default=None)
    cv.add_argument("--length-factor", type=float, default=None,
                    help="Scale of the base chain lengths (15000 / 5000)")

    influence = commands.add_parser("influence", help="Influence functions of the flat-prior model")
    _common(influence)
    influence.add_argument("--eta-list", type=float, nargs="+", default=None)
    influence.add_argument("--x-values", type=float, nargs="+", default=None)
    influence.add_argument("--g-draws", type=int, default=None)

    demo = commands.add_parser("demo-multimodal", help="Posterior modes under both Laplace priors")
    _common(demo)

    timing = commands.add_parser("timing", help="Sampling time per method and dimension")
    _common(timing)
    timing.add_argument("--p-grid", type=int, nargs="+", default=None)
    timing.add_argument("--runs", type=int, default=None)
    timing.add_argument("--methods", type=str, nargs="+", default=None)

    sensitivity = commands.add_parser("sensitivity", help="Fits under varying gamma hyperparameters")
    _common(sensitivity)
    sensitivity.add_argument("--parameters", type=str, nargs="+", default=None)
    sensitivity.add_argument("--values", type=float, nargs="+", default=None)

    losses = commands.add_parser("losses", help="Loss-comparison table")
    _common(losses, chain=False)
    losses.add_argument("--x-min", type=float, default=-5.0)
    losses.add_argument("--x-max", type=float, default=5.0)
    losses.add_argument("--points", type=int, default=201)
    losses.add_argument("--eta-values", type=float, nargs="+", default=[0.1, 1.0, 10.0])
    return parser.parse_args(argv)


def setup_logging(verbose):
    """Set up logging configuration."""
    level = logging.INFO if verbose else logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )


def create_config_from_args(args: argparse.Namespace) -> Config:
    """Defaults < --config file < command-line flags."""
    config = Config(config_path=args.config) if args.config else Config()
    config.set(args.verbose, "general", "verbose")
    if args.workers is not None:
        config.set(args.workers, "general", "num_workers")
    section = _SECTIONS[args.command]
    if section is not None:
        for dest, key in (("seed", "seed"), ("iters", "iterations"), ("burn_in", "burn_in")):
            value = getattr(args, dest, None)
            if value is not None:
                config.set(value, section, key)
    methods = getattr(args, "methods", None)
    if methods is not None and section is not None:
        config.set(methods, section, "methods")
    for dest, (target, key) in _FLAG_KEYS.items():
        value = getattr(args, dest, None)
        if value is not None:
            config.set(value, target, key)
    return config


def create_run_config(args: argparse.Namespace, config: Config) -> RunConfig:
    values: Dict[str, Any] = {
        "command": args.command,
        "out": Path(args.out),
        "num_workers": max(int(config.get("general", "num_workers", default=1)), 1),
        "verbose": args.verbose,
        "config_hash": config.digest(),
    }
    if args.command in DATA_COMMANDS:
        values.update(data=Path(args.data), response=args.response)
    if args.command == "fit":
        kind = "hbl_fixed_eta" if args.method == "hbl_fixed" else args.method
        if kind == "hbl_fixed_eta" and config.get("hyper", "eta") == "learn":
            raise ConfigError("--method hbl_fixed needs --eta FLOAT")
        values.update(method=kind, fit=FitConfig.from_config(config, sampler_kind=kind))
    return build(RunConfig, values)


def _prepare_output(out: Path) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    if not os.access(out, os.W_OK):
        raise ConfigError(f"output directory is not writable: {out}")
    return out


def _write(frame, out: Path, name: str, config: Config) -> Path:
    return get_exporter("table").export(frame, out / name, float_format=config.get("output", "float_format"))


def _write_manifest(run: RunConfig, config: Config, **extra) -> Path:
    section = _SECTIONS[run.command]
    entries = {"command": run.command, "version": __version__, "config_hash": run.config_hash,
               "seed": config.get(section, "seed") if section else None, **extra}
    return get_exporter("manifest").export(entries, run.out / "manifest.txt")


def _fit(args, run: RunConfig, config: Config):
    pipeline = Pipeline(config, verbose=args.verbose).load(run.data, run.response)
    if not args.no_standardize:
        pipeline.standardize()
    pipeline.fit(run.method).summarize().export(run.out, command=run.command)
    logger.info("Fit finished: %d draws in %s", pipeline.samples.size, run.out)


def _simulate(args, run: RunConfig, config: Config):
    section = config["simulation"]
    fit_config = FitConfig.from_config(config, iterations=section["iterations"], burn_in=section["burn_in"])
    result = run_simulation_study(specs_from_config(config), section["methods"], fit_config,
                                  num_workers=run.num_workers, progress=run.verbose)
    _write(result.metrics, run.out, "simulation.csv", config)
    _write(result.replications, run.out, "replications.csv", config)
    _write(result.eta_medians, run.out, "eta_medians.csv", config)
    _write(result.failures, run.out, "failures.csv", config)
    _write_manifest(run, config, failures=result.failures.shape[0])


def _validate_approx(args, run: RunConfig, config: Config):
    section = config["approx"]
    table = approximation_study(section["n_grid"], section["ab_grid"], section["datasets"],
                                section["mc_size"], section["seed"], num_workers=run.num_workers,
                                progress=run.verbose)
    _write(table, run.out, "approx.csv", config)
    _write_manifest(run, config)


def _cv(args, run: RunConfig, config: Config):
    data = load_csv(run.data, run.response)
    if not args.no_standardize:
        data = standardize(data)
    table = cross_validate(data, config.get("cv", "methods"), config, num_workers=run.num_workers,
                           progress=run.verbose)
    _write(table, run.out, "cv.csv", config)
    _write_manifest(run, config, data=str(run.data), response=run.response, n=data.n, p=data.p)


def _influence(args, run: RunConfig, config: Config):
    section = config["influence"]
    z_values = np.linspace(section["z_min"], section["z_max"], int(section["z_points"]))
    grid = influence_grid(section["x_values"], z_values, section["eta_list"], n=section["n"],
                          draws=section["draws"], burn_in=section["burn_in"], g_draws=section["g_draws"],
                          seed=section["seed"], num_workers=run.num_workers)
    _write(grid.to_frame(), run.out, "influence.csv", config)
    _write_manifest(run, config)


def _demo_multimodal(args, run: RunConfig, config: Config):
    section = config["multimodal"]
    result = run_multimodality_demo(n=section["n"], sigma=section["sigma"], lam=section["lambda"],
                                    eta=section["eta"], iterations=section["iterations"],
                                    burn_in=section["burn_in"], grid_points=section["grid_points"],
                                    bins=section["bins"], smoothing=section["smoothing"], seed=section["seed"])
    _write(result.profile, run.out, "profile.csv", config)
    _write(result.histograms, run.out, "histograms.csv", config)
    _write(result.modes_frame(), run.out, "modes.csv", config)
    for prior, samples in result.samples.items():
        _write(samples.to_frame(), run.out, f"samples_{prior}.csv", config)
    _write_manifest(run, config, **{f"modes_{prior}": count for prior, count in result.profile_modes.items()})


def _timing(args, run: RunConfig, config: Config):
    section = config["timing"]
    table = run_timing(n=section["n"], p_grid=section["p_grid"], methods=section["methods"],
                       iterations=section["iterations"], burn_in=section["burn_in"],
                       runs=section["runs"], seed=section["seed"])
    ratios = timing_ratios(table)
    _write(table, run.out, "timing.csv", config)
    _write(ratios, run.out, "timing_ratios.csv", config)
    _write_manifest(run, config)
    check_ratio_band(ratios)


def _sensitivity(args, run: RunConfig, config: Config):
    section = config["sensitivity"]
    result = run_sensitivity(section["parameters"], section["values"], n_points=section["n_points"],
                             sigma=section["sigma"], iterations=section["iterations"],
                             burn_in=section["burn_in"], seed=section["seed"], num_workers=run.num_workers)
    _write(result.curves, run.out, "sensitivity_curves.csv", config)
    _write(result.truth, run.out, "sensitivity_truth.csv", config)
    _write_manifest(run, config)


def _losses(args, run: RunConfig, config: Config):
    if args.points < 2 or not args.x_max > args.x_min:
        raise ConfigError("need --points >= 2 and --x-max > --x-min")
    table = loss_table(np.linspace(args.x_min, args.x_max, args.points), args.eta_values)
    _write(table, run.out, "losses.csv", config)
    _write_manifest(run, config)


_COMMANDS = {
    "fit": _fit,
    "simulate": _simulate,
    "validate-approx": _validate_approx,
    "cv": _cv,
    "influence": _influence,
    "demo-multimodal": _demo_multimodal,
    "timing": _timing,
    "sensitivity": _sensitivity,
    "losses": _losses,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI."""
    args = parse_args(argv)
    setup_logging(args.verbose)
    try:
        config = create_config_from_args(args)
        run = create_run_config(args, config)
        _prepare_output(run.out)
        _COMMANDS[run.command](args, run, config)
        logger.info("%s completed successfully. Output saved to %s", run.command, run.out)
        return 0
    except Exception as e:
        logger.error("An error occurred: %s", str(e))
        if args.verbose:
            import traceback
            logger.error(traceback.format_exc())
        return 1


if __name__ == "__main__":
    sys.exit(main())
