"""Python front end for the sbc simulator."""

from pathlib import Path

from ._core import (
    ConfigError,
    ScenarioConfig,
    __version__,
    analyze,
    array_manifold,
    chordal_distance,
    dft_basis,
    group_cell,
    grouping_oracle,
    load_config,
    max_tau_cut,
    parse_config,
    run_experiment,
    run_experiment_csv,
)

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "__version__",
    "analyze",
    "array_manifold",
    "chordal_distance",
    "dft_basis",
    "group_cell",
    "grouping_oracle",
    "load_config",
    "max_tau_cut",
    "parse_config",
    "run_experiment",
    "run_experiment_csv",
    "simulate",
]


def simulate(config, threads=1, **overrides):
    """Run a scenario given as a path, config text or ScenarioConfig.

    Keyword arguments override config keys, e.g. ``trials=5`` or ``allocation="random"``.
    Returns a dict of per-row columns.
    """
    if isinstance(config, ScenarioConfig):
        cfg = config
    elif isinstance(config, Path) or (isinstance(config, str) and "=" not in config):
        cfg = load_config(str(config))
    else:
        cfg = parse_config(config)
    for key, value in overrides.items():
        if isinstance(value, (list, tuple)):
            value = ",".join(str(v) for v in value)
        cfg.set(key, str(value))
    return run_experiment(cfg, threads)
