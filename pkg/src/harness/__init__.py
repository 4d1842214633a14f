"""
Experiment Harness
==================
Config loading, strategy x seed runs, aggregation, hyper-parameter sweeps and
dataset export behind the command line.
"""

from .config import (
    ConfigError,
    ExperimentConfig,
    GenDataConfig,
    NetworkConfig,
    ReportConfig,
    StrategyRun,
    SweepGrid,
    config_to_dict,
    load_config,
    load_gen_data_config,
    parse_config,
)
from .runner import (
    aggregate,
    collect_reports,
    gen_data,
    render_table,
    rerender,
    run,
    run_single,
    write_results,
)
from .sweep import sweep

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "GenDataConfig",
    "NetworkConfig",
    "ReportConfig",
    "StrategyRun",
    "SweepGrid",
    "config_to_dict",
    "load_config",
    "load_gen_data_config",
    "parse_config",
    "aggregate",
    "collect_reports",
    "gen_data",
    "render_table",
    "rerender",
    "run",
    "run_single",
    "write_results",
    "sweep",
]
