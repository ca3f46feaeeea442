"""Uplink RB sharing between cellular owners and D2D pairs in a single 28 GHz cell."""

from .config import ConfigError, ScenarioConfig, load_config, parse_config
from .linkbudget import Instance, check_feasible, cst, system_sum_rate
from .oracle import solve_exhaustive
from .scheduler import run as schedule
from .topology import build_gain_matrix, generate_drop

__all__ = [
    "ConfigError",
    "Instance",
    "ScenarioConfig",
    "build_gain_matrix",
    "check_feasible",
    "cst",
    "generate_drop",
    "load_config",
    "parse_config",
    "schedule",
    "solve_exhaustive",
    "system_sum_rate",
]
