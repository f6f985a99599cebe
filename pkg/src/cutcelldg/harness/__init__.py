"""Experiment driver: configuration, error norms, CLI entry point."""

from .config import MeshSpec, RunConfig, load_config
from .experiments import (error_norms, run_burgers_shock, run_convergence,
                          run_sod)

__all__ = ["MeshSpec", "RunConfig", "load_config", "error_norms",
           "run_burgers_shock", "run_convergence", "run_sod"]
