"""Simulation harness, policy fitting, evaluation and command-line interface."""

from .evaluate import REPORT_FIELDS, RunReport, comparable, evaluate, write_reports
from .fitting import FitResult, fit_policy_to_footprint
from .simulate import ConfigError, SimConfig, SimResult, simulate

__all__ = [
    "REPORT_FIELDS",
    "ConfigError",
    "FitResult",
    "RunReport",
    "SimConfig",
    "SimResult",
    "comparable",
    "evaluate",
    "fit_policy_to_footprint",
    "simulate",
    "write_reports",
]
