"""Scenario-driven experiment harness: config parsing, scenario dispatch,
CSV reports, and the command-line entry point."""

from .config import ConfigError, ExperimentConfig, SCENARIOS, parse_config, parse_config_text
from .scenarios import Assertion, ScenarioResult, run_scenario

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "SCENARIOS",
    "parse_config",
    "parse_config_text",
    "Assertion",
    "ScenarioResult",
    "run_scenario",
]
