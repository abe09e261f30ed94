"""Python front end for the multiparty QPC simulator."""

import json

from ._core import (
    CapabilityError,
    ConfigError,
    ContractError,
    RangeError,
    StateError,
    closed_form,
    family_size,
    ghz_spec,
    sample_measurement,
    t_xor,
    wilson,
    x_expansion,
)
from . import _core

__all__ = [
    "CapabilityError",
    "ConfigError",
    "ContractError",
    "RangeError",
    "StateError",
    "closed_form",
    "family_size",
    "ghz_spec",
    "run_scenario",
    "run_suite",
    "sample_measurement",
    "stats_to_csv",
    "t_xor",
    "transcript",
    "wilson",
    "x_expansion",
]


def _dump(config):
    return config if isinstance(config, str) else json.dumps(config)


def run_scenario(config, jobs=1):
    """Run a scenario config (dict or JSON text) and return the stats document."""
    return json.loads(_core.run_scenario_json(_dump(config), jobs))


def stats_to_csv(stats):
    return _core.stats_to_csv(_dump(stats))


def transcript(config):
    """Full transcript of a single run; the config must have trials = 1."""
    return json.loads(_core.transcript_json(_dump(config)))


def run_suite(name="paper_tables", seed=20241016, jobs=1, criteria=()):
    return json.loads(_core.run_suite_json(name, seed, jobs, list(criteria)))
