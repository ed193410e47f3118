"""Generalized Riesz potentials on generalized weighted local Morrey spaces.

Thin wrapper over the compiled core: value types (kernels, weights, shape
functions, test functions), the potential operator and norms, Muckenhoupt
and Hardy diagnostics, and the config-driven experiment runner.
"""

import json as _json

from ._core import (
    ConfigError,
    HalfLineFunction,
    Kernel,
    NumericError,
    PhiFunction,
    PreconditionError,
    TestFunction,
    Weight,
    apq_characteristic,
    best_constant_B,
    library_function,
    maximal_apply,
    morrey_norm_global,
    morrey_norm_local,
    preset_names,
    riesz_apply,
    run_experiment_json,
    supremal_transform,
    tail_integral,
    tilde_rho,
    weak_morrey_norm_local,
    weighted_hardy,
)

__all__ = [
    "ConfigError",
    "HalfLineFunction",
    "Kernel",
    "NumericError",
    "PhiFunction",
    "PreconditionError",
    "TestFunction",
    "Weight",
    "apq_characteristic",
    "best_constant_B",
    "library_function",
    "maximal_apply",
    "morrey_norm_global",
    "morrey_norm_local",
    "preset_names",
    "riesz_apply",
    "run_experiment",
    "run_experiment_json",
    "supremal_transform",
    "tail_integral",
    "tilde_rho",
    "weak_morrey_norm_local",
    "weighted_hardy",
]

__version__ = "0.1.0"


def run_experiment(config):
    """Runs a boundedness experiment and returns the report as a dict.

    ``config`` is a dict or a JSON string following config schema version 1
    (the same schema the command-line ``experiment`` subcommand reads).
    """
    if not isinstance(config, str):
        config = _json.dumps(config)
    return _json.loads(run_experiment_json(config))
