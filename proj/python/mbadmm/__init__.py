"""Multi-block ADMM solvers for block-separable convex programs."""

import json

from ._core import (
    GENERATORS,
    SCHEMES,
    Block,
    ConfigError,
    DimensionMismatch,
    Error,
    FormatError,
    GeneratorError,
    InvalidArgument,
    IoError,
    LocalSet,
    Objective,
    OracleFailure,
    Problem,
    SolveReport,
    SolverConfig,
    WrongScheme,
    oracle_solve,
    project_box,
    project_zero_sum,
    prox_l1,
    solve,
)
from . import _core


def make_instance(generator, seed=0, **params):
    """Generated instance as a dict with problem, true_x, attack_support, oracle_objective and x0."""
    return _core._make_instance(generator, json.dumps(params), seed)


def run_scenario(path, out="", workers=0):
    """Runs a scenario file. Returns (exit_code, summary dict)."""
    code, text = _core._run_scenario(str(path), str(out), workers)
    return code, json.loads(text)


__all__ = [
    "GENERATORS", "SCHEMES", "Block", "ConfigError", "DimensionMismatch", "Error", "FormatError",
    "GeneratorError", "InvalidArgument", "IoError", "LocalSet", "Objective", "OracleFailure", "Problem",
    "SolveReport", "SolverConfig", "WrongScheme", "make_instance", "oracle_solve", "project_box",
    "project_zero_sum", "prox_l1", "run_scenario", "solve",
]
