"""Groupoid cochain calculus (Python bindings)."""

import json as _json

from ._gcalc import (  # noqa: F401
    Cochain,
    Complex,
    GcalcError,
    cochain,
    cochain_from_callable,
    complex_from_json,
    config_roundtrip,
    dw_partition_function,
    euler_sum,
    mednykh_oracle,
    mesh,
    refine_limit,
    riemann_sum,
    star,
    star_value,
    ve1,
    wiener_estimate,
)
from ._gcalc import _run_command_json, _run_criterion_json


def run(config_text):
    """Run an experiment described by config text; returns (report dict, exit code)."""
    report, code = _run_command_json(config_text)
    return _json.loads(report), code


def criterion(number, seed=1):
    """Run one acceptance criterion (1..11) and return its report dict."""
    return _json.loads(_run_criterion_json(number, seed))
