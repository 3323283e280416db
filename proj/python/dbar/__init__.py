"""Integral solution operators for the d-bar equation on product domains."""

import json

from ._dbar import (
    Expr,
    ExponentChoice,
    NumericalError,
    ParseError,
    ValidationError,
    decompose_inverse_product,
    exponent_choice,
    kernel_derivative,
    parse,
    satisfies_bound_system,
)
from . import _dbar

__all__ = [
    "Expr",
    "ExponentChoice",
    "NumericalError",
    "ParseError",
    "ValidationError",
    "decompose_inverse_product",
    "exponent_choice",
    "kernel_derivative",
    "parse",
    "run",
    "satisfies_bound_system",
    "solve_t",
    "solve_ttilde",
]


def _domains(domains):
    return domains if isinstance(domains, str) else json.dumps(domains)


def solve_t(domains, components, points, nr=64, ntheta=64, nboundary=0, margin=1e-3, threads=0):
    """T f at each point. `domains` is a list of domain descriptors as in the run config."""
    return _dbar.solve_t(_domains(domains), list(components), [list(p) for p in points],
                         nr, ntheta, nboundary, margin, threads)


def solve_ttilde(domains, components, points, nr=64, ntheta=64, nboundary=0, margin=1e-3, threads=0):
    """T~ f at each point."""
    return _dbar.solve_ttilde(_domains(domains), list(components), [list(p) for p in points],
                              nr, ntheta, nboundary, margin, threads)


def run(config):
    """Runs a config (dict or JSON text); returns (exit_code, report dict)."""
    text = config if isinstance(config, str) else json.dumps(config)
    code, report = _dbar.run_config(text)
    return code, json.loads(report)
