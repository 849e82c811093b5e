"""Bayesian inverse problems for 1-D hyperbolic conservation laws."""

import numpy as np

from . import _hypbayes
from ._hypbayes import (
    ConfigError,
    Error,
    ForwardError,
    preset,
    rate_check,
    w1,
    w1_brute,
)


def forward(config, params, cells=None):
    """Window observations G(u) as a float array."""
    return np.asarray(_hypbayes.forward(config, list(map(float, params)), cells))


def solve(config, params=None, cells=None):
    """Forward solution at time T; every field is returned as a float array."""
    if params is not None:
        params = list(map(float, params))
    return {k: np.asarray(v) for k, v in _hypbayes.solve(config, params, cells).items()}


def run_experiment(config, out="", workers=1):
    r = _hypbayes.run_experiment(config, out, workers)
    for key in ("posterior_mean", "posterior_map", "data"):
        r[key] = np.asarray(r[key])
    return r


__all__ = [
    "ConfigError",
    "Error",
    "ForwardError",
    "forward",
    "preset",
    "rate_check",
    "run_experiment",
    "solve",
    "w1",
    "w1_brute",
]
