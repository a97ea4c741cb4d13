"""Python front end for the vddp library."""

import json

from ._core import (
    ConfigError,
    PrecisionCollapse,
    TransportError,
    laplace_params,
    pmf,
    privacy,
    rr_epsilon,
    sample,
)
from . import _core

__all__ = [
    "ConfigError",
    "PrecisionCollapse",
    "TransportError",
    "laplace_params",
    "pmf",
    "privacy",
    "rr_epsilon",
    "run_session",
    "sample",
]


def run_session(config):
    """Run one session; config is a dict or a JSON string. Returns the outcome dict."""
    text = config if isinstance(config, str) else json.dumps(config)
    return json.loads(_core.run_session(text))
