"""Random-matrix eigenvector decorrelation laboratory.

Thin python layer over the compiled core. Everything lives in ``_core``;
this package re-exports the public names and adds a couple of conveniences
for working with JSON experiment configs.
"""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import (  # noqa: F401
    CONFIG_FORMAT,
    GIT_HASH,
    ExperimentConfig,
    __version__,
    run_experiment,
)


def config_from_dict(config):
    """Build an :class:`ExperimentConfig` from a plain dict."""
    return ExperimentConfig.from_json_text(_json.dumps(config))


def run(config):
    """Run an experiment from an :class:`ExperimentConfig`, dict, or JSON text."""
    if isinstance(config, dict):
        config = config_from_dict(config)
    elif isinstance(config, str):
        config = ExperimentConfig.from_json_text(config)
    return run_experiment(config)
