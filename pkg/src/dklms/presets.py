"""Shipped experiment presets.

Six presets cover the three benchmark tasks, once as 5-node convergence
experiments and once as network-size sweeps. Budgets were produced by the
`calibrate-budget` subcommand on the matching preset (floored mean final
qdklms dictionary size) and are frozen here; rerun the calibration to
regenerate them after changing thresholds or stream parameters.
"""

import copy

from .errors import ConfigError


def _preset(task, rounds, seed, epsilon, budget, noise, node_count=5, extra=None):
    cfg = {
        "stream": {
            "task": task,
            "node_count": node_count,
            "rounds": rounds,
            "seed": seed,
            "noise_std": noise,
        },
        "hyper": {
            "eta": 0.1,
            "epsilon": epsilon,
            "zeta": 0.95,
            "budget": budget,
        },
        "algorithms": ["qdklms", "fbqdklms"],
        "monte_carlo_runs": 200,
    }
    if extra:
        cfg.update(copy.deepcopy(extra))
    return cfg


_SWEEP_SIZES = {"sizes": [2, 4, 8, 16]}

PRESETS = {
    "channel-fig3": _preset("channel", 1000, 301, 0.6, 208, 0.5),
    "crescent-fig4": _preset("crescent", 2000, 401, 0.2, 123, 0.3),
    "spiral-fig5": _preset("spiral", 2000, 501, 0.1, 195, 0.1),
    "channel-fig6": _preset("channel", 1000, 601, 0.6, 208, 0.5, extra=_SWEEP_SIZES),
    "crescent-fig7": _preset("crescent", 2000, 701, 0.2, 123, 0.3, extra=_SWEEP_SIZES),
    "spiral-fig8": _preset("spiral", 2000, 801, 0.1, 195, 0.1, extra=_SWEEP_SIZES),
}


def preset_names():
    return tuple(sorted(PRESETS))


def get_preset(name):
    """Deep copy of a named preset overlay."""
    if name not in PRESETS:
        raise ConfigError(f"preset: unknown preset {name!r}, expected one of {preset_names()}")
    return copy.deepcopy(PRESETS[name])
