"""The algorithm family, expressed as synchronous per-round network steps.

Five variants share one round routine:

- klms: single node, every observation becomes a center.
- qklms: single node with online vector quantization.
- dklms: diffusion over a network, quantization disabled (exact repeats
  still merge, so it equals qdklms with threshold zero).
- qdklms: diffusion with quantization.
- fbqdklms: qdklms plus significance tracking and minimum-significance
  pruning against a hard dictionary budget.

A round has two phases. First every node fuses the current observations
through C, predicts on the fused point and forms its local error against its
own desired value. Then every node combines the round's errors through A and
updates its dictionary with the diffused innovation, deciding merge-or-add
against its raw observation.
"""

from dataclasses import dataclass, field

import numpy as np

from .dictionary import Dictionary
from .errors import ConfigError, ShapeError
from .kernel import KernelParams
from .network import CombinationMatrices

ALGORITHMS = ("klms", "qklms", "dklms", "qdklms", "fbqdklms")
SINGLE_NODE_ALGORITHMS = ("klms", "qklms")
_QUANTIZED = ("qklms", "qdklms", "fbqdklms")


@dataclass(frozen=True)
class FilterHyperparams:
    """Step size, quantization threshold, forgetting factor, budget, kernel.

    A zero step size is allowed (it freezes the filter, which is useful as a
    diagnostic); the threshold must be nonnegative and the forgetting factor
    must lie in (0, 1].
    """

    eta: float
    kernel: KernelParams
    epsilon: float = 0.0
    zeta: float = 1.0
    budget: int | None = None

    def __post_init__(self):
        if not self.eta >= 0:
            raise ConfigError(f"hyper.eta: must be >= 0, got {self.eta!r}")
        if not self.epsilon >= 0:
            raise ConfigError(f"hyper.epsilon: must be >= 0, got {self.epsilon!r}")
        if not 0 < self.zeta <= 1:
            raise ConfigError(f"hyper.zeta: must be in (0, 1], got {self.zeta!r}")
        if self.budget is not None and int(self.budget) < 1:
            raise ConfigError(f"hyper.budget: must be >= 1, got {self.budget!r}")


@dataclass
class NodeState:
    dictionary: Dictionary
    last_output: float = 0.0
    last_error: float = 0.0
    last_diffused_error: float = 0.0


@dataclass
class NetworkFilterState:
    algorithm: str
    nodes: list
    matrices: CombinationMatrices
    hyper: FilterHyperparams
    round_index: int = 0


def init_network_state(algorithm, matrices, hyper, first_inputs, first_desired):
    """Validate the combination and seed one dictionary per node.

    Every node's dictionary starts with its own first observation carrying
    weight eta*d0.
    """
    if algorithm not in ALGORITHMS:
        raise ConfigError(f"algorithm: unknown algorithm {algorithm!r}, expected one of {ALGORITHMS}")
    n = matrices.A.shape[0]
    if algorithm in SINGLE_NODE_ALGORITHMS and n != 1:
        raise ConfigError(f"algorithm: {algorithm} is a single-node baseline, got node_count={n}")
    if algorithm == "fbqdklms" and hyper.budget is None:
        raise ConfigError("hyper.budget: required for fbqdklms")
    x0 = np.asarray(first_inputs, dtype=float)
    if x0.ndim == 1:
        x0 = x0.reshape(n, -1)
    d0 = np.asarray(first_desired, dtype=float).ravel()
    if x0.shape[0] != n or d0.size != n:
        raise ShapeError(f"init: expected {n} first observations and desired values")
    budget = hyper.budget if algorithm == "fbqdklms" else None
    nodes = [
        NodeState(Dictionary.initial(x0[q], hyper.eta, d0[q], budget=budget))
        for q in range(n)
    ]
    return NetworkFilterState(algorithm=algorithm, nodes=nodes, matrices=matrices, hyper=hyper)


def network_round(state, observations, desired, events=None):
    """Advance every node by one synchronous round. Mutates the state.

    Returns the per-node outputs and per-node local errors of the round.
    When `events` is a list, every significance-relevant dictionary change
    under fbqdklms is appended to it as ("add", node, center, weight, |e'|),
    ("merge", node, j_star, increment) or ("prune", node, index), which is
    enough to replay the significance recursions externally.
    """
    n = len(state.nodes)
    X = np.asarray(observations, dtype=float)
    if X.ndim == 1:
        X = X.reshape(n, -1)
    if X.shape[0] != n:
        raise ShapeError(f"network_round: {X.shape[0]} observations for {n} nodes")
    d = np.asarray(desired, dtype=float).ravel()
    if d.size != n:
        raise ShapeError(f"network_round: {d.size} desired values for {n} nodes")

    hp = state.hyper
    kp = hp.kernel
    quantized = state.algorithm != "klms"
    eps = hp.epsilon if state.algorithm in _QUANTIZED else 0.0
    fb = state.algorithm == "fbqdklms"

    # phase 1: fuse, predict, local errors
    fused = state.matrices.C.T @ X
    ys = np.empty(n)
    for q, node in enumerate(state.nodes):
        ys[q] = node.dictionary.predict(fused[q], kp)
    es = d - ys

    # phase 2: diffuse errors, update dictionaries
    eds = state.matrices.A @ es
    for q, node in enumerate(state.nodes):
        dic = node.dictionary
        x = X[q]
        ed = float(eds[q])
        if not quantized:
            dic.add_entry(x, hp.eta, ed)
        else:
            j, dist = dic.nearest_entry(x)
            if dist <= eps:
                if fb:
                    dic.significance_on_merge(j, hp.eta, ed, hp.zeta, kp)
                    if events is not None:
                        events.append(("merge", q, j, hp.eta * ed))
                dic.merge_update(j, hp.eta, ed)
            else:
                if fb:
                    dic.significance_on_add(abs(ed), hp.zeta, x, kp)
                    if events is not None:
                        events.append(("add", q, x.copy(), hp.eta * ed, abs(ed)))
                dic.add_entry(x, hp.eta, ed)
                if fb:
                    pruned = dic.prune_min_significance(hp.zeta, kp)
                    if pruned is not None and events is not None:
                        events.append(("prune", q, pruned[0]))
        node.last_output = float(ys[q])
        node.last_error = float(es[q])
        node.last_diffused_error = ed
    state.round_index += 1
    return ys, es


def klms_step(state, x, d):
    """Single-node step where every observation becomes a center."""
    if state.algorithm != "klms":
        raise ConfigError(f"klms_step: state runs {state.algorithm!r}")
    ys, es = network_round(state, [x], [d])
    return float(ys[0]), float(es[0])


def qklms_step(state, x, d):
    """Single-node quantized step, the degenerate one-node network round."""
    if state.algorithm != "qklms":
        raise ConfigError(f"qklms_step: state runs {state.algorithm!r}")
    ys, es = network_round(state, [x], [d])
    return float(ys[0]), float(es[0])


def dklms_step(state, observations, desired):
    """Diffusion round with quantization disabled (unbounded dictionaries)."""
    if state.algorithm != "dklms":
        raise ConfigError(f"dklms_step: state runs {state.algorithm!r}")
    return network_round(state, observations, desired)
