"""Network topology and the stochastic combination matrices.

A is row stochastic and combines errors: node q receives sum_l A[q,l]*e_l.
C is column stochastic and fuses observations: node q receives
sum_l C[l,q]*x_l. Both are supported only on the neighborhood graph, which
always contains self loops.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import ConfigError, ShapeError, StateError, TopologyError

TOPOLOGY_KINDS = ("ring", "random-geometric", "complete")
COMBINATION_RULES = ("uniform", "metropolis")


@dataclass
class Topology:
    node_count: int
    adjacency: np.ndarray
    kind: str = ""
    seed: int | None = None
    positions: np.ndarray | None = field(default=None, repr=False)


@dataclass
class CombinationMatrices:
    """A combines errors (rows sum to 1), C fuses observations (columns sum to 1)."""

    A: np.ndarray
    C: np.ndarray


def _is_connected(adjacency):
    if adjacency.shape[0] == 1:
        return True
    n_comp, _ = connected_components(csr_matrix(adjacency), directed=False)
    return n_comp == 1


def build_topology(kind, node_count, seed=0, radius=None, max_retries=200):
    """Build a connected topology with self loops.

    Random-geometric topologies place nodes uniformly on the unit square and
    connect pairs within `radius`, redrawing positions until the graph is
    connected (up to `max_retries` attempts).
    """
    if kind not in TOPOLOGY_KINDS:
        raise ConfigError(f"topology.kind: unknown kind {kind!r}, expected one of {TOPOLOGY_KINDS}")
    n = int(node_count)
    if n < 1:
        raise ConfigError(f"topology.node_count: must be >= 1, got {node_count}")

    if kind == "complete":
        adj = np.ones((n, n), dtype=bool)
        return Topology(n, adj, kind=kind, seed=seed)

    if kind == "ring":
        adj = np.zeros((n, n), dtype=bool)
        idx = np.arange(n)
        adj[idx, idx] = True
        adj[idx, (idx + 1) % n] = True
        adj[idx, (idx - 1) % n] = True
        return Topology(n, adj, kind=kind, seed=seed)

    if radius is None or not float(radius) > 0:
        raise ConfigError("topology.radius: a positive radius is required for random-geometric")
    radius = float(radius)
    rng = np.random.default_rng(seed)
    for _ in range(max_retries):
        pos = rng.uniform(size=(n, 2))
        diff = pos[:, None, :] - pos[None, :, :]
        d2 = (diff * diff).sum(axis=2)
        adj = d2 <= radius * radius
        np.fill_diagonal(adj, True)
        if _is_connected(adj):
            return Topology(n, adj, kind=kind, seed=seed, positions=pos)
    raise TopologyError(
        f"random-geometric: no connected placement of {n} nodes at radius {radius} "
        f"after {max_retries} attempts"
    )


def build_combination_matrix(topo, rule):
    """Row-stochastic combination weights on the neighborhood graph.

    uniform gives every neighbor (self included) weight 1/|N_q|. metropolis
    gives the symmetric pairwise weights 1/max(|N_q|, |N_l|) with the self
    weight absorbing the residual, which makes the matrix doubly stochastic.
    """
    if rule not in COMBINATION_RULES:
        raise ConfigError(f"topology.rule: unknown rule {rule!r}, expected one of {COMBINATION_RULES}")
    adj = topo.adjacency
    deg = adj.sum(axis=1).astype(float)
    if rule == "uniform":
        return adj / deg[:, None]
    pair = np.where(adj, 1.0 / np.maximum(deg[:, None], deg[None, :]), 0.0)
    np.fill_diagonal(pair, 0.0)
    w = pair.copy()
    np.fill_diagonal(w, 1.0 - pair.sum(axis=1))
    return w


def build_matrices(topo, rule, rule_c=None):
    """Build the pair (A, C); C is the transpose of a row-stochastic matrix."""
    a = build_combination_matrix(topo, rule)
    c = a if rule_c is None or rule_c == rule else build_combination_matrix(topo, rule_c)
    return CombinationMatrices(A=a, C=c.T.copy())


def fuse_observations(C, node, observations, present=None):
    """Convex combination of neighborhood observations at one node.

    `present` optionally masks nodes whose data is missing this round; their
    weight goes to zero and the remaining weights renormalize. All weight
    masked away is an error.
    """
    try:
        obs = np.asarray(observations, dtype=float)
    except ValueError as exc:
        raise ShapeError(f"fuse_observations: ragged observations ({exc})") from exc
    if obs.ndim != 2:
        raise ShapeError(f"fuse_observations: expected one vector per node, got {obs.ndim}-d data")
    if obs.shape[0] != C.shape[0]:
        raise ShapeError(
            f"fuse_observations: {obs.shape[0]} observations for {C.shape[0]} nodes"
        )
    w = np.array(C[:, node], dtype=float)
    if present is not None:
        w = np.where(np.asarray(present, dtype=bool), w, 0.0)
        total = w.sum()
        if not total > 0:
            raise StateError(f"fuse_observations: node {node} has no present neighbor data")
        w = w / total
    return obs.T @ w


def diffuse_errors(A, errors):
    """One diffusion step over the error vector: returns A @ errors."""
    e = np.asarray(errors, dtype=float).ravel()
    if e.size != A.shape[1]:
        raise ShapeError(f"diffuse_errors: {e.size} errors for {A.shape[1]} nodes")
    return A @ e


def network_to_json(topo, mats):
    """JSON-friendly dump of the topology and both matrices."""
    neighbors = [sorted(int(l) for l in np.flatnonzero(topo.adjacency[q])) for q in range(topo.node_count)]
    out = {
        "kind": topo.kind,
        "seed": topo.seed,
        "node_count": topo.node_count,
        "neighbors": neighbors,
        "A": [[float(v) for v in row] for row in mats.A],
        "C": [[float(v) for v in row] for row in mats.C],
    }
    if topo.positions is not None:
        out["positions"] = [[float(v) for v in p] for p in topo.positions]
    return out
