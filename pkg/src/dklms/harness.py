"""Monte-Carlo experiment runner and its measurement products.

An experiment config is a plain nested dict (JSON compatible, see
DEFAULT_CONFIG for the schema). For every algorithm the harness runs
`monte_carlo_runs` independent simulations on fresh streams with derived
seeds, averages the per-round squared error over nodes and then over runs,
tracks dictionary sizes the same way and reduces everything in ascending
run-index order so results are reproducible to the byte.

Per-run seeds derive from the master seed and the absolute run index, so a
subset of run indices reproduces exactly the runs it names.
"""

import copy
import json
import logging
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .datasets import StreamSpec, TASKS, generate_stream, resolve_noise
from .errors import ConfigError, ShapeError
from .filters import (
    ALGORITHMS,
    SINGLE_NODE_ALGORITHMS,
    FilterHyperparams,
    init_network_state,
    network_round,
)
from .kernel import KernelParams, silverman_bandwidth
from .network import (
    COMBINATION_RULES,
    TOPOLOGY_KINDS,
    build_matrices,
    build_topology,
)

log = logging.getLogger("dklms")

try:
    from . import _fast
except ImportError:  # pragma: no cover - numba is a hard dependency, but stay usable
    _fast = None

# sub-stream tags hashed together with the master seed
_TAG_RUN = 1
_TAG_SIGMA = 2
_TAG_TOPOLOGY = 3

DEFAULT_CONFIG = {
    "stream": {
        "task": "channel",
        "node_count": 5,
        "rounds": 1000,
        "seed": 1,
        "noise_std": None,
    },
    "hyper": {
        "eta": 0.1,
        "epsilon": 0.3,
        "zeta": 0.95,
        "budget": None,
        "sigma": None,
    },
    "topology": {
        "kind": "random-geometric",
        "radius": 0.6,
        "rule": "uniform",
        "rule_c": None,
    },
    "algorithms": ["qdklms", "fbqdklms"],
    "monte_carlo_runs": 200,
    "floor_window": 0.1,
    "sigma_pilot_samples": 400,
    "use_fast": True,
    "sizes": [2, 4, 8, 16],
}


def merge_config(base, overlay, path=""):
    """Recursively overlay a partial config onto a base tree.

    Keys that do not exist in the base are rejected so typos surface with
    the offending key named.
    """
    out = copy.deepcopy(base)
    for key, value in overlay.items():
        dotted = f"{path}{key}"
        if key not in base:
            raise ConfigError(f"unknown config key: {dotted}")
        if isinstance(base[key], dict) and isinstance(value, dict):
            out[key] = merge_config(base[key], value, path=f"{dotted}.")
        else:
            out[key] = copy.deepcopy(value)
    return out


def set_by_dotted(cfg, dotted_key, value):
    """Set one value addressed by a dotted path, in place."""
    parts = dotted_key.split(".")
    node = cfg
    for i, part in enumerate(parts[:-1]):
        if not isinstance(node, dict) or part not in node:
            raise ConfigError(f"unknown config key: {dotted_key}")
        node = node[part]
    leaf = parts[-1]
    if not isinstance(node, dict) or leaf not in node:
        raise ConfigError(f"unknown config key: {dotted_key}")
    if isinstance(node[leaf], dict):
        raise ConfigError(f"config key is a section, not a value: {dotted_key}")
    node[leaf] = value


def _require(cond, message):
    if not cond:
        raise ConfigError(message)


def validate_config(cfg):
    """Fill in defaults, check every invariant and return the resolved tree."""
    cfg = merge_config(DEFAULT_CONFIG, cfg)
    s = cfg["stream"]
    _require(s["task"] in TASKS, f"stream.task: unknown task {s['task']!r}")
    _require(isinstance(s["node_count"], int) and s["node_count"] >= 1,
             f"stream.node_count: must be an integer >= 1, got {s['node_count']!r}")
    _require(isinstance(s["rounds"], int) and s["rounds"] >= 1,
             f"stream.rounds: must be an integer >= 1, got {s['rounds']!r}")
    _require(isinstance(s["seed"], int) and s["seed"] >= 0,
             f"stream.seed: must be a nonnegative integer, got {s['seed']!r}")
    _require(s["noise_std"] is None or float(s["noise_std"]) >= 0,
             f"stream.noise_std: must be >= 0, got {s['noise_std']!r}")

    h = cfg["hyper"]
    _require(float(h["eta"]) >= 0, f"hyper.eta: must be >= 0, got {h['eta']!r}")
    _require(float(h["epsilon"]) >= 0, f"hyper.epsilon: must be >= 0, got {h['epsilon']!r}")
    _require(0 < float(h["zeta"]) <= 1, f"hyper.zeta: must be in (0, 1], got {h['zeta']!r}")
    _require(h["budget"] is None or (isinstance(h["budget"], int) and h["budget"] >= 1),
             f"hyper.budget: must be an integer >= 1, got {h['budget']!r}")
    _require(h["sigma"] is None or float(h["sigma"]) > 0,
             f"hyper.sigma: must be > 0, got {h['sigma']!r}")

    t = cfg["topology"]
    _require(t["kind"] in TOPOLOGY_KINDS, f"topology.kind: unknown kind {t['kind']!r}")
    if t["kind"] == "random-geometric":
        _require(t["radius"] is not None and float(t["radius"]) > 0,
                 f"topology.radius: must be > 0, got {t['radius']!r}")
    _require(t["rule"] in COMBINATION_RULES, f"topology.rule: unknown rule {t['rule']!r}")
    _require(t["rule_c"] is None or t["rule_c"] in COMBINATION_RULES,
             f"topology.rule_c: unknown rule {t['rule_c']!r}")

    algs = cfg["algorithms"]
    _require(isinstance(algs, list) and len(algs) > 0, "algorithms: must be a nonempty list")
    for a in algs:
        _require(a in ALGORITHMS, f"algorithms: unknown algorithm {a!r}")
        if a in SINGLE_NODE_ALGORITHMS:
            _require(s["node_count"] == 1,
                     f"algorithms: {a} is a single-node baseline, set stream.node_count=1")
        if a == "fbqdklms":
            _require(h["budget"] is not None, "hyper.budget: required for fbqdklms")
    _require(len(set(algs)) == len(algs), "algorithms: duplicate entries")

    _require(isinstance(cfg["monte_carlo_runs"], int) and cfg["monte_carlo_runs"] >= 1,
             f"monte_carlo_runs: must be an integer >= 1, got {cfg['monte_carlo_runs']!r}")
    _require(0 < float(cfg["floor_window"]) <= 1,
             f"floor_window: must be in (0, 1], got {cfg['floor_window']!r}")
    _require(isinstance(cfg["sigma_pilot_samples"], int) and cfg["sigma_pilot_samples"] >= 2,
             f"sigma_pilot_samples: must be an integer >= 2, got {cfg['sigma_pilot_samples']!r}")
    _require(isinstance(cfg["use_fast"], bool), f"use_fast: must be a boolean, got {cfg['use_fast']!r}")
    sizes = cfg["sizes"]
    _require(isinstance(sizes, list) and len(sizes) > 0, "sizes: must be a nonempty list")
    for v in sizes:
        _require(isinstance(v, int) and v >= 1, f"sizes: entries must be integers >= 1, got {v!r}")
    return cfg


def derive_seed(master_seed, tag, index=0):
    """Stable 64-bit sub-seed for (master, tag, index)."""
    ss = np.random.SeedSequence([int(master_seed), int(tag), int(index)])
    return int(ss.generate_state(1, np.uint64)[0])


def derive_run_seeds(master_seed, run_indices):
    return [derive_seed(master_seed, _TAG_RUN, i) for i in run_indices]


def resolve_sigma(cfg):
    """Configured kernel width, or Silverman's rule on a single-node pilot."""
    if cfg["hyper"]["sigma"] is not None:
        return float(cfg["hyper"]["sigma"])
    s = cfg["stream"]
    pilot = StreamSpec(
        task=s["task"],
        node_count=1,
        rounds=cfg["sigma_pilot_samples"],
        seed=derive_seed(s["seed"], _TAG_SIGMA),
        noise_std=s["noise_std"],
    )
    X, _ = generate_stream(pilot)
    return silverman_bandwidth(X[:, 0, :]).sigma


def build_network(cfg):
    """Topology and combination matrices for the configured network."""
    s = cfg["stream"]
    t = cfg["topology"]
    topo = build_topology(
        t["kind"],
        s["node_count"],
        seed=derive_seed(s["seed"], _TAG_TOPOLOGY),
        radius=t["radius"],
    )
    return topo, build_matrices(topo, t["rule"], t["rule_c"])


@dataclass
class RunOutput:
    """Raw per-round products of a single simulation."""

    err2: np.ndarray        # (rounds, node_count) squared local errors
    sizes: np.ndarray       # (rounds, node_count) dictionary sizes after update
    seed: int
    state: object = None    # final NetworkFilterState when requested


def _run_slow(algorithm, mats, cfg, sigma, seed, want_state=False, events=None):
    s = cfg["stream"]
    h = cfg["hyper"]
    rounds = s["rounds"]
    spec = StreamSpec(s["task"], s["node_count"], rounds + 1, seed, s["noise_std"])
    X, D = generate_stream(spec)
    hyper = FilterHyperparams(
        eta=float(h["eta"]),
        kernel=KernelParams(sigma),
        epsilon=float(h["epsilon"]),
        zeta=float(h["zeta"]),
        budget=h["budget"] if algorithm == "fbqdklms" else None,
    )
    state = init_network_state(algorithm, mats, hyper, X[0], D[0])
    n = s["node_count"]
    err2 = np.empty((rounds, n))
    sizes = np.empty((rounds, n), dtype=np.int64)
    for r in range(1, rounds + 1):
        _, es = network_round(state, X[r], D[r], events=events)
        err2[r - 1] = es * es
        for q, node in enumerate(state.nodes):
            sizes[r - 1, q] = len(node.dictionary)
    return RunOutput(err2=err2, sizes=sizes, seed=seed, state=state if want_state else None)


def _run_fast(algorithm, mats, cfg, sigma, seed):
    s = cfg["stream"]
    h = cfg["hyper"]
    spec = StreamSpec(s["task"], s["node_count"], s["rounds"] + 1, seed, s["noise_std"])
    X, D = generate_stream(spec)
    err2, sizes = _fast.simulate(
        algorithm, mats.A, mats.C, X, D,
        float(h["eta"]), float(h["epsilon"]), float(h["zeta"]), h["budget"], sigma,
    )
    return RunOutput(err2=err2, sizes=sizes, seed=seed)


def run_single(cfg, algorithm, run_index, sigma=None, mats=None, want_state=False, events=None):
    """One simulation at an absolute run index; returns its raw traces.

    Requesting the final state or an event log forces the round-level path;
    otherwise the compiled engine is used when enabled and available.
    """
    cfg = validate_config(cfg)
    if algorithm not in ALGORITHMS:
        raise ConfigError(f"algorithms: unknown algorithm {algorithm!r}")
    if sigma is None:
        sigma = resolve_sigma(cfg)
    if mats is None:
        _, mats = build_network(cfg)
    seed = derive_seed(cfg["stream"]["seed"], _TAG_RUN, run_index)
    fast_ok = cfg["use_fast"] and _fast is not None and not want_state and events is None
    if fast_ok:
        return _run_fast(algorithm, mats, cfg, sigma, seed)
    return _run_slow(algorithm, mats, cfg, sigma, seed, want_state=want_state, events=events)


@dataclass
class MetricsTrace:
    """Monte-Carlo averaged learning curves for one experiment."""

    config: dict
    algorithms: list
    rounds: int
    sigma: float
    run_seeds: list
    mse: dict = field(default_factory=dict)            # algorithm -> (rounds,)
    dict_size: dict = field(default_factory=dict)      # algorithm -> (rounds,)
    final_sizes: dict = field(default_factory=dict)    # algorithm -> (node_count,)
    mse_floor: dict = field(default_factory=dict)      # algorithm -> float

    def avg_final_dict_size(self, algorithm):
        return float(np.mean(self.final_sizes[algorithm]))


def floor_window_length(rounds, floor_window):
    return max(1, int(round(rounds * float(floor_window))))


def run_experiment(cfg, run_indices=None):
    """Monte-Carlo averaged MSE and dictionary-size evolution per algorithm."""
    cfg = validate_config(cfg)
    s = cfg["stream"]
    rounds = s["rounds"]
    n = s["node_count"]
    sigma = resolve_sigma(cfg)
    _, mats = build_network(cfg)
    if run_indices is None:
        run_indices = range(cfg["monte_carlo_runs"])
    run_indices = sorted(int(i) for i in run_indices)
    if not run_indices:
        raise ConfigError("monte_carlo_runs: need at least one run index")
    seeds = derive_run_seeds(s["seed"], run_indices)

    engine = "fast" if (cfg["use_fast"] and _fast is not None) else "slow"
    log.info("experiment: task=%s algorithms=%s runs=%d engine=%s sigma=%.6g",
             s["task"], cfg["algorithms"], len(run_indices), engine, sigma)

    trace = MetricsTrace(
        config=cfg,
        algorithms=list(cfg["algorithms"]),
        rounds=rounds,
        sigma=sigma,
        run_seeds=seeds,
    )
    win = floor_window_length(rounds, cfg["floor_window"])
    for alg in cfg["algorithms"]:
        sum_mse = np.zeros(rounds)
        sum_size = np.zeros(rounds)
        sum_final = np.zeros(n)
        for idx in run_indices:
            out = run_single(cfg, alg, idx, sigma=sigma, mats=mats)
            sum_mse += out.err2.mean(axis=1)
            sum_size += out.sizes.mean(axis=1)
            sum_final += out.sizes[-1]
        k = float(len(run_indices))
        trace.mse[alg] = sum_mse / k
        trace.dict_size[alg] = sum_size / k
        trace.final_sizes[alg] = sum_final / k
        trace.mse_floor[alg] = float(np.mean(trace.mse[alg][-win:]))
    return trace


@dataclass
class SweepResult:
    """MSE floor and converged dictionary size versus network size."""

    config: dict
    sizes: list
    sigma: float
    rows: list = field(default_factory=list)  # dicts with algorithm/node_count/...


def sweep_network_size(cfg, sizes=None):
    """Run the experiment once per network size and collect the floors."""
    cfg = validate_config(cfg)
    if sizes is None:
        sizes = cfg["sizes"]
    sizes = [int(v) for v in sizes]
    if not sizes or any(v < 1 for v in sizes):
        raise ConfigError(f"sizes: entries must be integers >= 1, got {sizes!r}")
    result = SweepResult(config=cfg, sizes=sizes, sigma=resolve_sigma(cfg))
    traces = {}
    for size in sizes:
        sub = copy.deepcopy(cfg)
        sub["stream"]["node_count"] = size
        traces[size] = run_experiment(sub)
    for alg in cfg["algorithms"]:
        for size in sizes:
            t = traces[size]
            result.rows.append({
                "algorithm": alg,
                "node_count": size,
                "mse_floor": t.mse_floor[alg],
                "avg_final_dict_size": t.avg_final_dict_size(alg),
            })
    return result


def calibrate_budget(cfg):
    """Budget that matches the observed steady-state quantized dictionary size.

    Runs the configured experiment with qdklms alone and floors the mean
    final dictionary size, so a budgeted filter at this value cannot end up
    with a larger mean dictionary than the unbudgeted one.
    """
    sub = copy.deepcopy(cfg)
    sub["algorithms"] = ["qdklms"]
    sub["hyper"]["budget"] = None
    sub = validate_config(sub)
    trace = run_experiment(sub)
    cfg = sub
    mean_final = trace.avg_final_dict_size("qdklms")
    return {
        "task": cfg["stream"]["task"],
        "qdklms_mean_final_dict_size": mean_final,
        "budget": max(1, int(math.floor(mean_final))),
    }


def _fmt(x):
    return repr(float(x))


def format_metrics_csv(trace):
    lines = ["algorithm,round,mse,avg_dict_size"]
    for alg in trace.algorithms:
        m = trace.mse[alg]
        d = trace.dict_size[alg]
        for r in range(trace.rounds):
            lines.append(f"{alg},{r + 1},{_fmt(m[r])},{_fmt(d[r])}")
    return "\n".join(lines) + "\n"


def format_sweep_csv(result):
    lines = ["algorithm,node_count,mse_floor,avg_final_dict_size"]
    for row in result.rows:
        lines.append(
            f"{row['algorithm']},{row['node_count']},"
            f"{_fmt(row['mse_floor'])},{_fmt(row['avg_final_dict_size'])}"
        )
    return "\n".join(lines) + "\n"


def metrics_sidecar(trace):
    return {
        "kind": "run",
        "config": trace.config,
        "sigma": trace.sigma,
        "run_seeds": trace.run_seeds,
        "mse_floor": {a: trace.mse_floor[a] for a in trace.algorithms},
        "avg_final_dict_size": {a: trace.avg_final_dict_size(a) for a in trace.algorithms},
        "final_dict_sizes": {a: [float(v) for v in trace.final_sizes[a]] for a in trace.algorithms},
    }


def sweep_sidecar(result):
    return {
        "kind": "sweep",
        "config": result.config,
        "sizes": result.sizes,
        "sigma": result.sigma,
        "rows": result.rows,
    }


def format_json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def publish_files(out_dir, files):
    """Write named text files into a directory, all or nothing.

    On any failure every file written by this call is removed again, so a
    failed invocation leaves no partial outputs behind.
    """
    os.makedirs(out_dir, exist_ok=True)
    written = []
    try:
        for name, text in files.items():
            path = os.path.join(out_dir, name)
            written.append(path)
            with open(path, "w", newline="\n") as f:
                f.write(text)
    except BaseException:
        for path in written:
            try:
                os.unlink(path)
            except OSError:
                pass
        raise
    return written


def write_metrics(trace, out_dir, stem="metrics"):
    """Emit the metrics CSV plus its JSON sidecar; returns the paths."""
    files = {
        f"{stem}.csv": format_metrics_csv(trace),
        f"{stem}.json": format_json(metrics_sidecar(trace)),
    }
    return publish_files(out_dir, files)


def write_sweep(result, out_dir, stem="sweep"):
    files = {
        f"{stem}.csv": format_sweep_csv(result),
        f"{stem}.json": format_json(sweep_sidecar(result)),
    }
    return publish_files(out_dir, files)
