"""Command-line front door.

Subcommands: run (one experiment), sweep (experiment per network size),
datasets gen (emit raw samples), calibrate-budget (derive a budget from the
observed quantized dictionary size). Configuration resolves in order
preset, config file, KEY=VALUE overrides, --seed, with later sources
winning; everything validates before any computation starts.

Exit codes: 0 success, 1 configuration or usage error, 2 runtime error.
"""

import argparse
import json
import logging
import sys

from . import harness, presets
from .datasets import StreamSpec, TASK_DIM, generate_stream, resolve_noise
from .errors import ConfigError, DklmsError
from .network import build_matrices, build_topology, network_to_json


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _add_common(sp, with_sizes=False):
    sp.add_argument("--preset", help="named preset to start from")
    sp.add_argument("--config", help="JSON config file overlaying the preset")
    sp.add_argument("--out", default="out", help="output directory (default: out)")
    sp.add_argument("--seed", type=int, help="override stream.seed")
    sp.add_argument("--verbose", action="store_true", help="print the resolved config")
    if with_sizes:
        sp.add_argument("--sizes", help="comma-separated network sizes, e.g. 2,4,8,16")
    sp.add_argument(
        "overrides",
        nargs="*",
        metavar="KEY=VALUE",
        help="dotted config overrides, values parsed as JSON when possible",
    )


def build_parser():
    p = _Parser(prog="dklms", description="Distributed kernel LMS experiment runner")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one Monte-Carlo experiment")
    _add_common(run)
    run.add_argument("--dump-network", action="store_true", help="also write network.json")
    run.add_argument(
        "--dump-dictionaries",
        action="store_true",
        help="also write the final dictionaries of run 0 as dictionaries.json",
    )

    sweep = sub.add_parser("sweep", help="run the experiment for several network sizes")
    _add_common(sweep, with_sizes=True)
    sweep.add_argument("--dump-network", action="store_true",
                       help="also write network-<size>.json per size")

    ds = sub.add_parser("datasets", help="dataset utilities")
    ds_sub = ds.add_subparsers(dest="datasets_command", required=True)
    gen = ds_sub.add_parser("gen", help="emit raw stream samples as CSV")
    _add_common(gen)

    cal = sub.add_parser("calibrate-budget", help="derive a budget from qdklms dictionary sizes")
    _add_common(cal)
    return p


def _parse_override(text):
    if "=" not in text:
        raise ConfigError(f"override: expected KEY=VALUE, got {text!r}")
    key, raw = text.split("=", 1)
    key = key.strip()
    if not key:
        raise ConfigError(f"override: empty key in {text!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def _resolve_config(args):
    cfg = harness.merge_config(harness.DEFAULT_CONFIG, {})
    if args.preset:
        cfg = harness.merge_config(cfg, presets.get_preset(args.preset))
    if args.config:
        try:
            with open(args.config) as f:
                loaded = json.load(f)
        except OSError as exc:
            raise ConfigError(f"config: cannot read {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: {args.config} is not valid JSON: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError(f"config: {args.config} must hold a JSON object")
        cfg = harness.merge_config(cfg, loaded)
    for item in args.overrides:
        key, value = _parse_override(item)
        harness.set_by_dotted(cfg, key, value)
    if args.seed is not None:
        cfg["stream"]["seed"] = args.seed
    if args.command == "calibrate-budget":
        # the budget is this command's output, not an input
        cfg["algorithms"] = ["qdklms"]
        cfg["hyper"]["budget"] = None
    cfg = harness.validate_config(cfg)
    if args.verbose:
        logging.basicConfig(level=logging.INFO, format="%(message)s")
        print(json.dumps(cfg, indent=2, sort_keys=True))
    return cfg


def _dump_network_files(cfg, stem="network"):
    topo, mats = harness.build_network(cfg)
    return {f"{stem}.json": harness.format_json(network_to_json(topo, mats))}


def _dump_dictionaries(cfg):
    """Final dictionaries of run index 0, per algorithm and node."""
    sigma = harness.resolve_sigma(cfg)
    _, mats = harness.build_network(cfg)
    out = {}
    for alg in cfg["algorithms"]:
        run = harness.run_single(cfg, alg, 0, sigma=sigma, mats=mats, want_state=True)
        out[alg] = [node.dictionary.to_json_dict(full=True) for node in run.state.nodes]
    return {"dictionaries.json": harness.format_json({"run_index": 0, "dictionaries": out})}


def _cmd_run(args, cfg):
    trace = harness.run_experiment(cfg)
    files = {
        "metrics.csv": harness.format_metrics_csv(trace),
        "metrics.json": harness.format_json(harness.metrics_sidecar(trace)),
    }
    if args.dump_network:
        files.update(_dump_network_files(cfg))
    if args.dump_dictionaries:
        files.update(_dump_dictionaries(cfg))
    harness.publish_files(args.out, files)
    for alg in trace.algorithms:
        print(f"{alg}: mse_floor={trace.mse_floor[alg]:.6g} "
              f"avg_final_dict_size={trace.avg_final_dict_size(alg):.6g}")
    return 0


def _parse_sizes(text):
    try:
        sizes = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"sizes: expected comma-separated integers, got {text!r}") from exc
    if not sizes:
        raise ConfigError(f"sizes: expected comma-separated integers, got {text!r}")
    return sizes


def _cmd_sweep(args, cfg):
    sizes = _parse_sizes(args.sizes) if args.sizes else cfg["sizes"]
    result = harness.sweep_network_size(cfg, sizes)
    files = {
        "sweep.csv": harness.format_sweep_csv(result),
        "sweep.json": harness.format_json(harness.sweep_sidecar(result)),
    }
    if args.dump_network:
        import copy as _copy

        for size in sizes:
            sub = _copy.deepcopy(cfg)
            sub["stream"]["node_count"] = size
            files.update(_dump_network_files(sub, stem=f"network-{size}"))
    harness.publish_files(args.out, files)
    for row in result.rows:
        print(f"{row['algorithm']} n={row['node_count']}: mse_floor={row['mse_floor']:.6g} "
              f"avg_final_dict_size={row['avg_final_dict_size']:.6g}")
    return 0


def _cmd_datasets_gen(args, cfg):
    s = cfg["stream"]
    spec = StreamSpec(s["task"], s["node_count"], s["rounds"], s["seed"], s["noise_std"])
    X, D = generate_stream(spec)
    dim = TASK_DIM[s["task"]]
    header = "node,round," + ",".join(f"x{i}" for i in range(dim)) + ",desired"
    lines = [header]
    for q in range(s["node_count"]):
        for k in range(s["rounds"]):
            coords = ",".join(repr(float(v)) for v in X[k, q])
            lines.append(f"{q},{k},{coords},{repr(float(D[k, q]))}")
    sidecar = {
        "kind": "samples",
        "stream": dict(s),
        "noise_std_resolved": resolve_noise(spec),
        "dim": dim,
    }
    files = {
        "samples.csv": "\n".join(lines) + "\n",
        "samples.json": harness.format_json(sidecar),
    }
    harness.publish_files(args.out, files)
    print(f"wrote {s['node_count'] * s['rounds']} samples for task {s['task']}")
    return 0


def _cmd_calibrate(args, cfg):
    res = harness.calibrate_budget(cfg)
    files = {"budget.json": harness.format_json({**res, "config": cfg})}
    harness.publish_files(args.out, files)
    print(f"task {res['task']}: qdklms mean final dictionary size "
          f"{res['qdklms_mean_final_dict_size']:.3f}, budget {res['budget']}")
    return 0


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help and friends
        return 0 if exc.code in (0, None) else int(exc.code)

    try:
        cfg = _resolve_config(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        if args.command == "run":
            return _cmd_run(args, cfg)
        if args.command == "sweep":
            return _cmd_sweep(args, cfg)
        if args.command == "datasets":
            return _cmd_datasets_gen(args, cfg)
        if args.command == "calibrate-budget":
            return _cmd_calibrate(args, cfg)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DklmsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
