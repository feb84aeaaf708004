"""
Why bother with a network? A desk-scale convergence comparison.

Runs the nonlinear channel task twice: once as a 5-node diffusion network
(quantized and fixed-budget variants) and once as a single isolated
quantized filter seeing the same kind of data. Prints the Monte-Carlo
learning curves side by side. Scaled down from the full experiment so it
finishes in a few seconds; the trend is the same.
"""

from dklms import harness
from dklms.presets import get_preset

MC_RUNS = 20
ROUNDS = 600
CHECKPOINTS = (1, 5, 20, 60, 150, 300, 600)


def scaled(preset, **stream_overrides):
    cfg = get_preset(preset)
    cfg["monte_carlo_runs"] = MC_RUNS
    cfg["stream"]["rounds"] = ROUNDS
    cfg["stream"].update(stream_overrides)
    return cfg


if __name__ == "__main__":
    network = harness.run_experiment(scaled("channel-fig3"))

    solo = scaled("channel-fig3", node_count=1)
    solo["algorithms"] = ["qklms"]
    baseline = harness.run_experiment(solo)

    print(f"channel task, {MC_RUNS} Monte-Carlo runs, {ROUNDS} rounds\n")
    print(f"{'round':>6} {'qklms (1 node)':>15} {'qdklms (5)':>12} {'fbqdklms (5)':>13}")
    for r in CHECKPOINTS:
        row = [baseline.mse["qklms"][r - 1], network.mse["qdklms"][r - 1],
               network.mse["fbqdklms"][r - 1]]
        print(f"{r:>6} " + " ".join(f"{v:>12.4f}" for v in row) + "  ")

    print("\nsteady-state floors (mean of the last 10% of rounds):")
    print(f"  qklms, single node : {baseline.mse_floor['qklms']:.4f}")
    for alg in network.algorithms:
        print(f"  {alg:<19}: {network.mse_floor[alg]:.4f}")
    print("\nFive noisy views of the same channel beat one: both variants sit")
    print("well under the isolated filter, and get there in far fewer rounds.")
