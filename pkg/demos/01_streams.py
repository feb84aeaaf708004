"""
Tour of the three benchmark streams.

Every node in the network observes the same underlying event each round
(the same transmitted symbol, the same point on a crescent or spiral) but
through its own observation noise. That shared-target / private-noise split
is what makes fusing neighbour observations worthwhile, and this script
makes it visible without running any filter at all.
"""

import numpy as np

from dklms.datasets import StreamSpec, generate_stream, resolve_noise

NODES = 4
ROUNDS = 6
SEED = 2024


def show(task):
    spec = StreamSpec(task, NODES, ROUNDS, SEED)
    X, D = generate_stream(spec)
    print(f"\n=== {task} (noise_std={resolve_noise(spec)}) ===")
    print(f"inputs {X.shape}, targets {D.shape}")
    for r in range(ROUNDS):
        coords = "  ".join(
            "(" + ", ".join(f"{v:+.3f}" for v in X[r, q]) + ")" for q in range(NODES)
        )
        print(f"round {r}: d={D[r, 0]:+.0f}  x per node: {coords}")
    # the target column is identical across nodes...
    assert (D == D[:, :1]).all()
    # ...and with the noise turned off the observations collapse too
    clean = StreamSpec(task, NODES, ROUNDS, SEED, noise_std=0.0)
    Xc, _ = generate_stream(clean)
    spread = np.abs(X - Xc.mean(axis=1, keepdims=True)).max()
    print(f"perturbation radius around the noiseless point: {spread:.3f}")


if __name__ == "__main__":
    for task in ("channel", "crescent", "spiral"):
        show(task)
    print("\nSame event everywhere, different noise at every node.")
