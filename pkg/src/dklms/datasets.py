"""Benchmark stream generators.

Each round the network observes one shared latent event (a transmitted
symbol, or a labelled point) through per-node observation noise. Node
streams are therefore correlated across the network while their noise stays
mutually independent; that correlation is what makes observation fusion and
error diffusion pay off. All draws are reproducible functions of the spec
seed: the latent sequence comes from sub-stream (seed, 0) and node q's noise
from sub-stream (seed, 1 + q).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

TASKS = ("channel", "crescent", "spiral")
TASK_DIM = {"channel": 3, "crescent": 2, "spiral": 2}
DEFAULT_NOISE = {"channel": 0.1, "crescent": 0.1, "spiral": 0.02}


@dataclass(frozen=True)
class StreamSpec:
    """What to generate: task, network width, length, seed and noise level.

    noise_std None selects the task default (0.1 for channel and crescent,
    0.02 for spiral).
    """

    task: str
    node_count: int
    rounds: int
    seed: int
    noise_std: float | None = None

    def __post_init__(self):
        if self.task not in TASKS:
            raise ConfigError(f"stream.task: unknown task {self.task!r}, expected one of {TASKS}")
        if int(self.node_count) < 1:
            raise ConfigError(f"stream.node_count: must be >= 1, got {self.node_count}")
        if int(self.rounds) < 1:
            raise ConfigError(f"stream.rounds: must be >= 1, got {self.rounds}")
        if int(self.seed) < 0:
            raise ConfigError(f"stream.seed: must be a nonnegative integer, got {self.seed}")
        if self.noise_std is not None and not float(self.noise_std) >= 0:
            raise ConfigError(f"stream.noise_std: must be >= 0, got {self.noise_std}")


def resolve_noise(spec):
    if spec.noise_std is None:
        return DEFAULT_NOISE[spec.task]
    return float(spec.noise_std)


def _rngs(spec):
    shared = np.random.default_rng([int(spec.seed), 0])
    nodes = [np.random.default_rng([int(spec.seed), 1 + q]) for q in range(spec.node_count)]
    return shared, nodes


def channel_taps(n):
    """Time-varying channel taps (h1, h2) at sample index n."""
    ang = 2.0 * np.pi * np.asarray(n, dtype=float) / 1000.0
    return 1.0 + 0.2 * np.sin(ang), 0.5 - 0.2 * np.sin(ang)


def channel_nonlinearity(r):
    """Static receiver nonlinearity applied to the linear channel output."""
    return r - 0.9 * r * r


def nonstationary_channel_stream(spec):
    """Nonlinear equalization of a drifting binary channel.

    One shared symbol sequence s_n in {-1,+1} drives the whole network. The
    linear channel output is r_n = h1(n)*s_n + h2(n)*s_{n-1} with the taps
    drifting sinusoidally over a 1000-sample period, followed by the static
    nonlinearity z = r - 0.9 r^2. Every node observes z through its own
    additive Gaussian noise. Sample k carries the tap-3 regressor
    (z_{k+3}, z_{k+2}, z_{k+1}) and the delayed symbol s_{k+2} as target.
    """
    L = int(spec.rounds)
    n_nodes = spec.node_count
    noise = resolve_noise(spec)
    shared, node_rngs = _rngs(spec)

    s = 2 * shared.integers(0, 2, size=L + 3) - 1
    idx = np.arange(1, L + 3)
    h1, h2 = channel_taps(idx)
    r = h1 * s[1:] + h2 * s[:-1]
    z_clean = channel_nonlinearity(r)

    X = np.empty((L, n_nodes, 3))
    D = np.empty((L, n_nodes))
    for q, rng in enumerate(node_rngs):
        z = z_clean + rng.normal(0.0, noise, size=L + 2)
        X[:, q, 0] = z[2:]
        X[:, q, 1] = z[1:-1]
        X[:, q, 2] = z[:-2]
        D[:, q] = s[2 : L + 2]
    return X, D


def crescent_moon_dataset(spec):
    """Two interlocking half-moon arcs with radial observation jitter.

    The +1 arc is the upper unit semicircle around the origin; the -1 arc is
    its reflection shifted to interlock (center (1, 0.5), pointing down).
    The shared latent draw picks the class and the angular position; each
    node observes the point with its own Gaussian radial jitter, so noiseless
    +1 points satisfy x^2 + y^2 = 1 exactly.
    """
    L = int(spec.rounds)
    n_nodes = spec.node_count
    noise = resolve_noise(spec)
    shared, node_rngs = _rngs(spec)

    cls = shared.integers(0, 2, size=L)
    theta = shared.uniform(0.0, np.pi, size=L)
    labels = (2 * cls - 1).astype(float)
    ct = np.cos(theta)
    st = np.sin(theta)

    X = np.empty((L, n_nodes, 2))
    D = np.empty((L, n_nodes))
    for q, rng in enumerate(node_rngs):
        radial = 1.0 + rng.normal(0.0, noise, size=L)
        upper = cls == 1
        X[:, q, 0] = np.where(upper, radial * ct, 1.0 - radial * ct)
        X[:, q, 1] = np.where(upper, radial * st, 0.5 - radial * st)
        D[:, q] = labels
    return X, D


def spiral_dataset(spec):
    """Two-arm Archimedean spiral with per-coordinate observation jitter.

    The +1 arm traces (t cos t, t sin t)/(3 pi) for t in [0, 3 pi]; the -1
    arm is its point reflection through the origin. The shared latent draw
    picks the arm and the parameter t; each node adds its own Gaussian
    jitter per coordinate.
    """
    L = int(spec.rounds)
    n_nodes = spec.node_count
    noise = resolve_noise(spec)
    shared, node_rngs = _rngs(spec)

    arm = shared.integers(0, 2, size=L)
    t = shared.uniform(0.0, 3.0 * np.pi, size=L)
    sign = (2 * arm - 1).astype(float)
    scale = 1.0 / (3.0 * np.pi)
    base = np.stack([t * np.cos(t), t * np.sin(t)], axis=1) * scale
    base *= sign[:, None]

    X = np.empty((L, n_nodes, 2))
    D = np.empty((L, n_nodes))
    for q, rng in enumerate(node_rngs):
        X[:, q, :] = base + rng.normal(0.0, noise, size=(L, 2))
        D[:, q] = sign
    return X, D


_GENERATORS = {
    "channel": nonstationary_channel_stream,
    "crescent": crescent_moon_dataset,
    "spiral": spiral_dataset,
}


def generate_stream(spec):
    """Dispatch to the task generator; returns (X, D) with X of shape
    (rounds, node_count, dim) and D of shape (rounds, node_count)."""
    return _GENERATORS[spec.task](spec)
