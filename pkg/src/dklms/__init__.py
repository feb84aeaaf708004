"""Finite-dictionary distributed kernel adaptive filtering over simulated
networks: KLMS and QKLMS baselines, diffusion KLMS, quantized diffusion KLMS
and its fixed-budget variant, plus a Monte-Carlo experiment harness."""

from .dictionary import Dictionary, DictionaryEntry
from .datasets import (
    StreamSpec,
    crescent_moon_dataset,
    generate_stream,
    nonstationary_channel_stream,
    spiral_dataset,
)
from .errors import (
    ConfigError,
    DegenerateDataError,
    DklmsError,
    ShapeError,
    StateError,
    TopologyError,
)
from .filters import (
    ALGORITHMS,
    FilterHyperparams,
    NetworkFilterState,
    NodeState,
    dklms_step,
    init_network_state,
    klms_step,
    network_round,
    qklms_step,
)
from .harness import (
    DEFAULT_CONFIG,
    MetricsTrace,
    SweepResult,
    calibrate_budget,
    run_experiment,
    run_single,
    sweep_network_size,
    validate_config,
    write_metrics,
    write_sweep,
)
from .kernel import KernelParams, gaussian_kernel, silverman_bandwidth
from .network import (
    CombinationMatrices,
    Topology,
    build_combination_matrix,
    build_matrices,
    build_topology,
    diffuse_errors,
    fuse_observations,
)
from .presets import PRESETS, get_preset, preset_names

__version__ = "0.1.0"
