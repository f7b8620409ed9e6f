"""proxmem: proximity-ordered B-matrix associative memory simulation.

Bipolar memories are stored in a Hebbian weight matrix built over a 3D
neuron geometry; recall extends a partial stimulus neuron by neuron along
the proximity ordering from the stimulation site, and two sites can run
simultaneously with cross-clamping ("interplay"). The package ships the
worked 20-neuron fixture, a replication report against its published
artifacts, and a seeded Monte Carlo harness.
"""

from .errors import (
    ColocationError,
    ConfigError,
    CursorClamped,
    DegeneratePair,
    DegeneratePairWarning,
    FixtureError,
    NonTermination,
    NotSymmetric,
    ProxmemError,
    RetryExhausted,
    SizeMismatch,
)
from .estimator import ProximityMemory
from .experiment import (
    BatchStatistics,
    ExperimentConfig,
    TrialRecord,
    derive_trial_seed,
    run_batch,
    run_trial,
)
from .interplay import (
    InterplayPolicies,
    InterplayResult,
    InterplaySession,
    init_interplay,
    interplay_round,
    render_round_trace,
    resolve_conflict,
    run_interplay,
)
from .memory import (
    b_matrix,
    generate_memories,
    hebbian_weights,
    permute_memories,
    permute_weights,
    stability_report,
)
from .recall import (
    OutcomeClass,
    RecallResult,
    classify_outcome,
    proximity_recall,
    recall_step,
    single_recall,
)
from .replication import ReplicationReport, replay_fixture, variant_search
from .topology import (
    DistanceMatrix,
    NetworkGeometry,
    PermutationSequence,
    distance_matrix,
    generate_geometry,
    load_geometry,
    proximity_permutation,
    select_stimulus_pair,
    validate_no_colocation,
)

__version__ = "0.1.0"

__all__ = [
    "BatchStatistics",
    "ColocationError",
    "ConfigError",
    "CursorClamped",
    "DegeneratePair",
    "DegeneratePairWarning",
    "DistanceMatrix",
    "ExperimentConfig",
    "FixtureError",
    "InterplayPolicies",
    "InterplayResult",
    "InterplaySession",
    "NetworkGeometry",
    "NonTermination",
    "NotSymmetric",
    "OutcomeClass",
    "PermutationSequence",
    "ProximityMemory",
    "ProxmemError",
    "RecallResult",
    "ReplicationReport",
    "RetryExhausted",
    "SizeMismatch",
    "TrialRecord",
    "b_matrix",
    "classify_outcome",
    "derive_trial_seed",
    "distance_matrix",
    "generate_geometry",
    "generate_memories",
    "hebbian_weights",
    "init_interplay",
    "interplay_round",
    "load_geometry",
    "permute_memories",
    "permute_weights",
    "proximity_permutation",
    "proximity_recall",
    "recall_step",
    "render_round_trace",
    "replay_fixture",
    "resolve_conflict",
    "run_batch",
    "run_interplay",
    "run_trial",
    "select_stimulus_pair",
    "single_recall",
    "stability_report",
    "validate_no_colocation",
    "variant_search",
]
