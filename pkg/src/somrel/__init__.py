"""Bootstrap reliability analysis for self-organizing maps."""

from .bootstrap import (
    BootstrapMode,
    BootstrapPlan,
    Replicate,
    ReplicateSet,
    derive_seed,
    draw_bootstrap_sample,
    load_replicate_set,
    run_replicate,
    run_replicates,
    save_replicate_set,
)
from .datasets import load_csv, make_dataset, zscore
from .errors import (
    ConfigError,
    DataFormatError,
    DegenerateDistortionError,
    InvalidArgumentError,
    SomrelError,
)
from .reliability import (
    CvReport,
    PairStability,
    StabHistogram,
    Verdict,
    b_sufficiency,
    cv_ss_intra,
    cv_sweep,
    edge_corrected_p,
    gaussian_conditions,
    neigh,
    pair_stabilities,
    significance,
    stab,
    stab_histogram,
)
from .som import (
    Codebook,
    Dataset,
    MapTopology,
    TrainingSchedule,
    best_matching_unit,
    best_matching_units,
    grid_distance,
    init_codebook,
    ss_intra,
    train_som,
)

__version__ = "0.1.0"
