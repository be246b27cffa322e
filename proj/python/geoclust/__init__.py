"""Mixed-dissimilarity Ward clustering with weight search and joint inertia."""

from ._core import (
    DegenerateError,
    InputError,
    __version__,
    adjusted_rand_index,
    best_alpha,
    cli_main,
    cluster,
    dtw_distance,
    dtw_matrix,
    haversine_km,
    joint_inertia_two,
    normalize_max,
    prop_explained,
    run_replicate,
    score_recovery,
    simplex_grid,
    spatial_matrix,
    ward_labels,
    ward_merges,
)

__all__ = [
    "DegenerateError",
    "InputError",
    "__version__",
    "adjusted_rand_index",
    "best_alpha",
    "cli_main",
    "cluster",
    "dtw_distance",
    "dtw_matrix",
    "haversine_km",
    "joint_inertia_two",
    "normalize_max",
    "prop_explained",
    "run_replicate",
    "score_recovery",
    "simplex_grid",
    "spatial_matrix",
    "ward_labels",
    "ward_merges",
]
