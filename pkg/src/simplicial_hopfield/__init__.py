"""Simplicial Hopfield networks: associative memory over weighted
simplex sets, with dilution schemes, homology diagnostics, capacity
estimates, and a reproducible experiment harness."""

from .binary_nets import (
    Exponential,
    Polynomial,
    RunOutcome,
    interaction_from_name,
    local_fields,
    modern_energy,
    modern_update_sync,
    run_to_convergence,
    traditional_energy,
    traditional_update_async,
    traditional_update_sync,
)
from .complexes import (
    CONDITION_FRACTIONS,
    CONDITION_NAMES,
    DilutionSpec,
    FunctionalComplex,
    build_k_skeleton,
    complex_from_json,
    complex_to_json,
    condition_spec,
    downward_closure,
    enumerate_faces,
    functional_euler_characteristic,
    hebbian_weights,
    load_complex,
    sample_diluted,
    save_complex,
)
from .continuous_net import (
    Similarity,
    ced,
    cmd,
    continuous_energy,
    continuous_update,
    lse,
    pairwise_distance,
    settle,
    similarity_vector,
    softmax,
)
from .homology import (
    BoundaryMatrix,
    betti_numbers,
    boundary_matrix,
    boundary_rank,
    closed_euler_characteristic,
    pearson_r,
)
from .metrics import (
    RecallScore,
    correct_recall,
    mse,
    overlap,
    score_binary,
    score_continuous,
    summarize,
)
from .patterns import (
    GaussianNoise,
    PatternSet,
    RandomState,
    corrupt,
    load_image_corpus,
    random_binary_patterns,
    random_continuous_patterns,
)
from .theory import (
    capacity_mixed,
    capacity_report,
    connections_count,
    diluted_capacity_order,
    empirical_stability_rate,
    noise_sigma,
    prob_stable_pattern,
    z_total,
)

__version__ = "0.1.0"
