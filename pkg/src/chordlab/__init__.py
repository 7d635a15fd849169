"""chordlab: exact and Monte Carlo machinery for random chord diagrams and
their intersection graphs."""

from .diagram import (
    Block,
    Chord,
    ChordDiagram,
    Subdiagram,
    block_endpoints,
    blocks_of,
    chord_length,
    crosses,
    new_diagram,
    parse_diagram,
    phi,
    serialize_diagram,
    subdiagram,
    tau,
)
from .enumeration import (
    ExactDistribution,
    StatisticSpec,
    enumerate_diagrams,
    exact_distribution,
    exact_expectation,
)
from .experiments import ExperimentConfig, ExperimentReport, run_experiment
from .extremal import (
    ExtremalStats,
    clique_number,
    extremal_stats,
    independence_number,
    nesting_number,
)
from .graph import (
    ComponentPartition,
    IntersectionGraph,
    LengthProfile,
    components,
    count_full_blocks,
    degree_of,
    degree_of_c1,
    intersection_graph,
    is_monolithic,
    k_core,
    k_core_chords,
    len_at_least,
    length_profile,
)
from .oriented import (
    OrientedDiagram,
    SccDecomposition,
    find_balanced_clique,
    giant_scc_fraction,
    is_strongly_connected_on,
    orient,
    scc,
    trivial_scc_count,
)
from .sampling import (
    EvolutionTrace,
    Seed,
    derive_seed,
    replica_rng,
    rng_from_seed,
    run_continuous,
    run_discrete,
    sample_uniform,
)

__version__ = "0.1.0"
