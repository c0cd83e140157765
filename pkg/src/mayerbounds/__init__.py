"""Cluster-expansion identity checks and Mayer-series convergence-radius bounds.

The package has two halves that meet in the CLI:

* an exact/combinatorial half (`combinatorics`, `ursell`) that evaluates the
  Ursell coefficient of a finite pair-interaction matrix by several
  independent routes (connected-graph sum, partition Mobius sum, edge-labeled
  tree integral, block-merge expansion) and verifies that they agree;

* a numerical half (`potentials`, `stability`, `bounds`) that checks the
  Basuev stability criterion V(a) > 2*mu(a) for radially symmetric pair
  potentials and computes certified lower bounds on the convergence radius of
  the Mayer activity series (Penrose-Ruelle, Morais-Procacci-Scoppola, and
  the two Basuev bounds C*, C-hat), including the optimized Lennard-Jones
  numbers.
"""

from .combinatorics import (
    EdgeLabeledTree,
    LabeledGraph,
    SetPartition,
    SizeLimitError,
    enumerate_connected_graphs,
    enumerate_labeled_trees,
    enumerate_partitions,
    graph_partition,
    mobius_alternating_sum,
)
from .ursell import (
    InteractionMatrix,
    MergeState,
    SimplexIntegrand,
    block_pair_energy,
    merge_sequence_expansion,
    simplex_exponential_integral,
    subset_energy,
    tree_exponent_coefficients,
    ursell_graph_sum,
    ursell_partition_sum,
    ursell_tree_integral,
)
from .potentials import (
    HardCoreWrap,
    InversePower,
    LennardJones,
    LJTypeEnvelope,
    PairPotential,
    PotentialSplit,
    TabulatedPotential,
    hard_core_wrap,
    lennard_jones,
    lj_type_check,
    negative_part,
    potential_from_config,
    split,
)
from .stability import (
    MuBound,
    StabilityData,
    criterion_holds,
    find_max_a,
    lj_stability_registry,
    mu_upper_cube,
    mu_upper_yuhjtman,
)
from .bounds import (
    BoundReport,
    QuadratureSpec,
    basuev_c_hat,
    basuev_c_star,
    basuev_radius,
    compare_report,
    h_factor,
    hard_core_bounds,
    mps_bound,
    penrose_ruelle,
    radial_integral,
    stable_ratio,
)

__all__ = [name for name in dir() if not name.startswith("_")]
