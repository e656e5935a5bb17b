"""Coupled random-cluster / six-vertex models on even domains of the square lattice.

The package provides:

* exact geometry of even domains of the rotated square lattice and their
  medial fattenings (``fksix.lattice``),
* the boundary-weighted random-cluster model with exact weights, a Holley
  stochastic-domination checker and a heat-bath sampler
  (``fksix.random_cluster``),
* interface-loop extraction and biased loop orientation (``fksix.loops``),
* six-vertex configurations with anticlockwise boundary, the randomized
  vertex-splitting map and its inverse (``fksix.six_vertex``),
* height functions, height clusters, nested cluster sequences and the
  drift experiment (``fksix.height``),
* an exact Laurent-polynomial verification engine for the coupling
  identities (``fksix.laurent``, ``fksix.verify``),
* a command-line interface with reproducible seeding (``fksix.cli``).
"""

from fksix.lattice import EvenDomain, make_diamond_domain, is_even_domain, gamma_of_connected_set
from fksix.random_cluster import (
    FKParams,
    BondConfig,
    ClusterStats,
    cluster_stats,
    fk_weight,
    heat_bath_conditional,
    heat_bath_sweep,
    holley_check,
)
from fksix.loops import LoopConfig, OrientedLoopConfig, extract_loops, loop_stats, orient_loops, oriented_weight, loop_winding
from fksix.six_vertex import (
    SixVertexConfig,
    CoupledParams,
    enumerate_6v,
    sixv_weight,
    split,
    split_inverse,
    check_winding_identity,
)
from fksix.height import (
    HeightFunction,
    height_from_arrows,
    height_from_loops,
    height_clusters,
    precedes,
    nested_sequence,
    drift_experiment,
)
from fksix.laurent import LaurentWeight, SymbolicCoupling
from fksix.verify import (
    FiniteDistribution,
    compare_distributions,
    pushforward_fk_to_6v,
    pushforward_6v_to_fk,
    verify_coupled_params,
)

__version__ = "0.1.0"
