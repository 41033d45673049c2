"""Inter-satellite link topology design for Walker-Delta LEO constellations."""
from .estimator import ISLTopologyOptimizer
from .evaluation import EvalReport, allpairs_oracle, bfs_eccentricity, dense_link_cap, evaluate, theoretical_lower_bound, worst_case_delay
from .feasibility import CandidateSet, FeasibilityVariant, TimeWindow, enumerate_candidates, link_feasible_at, los_clear, distance_feasible, viable_over_window
from .optimizer import ObjectiveTuple, OptimizerConfig, is_better, optimize, random_replace, reinforce_degrees
from .orbits import Constellation, ConstellationConfig, SatelliteId, build_constellation, orbital_period, position, starlink_shell_config
from .topology import Topology, add_inter_link, build_initial_topology, build_ring_topology, remove_inter_link

__version__ = "0.1.0"
