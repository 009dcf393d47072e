"""H2 performance of weighted, time-scaled edge-consensus networks."""
from .errors import *  # noqa: F401,F403
from .graph import (Cycle, EdgeBasis, Graph, SpanningTree, build_graph, cycle_lengths,
                    edge_laplacian, enumerate_spanning_trees, find_spanning_tree,
                    fundamental_basis, fundamental_cycles, graph_laplacian, incidence_matrix,
                    spanning_tree, tree_from_pairs)
from .graphfile import format_graph, parse_graph_file, read_graph_file
from .h2 import (EdgeRealization, H2Report, NoiseModel, closed_form_gramian, h2_closed_form,
                 h2_lyapunov, h2_relation_check, realization, tree_invariance_check,
                 verify_similarity)
from .numerics import lyapunov_solve, smw_update_inverse, solve_linear
from .planner import (CandidateEdge, EdgeAdditionReport, delta_full_timescale, delta_full_weight,
                      delta_tree_model, delta_tree_model_multi, rank_candidates, timescale_split)
from .sim import SimConfig, empirical_h2, simulate
from .tree_opt import (AuxiliaryGraph, auxiliary_graph, brute_force_min_tree,
                       min_h2_spanning_tree, total_cost)

__version__ = "0.1.0"
