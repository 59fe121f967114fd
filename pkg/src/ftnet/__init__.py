"""Minimum-cost fault-tolerant path and flow network design.

Arcs are partitioned into vulnerable and safe; solutions must survive
the failure of any k vulnerable arcs (path mode) or keep ell disjoint
paths through any single vulnerable-arc failure (flow mode). The
package provides exact solvers for the tractable classes, approximation
algorithms with proven factors for the general case, dual feasibility
verifiers, brute-force oracles, seeded generators, and a CLI.
"""

from .approx import approx_ftp_k, approx_ftp_kplus1
from .dsn import DsnInstance, dsn_oracle, dsn_solve
from .errors import (
    BudgetExceededError,
    CyclicGraphError,
    FtnetError,
    InfeasibleError,
    NotSeriesParallelError,
    ParseError,
    ValidationError,
)
from .exact import Configuration, compute_link_cost, solve_1ftp, solve_kftp_dag
from .feasibility import (
    Verdict,
    ftf_feasible_cut,
    ftf_feasible_enum,
    ftp_feasible_cut,
    ftp_feasible_enum,
)
from .flows import UNBOUNDED, CapacityProfile, FlowResult, max_flow, min_cost_flow, path_decompose
from .ftf import (
    AuxGraph,
    AuxLink,
    PathSystem,
    approx_ftf_2,
    approx_ftf_ellplus1,
    build_aux_graph,
    build_path_system,
    residual_feasibility_check,
    solve_augmentation,
)
from .generators import GenSpec, gen_annotations, generate, random_sp_tree
from .instance import (
    Arc,
    ArcSet,
    Instance,
    LayeredInstance,
    dag_to_layered,
    parse_instance,
    serialize_instance,
    to_directed,
    topological_order,
    with_mode,
)
from .oracles import (
    brute_force_augmentation,
    brute_force_ftf,
    brute_force_ftp,
    brute_force_ftp_undirected,
)
from .seriesparallel import (
    SPLeaf,
    SPParallel,
    SPSeries,
    SPTree,
    format_sp_tree,
    parse_sp_tree,
    solve_ftp_series_parallel,
    sp_recognize,
    sp_tree_to_instance,
)

__all__ = [
    "Arc",
    "ArcSet",
    "AuxGraph",
    "AuxLink",
    "BudgetExceededError",
    "CapacityProfile",
    "Configuration",
    "CyclicGraphError",
    "DsnInstance",
    "FlowResult",
    "FtnetError",
    "GenSpec",
    "InfeasibleError",
    "Instance",
    "LayeredInstance",
    "NotSeriesParallelError",
    "ParseError",
    "PathSystem",
    "SPLeaf",
    "SPParallel",
    "SPSeries",
    "SPTree",
    "UNBOUNDED",
    "ValidationError",
    "Verdict",
    "approx_ftf_2",
    "approx_ftf_ellplus1",
    "approx_ftp_k",
    "approx_ftp_kplus1",
    "brute_force_augmentation",
    "brute_force_ftf",
    "brute_force_ftp",
    "brute_force_ftp_undirected",
    "build_aux_graph",
    "build_path_system",
    "compute_link_cost",
    "dag_to_layered",
    "dsn_oracle",
    "dsn_solve",
    "format_sp_tree",
    "ftf_feasible_cut",
    "ftf_feasible_enum",
    "ftp_feasible_cut",
    "ftp_feasible_enum",
    "gen_annotations",
    "generate",
    "max_flow",
    "min_cost_flow",
    "parse_instance",
    "parse_sp_tree",
    "path_decompose",
    "random_sp_tree",
    "residual_feasibility_check",
    "serialize_instance",
    "solve_1ftp",
    "solve_augmentation",
    "solve_ftp_series_parallel",
    "solve_kftp_dag",
    "sp_recognize",
    "sp_tree_to_instance",
    "to_directed",
    "topological_order",
    "with_mode",
]
