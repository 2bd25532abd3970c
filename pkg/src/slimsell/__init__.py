"""SlimSell and Sell-C-sigma graph layouts with semiring-based BFS."""
from .analysis import StorageReport, WorkBound, check_padding_bound, storage_report, work_bound
from .bfs import BfsOptions, BfsResult, ConvergenceError, bfs_spmv, bfs_traditional, plan_subchunks, validate_parents
from .generators import GenSpec, gen_erdos_renyi, gen_fixture, gen_kronecker, parse_spec
from .graph import Graph, degree_stats, to_csr
from .layout import (SellCSigma, SlimSell, build_sell_c_sigma, build_slimsell, combine_partials,
                     permute_in, permute_out, spmv_step, storage_cells)
from .readers import from_edge_list, from_matrix_market, load_graph
from .semiring import INF, UNREACHED, VARIANTS, dp_transform, get_semiring

__all__ = [
    "BfsOptions", "BfsResult", "ConvergenceError", "GenSpec", "Graph", "INF", "SellCSigma", "SlimSell",
    "StorageReport", "UNREACHED", "VARIANTS", "WorkBound", "bfs_spmv", "bfs_traditional",
    "build_sell_c_sigma", "build_slimsell", "check_padding_bound", "combine_partials", "degree_stats",
    "dp_transform", "from_edge_list", "from_matrix_market", "gen_erdos_renyi", "gen_fixture",
    "gen_kronecker", "get_semiring", "load_graph", "parse_spec", "permute_in", "permute_out",
    "plan_subchunks", "spmv_step", "storage_cells", "storage_report", "to_csr", "validate_parents",
    "work_bound",
]
