"""Gomory-Hu trees and all-pairs max-flow on undirected integer-weighted graphs."""

from .ghtree import (GhTree, TreeValidationError, format_tree, ghtree_fast, ghtree_step,
                     gomory_hu_classic, gusfield, parse_tree, tree_from_json, tree_matrix,
                     tree_query, tree_to_json)
from .graph import Cut, Graph, GraphError, build_graph, contract, cut_value, random_graph
from .io import ParseError, parse_graph, read_graph
from .isolating import isolating_cuts
from .maxflow import FlowResult, max_flow
from .oracles import (CutThresholdOracle, SsmcApproxOracle, cut_threshold,
                      max_terminal_mincut, steiner_mincut)
from .packing import GuideTree, mehlhorn_steiner, mwu_pack, sample_guide_trees
from .ssmc import PIPELINE_CONFIG, SsmcConfig, ssmc_guided, sstm_no_promise, sstm_promise
from .verify import apmf_bruteforce, check_k_respecting, validate_ghtree

__all__ = [
    "Cut", "CutThresholdOracle", "FlowResult", "GhTree", "Graph", "GraphError", "GuideTree",
    "PIPELINE_CONFIG", "ParseError", "SsmcApproxOracle", "SsmcConfig", "TreeValidationError",
    "apmf_bruteforce", "build_graph", "check_k_respecting", "contract", "cut_threshold",
    "cut_value", "format_tree", "ghtree_fast", "ghtree_step", "gomory_hu_classic", "gusfield",
    "isolating_cuts", "max_flow", "max_terminal_mincut", "mehlhorn_steiner", "mwu_pack",
    "parse_graph", "parse_tree", "random_graph", "read_graph", "sample_guide_trees",
    "ssmc_guided", "sstm_no_promise", "sstm_promise", "steiner_mincut", "tree_from_json",
    "tree_matrix", "tree_query", "tree_to_json", "validate_ghtree",
]
