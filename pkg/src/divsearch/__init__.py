"""Membership search in tables consistent with the divisibility order on {1..n}."""

from .adversary import (
    AdversarySession,
    duel,
    essential_set,
    forced_comparison_count,
    refute_faulty,
    verify_essentiality,
    witness_sweep,
)
from .exact import KnowledgeState, optimal_tree, tau_exact
from .oracle import Answer, ComparisonOracle, TableOracle, Transcript
from .poset import (
    LayerGrid,
    Regime,
    UnitClass,
    chain_partition,
    classify_units,
    layer_decomposition,
    special_index_sets,
)
from .search import budget_s1, budget_s2, search_chains, search_layer, search_table
from .tablegen import ConsistentTable, random_table, refute_early_stop, witness

__version__ = "0.1.0"

__all__ = [
    "AdversarySession", "Answer", "ComparisonOracle", "ConsistentTable", "KnowledgeState",
    "LayerGrid", "Regime", "TableOracle", "Transcript", "UnitClass", "budget_s1", "budget_s2",
    "chain_partition", "classify_units", "duel", "essential_set", "forced_comparison_count",
    "layer_decomposition", "optimal_tree", "random_table", "refute_early_stop", "refute_faulty",
    "search_chains", "search_layer", "search_table", "special_index_sets", "tau_exact",
    "verify_essentiality", "witness", "witness_sweep",
]
