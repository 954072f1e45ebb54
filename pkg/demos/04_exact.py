"""Exact worst-case comparison counts for tiny tables, with one optimal tree."""

from divsearch.adversary import forced_comparison_count
from divsearch.exact import optimal_tree, tau_exact, tree_to_json
from divsearch.poset import Regime
from divsearch.search import worst_case_search_table

for n in range(1, 11):
    lower = max(forced_comparison_count(n, r) for r in Regime)
    print(f"n={n:2d}  {lower} <= tau={tau_exact(n)} <= {worst_case_search_table(n)}")
print(tree_to_json(optimal_tree(4)))
