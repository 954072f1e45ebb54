"""Watch forced/n and budget/n settle towards their limits."""

from divsearch.adversary import forced_comparison_count, special_set_sizes
from divsearch.poset import Regime
from divsearch.search import budget_s2

print(f"{'n':>8s} {'forced/n':>9s} {'s2/n':>9s} {'|S_n|':>6s} refined")
for k in range(3, 7):
    n = 10**k
    sizes = special_set_sizes(n)
    refined = sizes["s_n1"] + sizes["s_n2"] + sizes["s_n3"]
    print(f"{n:8d} {forced_comparison_count(n, Regime.RS2STAR) / n:9.6f} "
          f"{budget_s2(n) / n:9.6f} {sizes['s_n']:6d} {refined}")
print("limits:", round(3 / 4 + 11 / 1440, 6), round(55 / 72, 6))
