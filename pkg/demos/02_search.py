"""Search a random consistent table with both procedures and compare costs."""

from divsearch.oracle import TableOracle
from divsearch.search import budget_s1, budget_s2, search_chains, search_table
from divsearch.tablegen import random_table

n = 1000
table = random_table(n, seed=7)
for x in (table[137], table[137] + 1, 0):
    for algo in (search_chains, search_table):
        oracle = TableOracle(table, x)
        out = algo(n, oracle)
        print(f"{algo.__name__:14s} x={x:5d} found={out.found!s:5s} match={out.match} "
              f"cmp={out.comparisons}")
print("budgets: chains", budget_s1(n), "layers", budget_s2(n))
