"""Run each search against the adversary and show the forced comparison counts."""

from divsearch.adversary import duel, essential_set
from divsearch.poset import Regime

n = 500
for regime in Regime:
    print(regime.name, "essential:", len(essential_set(n, regime)))
    for algo in ("chains", "table", "grid"):
        print("   ", duel(n, regime, algo).summary())
