import json

import pytest

import oracles
from divsearch.adversary import forced_comparison_count
from divsearch.exact import (
    FOUND,
    NOT_FOUND,
    KnowledgeState,
    Status,
    optimal_tree,
    replay_tree,
    tau_exact,
    tree_depth,
    tree_to_json,
)
from divsearch.oracle import Answer, TableOracle
from divsearch.poset import Regime
from divsearch.search import answer_tree_depth, budget_s2, search_chains, worst_case_search_table
from divsearch.tablegen import random_table

# frozen from the brute-force oracle (n <= 8) and the memoised solver (n <= 12)
TAU = {1: 1, 2: 2, 3: 3, 4: 3, 5: 4, 6: 5, 7: 6, 8: 6, 9: 7, 10: 8, 11: 9, 12: 9}


def test_trivial_values():
    assert tau_exact(1) == 1
    assert tau_exact(2) == 2
    assert tau_exact(3) == 3


@pytest.mark.parametrize("n", range(1, 9))
def test_against_set_oracle(n):
    assert tau_exact(n) == oracles.tau(n) == TAU[n]


def test_frozen_up_to_cap():
    assert {n: tau_exact(n) for n in range(1, 13)} == TAU


@pytest.mark.parametrize("n", range(1, 7))
def test_memo_soundness(n):
    assert tau_exact(n, memo=False) == tau_exact(n)


def test_cap_refusal():
    with pytest.raises(ValueError, match="cap"):
        tau_exact(13)
    with pytest.raises(ValueError):
        optimal_tree(11, cap=10)
    assert tau_exact(13, cap=13) >= TAU[12]


@pytest.mark.parametrize("n", range(1, 13))
def test_sandwich(n):
    lower = max(forced_comparison_count(n, r) for r in Regime)
    chains = answer_tree_depth(lambda o: search_chains(n, o), n)
    assert lower <= tau_exact(n) <= min(worst_case_search_table(n), chains, budget_s2(n), n)


def test_monotonicity_is_measured():
    values = [TAU[n] for n in range(1, 13)]
    # recorded, not assumed: holds on this range
    assert all(a <= b for a, b in zip(values, values[1:]))


def test_tree_shapes():
    assert optimal_tree(1) == {"q": 1, "lt": NOT_FOUND, "eq": FOUND, "gt": NOT_FOUND}
    t2 = optimal_tree(2)
    assert tree_depth(t2) == 2 and t2["q"] in (1, 2)
    assert json.loads(tree_to_json(t2)) == t2


@pytest.mark.parametrize("n", range(1, 11))
def test_tree_depth_is_tau(n):
    assert tree_depth(optimal_tree(n)) == tau_exact(n)


def test_tree_is_deterministic():
    assert tree_to_json(optimal_tree(9)) == tree_to_json(optimal_tree(9))


@pytest.mark.parametrize("n", [4, 9, 12])
def test_tree_replay(n):
    tree = optimal_tree(n)
    tau = tau_exact(n)
    for seed in range(100):
        table = random_table(n, seed)
        for x in table.probes():
            oracle = TableOracle(table, x, check=True)
            assert replay_tree(tree, oracle) == table.contains(x)
            assert oracle.count <= tau


def test_knowledge_state_closure():
    s = KnowledgeState.initial(12).after(6, Answer.GT)
    assert [i for i in range(1, 13) if s.status[i - 1] is Status.BELOW_X] == [1, 2, 3, 6]
    s = s.after(4, Answer.LT)
    assert s.is_closed()
    assert s.candidates() == [5, 7, 9, 10, 11]
    assert not s.terminal
    with pytest.raises(ValueError):
        s.after(5, Answer.EQ)
