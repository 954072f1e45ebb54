"""Membership search in a table consistent with divisibility.

All algorithms talk to a :class:`~divsearch.oracle.ComparisonOracle` and stop
at the first ``EQ`` answer. Worst-case budgets are exact integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .oracle import Answer, ComparisonOracle, InconsistentAnswerError, ScriptedOracle
from .poset import (
    SMALL_LAYER_SIZES,
    LayerGrid,
    _check_n,
    chains,
    layer_decomposition,
    layer_shape,
)


@dataclass(frozen=True)
class SearchOutcome:
    found: bool
    match: int | None
    comparisons: int


def _outcome(oracle: ComparisonOracle, start: int, match: int | None) -> SearchOutcome:
    return SearchOutcome(match is not None, match, oracle.count - start)


# ---------------------------------------------------------------------------
# chains


def _binary_search(chain: list[int], oracle: ComparisonOracle) -> int | None:
    lo, hi = 0, len(chain)
    while lo < hi:
        mid = (lo + hi) // 2
        answer = oracle.query(chain[mid])
        if answer is Answer.EQ:
            return chain[mid]
        if answer is Answer.LT:
            hi = mid
        else:
            lo = mid + 1
    return None


def search_chains(n: int, oracle: ComparisonOracle) -> SearchOutcome:
    """Binary-search every odd-rooted chain ``j, 2j, 4j, ...`` in turn."""
    _check_n(n)
    start = oracle.count
    for chain in chains(n):
        match = _binary_search(chain, oracle)
        if match is not None:
            return _outcome(oracle, start, match)
    return _outcome(oracle, start, None)


def budget_s1(n: int) -> int:
    """Exact worst case of :func:`search_chains`: sum of ``ceil(log2(|B|+1))``."""
    _check_n(n)
    return sum(len(c).bit_length() for c in chains(n))


def s1_closed_form_bound(n: int) -> float:
    """The closed-form chain-count bound (each size class overcounted by one)."""
    _check_n(n)
    top = n.bit_length()  # floor(log2 n) + 1
    return sum((n / 2 ** (k + 1) + 1) * math.ceil(math.log2(k + 1)) for k in range(1, top + 1))


def chain_constant(terms: int = 8) -> float:
    """Limit of ``budget_s1(n) / n``: the series ``sum 2**-(2**t)``."""
    return sum(2.0 ** -(2**t) for t in range(terms))


# ---------------------------------------------------------------------------
# staircase grids


def _grid_search(grid: LayerGrid, oracle: ComparisonOracle, row_lo: int = 0,
                 col_hi: int | None = None) -> int | None:
    # The residual view is rows row_lo.. with every row truncated to col_hi
    # columns; row lengths decrease, so its top-right cell is the last
    # surviving cell of row row_lo.
    rows = grid.rows
    if col_hi is None:
        col_hi = len(rows[0])
    r = row_lo
    while r < len(rows):
        width = min(col_hi, len(rows[r]))
        if width == 0:
            return None
        i = rows[r][width - 1]
        answer = oracle.query(i)
        if answer is Answer.EQ:
            return i
        if answer is Answer.GT:
            r += 1
        else:
            col_hi = width - 1
    return None


def search_monotone_grid(grid: LayerGrid, oracle: ComparisonOracle, row_lo: int = 0,
                         col_hi: int | None = None) -> SearchOutcome:
    """Top-right-corner elimination on a staircase view of a layer.

    ``GT`` drops the current first row, ``LT`` drops the current last column.
    At most ``rows + cols - 1`` comparisons on the view.
    """
    start = oracle.count
    return _outcome(oracle, start, _grid_search(grid, oracle, row_lo, col_hi))


def _case_one(grid: LayerGrid, oracle: ComparisonOracle, row_lo: int) -> int | None:
    row = grid.rows[row_lo]
    w = len(row)
    answer = oracle.query(row[w - 2])
    if answer is Answer.EQ:
        return row[w - 2]
    if answer is Answer.LT:
        return _grid_search(grid, oracle, row_lo, w - 2)
    answer = oracle.query(row[w - 1])
    if answer is Answer.EQ:
        return row[w - 1]
    return _grid_search(grid, oracle, row_lo + 1, w - 2)


def search_layer(grid: LayerGrid, oracle: ComparisonOracle) -> SearchOutcome:
    """Search one layer in at most ``rows + cols - 2`` comparisons.

    Requires ``|L|`` outside {1, 2, 3, 5}. Always opens on the second-to-last
    cell of the first row. ``LT`` there drops the last two columns. After
    ``GT`` the last cell of the first row is probed; if the first row was
    two longer than the second, what remains is a plain staircase, and if it
    was one longer (which forces ``|L| >= 8``), the rows below start with a
    row two longer than its successor and the same opening repeats there.
    """
    if grid.size in SMALL_LAYER_SIZES:
        raise ValueError(f"layer of size {grid.size} needs the rows+cols-1 search")
    start = oracle.count
    shape = grid.shape
    row = grid.rows[0]
    w = shape[0]
    if w - shape[1] == 2:
        return _outcome(oracle, start, _case_one(grid, oracle, 0))

    answer = oracle.query(row[w - 2])
    if answer is Answer.EQ:
        return _outcome(oracle, start, row[w - 2])
    if answer is Answer.LT:
        return _outcome(oracle, start, _grid_search(grid, oracle, 0, w - 2))
    answer = oracle.query(row[w - 1])
    if answer is Answer.EQ:
        return _outcome(oracle, start, row[w - 1])
    return _outcome(oracle, start, _case_one(grid, oracle, 1))


def layer_budget(grid: LayerGrid) -> int:
    slack = 1 if grid.size in SMALL_LAYER_SIZES else 2
    return grid.n_rows + grid.n_cols - slack


def shape_budget(shape: tuple[int, ...]) -> int:
    slack = 1 if sum(shape) in SMALL_LAYER_SIZES else 2
    return len(shape) + shape[0] - slack


def search_layer_auto(grid: LayerGrid, oracle: ComparisonOracle) -> SearchOutcome:
    """Per-layer dispatch used by :func:`search_table`."""
    if grid.size in SMALL_LAYER_SIZES:
        return search_monotone_grid(grid, oracle)
    return search_layer(grid, oracle)


@lru_cache(maxsize=64)
def _layers_by_size(n: int) -> tuple[LayerGrid, ...]:
    # larger layers first; the bound does not depend on the order
    return tuple(sorted(layer_decomposition(n), key=lambda g: (-g.size, g.base)))


def search_table(n: int, oracle: ComparisonOracle) -> SearchOutcome:
    """Search the layers one by one, small layers with the ``m+n-1`` routine."""
    _check_n(n)
    start = oracle.count
    for grid in _layers_by_size(n):
        if grid.size in SMALL_LAYER_SIZES:
            match = _grid_search(grid, oracle)
        else:
            match = search_layer(grid, oracle).match
        if match is not None:
            return _outcome(oracle, start, match)
    return _outcome(oracle, start, None)


def search_table_grid_only(n: int, oracle: ComparisonOracle) -> SearchOutcome:
    """Baseline: the ``m+n-1`` routine on every layer."""
    _check_n(n)
    start = oracle.count
    for grid in _layers_by_size(n):
        match = _grid_search(grid, oracle)
        if match is not None:
            return _outcome(oracle, start, match)
    return _outcome(oracle, start, None)


def budget_s2(n: int) -> int:
    """Sum over layers of ``rows + cols - 1`` (sizes 1, 2, 3, 5) or ``rows + cols - 2``."""
    _check_n(n)
    return sum(layer_budget(g) for g in layer_decomposition(n))


def budget_grid_only(n: int) -> int:
    _check_n(n)
    return sum(g.n_rows + g.n_cols - 1 for g in layer_decomposition(n))


def upper_slack(n: int) -> float:
    """Allowance for the ``O(ln^2 n)`` term in the upper bound."""
    return 10 * math.log(n) ** 2 + 20


# ---------------------------------------------------------------------------
# exhaustive answer-tree walks


def answer_tree_depth(procedure: Callable[[ComparisonOracle], object], n: int,
                      include_eq: bool = True) -> int:
    """Maximum number of queries ``procedure`` makes over every answer sequence.

    Depth-first over the algorithm's decision tree by replay: each run
    follows a scripted prefix and answers ``LT`` afterwards (``GT`` where
    ``LT`` is contradictory); every position past the prefix spawns its
    other siblings. Contradictory siblings are dropped when replayed.
    """
    worst = 0
    stack: list[tuple[Answer, ...]] = [()]
    while stack:
        script = stack.pop()
        oracle = ScriptedOracle(n, script)
        try:
            procedure(oracle)
        except InconsistentAnswerError:
            continue
        worst = max(worst, oracle.count)
        answers = tuple(a for _, a in oracle.transcript)
        for k in range(len(script), oracle.count):
            for alt in Answer:
                if alt is not answers[k] and (include_eq or alt is not Answer.EQ):
                    stack.append(answers[:k] + (alt,))
    return worst


@lru_cache(maxsize=None)
def shape_depth(shape: tuple[int, ...]) -> int:
    """Exhaustive worst case of the per-layer dispatch on a layer of this shape."""
    q = _representative_q(shape)
    grid = LayerGrid.build(1, q)
    return answer_tree_depth(lambda o: search_layer_auto(grid, o), q)


def _representative_q(shape: tuple[int, ...]) -> int:
    # the smallest q producing this shape is the largest element of the layer
    q = max(3**s << (length - 1) for s, length in enumerate(shape))
    if layer_shape(q) != shape:
        raise ValueError(f"{shape} is not a layer shape")
    return q


def worst_case_search_table(n: int) -> int:
    """Exhaustive worst case of :func:`search_table` assembled per layer.

    Layers are searched independently and only ``EQ`` stops early, so the
    decision-tree depth is the sum of the per-layer depths.
    """
    _check_n(n)
    return sum(shape_depth(g.shape) for g in layer_decomposition(n))
