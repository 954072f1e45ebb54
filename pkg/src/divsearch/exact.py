"""Exact worst-case optimal search cost for small tables.

The game: the searcher names a subscript, the adversary answers ``LT``,
``EQ`` or ``GT`` consistently with some table and some x. Only the set of
still-possible subscripts matters. A subscript that is still a candidate
has no ``x < a`` divisor and no ``x > a`` multiple on record, so both strict
answers are always feasible for it, and their effect on the candidate set
depends on nothing else. Querying a non-candidate teaches nothing. So the
memo key is the candidate bitmask.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import lru_cache

from .oracle import Answer, ComparisonOracle
from .poset import _check_n

DEFAULT_CAP = 12


class Status(enum.IntEnum):
    UNKNOWN = 0
    BELOW_X = 1  # a_i < x
    ABOVE_X = 2  # a_i > x


@dataclass(frozen=True)
class KnowledgeState:
    """Per-subscript status (index 0 is subscript 1), closed under cuts."""

    status: tuple[Status, ...]

    @classmethod
    def initial(cls, n: int) -> KnowledgeState:
        return cls((Status.UNKNOWN,) * n)

    @property
    def n(self) -> int:
        return len(self.status)

    def candidates(self) -> list[int]:
        return [i for i, s in enumerate(self.status, start=1) if s is Status.UNKNOWN]

    @property
    def terminal(self) -> bool:
        return Status.UNKNOWN not in self.status

    def key(self) -> int:
        return _mask(self.candidates())

    def after(self, i: int, answer: Answer) -> KnowledgeState:
        """Close the status vector under the cut implied by ``answer`` on ``i``."""
        if answer is Answer.EQ:
            raise ValueError("EQ ends the search")
        status = list(self.status)
        if answer is Answer.GT:
            for d in range(1, i + 1):
                if i % d == 0:
                    status[d - 1] = Status.BELOW_X
        else:
            for m in range(i, self.n + 1, i):
                status[m - 1] = Status.ABOVE_X
        return KnowledgeState(tuple(status))

    def is_closed(self) -> bool:
        n = self.n
        for i in range(1, n + 1):
            for m in range(2 * i, n + 1, i):
                if self.status[m - 1] is Status.BELOW_X and self.status[i - 1] is not Status.BELOW_X:
                    return False
                if self.status[i - 1] is Status.ABOVE_X and self.status[m - 1] is not Status.ABOVE_X:
                    return False
        return True


def _mask(subscripts) -> int:
    out = 0
    for i in subscripts:
        out |= 1 << (i - 1)
    return out


def _check_cap(n: int, cap: int) -> None:
    _check_n(n)
    if n > cap:
        raise ValueError(
            f"n={n} exceeds the exact-solver cap {cap}; the state space grows steeply, "
            "pass a larger cap explicitly to insist"
        )


@lru_cache(maxsize=None)
def _cut_masks(n: int) -> tuple[tuple[int, int], ...]:
    """``(multiples-or-self, divisors-or-self)`` masks per subscript, index 0 is subscript 1."""
    return tuple(
        (_mask(range(i, n + 1, i)), _mask(d for d in range(1, i + 1) if i % d == 0))
        for i in range(1, n + 1)
    )


class _Solver:
    def __init__(self, n: int, memo: bool = True):
        self.n = n
        self.cuts = _cut_masks(n)
        self.memo: dict[int, int] | None = {0: 0} if memo else None

    def value(self, u: int) -> int:
        if u == 0:
            return 0
        if self.memo is not None and u in self.memo:
            return self.memo[u]
        best = self.n + 1
        for i, (up, down) in enumerate(self.cuts):
            if not u >> i & 1:
                continue
            worse = max(self.value(u & ~up), self.value(u & ~down))
            if worse + 1 < best:
                best = worse + 1
        if self.memo is not None:
            self.memo[u] = best
        return best

    def best_query(self, u: int) -> int:
        target = self.value(u)
        for i, (up, down) in enumerate(self.cuts):
            if u >> i & 1 and 1 + max(self.value(u & ~up), self.value(u & ~down)) == target:
                return i + 1
        raise AssertionError("no query attains the minimax value")


def tau_exact(n: int, cap: int = DEFAULT_CAP, memo: bool = True) -> int:
    """Worst-case number of comparisons of an optimal search on ``P_n``."""
    _check_cap(n, cap)
    return _Solver(n, memo).value((1 << n) - 1)


def tau_table(n_max: int, cap: int = DEFAULT_CAP) -> dict[int, int]:
    return {n: tau_exact(n, cap) for n in range(1, n_max + 1)}


NOT_FOUND = "NOT_FOUND"
FOUND = "FOUND"


def optimal_tree(n: int, cap: int = DEFAULT_CAP) -> dict | str:
    """One optimal strategy as a nested ternary tree (ties go to the smallest subscript)."""
    _check_cap(n, cap)
    solver = _Solver(n)

    def build(u: int):
        if u == 0:
            return NOT_FOUND
        i = solver.best_query(u)
        up, down = solver.cuts[i - 1]
        return {"q": i, "lt": build(u & ~up), "eq": FOUND, "gt": build(u & ~down)}

    return build((1 << n) - 1)


def tree_depth(tree) -> int:
    if tree in (NOT_FOUND, FOUND):
        return 0
    return 1 + max(tree_depth(tree["lt"]), tree_depth(tree["gt"]))


def tree_to_json(tree) -> str:
    return json.dumps(tree, separators=(",", ":"))


def replay_tree(tree, oracle: ComparisonOracle) -> int | None:
    """Walk the tree against an oracle; the matching subscript or ``None``."""
    node = tree
    while isinstance(node, dict):
        answer = oracle.query(node["q"])
        if answer is Answer.EQ:
            return node["q"]
        node = node["lt"] if answer is Answer.LT else node["gt"]
    return None
