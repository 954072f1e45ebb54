"""Concrete consistent tables and transcript witnesses.

Values are even integers ``2, 4, ..., 2n`` assigned along a linear extension
of divisibility, so every probe region (each value, each gap, both ends) is
an exact integer and equality never depends on floating point.
"""

from __future__ import annotations

import csv
import graphlib
import heapq
import io
from dataclasses import dataclass, field

import numpy as np

from .oracle import Answer, Transcript
from .poset import Regime, _check_n, prime_factors, smallest_prime_factors, unit_table


@dataclass(frozen=True)
class ConsistentTable:
    values: np.ndarray  # values[i - 1] is a_i

    @property
    def n(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int):
        if not 1 <= i <= self.n:
            raise IndexError(i)
        return self.values[i - 1].item()

    def is_consistent(self) -> bool:
        v = self.values
        if len(np.unique(v)) != len(v):
            return False
        for d in range(1, self.n // 2 + 1):
            if (v[2 * d - 1 :: d] <= v[d - 1]).any():
                return False
        return True

    def probes(self) -> list:
        """Every value, every midpoint between neighbours, and one value past each end."""
        v = sorted(self.values.tolist())
        mids = [(a + b) // 2 if (a + b) % 2 == 0 else (a + b) / 2 for a, b in zip(v, v[1:])]
        return sorted([v[0] - 1, *v, *mids, v[-1] + 1])

    def contains(self, x) -> int | None:
        hits = np.flatnonzero(self.values == x)
        return int(hits[0]) + 1 if hits.size else None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["subscript", "value"])
        for i, v in enumerate(self.values.tolist(), start=1):
            w.writerow([i, v])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> ConsistentTable:
        rows = list(csv.DictReader(io.StringIO(text)))
        values = np.zeros(len(rows), dtype=np.int64)
        for row in rows:
            values[int(row["subscript"]) - 1] = int(row["value"])
        return cls(values)


def _rank_values(order: list[int], n: int) -> np.ndarray:
    values = np.zeros(n, dtype=np.int64)
    values[np.asarray(order) - 1] = 2 * np.arange(1, n + 1)
    return values


def random_table(n: int, seed: int | None = None) -> ConsistentTable:
    """Random linear extension of divisibility (random priority among minimal elements)."""
    _check_n(n)
    rng = np.random.default_rng(seed)
    priority = rng.random(n + 1)
    spf = smallest_prime_factors(n)
    # lower covers of j are j / p for the distinct primes p | j
    waiting = [0, 0] + [len(prime_factors(j, spf)) for j in range(2, n + 1)]
    heap = [(priority[1], 1)]
    order = []
    while heap:
        _, i = heapq.heappop(heap)
        order.append(i)
        for m in range(2 * i, n + 1, i):
            p = m // i
            if spf[p] == p:  # m covers i
                waiting[m] -= 1
                if waiting[m] == 0:
                    heapq.heappush(heap, (priority[m], m))
    return ConsistentTable(_rank_values(order, n))


# ---------------------------------------------------------------------------
# transcript constraints and witnesses


@dataclass(frozen=True)
class TranscriptConstraints:
    n: int
    gt: frozenset[int] = field(default_factory=frozenset)  # x > a_i
    lt: frozenset[int] = field(default_factory=frozenset)  # x < a_i

    @classmethod
    def from_transcript(cls, n: int, transcript: Transcript) -> TranscriptConstraints:
        return cls(n, frozenset(transcript.answered(Answer.GT)),
                   frozenset(transcript.answered(Answer.LT)))

    def settled(self) -> np.ndarray:
        """Mask of subscripts known to differ from x (queried or cut)."""
        n = self.n
        gt = np.zeros(n + 1, dtype=bool)
        gt[list(self.gt)] = True
        out = gt.copy()
        for d in range(1, n + 1):
            if not out[d] and gt[d::d].any():
                out[d] = True
        for l in self.lt:
            out[l::l] = True
        out[0] = False
        return out


class InfeasibleError(Exception):
    """No consistent table realises the constraints; ``cycle`` certifies it."""

    def __init__(self, cycle: list):
        super().__init__(f"constraints force a cycle: {cycle}")
        self.cycle = cycle


@dataclass(frozen=True)
class Witness:
    table: ConsistentTable
    x: int
    pin: int | None = None

    def satisfies(self, constraints: TranscriptConstraints) -> bool:
        t = self.table
        return (
            t.is_consistent()
            and all(self.x > t[g] for g in constraints.gt)
            and all(self.x < t[l] for l in constraints.lt)
            and (self.pin is None or t[self.pin] == self.x)
            and (self.pin is not None or t.contains(self.x) is None)
        )


X_NODE = 0


def witness(constraints: TranscriptConstraints, pin: int | None = None) -> Witness:
    """A concrete table and ``x`` realising the constraints, optionally with ``x = a_pin``.

    Builds the divisibility DAG (cover edges) plus a node for x, merges x
    with ``pin`` when given, and assigns values along a topological order.
    Raises :class:`InfeasibleError` with a cycle when none exists.
    """
    n = constraints.n
    x_node = X_NODE if pin is None else pin
    spf = smallest_prime_factors(n)
    graph: dict[int, set[int]] = {j: {j // p for p in prime_factors(j, spf)} for j in range(1, n + 1)}
    graph.setdefault(x_node, set()).update(constraints.gt)
    for l in constraints.lt:
        graph[l].add(x_node)
    try:
        order = list(graphlib.TopologicalSorter(graph).static_order())
    except graphlib.CycleError as err:
        raise InfeasibleError(list(err.args[1])) from None
    rank = {node: 2 * (k + 1) for k, node in enumerate(order)}
    values = np.array([rank[i] for i in range(1, n + 1)], dtype=np.int64)
    return Witness(ConsistentTable(values), rank[x_node], pin)


def pin_feasible(constraints: TranscriptConstraints, pin: int) -> bool:
    """Closed-form feasibility of ``witness(constraints, pin)``.

    Pinning works iff no ``x < a_l`` answer divides an ``x > a_g`` answer,
    no answered ``g`` is a multiple of ``pin`` and no answered ``l`` divides it.
    """
    if pin in constraints.gt or pin in constraints.lt:
        return False
    if any(g % pin == 0 for g in constraints.gt) or any(pin % l == 0 for l in constraints.lt):
        return False
    return transcript_consistent(constraints)


def transcript_consistent(constraints: TranscriptConstraints) -> bool:
    n = constraints.n
    below = np.zeros(n + 1, dtype=bool)
    below[list(constraints.gt)] = True
    return not any(below[l::l].any() for l in constraints.lt)


# ---------------------------------------------------------------------------
# refuting early stops


@dataclass(frozen=True)
class Refutation:
    pinned: int
    witness: Witness


def undecided_essentials(n: int, regime: Regime | str, transcript: Transcript) -> list[int]:
    constraints = TranscriptConstraints.from_transcript(n, transcript)
    essential = unit_table(n, regime).essential
    return np.flatnonzero(essential & ~constraints.settled()).tolist()


def refute_early_stop(n: int, regime: Regime | str, transcript: Transcript,
                      claimed_found: bool = False) -> Refutation | None:
    """Counter-table for a "not found" claim, or ``None`` if the claim is forced.

    Any essential subscript that was neither queried nor cut can still equal
    x; the returned witness pins x to the smallest such subscript.
    """
    if claimed_found:
        raise ValueError("adversaries never answer EQ, so a found claim cannot be checked here")
    pending = undecided_essentials(n, regime, transcript)
    if not pending:
        return None
    constraints = TranscriptConstraints.from_transcript(n, transcript)
    e = pending[0]
    return Refutation(e, witness(constraints, pin=e))
