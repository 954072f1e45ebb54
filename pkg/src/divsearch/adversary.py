"""Adaptive adversaries and the essential-element machinery behind the lower bounds.

Answers are never ``EQ``. ``GT`` (``x > a_i``) cuts the proper divisors of i,
``LT`` (``x < a_i``) cuts the proper multiples. An element is essential when
no element outside its unit can cut it under any answer the strategy might
give, so every correct algorithm must settle it with its own comparisons.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .oracle import Answer, ComparisonOracle, Transcript
from .poset import (
    GT_CODE,
    Regime,
    UnitClass,
    Violation,
    _check_n,
    divisor_pairs_upto,
    special_index_sets,
    unit_table,
)
from .search import SearchOutcome, search_chains, search_table, search_table_grid_only
from .tablegen import (
    InfeasibleError,
    TranscriptConstraints,
    refute_early_stop,
    transcript_consistent,
    witness,
)


class Direction(enum.Enum):
    LEFT_UP = Answer.GT
    RIGHT_BOTTOM = Answer.LT


def cut_set(i: int, d: Direction | Answer, n: int) -> frozenset[int]:
    """Subscripts eliminated by answering ``d`` on ``a_i``."""
    if not 1 <= i <= n:
        raise ValueError(f"subscript {i} outside 1..{n}")
    answer = d.value if isinstance(d, Direction) else d
    if answer is Answer.LT:
        return frozenset(range(2 * i, n + 1, i))
    if answer is Answer.GT:
        return frozenset(k for k in range(1, i // 2 + 1) if i % k == 0)
    raise ValueError("only LT and GT answers cut")


# ---------------------------------------------------------------------------
# special units

# Full answer vector of a special unit (members w, 2w, 4w, 8w) once the
# member at the key position has been probed first.
SPECIAL_RESPONSES: dict[int, tuple[Answer, ...]] = {
    0: (Answer.GT, Answer.GT, Answer.LT, Answer.LT),
    1: (Answer.GT, Answer.GT, Answer.GT, Answer.LT),
    2: (Answer.GT, Answer.LT, Answer.LT, Answer.LT),
    3: (Answer.GT, Answer.GT, Answer.LT, Answer.LT),
}

FRESH_POSSIBILITIES = tuple(
    frozenset(vec[k] for vec in SPECIAL_RESPONSES.values()) for k in range(4)
)


@dataclass
class SpecialUnitState:
    first: int
    first_probe: int | None = None  # member position probed first, None while fresh

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(self.first << k for k in range(4))

    def respond(self, position: int) -> Answer:
        if self.first_probe is None:
            self.first_probe = position
        return SPECIAL_RESPONSES[self.first_probe][position]

    def possibilities(self, position: int) -> frozenset[Answer]:
        if self.first_probe is None:
            return FRESH_POSSIBILITIES[position]
        return frozenset({SPECIAL_RESPONSES[self.first_probe][position]})


# ---------------------------------------------------------------------------
# sessions


class AdversarySession(ComparisonOracle):
    """Comparison oracle playing RS1, RS2 or RS2* against a search algorithm."""

    def __init__(self, n: int, regime: Regime | str, check: bool = True):
        _check_n(n)
        super().__init__(n, check)
        self.regime = Regime(regime)
        self.units = unit_table(n, self.regime)
        self.special: dict[int, SpecialUnitState] = {}

    def _answer(self, i: int) -> Answer:
        code = self.units.answer[i]
        if code:
            return Answer.GT if code == GT_CODE else Answer.LT
        w = int(self.units.first[i])
        state = self.special.setdefault(w, SpecialUnitState(w))
        return state.respond(int(self.units.position[i]))


def respond(session: AdversarySession, query: int) -> Answer:
    return session.query(query)


# ---------------------------------------------------------------------------
# essential sets and their verification


@dataclass(frozen=True)
class EssentialSet:
    regime: Regime
    subscripts: frozenset[int]

    def __len__(self) -> int:
        return len(self.subscripts)

    def __contains__(self, i) -> bool:
        return i in self.subscripts


def essential_set(n: int, regime: Regime | str) -> EssentialSet:
    table = unit_table(n, regime)
    return EssentialSet(Regime(regime), frozenset(np.flatnonzero(table.essential).tolist()))


def verify_essentiality(n: int, regime: Regime | str,
                        overrides: dict[int, UnitClass] | None = None) -> list[Violation]:
    """Every way an outside element could cut an essential one, given the strategy.

    For each divisibility pair ``d | m`` in different units: a possible
    ``GT`` on m cuts d, a possible ``LT`` on d cuts m. Expected empty.
    """
    _check_n(n)
    table = unit_table(n, regime)
    if overrides:
        table = table.reclassified(overrides)
    d, m = divisor_pairs_upto(n)
    # non-unit elements have first == 0 and are never essential
    apart = table.first[d] != table.first[m]
    up = apart & table.essential[d] & table.can_gt[m]
    down = apart & table.essential[m] & table.can_lt[d]
    report = [
        Violation("cut-from-above", (int(a), int(b)), f"GT on {int(b)} cuts essential {int(a)}")
        for a, b in zip(d[up], m[up])
    ]
    report += [
        Violation("cut-from-below", (int(a), int(b)), f"LT on {int(a)} cuts essential {int(b)}")
        for a, b in zip(d[down], m[down])
    ]
    return report


def essentiality_sweep(n_max: int, regimes=(Regime.RS2, Regime.RS2STAR),
                       n_min: int = 1) -> list[Violation]:
    report = []
    for regime in regimes:
        for n in range(n_min, n_max + 1):
            report += [Violation(v.kind, (Regime(regime).value, n, *v.where), v.detail)
                       for v in verify_essentiality(n, regime)]
    return report


# ---------------------------------------------------------------------------
# counting


def forced_comparison_count(n: int, regime: Regime | str) -> int:
    """Comparisons every correct algorithm spends against the strategy.

    One per 1-element row, two per other row, three for a row holding a
    special unit.
    """
    _check_n(n)
    regime = Regime(regime)
    table = unit_table(n, regime)
    cls = table.cls[(table.position == 0) & (table.cls > 0)]
    return int(np.where(cls == UnitClass.U1, 1, np.where(cls >= UnitClass.U4_S, 3, 2)).sum())


def rs1_forced_count(n: int) -> int:
    """Size of ``{i : n/4 < i <= n}``."""
    return n - n // 4


def special_unit_count(n: int, regime: Regime | str) -> int:
    counts = unit_table(n, regime).units_by_class()
    return sum(v for c, v in counts.items() if c.is_special)


def special_set_sizes(n: int) -> dict[str, int]:
    sets = special_index_sets(n)
    return {"s_n": len(sets.s_n), "s_n1": len(sets.s_n1), "s_n2": len(sets.s_n2),
            "s_n3": len(sets.s_n3)}


# ---------------------------------------------------------------------------
# duels

ALGORITHMS: dict[str, Callable[[int, ComparisonOracle], SearchOutcome]] = {
    "chains": search_chains,
    "table": search_table,
    "grid": search_table_grid_only,
}


class LowerBoundViolation(AssertionError):
    pass


@dataclass
class DuelResult:
    n: int
    regime: Regime
    algorithm: str
    comparisons: int
    outcome: SearchOutcome
    transcript: Transcript = field(repr=False)
    forced: int
    confirmed: bool

    def summary(self) -> dict:
        return {
            "n": self.n,
            "regime": self.regime.value,
            "algo": self.algorithm,
            "comparisons": self.comparisons,
            "found": self.outcome.found,
            "forced": self.forced,
            "confirmed": self.confirmed,
        }


def duel(n: int, regime: Regime | str, algorithm: str | Callable = "table",
         check: bool = True, audit: bool = True) -> DuelResult:
    """Run a search algorithm against an adversary and audit the result.

    The full transcript must be realisable with x absent (with ``audit``, a
    concrete witness table is built; otherwise a closed-form test), every
    essential element must be settled, and the comparison count must reach
    the forced count. Raises on any breach.
    """
    regime = Regime(regime)
    name = algorithm if isinstance(algorithm, str) else getattr(algorithm, "__name__", "custom")
    run = ALGORITHMS[algorithm] if isinstance(algorithm, str) else algorithm
    session = AdversarySession(n, regime, check=check)
    outcome = run(n, session)
    if outcome.found:
        raise LowerBoundViolation("adversary never answers EQ, yet the search reported a match")
    constraints = TranscriptConstraints.from_transcript(n, session.transcript)
    if audit:
        witness(constraints)
    elif not transcript_consistent(constraints):
        raise LowerBoundViolation("adversary answers admit no consistent table")
    confirmed = refute_early_stop(n, regime, session.transcript) is None
    forced = forced_comparison_count(n, regime)
    if confirmed and session.count < forced:
        raise LowerBoundViolation(f"{name} settled n={n} in {session.count} < {forced} comparisons")
    return DuelResult(n, regime, name, session.count, outcome, session.transcript, forced,
                      confirmed)


# ---------------------------------------------------------------------------
# witness sweeps over completed duels


def witness_violations(n: int, regime: Regime | str, algorithm: str = "table",
                       builds: int = 1) -> list[Violation]:
    """Drop each essential element's own comparison from a completed duel and re-pin it.

    With its comparison removed, an essential element may only be cut from
    inside its unit. When nothing cuts it, pinning ``x`` to it must be
    feasible; ``builds`` evenly spaced such pins get a concrete witness
    table, checked against the shortened transcript.
    """
    regime = Regime(regime)
    result = duel(n, regime, algorithm, check=False, audit=False)
    table = unit_table(n, regime)
    entries = dict(result.transcript.entries)
    gt = np.zeros(n + 1, dtype=bool)
    lt = np.zeros(n + 1, dtype=bool)
    for i, a in entries.items():
        (gt if a is Answer.GT else lt)[i] = True
    d, m = divisor_pairs_upto(n)
    apart = table.first[d] != table.first[m]
    # pairs have d < m, so an element's own answer never counts against it
    below = table.essential[m] & lt[d]
    above = table.essential[d] & gt[m]
    report = [
        Violation("cut-outside-unit", (regime.value, n, int(b), int(a)), algorithm)
        for a, b in zip(d[below & apart], m[below & apart])
    ]
    report += [
        Violation("cut-outside-unit", (regime.value, n, int(a), int(b)), algorithm)
        for a, b in zip(d[above & apart], m[above & apart])
    ]
    cut = np.zeros(n + 1, dtype=bool)
    cut[m[below]] = True
    cut[d[above]] = True
    free = np.flatnonzero(table.essential & ~cut)
    if builds and free.size:
        for e in free[np.linspace(0, free.size - 1, min(builds, free.size)).astype(int)].tolist():
            rest = [(i, a) for i, a in entries.items() if i != e]
            constraints = TranscriptConstraints(
                n, frozenset(i for i, a in rest if a is Answer.GT),
                frozenset(i for i, a in rest if a is Answer.LT),
            )
            try:
                ok = witness(constraints, pin=e).satisfies(constraints)
            except InfeasibleError:
                ok = False
            if not ok:
                report.append(Violation("pin-infeasible", (regime.value, n, e), algorithm))
    return report


def witness_sweep(n_max: int, regimes=(Regime.RS2, Regime.RS2STAR),
                  algorithms=("table", "chains"), n_min: int = 1,
                  build_stride: int = 10) -> list[Violation]:
    """:func:`witness_violations` for every n, building witness tables every ``build_stride`` n."""
    report = []
    for n in range(n_min, n_max + 1):
        builds = 1 if build_stride and n % build_stride == 0 else 0
        for regime in regimes:
            for algorithm in algorithms:
                report += witness_violations(n, regime, algorithm, builds)
    return report


# ---------------------------------------------------------------------------
# deliberately broken searches, for checking that refutation fires


class _Halt(Exception):
    pass


class _Budgeted(ComparisonOracle):
    """Forwards to another oracle and halts the caller after ``limit`` queries."""

    def __init__(self, inner: ComparisonOracle, limit: int):
        super().__init__(inner.n)
        self.inner = inner
        self.limit = limit

    def _answer(self, i: int) -> Answer:
        if self.count >= self.limit:
            raise _Halt
        return self.inner.query(i)


def stop_short(run: Callable[[int, ComparisonOracle], SearchOutcome],
               limit: Callable[[int], int]) -> Callable[[int, ComparisonOracle], SearchOutcome]:
    """Wrap a search so it gives up, reporting "absent", after ``limit(n)`` queries."""

    def truncated(n: int, oracle: ComparisonOracle) -> SearchOutcome:
        start = oracle.count
        try:
            return run(n, _Budgeted(oracle, limit(n)))
        except _Halt:
            return SearchOutcome(False, None, oracle.count - start)

    truncated.__name__ = f"stop_short_{getattr(run, '__name__', 'search')}"
    return truncated


def skip_largest_layer(n: int, oracle: ComparisonOracle) -> SearchOutcome:
    from .search import _layers_by_size, search_layer_auto

    start = oracle.count
    for grid in _layers_by_size(n)[1:]:
        match = search_layer_auto(grid, oracle).match
        if match is not None:
            return SearchOutcome(True, match, oracle.count - start)
    return SearchOutcome(False, None, oracle.count - start)


def skip_largest_chain(n: int, oracle: ComparisonOracle) -> SearchOutcome:
    from .search import _binary_search
    from .poset import chain_partition

    start = oracle.count
    for j, chain in chain_partition(n).items():
        if j == 1:
            continue
        match = _binary_search(chain, oracle)
        if match is not None:
            return SearchOutcome(True, match, oracle.count - start)
    return SearchOutcome(False, None, oracle.count - start)


FAULTY_ALGORITHMS: dict[str, Callable[[int, ComparisonOracle], SearchOutcome]] = {
    "stop-before-forced": stop_short(search_table,
                                     lambda n: forced_comparison_count(n, Regime.RS2STAR) - 1),
    "skip-largest-layer": skip_largest_layer,
    "skip-largest-chain": skip_largest_chain,
}


@dataclass
class RefutationReport:
    n: int
    regime: Regime
    algorithm: str
    comparisons: int
    pinned: int | None
    verified: bool


def refute_faulty(n: int, regime: Regime | str, name: str) -> RefutationReport:
    """Play a broken search against the adversary and try to refute its "absent" claim.

    ``verified`` means a pinned witness exists, satisfies the transcript
    and, replayed as a concrete table, reproduces every recorded answer.
    """
    from .oracle import TableOracle

    regime = Regime(regime)
    session = AdversarySession(n, regime, check=True)
    outcome = FAULTY_ALGORITHMS[name](n, session)
    if outcome.found:
        raise LowerBoundViolation(f"{name} claimed a match against an adversary")
    refutation = refute_early_stop(n, regime, session.transcript)
    if refutation is None:
        return RefutationReport(n, regime, name, session.count, None, False)
    w = refutation.witness
    constraints = TranscriptConstraints.from_transcript(n, session.transcript)
    replay = TableOracle(w.table, w.x)
    agrees = all(replay.query(i) is a for i, a in session.transcript)
    ok = w.satisfies(constraints) and agrees and w.table[refutation.pinned] == w.x
    return RefutationReport(n, regime, name, session.count, refutation.pinned, ok)
