"""Comparison oracles answering ``x : a_i`` queries, with exact counting."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .poset import divisors, smallest_prime_factors


class Answer(str, enum.Enum):
    LT = "LT"  # x < a_i
    EQ = "EQ"
    GT = "GT"  # x > a_i


class OracleFault(Exception):
    """A search session broke the query protocol or saw contradictory answers."""


class RepeatedQueryError(OracleFault):
    def __init__(self, subscript: int):
        super().__init__(f"subscript {subscript} queried twice")
        self.subscript = subscript


class InconsistentAnswerError(OracleFault):
    def __init__(self, subscript: int, answer: Answer, against: int):
        super().__init__(
            f"answer {answer.value} on {subscript} contradicts the earlier answer on {against}"
        )
        self.subscript = subscript
        self.answer = answer
        self.against = against


@dataclass
class Transcript:
    entries: list[tuple[int, Answer]] = field(default_factory=list)

    def append(self, subscript: int, answer: Answer) -> None:
        self.entries.append((subscript, answer))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[int, Answer]]:
        return iter(self.entries)

    def queried(self) -> list[int]:
        return [i for i, _ in self.entries]

    def answered(self, answer: Answer) -> set[int]:
        return {i for i, a in self.entries if a is answer}

    def to_jsonl(self) -> str:
        return "".join(json.dumps({"q": i, "a": a.value}) + "\n" for i, a in self.entries)

    @classmethod
    def from_jsonl(cls, text: str) -> Transcript:
        entries = []
        for line in text.splitlines():
            if line.strip():
                rec = json.loads(line)
                entries.append((int(rec["q"]), Answer(rec["a"])))
        return cls(entries)


class ComparisonOracle:
    """Base class: subclasses implement ``_answer``.

    With ``check=True`` every answer is validated against the earlier ones
    (an ``x > a_i`` answer may not sit above an ``x < a_j`` answer with
    ``j | i``), which costs a divisor enumeration per query.
    """

    def __init__(self, n: int, check: bool = False):
        self.n = n
        self.check = check
        self.transcript = Transcript()
        self._asked: set[int] = set()
        self._below: set[int] = set()  # answered x > a_i
        self._above: set[int] = set()  # answered x < a_i
        self._spf = smallest_prime_factors(n) if check else None

    @property
    def count(self) -> int:
        return len(self.transcript)

    def query(self, i: int) -> Answer:
        if not 1 <= i <= self.n:
            raise ValueError(f"subscript {i} outside 1..{self.n}")
        if i in self._asked:
            raise RepeatedQueryError(i)
        answer = self._answer(i)
        if self.check:
            self._validate(i, answer)
        self._asked.add(i)
        if answer is Answer.GT:
            self._below.add(i)
        elif answer is Answer.LT:
            self._above.add(i)
        self.transcript.entries.append((i, answer))
        return answer

    def _answer(self, i: int) -> Answer:
        raise NotImplementedError

    def _validate(self, i: int, answer: Answer) -> None:
        against = self.conflict(i, answer)
        if against is not None:
            raise InconsistentAnswerError(i, answer, against)

    def conflict(self, i: int, answer: Answer) -> int | None:
        """An earlier subscript that ``answer`` on ``i`` would contradict, if any."""
        if answer is not Answer.LT and self._above:
            if self._spf is None:
                self._spf = smallest_prime_factors(self.n)
            for d in divisors(i, self._spf):
                if d in self._above:
                    return d
        if answer is not Answer.GT and self._below:
            for m in range(2 * i, self.n + 1, i):
                if m in self._below:
                    return m
        return None


class TableOracle(ComparisonOracle):
    """Answers from a concrete table and a probe value ``x``."""

    def __init__(self, table, x, check: bool = False):
        super().__init__(table.n, check)
        self.table = table
        self.x = x
        self._values = [None, *table.values.tolist()]

    def _answer(self, i: int) -> Answer:
        v = self._values[i]
        if self.x < v:
            return Answer.LT
        if self.x > v:
            return Answer.GT
        return Answer.EQ


class ScriptedOracle(ComparisonOracle):
    """Replays a fixed answer prefix, then answers ``default`` whenever it is consistent."""

    def __init__(self, n: int, script: Iterable[Answer] = (), default: Answer = Answer.LT,
                 check: bool = True):
        super().__init__(n, check)
        self.script = tuple(script)
        self.default = default

    def _answer(self, i: int) -> Answer:
        k = self.count
        if k < len(self.script):
            return self.script[k]
        # past the script, fall back to the other strict answer when forced
        if self.conflict(i, self.default) is None:
            return self.default
        return Answer.GT if self.default is Answer.LT else Answer.LT
