"""Brute-force reference implementations, written straight from the definitions.

Nothing here imports the package's structural code, so agreement with it is
evidence rather than tautology. Everything is slow and meant for small n.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache


def odd_part(i: int) -> int:
    while i % 2 == 0:
        i //= 2
    return i


def strip_23(i: int) -> tuple[int, int, int]:
    """``i = base * 2**k * 3**s`` with base coprime to 6; returns (base, s, k)."""
    k = s = 0
    while i % 2 == 0:
        i //= 2
        k += 1
    while i % 3 == 0:
        i //= 3
        s += 1
    return i, s, k


def layers(n: int) -> dict[int, list[list[int]]]:
    """base -> rows, built by factoring every subscript."""
    grid: dict[int, dict[int, list[tuple[int, int]]]] = {}
    for i in range(1, n + 1):
        base, s, k = strip_23(i)
        grid.setdefault(base, {}).setdefault(s, []).append((k, i))
    return {
        b: [[i for _, i in sorted(rows[s])] for s in sorted(rows)]
        for b, rows in sorted(grid.items())
    }


def chain_cost(n: int) -> int:
    total = 0
    for j in range(1, n + 1, 2):
        size = sum(1 for k in range(n.bit_length() + 1) if j * 2**k <= n)
        total += math.ceil(math.log2(size + 1))
    return total


def s2(n: int) -> int:
    total = 0
    for rows in layers(n).values():
        size = sum(map(len, rows))
        total += len(rows) + len(rows[0]) - (1 if size in (1, 2, 3, 5) else 2)
    return total


def special_sets(n: int):
    """The four index sets from their defining inequalities, in exact rationals."""
    N = Fraction(n)
    s_n = [i for i in range(1, n + 1) if N / 18 < i <= N / 16 and math.gcd(i, 6) == 1]
    s_n1 = [j for j in range(1, n + 1)
            if N / 9 < j <= N / 8 and j % 2 == 0 and j % 3 and j % 4 and j % 5]
    s_n2 = [i for i in range(1, n + 1) if N / 12 < i <= N / 8 and i % 4 == 0 and i % 3 and i % 5]
    s_n3 = [i for i in range(1, n + 1) if N / 12 < i <= 3 * N / 32 and i % 36 == 0 and i % 5]
    return s_n, s_n1, s_n2, s_n3


def units(n: int, regime: str) -> list[tuple[str, list[int]]]:
    """(class name, members) per row; special classes come from the index sets, not shapes."""
    s_n, s_n1, s_n2, s_n3 = map(set, special_sets(n))
    out = []
    for base, rows in layers(n).items():
        for s, row in enumerate(rows):
            cap = 2 if regime == "rs1" else 4
            members = row[-cap:]
            size = len(members)
            if size == 1:
                name = "U1"
            elif size == 2:
                name = "U2"
            elif size == 3:
                name = "U3_1" if len(rows[s + 1]) == 1 else "U3_2"
            else:
                first = members[0]
                name = "U4_GENERAL"
                if regime == "rs2" and first % 2 == 0 and first // 2 in s_n:
                    name = "U4_S"
                if regime == "rs2star":
                    if first in s_n1:
                        name = "U4_S1"
                    elif first in s_n2:
                        name = "U4_S2"
                    elif first in s_n3:
                        name = "U4_S3"
            out.append((name, members))
    return out


ESSENTIAL = {"U1": (0,), "U2": (0, 1), "U3_1": (0, 1), "U3_2": (1, 2), "U4_GENERAL": (1, 2)}


def essential(n: int, regime: str) -> set[int]:
    out = set()
    for name, members in units(n, regime):
        picks = ESSENTIAL.get(name, range(len(members)))
        out.update(members[k] for k in picks)
    return out


def forced(n: int, regime: str) -> int:
    return sum(1 if name == "U1" else 2 if name in ESSENTIAL else 3
               for name, _ in units(n, regime))


def tau(n: int) -> int:
    """Minimax over candidate sets, with explicit divisibility tests."""

    @lru_cache(maxsize=None)
    def value(cands: frozenset) -> int:
        if not cands:
            return 0
        best = math.inf
        for i in cands:
            lt = frozenset(k for k in cands if k % i != 0)
            gt = frozenset(k for k in cands if i % k != 0)
            best = min(best, 1 + max(value(lt), value(gt)))
        return best

    return value(frozenset(range(1, n + 1)))


def is_consistent(values: dict[int, float]) -> bool:
    n = len(values)
    return all(values[i] < values[j] for i in range(1, n + 1) for j in range(2 * i, n + 1, i))
