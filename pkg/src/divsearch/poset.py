"""Structure of {1..n} under divisibility.

Everything here is a pure function of ``n``. Subscripts are plain ints.
A *layer* is the set ``base * 2**k * 3**s`` for a base coprime to 6; it is
stored as rows (fixed power of 3) of increasing powers of 2, so row lengths
strictly decrease downward. A *unit* is the tail of a row: the last four
elements (last two under the RS1 regime).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

SMALL_LAYER_SIZES = frozenset({1, 2, 3, 5})


class Regime(str, enum.Enum):
    RS1 = "rs1"
    RS2 = "rs2"
    RS2STAR = "rs2star"


class UnitClass(enum.IntEnum):
    U1 = 1
    U2 = 2
    U3_1 = 3
    U3_2 = 4
    U4_GENERAL = 5
    U4_S = 6
    U4_S1 = 7
    U4_S2 = 8
    U4_S3 = 9

    @property
    def is_special(self) -> bool:
        return self >= UnitClass.U4_S


SPECIAL_CLASSES = frozenset(c for c in UnitClass if c.is_special)


def _check_n(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"table size must be a positive integer, got {n!r}")


def coprime_to_6(i: int) -> bool:
    return i % 2 != 0 and i % 3 != 0


def row_length(head: int, n: int) -> int:
    """Number of k >= 0 with ``head * 2**k <= n``."""
    return (n // head).bit_length() if head <= n else 0


# ---------------------------------------------------------------------------
# chains


def chain_partition(n: int) -> dict[int, list[int]]:
    """Map each odd ``j <= n`` to its chain ``[j, 2j, 4j, ...]`` (capped at n)."""
    return {chain[0]: list(chain) for chain in chains(n)}


@lru_cache(maxsize=64)
def chains(n: int) -> tuple[tuple[int, ...], ...]:
    """The chains of :func:`chain_partition` as tuples, ordered by odd part."""
    _check_n(n)
    return tuple(
        tuple(j << k for k in range(row_length(j, n))) for j in range(1, n + 1, 2)
    )


# ---------------------------------------------------------------------------
# layers


@dataclass(frozen=True)
class LayerGrid:
    base: int
    n: int
    rows: tuple[tuple[int, ...], ...]

    @classmethod
    def build(cls, base: int, n: int) -> LayerGrid:
        if not coprime_to_6(base) or not 1 <= base <= n:
            raise ValueError(f"layer base must be coprime to 6 and <= n, got {base}")
        rows = []
        head = base
        while head <= n:
            rows.append(tuple(head << k for k in range(row_length(head, n))))
            head *= 3
        return cls(base, n, tuple(rows))

    @cached_property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.rows)

    @cached_property
    def size(self) -> int:
        return sum(self.shape)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0])

    def members(self) -> list[int]:
        return [i for row in self.rows for i in row]

    def to_json(self) -> dict:
        return {"base": self.base, "rows": [list(r) for r in self.rows]}


@lru_cache(maxsize=64)
def layer_decomposition(n: int) -> tuple[LayerGrid, ...]:
    """All layers of ``{1..n}``, ordered by base."""
    _check_n(n)
    return tuple(LayerGrid.build(b, n) for b in range(1, n + 1, 2) if b % 3)


def layer_shape(q: int) -> tuple[int, ...]:
    """Row lengths of any layer whose base b has ``n // b == q``."""
    shape = []
    head = 1
    while head <= q:
        shape.append(row_length(head, q))
        head *= 3
    return tuple(shape)


def layer_base(i: int) -> int:
    while i % 2 == 0:
        i //= 2
    while i % 3 == 0:
        i //= 3
    return i


# ---------------------------------------------------------------------------
# units


@dataclass(frozen=True)
class Unit:
    layer_base: int
    row_index: int
    members: tuple[int, ...]
    cls: UnitClass

    @property
    def first(self) -> int:
        return self.members[0]


def _four_unit_class(grid: LayerGrid, s: int, first: int, regime: Regime) -> UnitClass:
    shape = grid.shape
    length = shape[s]
    below = shape[s + 1] if s + 1 < len(shape) else 0
    if regime is Regime.RS2:
        return UnitClass.U4_S if s == 0 and grid.size == 9 else UnitClass.U4_GENERAL
    if grid.base % 5 == 0:
        return UnitClass.U4_GENERAL
    if s == 0 and grid.size == 9:
        return UnitClass.U4_S1
    if s == 0 and length >= 6 and length - below == 2:
        return UnitClass.U4_S2
    if s > 0 and first % 36 == 0 and shape[s - 1] == length + 2 and below == length - 2:
        return UnitClass.U4_S3
    return UnitClass.U4_GENERAL


def classify_units(grid: LayerGrid, regime: Regime | str) -> list[Unit]:
    """One unit per row of ``grid``, classified from the layer's shape alone."""
    regime = Regime(regime)
    cap = 2 if regime is Regime.RS1 else 4
    shape = grid.shape
    units = []
    for s, row in enumerate(grid.rows):
        size = min(cap, len(row))
        members = row[-size:]
        if size == 1:
            cls = UnitClass.U1
        elif size == 2:
            cls = UnitClass.U2
        elif size == 3:
            # the row below a 3-row always has one or two elements
            cls = UnitClass.U3_1 if shape[s + 1] == 1 else UnitClass.U3_2
        else:
            cls = _four_unit_class(grid, s, members[0], regime)
        units.append(Unit(grid.base, s, members, cls))
    return units


def all_units(n: int, regime: Regime | str) -> list[Unit]:
    return [u for g in layer_decomposition(n) for u in classify_units(g, regime)]


# ---------------------------------------------------------------------------
# special index sets


@dataclass(frozen=True)
class SpecialIndexSets:
    s_n: tuple[int, ...]
    s_n1: tuple[int, ...]
    s_n2: tuple[int, ...]
    s_n3: tuple[int, ...]

    @property
    def refined_total(self) -> int:
        return len(self.s_n1) + len(self.s_n2) + len(self.s_n3)


def special_index_sets(n: int) -> SpecialIndexSets:
    """The four index sets, with all bounds evaluated in exact integers.

    ``s_n`` holds layer bases, ``s_n1`` holds first-member subscripts ``2*base``
    and ``s_n2``/``s_n3`` hold first-member subscripts.
    """
    _check_n(n)
    s_n = tuple(i for i in range(1, n // 16 + 1) if 18 * i > n and coprime_to_6(i))
    s_n1 = tuple(
        j for j in range(2, n // 8 + 1, 4) if 9 * j > n and j % 3 and j % 5
    )
    s_n2 = tuple(i for i in range(4, n // 8 + 1, 4) if 12 * i > n and i % 3 and i % 5)
    s_n3 = tuple(
        i for i in range(36, 3 * n // 32 + 1, 36) if 12 * i > n and i % 5
    )
    return SpecialIndexSets(s_n, s_n1, s_n2, s_n3)


# ---------------------------------------------------------------------------
# vectorised per-subscript tables used by the large sweeps

# answer codes: +1 means "x > a_i", -1 means "x < a_i", 0 means adaptive
GT_CODE, LT_CODE, ADAPTIVE = 1, -1, 0

_STATIC_ANSWERS = {
    UnitClass.U1: (LT_CODE,),
    UnitClass.U2: (GT_CODE, LT_CODE),
    UnitClass.U3_1: (GT_CODE, LT_CODE, LT_CODE),
    UnitClass.U3_2: (GT_CODE, GT_CODE, LT_CODE),
    UnitClass.U4_GENERAL: (GT_CODE, GT_CODE, LT_CODE, LT_CODE),
}

ESSENTIAL_POSITIONS = {
    UnitClass.U1: (0,),
    UnitClass.U2: (0, 1),
    UnitClass.U3_1: (0, 1),
    UnitClass.U3_2: (1, 2),
    UnitClass.U4_GENERAL: (1, 2),
    **{c: (0, 1, 2, 3) for c in SPECIAL_CLASSES},
}


def static_answers(cls: UnitClass) -> tuple[int, ...] | None:
    """Fixed answer codes for a general unit's members, None for special units."""
    return _STATIC_ANSWERS.get(cls)


def _lookup(table: dict, fill) -> np.ndarray:
    out = np.full((len(UnitClass) + 1, 4), fill, dtype=np.int8)
    for cls, row in table.items():
        out[cls, : len(row)] = row
    return out


_ANSWER_LUT = _lookup(_STATIC_ANSWERS, ADAPTIVE)
_ANSWER_LUT[0, :] = GT_CODE  # not in a unit
_ESSENTIAL_LUT = np.zeros((len(UnitClass) + 1, 4), dtype=bool)
for _cls, _pos in ESSENTIAL_POSITIONS.items():
    _ESSENTIAL_LUT[_cls, list(_pos)] = True


def _bit_length(q: np.ndarray) -> np.ndarray:
    # frexp is exact for integers below 2**53
    return np.frexp(q.astype(np.float64))[1].astype(np.int64)


@lru_cache(maxsize=4)
def _factor_arrays(limit: int):
    j = np.arange(limit + 1, dtype=np.int64)
    rest = j.copy()
    rest[0] = 1
    k2 = np.zeros(limit + 1, dtype=np.int64)
    s3 = np.zeros(limit + 1, dtype=np.int64)
    for p, exps in ((2, k2), (3, s3)):
        while True:
            hit = rest % p == 0
            if not hit.any():
                break
            rest[hit] //= p
            exps[hit] += 1
    base = rest
    head = j >> k2
    head[0] = 1
    smooth = np.zeros(limit + 1, dtype=np.int64)
    p3 = 1
    while p3 <= limit:
        p2 = p3
        while p2 <= limit:
            smooth[p2] = 1
            p2 *= 2
        p3 *= 3
    smooth_count = np.cumsum(smooth)
    return base, s3, k2, head, smooth_count


def _tables_for(n: int):
    limit = 1 << max(n, 1024).bit_length()
    base, s3, k2, head, smooth_count = _factor_arrays(limit)
    sl = slice(0, n + 1)
    return base[sl], s3[sl], k2[sl], head[sl], smooth_count


@dataclass(frozen=True)
class UnitTable:
    """Per-subscript unit data; arrays are indexed by subscript (slot 0 unused)."""

    n: int
    regime: Regime
    cls: np.ndarray  # UnitClass code, 0 outside units
    position: np.ndarray  # index inside the unit
    first: np.ndarray  # first member of the unit, 0 outside units
    answer: np.ndarray  # GT_CODE / LT_CODE / ADAPTIVE
    can_gt: np.ndarray
    can_lt: np.ndarray
    essential: np.ndarray
    row_length: np.ndarray

    def special_firsts(self) -> np.ndarray:
        mask = (self.cls >= UnitClass.U4_S) & (self.position == 0)
        return np.flatnonzero(mask)

    def reclassified(self, overrides: dict[int, UnitClass]) -> UnitTable:
        """Copy with whole units (keyed by first member) moved to other classes."""
        cls = self.cls.copy()
        for first, new in overrides.items():
            members = np.flatnonzero(self.first == first)
            if members.size == 0:
                raise ValueError(f"{first} does not start a unit")
            cls[members] = new
        return UnitTable(self.n, self.regime, cls, self.position, self.first,
                         *_derived(cls, self.position), self.row_length)

    def units_by_class(self) -> dict[UnitClass, int]:
        codes, counts = np.unique(self.cls[(self.position == 0) & (self.cls > 0)],
                                  return_counts=True)
        return {UnitClass(int(c)): int(k) for c, k in zip(codes, counts)}


@lru_cache(maxsize=32)
def unit_table(n: int, regime: Regime | str) -> UnitTable:
    """Vectorised equivalent of running :func:`classify_units` on every layer."""
    _check_n(n)
    regime = Regime(regime)
    base, s3, k2, head, smooth_count = _tables_for(n)
    length = _bit_length(n // head)
    from_end = length - 1 - k2
    usize = np.minimum(length, 2 if regime is Regime.RS1 else 4)
    in_unit = from_end < usize
    position = np.where(in_unit, usize - 1 - from_end, 0)
    first = np.where(in_unit, head << (length - usize), 0)
    below = _bit_length(n // (3 * head))
    above = np.where(s3 > 0, _bit_length(n // np.maximum(head // 3, 1)), -1)

    cls = np.zeros(n + 1, dtype=np.int64)
    cls[usize == 1] = UnitClass.U1
    cls[usize == 2] = UnitClass.U2
    cls[usize == 3] = np.where(below[usize == 3] == 1, UnitClass.U3_1, UnitClass.U3_2)
    four = usize == 4
    cls[four] = UnitClass.U4_GENERAL
    if regime is not Regime.RS1:
        nine = smooth_count[n // base] == 9
        if regime is Regime.RS2:
            cls[four & (s3 == 0) & nine] = UnitClass.U4_S
        else:
            ok5 = base % 5 != 0
            top = four & ok5 & (s3 == 0)
            cls[top & nine] = UnitClass.U4_S1
            cls[top & (length >= 6) & (length - below == 2)] = UnitClass.U4_S2
            s3_mask = (
                four & ok5 & (s3 > 0) & (first % 36 == 0)
                & (above == length + 2) & (below == length - 2)
            )
            cls[s3_mask] = UnitClass.U4_S3
    cls = np.where(in_unit, cls, 0)
    cls[0] = 0
    position[0] = 0
    first[0] = 0

    return UnitTable(n, regime, cls, position, first, *_derived(cls, position), length)


def _derived(cls: np.ndarray, position: np.ndarray):
    answer = _ANSWER_LUT[cls, position]
    special = cls >= UnitClass.U4_S
    can_gt = np.where(special, position < 3, answer == GT_CODE)
    can_lt = np.where(special, position > 0, answer == LT_CODE)
    essential = _ESSENTIAL_LUT[cls, position] & (cls > 0)
    for arr in (can_gt, can_lt, essential):
        arr[0] = False
    return answer, can_gt, can_lt, essential


# ---------------------------------------------------------------------------
# arithmetic helpers


@lru_cache(maxsize=4)
def _spf(limit: int) -> np.ndarray:
    spf = np.arange(limit + 1, dtype=np.int64)
    for p in range(2, int(limit**0.5) + 1):
        if spf[p] == p:
            block = spf[p * p :: p]
            np.minimum(block, p, out=block)
    return spf


def smallest_prime_factors(n: int) -> np.ndarray:
    return _spf(1 << max(n, 1024).bit_length())


def divisors(i: int, spf: np.ndarray | None = None) -> list[int]:
    """All divisors of ``i`` (including 1 and ``i``), unsorted."""
    if spf is None:
        spf = smallest_prime_factors(i)
    divs = [1]
    while i > 1:
        p = int(spf[i])
        e = 0
        while i % p == 0:
            i //= p
            e += 1
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return divs


def prime_factors(i: int, spf: np.ndarray | None = None) -> list[int]:
    if spf is None:
        spf = smallest_prime_factors(i)
    out = []
    while i > 1:
        p = int(spf[i])
        out.append(p)
        while i % p == 0:
            i //= p
    return out


@lru_cache(maxsize=4)
def divisor_pairs(limit: int) -> tuple[np.ndarray, np.ndarray]:
    """All ``(d, m)`` with ``d | m``, ``d < m <= limit``, sorted by ``m``."""
    ds, ms = [], []
    for d in range(1, limit // 2 + 1):
        m = np.arange(2 * d, limit + 1, d, dtype=np.int64)
        ms.append(m)
        ds.append(np.full(m.size, d, dtype=np.int64))
    d = np.concatenate(ds) if ds else np.zeros(0, dtype=np.int64)
    m = np.concatenate(ms) if ms else np.zeros(0, dtype=np.int64)
    order = np.argsort(m, kind="stable")
    return d[order], m[order]


def divisor_pairs_upto(n: int) -> tuple[np.ndarray, np.ndarray]:
    """:func:`divisor_pairs` restricted to ``m <= n``, sharing one table across nearby n."""
    d, m = divisor_pairs(max(1024, 1 << (n - 1).bit_length()))
    k = np.searchsorted(m, n, side="right")
    return d[:k], m[:k]


# ---------------------------------------------------------------------------
# structural lemmas


@dataclass(frozen=True)
class Violation:
    kind: str
    where: tuple
    detail: str = ""

    def to_json(self) -> dict:
        return {"kind": self.kind, "where": list(self.where), "detail": self.detail}


def shape_violations(shape: tuple[int, ...]) -> list[str]:
    """Names of the row-length lemmas broken by one layer shape."""
    diffs = [a - b for a, b in zip(shape, shape[1:])]
    found = []
    if any(d not in (1, 2) for d in diffs):
        found.append("row-difference")
    if any(a == b == 1 for a, b in zip(diffs, diffs[1:])):
        found.append("three-rows-plus-one")
    if any(a == b == c == 2 for a, b, c in zip(diffs, diffs[1:], diffs[2:])):
        found.append("four-rows-plus-two")
    return found


def check_structural_lemmas(n: int) -> list[Violation]:
    _check_n(n)
    report = []
    for grid in layer_decomposition(n):
        for kind in shape_violations(grid.shape):
            report.append(Violation(kind, (n, grid.base), str(grid.shape)))
    return report


def structural_sweep(n_max: int) -> list[Violation]:
    """Row-length lemmas for every layer of every ``n <= n_max``.

    A layer's shape depends only on ``q = n // base``, and every
    ``q <= n_max`` occurs (base 1, n = q), so checking each q once covers
    all layers of all tables up to ``n_max``.
    """
    _check_n(n_max)
    report = []
    for q in range(1, n_max + 1):
        shape = layer_shape(q)
        for kind in shape_violations(shape):
            report.append(Violation(kind, (q, 1), str(shape)))
    return report


def quotient_violations(n: int) -> list[Violation]:
    """Cross-layer divisibility quotients: at least 5, at least 7 if 5 does not divide the multiple.

    Layer membership does not depend on n, so the result for ``n`` covers
    every smaller table as well.
    """
    _check_n(n)
    d, m = divisor_pairs(n)
    base, *_ = _tables_for(n)
    cross = base[d] != base[m]
    q = m[cross] // d[cross]
    mm = m[cross]
    report = []
    for idx in np.flatnonzero(q < 5):
        report.append(Violation("quotient-5", (int(d[cross][idx]), int(mm[idx]))))
    for idx in np.flatnonzero((q < 7) & (mm % 5 != 0)):
        report.append(Violation("quotient-7", (int(d[cross][idx]), int(mm[idx]))))
    return report


def special_first_violations(n: int) -> list[Violation]:
    """First members ``i`` of refined special units must satisfy ``12 i > n``."""
    table = unit_table(n, Regime.RS2STAR)
    firsts = table.special_firsts()
    return [Violation("twelve-i", (n, int(i))) for i in firsts if 12 * i <= n]
