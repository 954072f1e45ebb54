import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from divsearch.adversary import AdversarySession
from divsearch.oracle import Answer, InconsistentAnswerError, TableOracle, Transcript
from divsearch.poset import Regime
from divsearch.search import search_table
from divsearch.tablegen import (
    ConsistentTable,
    InfeasibleError,
    TranscriptConstraints,
    pin_feasible,
    random_table,
    refute_early_stop,
    transcript_consistent,
    witness,
)


def test_random_table_n4():
    t = random_table(4, 0)
    assert t[1] < t[2] < t[4] and t[1] < t[3]


def test_random_table_n1():
    assert random_table(1, 0).n == 1


def test_seeds_differ():
    a, b = random_table(100, 1), random_table(100, 2)
    assert a.is_consistent() and b.is_consistent()
    assert not np.array_equal(a.values, b.values)


@given(st.integers(1, 400), st.integers(0, 2**32 - 1))
@settings(max_examples=40)
def test_random_tables_consistent(n, seed):
    t = random_table(n, seed)
    assert t.is_consistent()
    assert oracles.is_consistent({i: t[i] for i in range(1, n + 1)})
    assert sorted(t.values.tolist()) == list(range(2, 2 * n + 1, 2))


def test_same_seed_same_table():
    assert np.array_equal(random_table(300, 9).values, random_table(300, 9).values)


def test_probes_cover_every_region():
    t = random_table(20, 4)
    probes = t.probes()
    assert len(probes) == 2 * 20 + 1
    assert all(isinstance(x, int) for x in probes)
    assert sum(t.contains(x) is not None for x in probes) == 20


def test_inconsistent_table_detected():
    assert not ConsistentTable(np.array([4, 2, 6])).is_consistent()
    assert not ConsistentTable(np.array([2, 2])).is_consistent()


def test_csv_round_trip():
    t = random_table(30, 5)
    text = t.to_csv()
    assert text.startswith("subscript,value\n")
    assert np.array_equal(ConsistentTable.from_csv(text).values, t.values)


def test_transcript_jsonl_round_trip():
    tr = Transcript([(3, Answer.GT), (5, Answer.EQ), (1, Answer.LT)])
    text = tr.to_jsonl()
    assert text.splitlines()[0] == '{"q": 3, "a": "GT"}'
    assert Transcript.from_jsonl(text).entries == tr.entries


def test_witness_empty_pin():
    w = witness(TranscriptConstraints(6), pin=5)
    assert w.table.is_consistent() and w.table[5] == w.x


def test_witness_n4_feasible():
    c = TranscriptConstraints(4, frozenset({1}), frozenset({4}))
    w = witness(c, pin=3)
    assert w.satisfies(c)
    assert w.table[1] < w.x == w.table[3] < w.table[4]
    assert pin_feasible(c, 3)


def test_witness_n4_infeasible():
    c = TranscriptConstraints(4, frozenset({2}), frozenset())
    with pytest.raises(InfeasibleError) as err:
        witness(c, pin=1)
    assert set(err.value.cycle) >= {1, 2}
    assert not pin_feasible(c, 1)


def test_contradictory_transcript():
    c = TranscriptConstraints(6, frozenset({6}), frozenset({2}))
    assert not transcript_consistent(c)
    with pytest.raises(InfeasibleError):
        witness(c)


@given(st.integers(2, 40), st.data())
@settings(max_examples=80)
def test_pin_feasibility_closed_form_matches_graph(n, data):
    table = random_table(n, data.draw(st.integers(0, 1000)))
    x = data.draw(st.sampled_from(table.probes()))
    asked = data.draw(st.lists(st.integers(1, n), unique=True, max_size=n))
    oracle = TableOracle(table, x)
    gt, lt = set(), set()
    for i in asked:
        a = oracle.query(i)
        if a is Answer.GT:
            gt.add(i)
        elif a is Answer.LT:
            lt.add(i)
    c = TranscriptConstraints(n, frozenset(gt), frozenset(lt))
    pin = data.draw(st.integers(1, n))
    try:
        w = witness(c, pin=pin)
        graph_ok = w.satisfies(c)
    except InfeasibleError:
        graph_ok = False
    assert graph_ok == pin_feasible(c, pin)


def test_oracle_checks_consistency():
    oracle = TableOracle(random_table(10, 0), 0, check=True)
    oracle.query(2)  # LT: x is below everything
    with pytest.raises(InconsistentAnswerError):
        oracle._validate(4, Answer.GT)


def test_refute_n1_empty():
    r = refute_early_stop(1, Regime.RS2, Transcript())
    assert r.pinned == 1 and r.witness.table[1] == r.witness.x


def test_refute_confirms_full_run():
    session = AdversarySession(100, Regime.RS2)
    search_table(100, session)
    assert refute_early_stop(100, Regime.RS2, session.transcript) is None


def test_refute_skipped_two_unit_element():
    session = AdversarySession(100, Regime.RS2)
    search_table(100, session)
    # drop the comparison on a 2-unit member: 35 sits in row [35, 70]
    entries = [(i, a) for i, a in session.transcript if i not in (35, 70)]
    kept = Transcript(entries + [(70, Answer.LT)])
    r = refute_early_stop(100, Regime.RS2, kept)
    assert r is not None and r.pinned == 35
    c = TranscriptConstraints.from_transcript(100, kept)
    assert r.witness.satisfies(c)


def test_refute_rejects_found_claim():
    with pytest.raises(ValueError):
        refute_early_stop(5, Regime.RS2, Transcript(), claimed_found=True)
