import random

import pytest

from polinv import (
    Operation,
    Relation,
    RelationSet,
    ResourceBoundError,
    inv,
    invariant_closure,
    pol,
    preserves,
)
from polinv.galois import _pol_backtracking, _pol_filter
from polinv.limits import Limits

from helpers import (
    AND,
    BOOL,
    LEQ,
    NEQ,
    NOT,
    OR,
    THREE,
    opset,
    oracle_inv,
    oracle_pol,
    oracle_preserves,
    random_operation,
    random_relation,
    relation_set,
)


def test_relation_set_deduplicates_and_orders():
    s = RelationSet(BOOL, (NEQ, LEQ, LEQ.renamed("order")))
    assert len(s) == 2
    assert s.rels[0] == LEQ  # tuple lists compare lexicographically at equal arity
    assert s.rels[0].name == "leq"


def test_relation_set_rejects_foreign_domain():
    with pytest.raises(ValueError):
        RelationSet(BOOL, (Relation(THREE, 1, ((2,),)),))


def test_inv_unary_examples():
    assert len(inv(opset([AND]), 1)) == 4
    assert len(inv(opset([NOT]), 1)) == 2
    assert len(inv(opset([]), 1)) == 4


def test_inv_members_are_actually_invariant():
    got = inv(opset([AND, NOT]), 2)
    for r in got:
        assert preserves(AND, r) and preserves(NOT, r)


def test_inv_matches_filtering_oracle():
    rng = random.Random(47)
    for _ in range(8):
        ops = [random_operation(rng, BOOL, rng.randint(1, 2)) for _ in range(rng.randint(0, 2))]
        for arity in (1, 2):
            got = {r.tuples for r in inv(opset(ops), arity)}
            want = {r.tuples for r in oracle_inv(ops, arity, BOOL)}
            assert got == want


def test_inv_arity_zero_needs_flag():
    with pytest.raises(ValueError):
        inv(opset([AND]), 0)
    # both arity-0 relations are invariant under any nonnullary operation
    assert len(inv(opset([AND]), 0, include_nullary=True)) == 2


def test_inv_candidate_cap():
    with pytest.raises(ResourceBoundError):
        inv(opset([AND]), 5)


def test_pol_examples():
    assert len(pol(relation_set([LEQ]), 1)) == 3
    assert {f.table for f in pol(relation_set([LEQ]), 1)} == {(0, 0), (0, 1), (1, 1)}
    assert len(pol(relation_set([LEQ]), 2)) == 6
    assert len(pol(relation_set([NEQ]), 2)) == 4
    assert len(pol(relation_set([]), 2)) == 16


def test_pol_members_actually_preserve():
    got = pol(relation_set([LEQ, NEQ]), 2)
    for f in got:
        assert preserves(f, LEQ) and preserves(f, NEQ)


def test_pol_nullary():
    with pytest.raises(ValueError):
        pol(relation_set([LEQ]), 0)
    consts = pol(relation_set([LEQ]), 0, include_nullary=True)
    assert {f.table for f in consts} == {(0,), (1,)}
    assert len(pol(relation_set([NEQ]), 0, include_nullary=True)) == 0


def test_pol_of_empty_relation():
    empty = Relation.empty(BOOL, 2)
    assert len(pol(relation_set([empty]), 1)) == 4
    assert len(pol(relation_set([empty]), 0, include_nullary=True)) == 0


def test_pol_matches_filtering_oracle():
    rng = random.Random(53)
    for _ in range(8):
        rels = [random_relation(rng, BOOL, rng.randint(1, 2)) for _ in range(rng.randint(0, 2))]
        for arity in (1, 2):
            got = {f.table for f in pol(relation_set(rels), arity)}
            want = {f.table for f in oracle_pol(rels, arity, BOOL)}
            assert got == want


def test_pol_routes_agree():
    rng = random.Random(59)
    for _ in range(10):
        rels = relation_set([random_relation(rng, BOOL, rng.randint(1, 2)) for _ in range(2)])
        for arity in (1, 2):
            assert sorted(_pol_backtracking(rels, arity, BOOL)) == sorted(_pol_filter(rels, arity, BOOL))
    three_rels = RelationSet(THREE, (Relation(THREE, 2, ((0, 0), (1, 1), (2, 2), (0, 1))),))
    assert sorted(_pol_backtracking(three_rels, 1, THREE)) == sorted(_pol_filter(three_rels, 1, THREE))


def test_pol_table_cap():
    with pytest.raises(ResourceBoundError):
        pol(relation_set([LEQ]), 5)


def test_galois_maps_are_antitone():
    rng = random.Random(61)
    for _ in range(10):
        small_ops = [random_operation(rng, BOOL, rng.randint(1, 2))]
        big_ops = small_ops + [random_operation(rng, BOOL, rng.randint(1, 2))]
        inv_small = {r.tuples for r in inv(opset(small_ops), 2)}
        inv_big = {r.tuples for r in inv(opset(big_ops), 2)}
        assert inv_big <= inv_small

        small_rels = [random_relation(rng, BOOL, rng.randint(1, 2))]
        big_rels = small_rels + [random_relation(rng, BOOL, rng.randint(1, 2))]
        pol_small = {f.table for f in pol(relation_set(small_rels), 2)}
        pol_big = {f.table for f in pol(relation_set(big_rels), 2)}
        assert pol_big <= pol_small


def test_galois_round_trips_are_extensive():
    rng = random.Random(67)
    for _ in range(8):
        ops = [random_operation(rng, BOOL, 2) for _ in range(rng.randint(1, 2))]
        invariants = inv(opset(ops), 2)
        recovered = pol(invariants, 2)
        for f in ops:
            assert f in recovered

        rels = [random_relation(rng, BOOL, 2) for _ in range(rng.randint(1, 2))]
        polymorphisms = pol(relation_set(rels), 2)
        closed = inv(polymorphisms, 2)
        for r in rels:
            assert r in closed


def test_invariant_closure_examples():
    assert invariant_closure(opset([AND]), [(0, 1), (1, 0)], 2).tuples == ((0, 0), (0, 1), (1, 0))
    assert invariant_closure(opset([NOT]), [(0, 0)], 2).tuples == ((0, 0), (1, 1))
    assert invariant_closure(opset([]), [(0, 1)], 2).tuples == ((0, 1),)


def test_invariant_closure_validates_seeds():
    with pytest.raises(ValueError):
        invariant_closure(opset([AND]), [(0, 1, 0)], 2)
    with pytest.raises(ValueError):
        invariant_closure(opset([AND]), [(0, 2)], 2)


def test_invariant_closure_is_least_closed_superset():
    rng = random.Random(71)
    universe = list(BOOL.tuples(2))
    for _ in range(12):
        ops = [random_operation(rng, BOOL, rng.randint(1, 2)) for _ in range(rng.randint(1, 2))]
        seeds = rng.sample(universe, rng.randint(1, 3))
        got = set(invariant_closure(opset(ops), seeds, 2).tuples)
        closed_supersets = []
        for mask in range(16):
            s = {t for i, t in enumerate(universe) if mask >> i & 1}
            if not set(seeds) <= s:
                continue
            if all(oracle_preserves(f, Relation(BOOL, 2, tuple(s))) for f in ops):
                closed_supersets.append(s)
        want = min(closed_supersets, key=len)
        assert got == want


def test_invariant_closure_is_extensive_monotone_idempotent():
    rng = random.Random(73)
    universe = list(BOOL.tuples(2))
    for _ in range(12):
        ops = opset([random_operation(rng, BOOL, rng.randint(1, 2))])
        seeds = set(rng.sample(universe, rng.randint(1, 3)))
        got = set(invariant_closure(ops, seeds, 2).tuples)
        assert seeds <= got
        assert got == set(invariant_closure(ops, got, 2).tuples)
        wider = seeds | {rng.choice(universe)}
        assert got <= set(invariant_closure(ops, wider, 2).tuples)


def test_limits_from_env(monkeypatch):
    monkeypatch.setenv("GALOIS_MAX_CANDIDATES", "123")
    assert Limits.from_env().max_candidates == 123
    monkeypatch.delenv("GALOIS_MAX_CANDIDATES")
    assert Limits.from_env().max_candidates == Limits().max_candidates
    monkeypatch.setenv("GALOIS_MAX_CANDIDATES", "not a number")
    with pytest.raises(ValueError):
        Limits.from_env()
