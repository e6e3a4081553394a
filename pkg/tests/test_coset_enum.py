import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from engulf.analysis import schreier_generators
from engulf.coset_enum import (
    CosetOverflow,
    CosetTable,
    EnumerationLimits,
    coset_of,
    enumerate_cosets,
    standardize,
    verify_table,
)
from engulf.low_index import SearchConstraint, low_index_subgroups
from engulf.words import Presentation, SubgroupSpec, Word, group_B, group_G

G = group_G()


def index(pres, text, **limits):
    return enumerate_cosets(pres, SubgroupSpec.parse(pres, text), EnumerationLimits(**limits)).degree


def test_examples():
    assert index(G, "a; t") == 1
    assert index(G, "a; b; t^2") == 2
    # the kernel of G -> Z/3 with t -> 1 and a, b -> 0
    assert index(G, "a; b; t a t^-1; t^3") == 3


def test_a_b_t3_is_not_index_3():
    # <a, b, t^3> misses t a t^-1 (t-length 2 in normal form), so it is
    # strictly below the index-3 kernel; containers of larger index exist
    H = SubgroupSpec.parse(G, "a; b; t^3")
    containers = low_index_subgroups(G, SearchConstraint(6, H.generators))
    assert {T.degree for T in containers} == {1, 3, 5, 6}
    with pytest.raises(CosetOverflow):
        enumerate_cosets(G, H, EnumerationLimits(max_cosets=20_000))


def test_coset_of_examples():
    T = enumerate_cosets(G, SubgroupSpec.parse(G, "a; b; t^2"))
    assert coset_of(T, G.alphabet.identity()) == 0
    assert coset_of(T, G.word("t")) == 1
    assert coset_of(T, G.word("t^2")) == 0
    assert not T.contains(G.word("t"))


def test_theorem2_subgroup_overflows():
    K = SubgroupSpec.parse(G, "a b b; t; b t a t^-1 b^-1")
    with pytest.raises(CosetOverflow) as exc:
        enumerate_cosets(G, K, EnumerationLimits(max_cosets=100_000))
    assert "unknown" in str(exc.value)
    with pytest.raises(CosetOverflow) as exc:
        enumerate_cosets(G, K, EnumerationLimits(max_cosets=10**6, max_steps=1000))
    assert exc.value.reason == "max_steps"


FINITE = [
    ("S3", "s r", ["s^2", "r^3", "s r s r"], 6),
    ("A4", "x y", ["x^2", "y^3", "x y x y x y"], 12),
    ("Q8", "i j", ["i^4", "i^2 j^-2", "j^-1 i j i"], 8),
    ("Z6", "x", ["x^6"], 6),
    ("S4", "x y", ["x^2", "y^3", "x y x y x y x y"], 24),
    ("D5", "r s", ["r^5", "s^2", "s r s r"], 10),
]


@pytest.mark.parametrize("name, gens, rels, order", FINITE)
def test_finite_group_orders(backend, name, gens, rels, order):
    pres = Presentation.build(gens, rels, name)
    first = pres.alphabet.names[0]
    T = enumerate_cosets(pres, SubgroupSpec.parse(pres, first))
    # trivial subgroup via a relator-free generator power
    trivial = enumerate_cosets(pres, SubgroupSpec(pres, (pres.relators[0],)))
    assert trivial.degree == order
    assert verify_table(T) and verify_table(trivial)
    assert order % T.degree == 0


def test_tc_reproduces_every_low_index_table(backend):
    for pres in (G, group_B()):
        for T in low_index_subgroups(pres, SearchConstraint(5)):
            gens = schreier_generators(T) or [pres.relators[0]]
            again = enumerate_cosets(pres, SubgroupSpec(pres, tuple(gens)))
            assert again == T
            assert verify_table(again)


def test_verify_table_negatives():
    T = enumerate_cosets(G, SubgroupSpec.parse(G, "a b^-1; a^3; t"))
    assert T.degree == 3 and verify_table(T)
    rows = [list(r) for r in T.rows]
    # break the t-row: swapping two t images keeps a permutation but breaks a^t = b
    a, b, t = T.action
    bad = CosetTable.from_permutations(G, [a, b, (t[1], t[0], t[2])], canonical=False)
    assert not verify_table(bad)
    ident = tuple(range(4))
    split = CosetTable.from_permutations(G, [(1, 0, 2, 3), (1, 0, 2, 3), ident], canonical=False)
    assert not verify_table(split)
    rows[0][0] = 0
    assert not verify_table(CosetTable(G, tuple(map(tuple, rows))))
    wrong_sub = CosetTable(G, T.rows, SubgroupSpec.parse(G, "a"))
    assert not verify_table(wrong_sub)


def test_standardize_is_idempotent_and_drops_unreachable():
    rows = [[2, 2], [1, 1], [0, 0]]
    assert standardize(rows) == [[1, 1], [0, 0]]
    assert standardize(standardize(rows)) == standardize(rows)


def test_json_round_trip():
    T = enumerate_cosets(G, SubgroupSpec.parse(G, "a b^-1; a^3; t"))
    data = T.to_json()
    assert data["degree"] == 3 and data["basepoint"] == 0
    assert CosetTable.from_json(G, json.dumps(data)) == T
    assert CosetTable.from_json(G, data) == T


def test_transversal_words_reach_their_cosets():
    for T in low_index_subgroups(G, SearchConstraint(5)):
        reps = T.transversal()
        assert [T.coset_of(w) for w in reps] == list(range(T.degree))
        lengths = [len(w) for w in reps]
        assert lengths == sorted(lengths)


def test_limits_validation():
    with pytest.raises(ValueError):
        EnumerationLimits(max_cosets=0)


def test_index_divides_order_for_subgroups_of_S4():
    pres = Presentation.build("x y", ["x^2", "y^3", "x y x y x y x y"])
    for text in ("x", "y", "x y", "y x y^-1 x", "x; y x y^-1"):
        n = index(pres, text)
        assert math.gcd(n, 24) == n

_rel = st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=8)


@settings(max_examples=80, deadline=None)
@given(st.lists(_rel, min_size=1, max_size=3), st.lists(_rel, min_size=1, max_size=2))
def test_enumeration_agrees_with_low_index(rels, subs):
    A = Presentation.build("x y", []).alphabet
    words = tuple(w for w in (Word.from_letters(A, r).cyclic_reduce() for r in rels) if w)
    pres = Presentation(A, words)
    sub = tuple(w for w in (Word.from_letters(A, s) for s in subs) if w)
    if not sub:
        return
    containing = low_index_subgroups(pres, SearchConstraint(6, sub)).tables
    try:
        T = enumerate_cosets(pres, SubgroupSpec(pres, sub), EnumerationLimits(3000, 300_000))
    except CosetOverflow:
        return
    assert verify_table(T)
    # the subgroup itself is the smallest container
    if T.degree <= 6:
        assert T in containing
        assert max(C.degree for C in containing) == T.degree
    else:
        assert T not in containing
