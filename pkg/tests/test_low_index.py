import pytest

from engulf import low_index
from engulf.coset_enum import verify_table
from engulf.low_index import (
    SearchConstraint,
    brute_force_subgroups,
    default_max_nodes,
    low_index_subgroups,
    subgroup_contains,
)
from engulf.words import Presentation, SubgroupSpec, group_B, group_G

G, B = group_G(), group_B()
K = SubgroupSpec.parse(G, "a b b; t; b t a t^-1 b^-1")


def test_small_counts():
    assert len(low_index_subgroups(G, SearchConstraint(1))) == 1
    res = low_index_subgroups(G, SearchConstraint(2))
    assert res.count_by_index() == {1: 1, 2: 3}
    assert len(brute_force_subgroups(G, 1)) == 1
    assert len(brute_force_subgroups(G, 2)) == 4


@pytest.mark.parametrize("pres", [G, B], ids=["G", "B"])
def test_matches_brute_force(backend, pres):
    for n in range(1, 5):
        assert low_index_subgroups(pres, SearchConstraint(n)).tables == brute_force_subgroups(pres, n).tables


@pytest.mark.parametrize(
    "gens, rels",
    [("x y", ["x^2", "y^3", "x y x y x y"]), ("x y", ["x^3", "y^3", "x y x y"]), ("x y", ["x y x^-1 y^-1"])],
)
def test_matches_brute_force_other_presentations(backend, gens, rels):
    pres = Presentation.build(gens, rels)
    for n in range(1, 5):
        assert low_index_subgroups(pres, SearchConstraint(n)).tables == brute_force_subgroups(pres, n).tables


def test_A4_has_expected_subgroup_counts():
    # A4: one subgroup each of index 1, 3 (V4), 12; four of index 4 and 6; three of index 6
    pres = Presentation.build("x y", ["x^2", "y^3", "x y x y x y"])
    counts = low_index_subgroups(pres, SearchConstraint(12)).count_by_index()
    assert counts == {1: 1, 3: 1, 4: 4, 6: 3, 12: 1}


def test_G_and_B_counts_agree_to_8():
    a = low_index_subgroups(G, SearchConstraint(8)).count_by_index()
    b = low_index_subgroups(B, SearchConstraint(8)).count_by_index()
    assert a == b


def test_outputs_are_canonical_and_distinct():
    res = low_index_subgroups(G, SearchConstraint(7))
    assert res.complete
    assert len(set(res.tables)) == len(res.tables)
    assert res.tables == sorted(res.tables)
    for T in res:
        assert verify_table(T)


def test_monotone_in_bound():
    prev = set()
    for n in range(1, 8):
        cur = set(low_index_subgroups(G, SearchConstraint(n)).tables)
        assert prev <= cur
        assert all(T.degree <= n for T in cur)
        prev = cur


def test_constraint_is_a_filter():
    words = (G.word("a b b"), G.word("t"))
    all_ = low_index_subgroups(G, SearchConstraint(7)).tables
    constrained = low_index_subgroups(G, SearchConstraint(7, words)).tables
    assert constrained == [T for T in all_ if all(subgroup_contains(T, w) for w in words)]
    assert [T.degree for T in constrained] == [1, 3, 5, 7]


def test_theorem2_subgroup_only_whole_group():
    for n in (1, 4, 8, 10):
        res = low_index_subgroups(G, SearchConstraint(n, K.generators))
        assert [T.degree for T in res] == [1]


def test_subgroup_contains_examples():
    whole = low_index_subgroups(G, SearchConstraint(1)).tables[0]
    assert subgroup_contains(whole, G.word("t a b^-7"))
    res = low_index_subgroups(G, SearchConstraint(3, (G.word("a b^-1"), G.word("a^3"), G.word("t"))))
    kernel = [T for T in res if T.degree == 3][0]
    assert subgroup_contains(kernel, G.word("a b b"))
    assert not subgroup_contains(kernel, G.word("a"))


def test_threads_do_not_change_output():
    c = SearchConstraint(8)
    one = low_index_subgroups(B, c, threads=1)
    four = low_index_subgroups(B, c, threads=4)
    assert one.tables == four.tables and one.nodes == four.nodes
    assert one.to_json() == four.to_json()


def test_budget_exhaustion_marks_incomplete():
    c = SearchConstraint(8)
    full = low_index_subgroups(G, c)
    for budget in (5, 200, full.nodes // 2):
        serial = low_index_subgroups(G, c, max_nodes=budget)
        parallel = low_index_subgroups(G, c, threads=3, max_nodes=budget)
        assert not serial.complete
        assert serial.to_json() == parallel.to_json()
        assert set(serial.tables) < set(full.tables)
    assert low_index_subgroups(G, c, max_nodes=full.nodes).complete


def test_env_budget(monkeypatch):
    monkeypatch.setenv("ENGULF_MAX_NODES", "10")
    assert default_max_nodes() == 10
    assert not low_index_subgroups(G, SearchConstraint(6)).complete
    monkeypatch.delenv("ENGULF_MAX_NODES")
    assert default_max_nodes() == low_index.DEFAULT_MAX_NODES


def test_impossible_constraint_gives_nothing():
    pres = Presentation.build("x", ["x^5"])
    # x must lie in a subgroup of Z/5 of index <= 4: only Z/5 itself
    res = low_index_subgroups(pres, SearchConstraint(4, (pres.word("x"),)))
    assert [T.degree for T in res] == [1]
    assert len(low_index_subgroups(pres, SearchConstraint(5))) == 2


def test_bad_bound():
    with pytest.raises(ValueError):
        SearchConstraint(0)
    with pytest.raises(ValueError):
        brute_force_subgroups(G, 6)
