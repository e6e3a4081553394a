import random

import pytest
from hypothesis import given, settings, strategies as st

from engulf.low_index import SearchConstraint, low_index_subgroups
from engulf.normal_form import (
    GeneratorMap,
    NoWordProblemSolver,
    britton_reduce,
    freeness_probe,
    is_trivial_B,
    is_trivial_G,
    iso_maps,
    normal_form_B,
    not_free_certificate,
    phi_iterated,
    phi_power,
    random_word,
    reduced_free_words,
    solve,
    soundness_trials,
    verify_homomorphism,
    verify_mutually_inverse,
    word_problem_solver,
)
from engulf.words import Presentation, SubgroupSpec, Word, group_B, group_G

G, B = group_G(), group_B()
g_letters = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=24)


def test_britton_examples():
    assert britton_reduce(G.word("t^-1 a t b^-1")).is_empty()
    assert britton_reduce(G.word("a b a^-1 b^-1")).is_empty()
    f = britton_reduce(G.word("t a t^-1"))
    assert f.t_length() == 2
    assert f.is_pinch_free()
    assert f.to_word() == G.word("t a t^-1")
    assert is_trivial_G(G.alphabet.identity())
    assert not is_trivial_G(G.word("a"))


def test_britton_pinches():
    # t^-1 a^m t -> b^m and t b^n t^-1 -> a^n
    assert britton_reduce(G.word("t^-1 a^3 t")).to_word() == G.word("b^3")
    assert britton_reduce(G.word("t b^-2 t^-1")).to_word() == G.word("a^-2")
    assert is_trivial_G(G.word("t^2 b t^-2 t^2 b^-1 t^-2"))
    assert is_trivial_G(G.word("t^-2 a t^2 t^-1 b^-1 t"))
    # a^t^-1 is not in <a, b>
    assert britton_reduce(G.word("t a t^-1 b")).t_length() == 2


def test_B_examples():
    assert is_trivial_B(B.word("y^-1 alpha y beta^-1 alpha^-1"))
    assert is_trivial_B(B.word("y^-1 beta y beta^-1"))
    nf = normal_form_B(B.word("y alpha"))
    assert nf.y_exponent == 1
    assert nf.free_part == B.word("alpha beta^-1")
    assert not is_trivial_B(B.word("alpha beta alpha^-1 beta^-1"))


@pytest.mark.parametrize("m", range(-8, 9))
@pytest.mark.parametrize("letter", [1, -1, 2, -2])
def test_phi_closed_form_matches_iteration(letter, m):
    assert phi_power(letter, m) == phi_iterated(letter, m)


@given(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=24))
def test_B_normal_form_is_a_fixed_point(seq):
    w = Word.from_letters(B.alphabet, seq)
    nf = normal_form_B(w)
    assert normal_form_B(nf.to_word()) == nf
    assert is_trivial_B(nf.to_word() * w.inverse())


@given(g_letters)
def test_britton_form_is_reduced_and_equal(seq):
    w = Word.from_letters(G.alphabet, seq)
    f = britton_reduce(w)
    assert f.is_pinch_free()
    assert is_trivial_G(f.to_word() * w.inverse())
    assert f.t_length() <= sum(1 for x in seq if abs(x) == 3)
    assert britton_reduce(f.to_word()) == f


def test_iso_maps():
    f, g = iso_maps()
    assert verify_homomorphism(f) and verify_homomorphism(g)
    assert verify_mutually_inverse(f, g)
    assert g(f(G.word("a"))) == G.word("a")
    identity = GeneratorMap.parse(G, G, {"a": "a", "b": "b", "t": "t"})
    assert verify_homomorphism(identity)
    assert verify_mutually_inverse(identity, identity)


def test_wrong_inverse_is_rejected():
    f, _ = iso_maps()
    wrong = GeneratorMap.parse(B, G, {"y": "a", "alpha": "t", "beta": "t b a^-1 t^-1"})
    assert not verify_mutually_inverse(f, wrong)
    assert not verify_homomorphism(GeneratorMap.parse(G, B, {"a": "alpha", "b": "y", "t": "beta"}))


@settings(max_examples=200)
@given(g_letters)
def test_word_problems_agree_through_isomorphism(seq):
    f, g = iso_maps()
    w = Word.from_letters(G.alphabet, seq)
    assert is_trivial_G(w) == is_trivial_B(f(w))
    v = Word.from_letters(B.alphabet, seq)
    assert is_trivial_B(v) == is_trivial_G(g(v))


def test_trivial_words_act_trivially_on_finite_quotients():
    tables = low_index_subgroups(G, SearchConstraint(5)).tables
    rng = random.Random(5)
    rels = list(G.relators)
    for _ in range(300):
        u = random_word(G.alphabet, rng.randint(0, 8), rng)
        w = u * rng.choice(rels) * u.inverse() * random_word(G.alphabet, 6, rng)
        if is_trivial_G(w):
            assert all(T.trace(w, c) == c for T in tables for c in range(T.degree))
        elif any(T.trace(w, c) != c for T in tables for c in range(T.degree)):
            assert not is_trivial_G(w)


def test_reduced_free_words_counts():
    # 2k (2k-1)^(n-1) reduced words of length n
    by_len = {}
    for w in reduced_free_words(3, 4):
        by_len[len(w)] = by_len.get(len(w), 0) + 1
    assert by_len == {1: 6, 2: 30, 3: 150, 4: 750}


def test_freeness_examples():
    K = SubgroupSpec.parse(G, "a b b; t; b t a t^-1 b^-1")
    res = freeness_probe(K, 4)
    assert res.violations == []
    assert res.evaluated == 6 + 30 + 150 + 750
    ab = freeness_probe(SubgroupSpec.parse(G, "a; b"), 4)
    assert (1, 2, -1, -2) in ab.violations
    a, b = G.word("a"), G.word("b")
    for v in ab.violations:
        w = G.alphabet.identity()
        for x in v:
            w = w * ((a, b)[abs(x) - 1] ** (1 if x > 0 else -1))
        assert is_trivial_G(w)
    assert freeness_probe(SubgroupSpec.parse(G, "a"), 6).violations == []


def test_freeness_probe_length_6_count():
    res = freeness_probe(SubgroupSpec.parse(G, "a b b; t; b t a t^-1 b^-1"), 6)
    assert res.evaluated_by_length[6] == 6 * 5 ** 5 == 18_750
    assert res.evaluated == sum(6 * 5 ** (n - 1) for n in range(1, 7))


def test_not_free_certificate():
    cert = not_free_certificate()
    assert cert["not_free"]
    assert all(cert.values())


def test_no_solver_for_other_presentations():
    with pytest.raises(NoWordProblemSolver):
        word_problem_solver(Presentation.build("x", ["x^2"]))


def test_soundness_small():
    for pres in (G, B):
        res = soundness_trials(pres, 500, seed=7)
        assert res.ok


def test_solve_dispatch():
    form, trivial = solve(G.word("t a t^-1"), "G")
    assert not trivial and str(form)
    with pytest.raises(ValueError):
        solve(G.word("a"), "C")
