import pytest
from hypothesis import given, strategies as st

from engulf.words import (
    Alphabet,
    AlphabetMismatch,
    ParseError,
    Presentation,
    SubgroupSpec,
    Word,
    builtin_presentations,
    commutator,
    concat,
    conjugate,
    cyclic_reduce,
    free_reduce,
    invert,
    load_presentation,
    parse_presentation,
    parse_word,
    parse_word_list,
)

ABT = Alphabet.from_names("a b t")

letters = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=30)


def W(text):
    return parse_word(text, ABT)


def naive_reduce(seq):
    out = []
    for x in seq:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return out


def test_parse_examples():
    w = W("a b b")
    assert w.syllables == ((0, 1), (1, 2))
    assert len(w) == 3
    assert not W("a a^-1")
    assert len(W("b t a t^-1 b^-1")) == 5
    assert W("a^+2 a^-5") == W("a^-3")
    assert W("") == ABT.identity()


@pytest.mark.parametrize(
    "text, pos",
    [("a c", 2), ("a^x", 2), ("a^0", 2), ("a^", 2), ("1a", 0), ("a^2^3", 2)],
)
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as exc:
        W(text)
    assert exc.value.position == pos


def test_parse_word_list_offsets():
    assert parse_word_list("a b b; t", ABT) == [W("a b b"), W("t")]
    with pytest.raises(ParseError) as exc:
        parse_word_list("a; t x", ABT)
    assert exc.value.position == 5


def test_free_reduce_examples():
    assert not free_reduce(ABT, [(0, 1), (1, 1), (1, -1), (0, -1)])
    assert free_reduce(ABT, [(0, 1), (1, 2), (1, -1)]) == W("a b")
    assert free_reduce(ABT, [(0, 2), (0, 3)]).syllables == ((0, 5),)


def test_conjugation_convention():
    assert conjugate(W("a"), W("t")) == W("t^-1 a t")
    assert conjugate(W("a"), W("t^-1 b^-1")) == W("b t a t^-1 b^-1")
    assert W("a").conjugate(W("t")) == W("t^-1 a t")
    assert commutator(W("a"), W("b")) == W("a^-1 b^-1 a b")


def test_cyclic_reduce_examples():
    assert cyclic_reduce(W("t a t^-1")) == W("a")
    assert cyclic_reduce(W("a^2 b a^-1")) == W("a b")
    assert cyclic_reduce(W("a b a^-1")).is_cyclically_reduced()
    assert cyclic_reduce(W("a b a^-1 b^-1")) == W("a b a^-1 b^-1")


def test_str_round_trip():
    for text in ("a b^2 t^-3", "", "t^-1 a t b^-1"):
        w = W(text)
        assert W(str(w)) == w


def test_alphabet_mismatch():
    other = Alphabet.from_names("x y")
    with pytest.raises(AlphabetMismatch):
        W("a") * parse_word("x", other)


@pytest.mark.parametrize("names", ["a a", "a 1b", "a^2"])
def test_bad_alphabets(names):
    with pytest.raises(ValueError):
        Alphabet.from_names(names)


def test_builtins():
    pres = builtin_presentations()
    assert set(pres) == {"G_hnn", "B_bks"}
    for p in pres.values():
        assert len(p.relators) == 2
        assert all(r.is_cyclically_reduced() for r in p.relators)


def test_presentation_build_rejects_trivial_relator():
    with pytest.raises(ValueError):
        Presentation.build("a", ["a a^-1"])
    p = Presentation.build("a b", ["b a^2 b^-1"])
    assert p.relators[0].is_cyclically_reduced()
    assert p.relators[0] == p.word("a^2")


def test_presentation_file_round_trip(tmp_path):
    G = builtin_presentations()["G_hnn"]
    path = tmp_path / "g.pres"
    path.write_text("# the HNN group\n" + G.to_text())
    loaded = load_presentation(path)
    assert loaded.alphabet == G.alphabet and loaded.relators == G.relators
    assert loaded.name == "g"


@pytest.mark.parametrize(
    "text, line",
    [
        ("relator: a\ngenerators: a\n", 1),
        ("generators: a b\nrelator: a c\n", 2),
        ("generators: a\nfoo: a\n", 2),
        ("generators: a a\n", 1),
        ("generators: a\nrelator: a a^-1\n", 2),
        ("generators: a\ngenerators: b\n", 2),
    ],
)
def test_presentation_errors_carry_line(text, line):
    with pytest.raises(ParseError) as exc:
        parse_presentation(text)
    assert exc.value.line == line


def test_presentation_files_in_repo():
    from pathlib import Path

    root = Path(__file__).resolve().parents[1] / "presentations"
    pres = builtin_presentations()
    assert load_presentation(root / "g.pres").relators == pres["G_hnn"].relators
    assert load_presentation(root / "b.pres").relators == pres["B_bks"].relators


def test_subgroup_spec():
    G = builtin_presentations()["G_hnn"]
    S = SubgroupSpec.parse(G, "a b b; t")
    assert str(S) == "<a b^2, t>"
    with pytest.raises(ValueError):
        SubgroupSpec(G, ())


@given(letters)
def test_reduction_matches_naive(seq):
    w = Word.from_letters(ABT, seq)
    assert list(w.letters()) == naive_reduce(seq)


@given(letters, letters)
def test_group_laws(x, y):
    u, v = Word.from_letters(ABT, x), Word.from_letters(ABT, y)
    assert concat(u, invert(u)) == ABT.identity()
    assert invert(u * v) == invert(v) * invert(u)
    assert invert(invert(u)) == u
    assert len(u * v) <= len(u) + len(v)
    assert conjugate(u, v) == invert(v) * u * v


@given(letters, letters)
def test_cyclic_reduce_is_conjugate(x, y):
    u, v = Word.from_letters(ABT, x), Word.from_letters(ABT, y)
    c = cyclic_reduce(conjugate(u, v))
    assert c.is_cyclically_reduced()
    r = list(cyclic_reduce(u).letters())
    rotations = [r[i:] + r[:i] for i in range(len(r))] or [[]]
    assert list(c.letters()) in rotations
    assert c.exponent_sums() == u.exponent_sums()


@given(letters, st.integers(-4, 4))
def test_powers(x, n):
    u = Word.from_letters(ABT, x)
    expected = ABT.identity()
    for _ in range(abs(n)):
        expected = expected * (u if n > 0 else invert(u))
    assert u ** n == expected
