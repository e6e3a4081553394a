"""Word problems for the two built-in groups.

G = <a, b, t | [a,b], t^-1 a t = b> is an HNN extension of Z^2 = <a, b>
with stable letter t conjugating <a> onto <b>.  Britton reduction removes
pinches ``t^-1 a^m t -> b^m`` and ``t b^n t^-1 -> a^n``; what remains is
empty exactly when the word is trivial.

B = <alpha, beta, y | alpha^y = alpha beta, beta^y = beta> is F(alpha, beta)
semidirect Z.  Every element is uniquely ``free_part * y^k``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterator

from .words import (
    Alphabet,
    AlphabetMismatch,
    Presentation,
    SubgroupSpec,
    Word,
    commutator,
    group_B,
    group_G,
)


@dataclass(frozen=True)
class Z2Element:
    exp_a: int = 0
    exp_b: int = 0

    def __mul__(self, other: "Z2Element") -> "Z2Element":
        return Z2Element(self.exp_a + other.exp_a, self.exp_b + other.exp_b)

    def __bool__(self) -> bool:
        return bool(self.exp_a or self.exp_b)

    def to_syllables(self) -> tuple[tuple[int, int], ...]:
        out = []
        if self.exp_a:
            out.append((0, self.exp_a))
        if self.exp_b:
            out.append((1, self.exp_b))
        return tuple(out)


@dataclass(frozen=True)
class BrittonFormG:
    """``prefix * t^e1 * base1 * t^e2 * base2 ...``; pinch-free."""

    prefix: Z2Element
    tail: tuple[tuple[int, Z2Element], ...]

    def is_empty(self) -> bool:
        return not self.prefix and not self.tail

    def t_length(self) -> int:
        return sum(abs(e) for e, _ in self.tail)

    def to_word(self, alphabet: Alphabet | None = None) -> Word:
        A = alphabet or group_G().alphabet
        syl = list(self.prefix.to_syllables())
        for e, base in self.tail:
            syl.append((2, e))
            syl.extend(base.to_syllables())
        return Word(A, tuple(syl))

    def is_pinch_free(self) -> bool:
        # expand merged t-powers back into single letters with trivial bases between
        letters: list[tuple[int, Z2Element]] = []
        for e, base in self.tail:
            s = 1 if e > 0 else -1
            for _ in range(abs(e) - 1):
                letters.append((s, Z2Element()))
            letters.append((s, base))
        for (s1, mid), (s2, _) in zip(letters, letters[1:]):
            if s1 == -1 and s2 == 1 and mid.exp_b == 0:
                return False
            if s1 == 1 and s2 == -1 and mid.exp_a == 0:
                return False
        return True

    def __str__(self) -> str:
        w = self.to_word()
        return str(w) if w else "1"


def _check_alphabet(w: Word, pres: Presentation) -> None:
    if w.alphabet != pres.alphabet:
        raise AlphabetMismatch(f"word over {w.alphabet.names}, expected {pres.alphabet.names}")


def britton_reduce(w: Word) -> BrittonFormG:
    _check_alphabet(w, group_G())
    # bases[i] sits after t-letter signs[i-1]; bases[0] is the prefix
    bases = [[0, 0]]
    signs: list[int] = []
    for g, e in w.syllables:
        if g == 0:
            bases[-1][0] += e
        elif g == 1:
            bases[-1][1] += e
        else:
            s = 1 if e > 0 else -1
            for _ in range(abs(e)):
                if signs and signs[-1] == -s:
                    ma, mb = bases[-1]
                    if s == 1 and mb == 0:
                        # t^-1 a^m t = b^m
                        bases.pop()
                        signs.pop()
                        bases[-1][1] += ma
                        continue
                    if s == -1 and ma == 0:
                        # t b^n t^-1 = a^n
                        bases.pop()
                        signs.pop()
                        bases[-1][0] += mb
                        continue
                signs.append(s)
                bases.append([0, 0])
    tail: list[tuple[int, Z2Element]] = []
    for s, (ma, mb) in zip(signs, bases[1:]):
        if tail and (tail[-1][0] > 0) == (s > 0) and not tail[-1][1]:
            tail[-1] = (tail[-1][0] + s, Z2Element(ma, mb))
        else:
            tail.append((s, Z2Element(ma, mb)))
    form = BrittonFormG(Z2Element(*bases[0]), tuple(tail))
    assert form.is_pinch_free()
    return form


def is_trivial_G(w: Word) -> bool:
    return britton_reduce(w).is_empty()


@dataclass(frozen=True)
class NormalFormB:
    free_part: Word
    y_exponent: int

    def to_word(self) -> Word:
        A = self.free_part.alphabet
        return self.free_part * Word(A, ((2, self.y_exponent),))

    def is_identity(self) -> bool:
        return not self.free_part and self.y_exponent == 0

    def __str__(self) -> str:
        w = self.to_word()
        return str(w) if w else "1"


def phi_power(letter: int, m: int) -> tuple[tuple[int, int], ...]:
    """Image of a signed free letter (+-1 alpha, +-2 beta) under y^-m (.) y^m.

    Closed form: alpha -> alpha beta^m, beta -> beta.
    """
    if abs(letter) == 2:
        return ((1, 1 if letter > 0 else -1),)
    if m == 0:
        return ((0, 1 if letter > 0 else -1),)
    if letter > 0:
        return ((0, 1), (1, m))
    return ((1, -m), (0, -1))


def phi_iterated(letter: int, m: int) -> tuple[tuple[int, int], ...]:
    """Same map as :func:`phi_power` by applying the one-step action |m| times."""
    A = group_B().alphabet
    w = Word.from_letters(A, [letter])
    step = {1: [1, 2], 2: [2]} if m >= 0 else {1: [1, -2], 2: [2]}
    for _ in range(abs(m)):
        out = []
        for x in w.letters():
            img = step[abs(x)]
            out.extend(img if x > 0 else [-y for y in reversed(img)])
        w = Word.from_letters(A, out)
    return w.syllables


def normal_form_B(w: Word) -> NormalFormB:
    B = group_B()
    _check_alphabet(w, B)
    free: list[tuple[int, int]] = []
    k = 0
    for g, e in w.syllables:
        if g == 2:
            k += e
            continue
        s = 1 if e > 0 else -1
        for _ in range(abs(e)):
            # (F y^k) x = F phi^-k(x) y^k
            free.extend(phi_power(s * (g + 1), -k))
    return NormalFormB(Word(B.alphabet, tuple(free)), k)


def is_trivial_B(w: Word) -> bool:
    return normal_form_B(w).is_identity()


class NoWordProblemSolver(ValueError):
    pass


def word_problem_solver(pres: Presentation) -> Callable[[Word], bool]:
    if pres.alphabet == group_G().alphabet and set(pres.relators) == set(group_G().relators):
        return is_trivial_G
    if pres.alphabet == group_B().alphabet and set(pres.relators) == set(group_B().relators):
        return is_trivial_B
    raise NoWordProblemSolver(f"no word-problem solver for presentation {pres.name or pres.alphabet.names}")


@dataclass(frozen=True)
class GeneratorMap:
    source: Presentation
    target: Presentation
    images: tuple[Word, ...]

    def __post_init__(self):
        if len(self.images) != len(self.source.alphabet):
            raise ValueError("need one image per source generator")
        for w in self.images:
            if w.alphabet != self.target.alphabet:
                raise AlphabetMismatch("image over a different alphabet")

    @classmethod
    def parse(cls, source: Presentation, target: Presentation, images: dict[str, str]) -> "GeneratorMap":
        return cls(source, target, tuple(target.word(images[n]) for n in source.alphabet.names))

    def __call__(self, w: Word) -> Word:
        _check_alphabet(w, self.source)
        out = self.target.alphabet.identity()
        for g, e in w.syllables:
            out = out * self.images[g] ** e
        return out

    def describe(self) -> dict[str, str]:
        return {n: str(w) for n, w in zip(self.source.alphabet.names, self.images)}


def verify_homomorphism(m: GeneratorMap) -> bool:
    trivial = word_problem_solver(m.target)
    return all(trivial(m(r)) for r in m.source.relators)


def verify_mutually_inverse(f: GeneratorMap, g: GeneratorMap) -> bool:
    if f.target != g.source or g.target != f.source:
        raise ValueError("maps are not composable both ways")
    if not (verify_homomorphism(f) and verify_homomorphism(g)):
        return False
    for first, second in ((f, g), (g, f)):
        trivial = word_problem_solver(first.source)
        A = first.source.alphabet
        for i in range(len(A)):
            x = Word(A, ((i, 1),))
            if not trivial(second(first(x)) * x.inverse()):
                return False
    return True


def iso_maps() -> tuple[GeneratorMap, GeneratorMap]:
    """Explicit G -> B and B -> G isomorphisms."""
    G, B = group_G(), group_B()
    g_to_b = GeneratorMap.parse(G, B, {"a": "y", "b": "alpha beta alpha^-1 y", "t": "alpha^-1"})
    b_to_g = GeneratorMap.parse(B, G, {"alpha": "t^-1", "beta": "t b a^-1 t^-1", "y": "a"})
    return g_to_b, b_to_g


def reduced_free_words(k: int, max_length: int) -> Iterator[tuple[int, ...]]:
    """Nonempty reduced words in the free group on k letters, by length then lex.

    Letters are signed 1..k; order within a length is x1 < x1^-1 < x2 < ...
    """
    alphabet = [s * i for i in range(1, k + 1) for s in (1, -1)]

    def walk(prefix: list[int], remaining: int) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield tuple(prefix)
            return
        for x in alphabet:
            if prefix and x == -prefix[-1]:
                continue
            prefix.append(x)
            yield from walk(prefix, remaining - 1)
            prefix.pop()

    for length in range(1, max_length + 1):
        yield from walk([], length)


@dataclass
class FreenessResult:
    max_length: int
    evaluated: int
    evaluated_by_length: dict[int, int]
    violations: list[tuple[int, ...]]

    def violation_text(self) -> list[str]:
        out = []
        for v in self.violations:
            out.append(" ".join(f"x{abs(x)}" if x > 0 else f"x{abs(x)}^-1" for x in v))
        return out


def freeness_probe(sub: SubgroupSpec, max_length: int) -> FreenessResult:
    """Relations of length <= max_length among the subgroup's generators.

    Each reduced word in the abstract free group on the generators is
    evaluated in the ambient group; those that evaluate to 1 are returned.
    """
    if max_length < 1:
        raise ValueError("max_length must be >= 1")
    trivial = word_problem_solver(sub.ambient)
    gens = sub.generators
    inverses = [g.inverse() for g in gens]
    by_len: dict[int, int] = {}
    violations = []
    n = 0
    for abstract in reduced_free_words(len(gens), max_length):
        n += 1
        by_len[len(abstract)] = by_len.get(len(abstract), 0) + 1
        syl: list[tuple[int, int]] = []
        for x in abstract:
            syl.extend((gens if x > 0 else inverses)[abs(x) - 1].syllables)
        if trivial(Word(sub.ambient.alphabet, tuple(syl))):
            violations.append(abstract)
    violations.sort(key=lambda v: (len(v), [(abs(x), x < 0) for x in v]))
    return FreenessResult(max_length, n, by_len, violations)


def not_free_certificate() -> dict:
    """G contains Z^2: a, b nontrivial and commuting, so G is not free."""
    G = group_G()
    a, b = G.word("a"), G.word("b")
    cert = {
        "a_nontrivial": not is_trivial_G(a),
        "b_nontrivial": not is_trivial_G(b),
        "commutator_trivial": is_trivial_G(commutator(a, b)),
        # in a free group commuting elements are powers of a common root, so
        # a^i b^j = 1 would have a nonzero solution; none exist on this box
        "no_relation_a_i_b_j": all(
            not is_trivial_G(a ** i * b ** j)
            for i, j in itertools.product(range(-4, 5), repeat=2)
            if (i, j) != (0, 0)
        ),
    }
    cert["not_free"] = all(cert.values())
    return cert


def random_word(alphabet: Alphabet, length: int, rng: random.Random) -> Word:
    k = len(alphabet)
    letters = [rng.choice((1, -1)) * rng.randint(1, k) for _ in range(length)]
    return Word.from_letters(alphabet, letters)


@dataclass
class SoundnessResult:
    group: str
    trials: int
    insertion_failures: int
    inverse_failures: int

    @property
    def ok(self) -> bool:
        return self.insertion_failures == 0 and self.inverse_failures == 0


def soundness_trials(pres: Presentation, trials: int, seed: int = 0, max_length: int = 20) -> SoundnessResult:
    """Relator insertion must not change the verdict; w w^-1 must be trivial."""
    trivial = word_problem_solver(pres)
    rng = random.Random(seed)
    A = pres.alphabet
    rels = list(pres.relators) + [r.inverse() for r in pres.relators]
    bad_insert = bad_inverse = 0
    for i in range(trials):
        w = random_word(A, rng.randint(0, max_length), rng)
        if i % 4 == 0:
            # bias towards trivial words so both verdicts are exercised
            u = random_word(A, rng.randint(0, max_length // 2), rng)
            w = u * rng.choice(rels) * u.inverse()
        letters = list(w.letters())
        r = rng.choice(rels)
        pos = rng.randint(0, len(letters))
        conj = rng.choice(rels) if rng.random() < 0.5 else None
        ins = list(r.letters()) if conj is None else list((r.conjugate(conj)).letters())
        w2 = Word.from_letters(A, letters[:pos] + ins + letters[pos:])
        if trivial(w) != trivial(w2):
            bad_insert += 1
        if not trivial(w * w.inverse()) or not trivial(Word.from_letters(A, letters + [-x for x in reversed(letters)])):
            bad_inverse += 1
    return SoundnessResult(pres.name, trials, bad_insert, bad_inverse)


def solve(word: Word, group: str) -> tuple[object, bool]:
    """Normal form and triviality verdict for ``group`` in {"G", "B"}."""
    if group == "G":
        f = britton_reduce(word)
        return f, f.is_empty()
    if group == "B":
        f = normal_form_B(word)
        return f, f.is_identity()
    raise ValueError(f"unknown group {group!r}")
