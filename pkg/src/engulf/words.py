"""Alphabets, freely reduced words and finite presentations.

Words are stored in run-length form: a tuple of ``(generator_index, exponent)``
syllables with nonzero exponents and no two adjacent syllables on the same
generator.  Text syntax is whitespace separated syllables ``name`` or
``name^k``::

    >>> A = Alphabet.from_names("a b t")
    >>> w = parse_word("b t a t^-1 b^-1", A)
    >>> len(w), str(w)
    (5, 'b t a t^-1 b^-1')
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_SYLLABLE_RE = re.compile(r"([A-Za-z][A-Za-z0-9_]*)(?:\^(.*))?\Z")
_EXPONENT_RE = re.compile(r"[+-]?[0-9]+\Z")


class ParseError(ValueError):
    """Malformed word or presentation text; ``position`` is a 0-based offset."""

    def __init__(self, message: str, position: int | None = None, line: int | None = None):
        self.message = message
        self.position = position
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"column {position}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class AlphabetMismatch(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSymbol:
    name: str
    index: int

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Alphabet:
    generators: tuple[GeneratorSymbol, ...]

    def __post_init__(self):
        seen = set()
        for i, g in enumerate(self.generators):
            if g.index != i:
                raise ValueError(f"generator {g.name!r} has index {g.index}, expected {i}")
            if not NAME_RE.match(g.name):
                raise ValueError(f"invalid generator name {g.name!r}")
            if g.name in seen:
                raise ValueError(f"duplicate generator name {g.name!r}")
            seen.add(g.name)

    @classmethod
    def from_names(cls, names: str | Iterable[str]) -> "Alphabet":
        if isinstance(names, str):
            names = names.split()
        return cls(tuple(GeneratorSymbol(n, i) for i, n in enumerate(names)))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        for g in self.generators:
            if g.name == name:
                return g.index
        raise KeyError(name)

    def gen(self, name: str) -> "Word":
        return Word(self, ((self.index(name), 1),))

    def identity(self) -> "Word":
        return Word(self, ())


def _reduce(syllables: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    stack: list[list[int]] = []
    for g, e in syllables:
        if e == 0:
            continue
        if stack and stack[-1][0] == g:
            stack[-1][1] += e
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([g, e])
    return tuple((g, e) for g, e in stack)


@dataclass(frozen=True)
class Word:
    """An element of the free group on ``alphabet``, always freely reduced."""

    alphabet: Alphabet
    syllables: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "syllables", _reduce(self.syllables))

    @classmethod
    def from_letters(cls, alphabet: Alphabet, letters: Iterable[int]) -> "Word":
        """Build from signed letters: ``+(i+1)`` is generator ``i``, ``-(i+1)`` its inverse."""
        return cls(alphabet, tuple((abs(x) - 1, 1 if x > 0 else -1) for x in letters))

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def letters(self) -> Iterator[int]:
        for g, e in self.syllables:
            s = 1 if e > 0 else -1
            for _ in range(abs(e)):
                yield s * (g + 1)

    def _check(self, other: "Word") -> None:
        if other.alphabet != self.alphabet:
            raise AlphabetMismatch(f"{self.alphabet.names} vs {other.alphabet.names}")

    def __mul__(self, other: "Word") -> "Word":
        self._check(other)
        return Word(self.alphabet, self.syllables + other.syllables)

    def inverse(self) -> "Word":
        return Word(self.alphabet, tuple((g, -e) for g, e in reversed(self.syllables)))

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word(self.alphabet, base.syllables * abs(n))

    def conjugate(self, by: "Word") -> "Word":
        """``by^-1 * self * by``."""
        self._check(by)
        return by.inverse() * self * by

    def cyclic_reduce(self) -> "Word":
        syl = list(self.syllables)
        while len(syl) >= 2 and syl[0][0] == syl[-1][0]:
            g, e = syl[0][0], syl[0][1] + syl[-1][1]
            syl = syl[1:-1]
            if e:
                syl.insert(0, (g, e))
                break
        return Word(self.alphabet, tuple(syl))

    def is_cyclically_reduced(self) -> bool:
        return len(self.syllables) < 2 or self.syllables[0][0] != self.syllables[-1][0]

    def exponent_sums(self) -> list[int]:
        sums = [0] * len(self.alphabet)
        for g, e in self.syllables:
            sums[g] += e
        return sums

    def __str__(self) -> str:
        names = self.alphabet.names
        return " ".join(names[g] if e == 1 else f"{names[g]}^{e}" for g, e in self.syllables)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"


def free_reduce(alphabet: Alphabet, raw: Iterable[tuple[int, int]]) -> Word:
    return Word(alphabet, tuple(raw))


def invert(w: Word) -> Word:
    return w.inverse()


def concat(u: Word, v: Word) -> Word:
    return u * v


def conjugate(x: Word, y: Word) -> Word:
    """x^y = y^-1 x y."""
    return x.conjugate(y)


def commutator(x: Word, y: Word) -> Word:
    """[x, y] = x^-1 y^-1 x y."""
    return x.inverse() * y.inverse() * x * y


def cyclic_reduce(w: Word) -> Word:
    return w.cyclic_reduce()


def parse_word(text: str, alphabet: Alphabet) -> Word:
    syllables = []
    for m in re.finditer(r"\S+", text):
        tok, pos = m.group(), m.start()
        sm = _SYLLABLE_RE.match(tok)
        if sm is None:
            raise ParseError(f"malformed syllable {tok!r}", pos)
        name, exp = sm.group(1), sm.group(2)
        try:
            g = alphabet.index(name)
        except KeyError:
            raise ParseError(f"unknown generator {name!r}", pos) from None
        if exp is None:
            e = 1
        else:
            if not _EXPONENT_RE.match(exp):
                raise ParseError(f"malformed exponent {exp!r}", pos + len(name) + 1)
            e = int(exp)
            if e == 0:
                raise ParseError("zero exponent", pos + len(name) + 1)
        syllables.append((g, e))
    return Word(alphabet, tuple(syllables))


def parse_word_list(text: str, alphabet: Alphabet) -> list[Word]:
    """Semicolon separated words, e.g. ``"a b b; t"``."""
    out = []
    offset = 0
    for part in text.split(";"):
        try:
            out.append(parse_word(part, alphabet))
        except ParseError as exc:
            raise ParseError(exc.message, None if exc.position is None else exc.position + offset) from None
        offset += len(part) + 1
    return out


@dataclass(frozen=True)
class Presentation:
    alphabet: Alphabet
    relators: tuple[Word, ...]
    name: str = ""

    def __post_init__(self):
        for r in self.relators:
            if r.alphabet != self.alphabet:
                raise AlphabetMismatch("relator over a different alphabet")
            if not r:
                raise ValueError("empty relator")
            if not r.is_cyclically_reduced():
                raise ValueError(f"relator {r} is not cyclically reduced")

    @classmethod
    def build(cls, names: str | Sequence[str], relators: Iterable[str], name: str = "") -> "Presentation":
        """Parse relators; each is cyclically reduced and an empty result is rejected."""
        A = Alphabet.from_names(names)
        rels = []
        for text in relators:
            w = parse_word(text, A).cyclic_reduce()
            if not w:
                raise ValueError(f"relator {text!r} reduces to the empty word")
            rels.append(w)
        return cls(A, tuple(rels), name)

    @property
    def generators(self) -> tuple[GeneratorSymbol, ...]:
        return self.alphabet.generators

    def word(self, text: str) -> Word:
        return parse_word(text, self.alphabet)

    def to_text(self) -> str:
        lines = ["generators: " + " ".join(self.alphabet.names)]
        lines += [f"relator: {r}" for r in self.relators]
        return "\n".join(lines) + "\n"


def parse_presentation(text: str, name: str = "") -> Presentation:
    names = None
    relators: list[tuple[int, str]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        key, sep, rest = s.partition(":")
        key = key.strip()
        if not sep or key not in ("generators", "relator"):
            raise ParseError(f"expected 'generators:' or 'relator:', got {s!r}", line=lineno)
        if key == "generators":
            if names is not None:
                raise ParseError("generators declared twice", line=lineno)
            names = rest.split()
            if not names:
                raise ParseError("no generators declared", line=lineno)
            for n in names:
                if not NAME_RE.match(n):
                    raise ParseError(f"invalid generator name {n!r}", line=lineno)
            if len(set(names)) != len(names):
                raise ParseError("duplicate generator name", line=lineno)
        else:
            if names is None:
                raise ParseError("relator before generators line", line=lineno)
            relators.append((lineno, rest))
    if names is None:
        raise ParseError("missing generators line")
    A = Alphabet.from_names(names)
    rels = []
    for lineno, r in relators:
        try:
            w = parse_word(r, A).cyclic_reduce()
        except ParseError as exc:
            raise ParseError(exc.message, exc.position, lineno) from None
        if not w:
            raise ParseError("empty relator", line=lineno)
        rels.append(w)
    return Presentation(A, tuple(rels), name)


def load_presentation(path: str | Path) -> Presentation:
    p = Path(path)
    return parse_presentation(p.read_text(encoding="utf-8"), name=p.stem)


@dataclass(frozen=True)
class SubgroupSpec:
    ambient: Presentation
    generators: tuple[Word, ...]

    def __post_init__(self):
        if not self.generators:
            raise ValueError("subgroup needs at least one generator")
        for w in self.generators:
            if w.alphabet != self.ambient.alphabet:
                raise AlphabetMismatch("subgroup generator over a different alphabet")

    @classmethod
    def parse(cls, ambient: Presentation, text: str) -> "SubgroupSpec":
        return cls(ambient, tuple(parse_word_list(text, ambient.alphabet)))

    def __str__(self) -> str:
        return "<" + ", ".join(str(w) or "1" for w in self.generators) + ">"


_G = None
_B = None


def builtin_presentations() -> dict[str, Presentation]:
    """The HNN group G = <a,b,t | [a,b], a^t = b> and the BKS group B."""
    global _G, _B
    if _G is None:
        _G = Presentation.build("a b t", ["a^-1 b^-1 a b", "t^-1 a t b^-1"], name="G")
        # alpha^y = alpha beta, beta^y = beta
        _B = Presentation.build(
            "alpha beta y", ["y^-1 alpha y beta^-1 alpha^-1", "y^-1 beta y beta^-1"], name="B"
        )
    return {"G_hnn": _G, "B_bks": _B}


def group_G() -> Presentation:
    return builtin_presentations()["G_hnn"]


def group_B() -> Presentation:
    return builtin_presentations()["B_bks"]
