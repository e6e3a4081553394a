"""Coset tables and Todd-Coxeter (HLT) enumeration."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from . import kernels
from .words import AlphabetMismatch, Presentation, SubgroupSpec, Word

DEFAULT_MAX_COSETS = 100_000
DEFAULT_MAX_STEPS = 10_000_000


class CosetOverflow(Exception):
    """Enumeration ran out of resources.  Says nothing about the index."""

    def __init__(self, reason: str, limits: "EnumerationLimits"):
        self.reason = reason
        self.limits = limits
        super().__init__(f"coset enumeration overflow ({reason}); index unknown")


@dataclass(frozen=True)
class EnumerationLimits:
    max_cosets: int = DEFAULT_MAX_COSETS
    max_steps: int = DEFAULT_MAX_STEPS

    def __post_init__(self):
        if self.max_cosets < 1 or self.max_steps < 1:
            raise ValueError("limits must be positive")


def standardize(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Renumber cosets in breadth-first order from coset 0.

    Columns are visited in order (generators, then inverses).  Unreachable
    cosets are dropped.
    """
    order = [0]
    new = {0: 0}
    i = 0
    while i < len(order):
        for d in rows[order[i]]:
            if d >= 0 and d not in new:
                new[d] = len(order)
                order.append(d)
        i += 1
    return [[new[d] if d >= 0 else -1 for d in rows[c]] for c in order]


@dataclass(frozen=True, eq=False)
class CosetTable:
    """Right action of the generators on the cosets of a subgroup.

    ``rows[c][x]`` is coset ``c`` times column ``x`` (generators, then
    inverses).  Coset 0 is the subgroup itself.
    """

    source: Presentation
    rows: tuple[tuple[int, ...], ...]
    subgroup: SubgroupSpec | None = None
    _key: tuple = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        object.__setattr__(self, "_key", (len(self.rows), tuple(x for r in self.rows for x in r)))

    @classmethod
    def from_flat(cls, source: Presentation, degree: int, flat: Sequence[int], subgroup=None) -> "CosetTable":
        nc = 2 * len(source.alphabet)
        return cls(source, tuple(tuple(flat[c * nc:(c + 1) * nc]) for c in range(degree)), subgroup)

    @classmethod
    def from_permutations(
        cls, source: Presentation, perms: Sequence[Sequence[int]], subgroup=None, canonical: bool = True
    ) -> "CosetTable":
        """Build from one image list per generator.

        With ``canonical`` the cosets are renumbered breadth-first (and any
        not reachable from 0 dropped); otherwise the numbering is kept as is.
        """
        n = len(perms[0])
        k = len(perms)
        rows = [[0] * (2 * k) for _ in range(n)]
        for g, perm in enumerate(perms):
            for c, d in enumerate(perm):
                rows[c][g] = d
                rows[d][g + k] = c
        if canonical:
            rows = standardize(rows)
        return cls(source, tuple(map(tuple, rows)), subgroup)

    @property
    def degree(self) -> int:
        return len(self.rows)

    @property
    def basepoint(self) -> int:
        return 0

    @property
    def ngens(self) -> int:
        return len(self.source.alphabet)

    @property
    def action(self) -> tuple[tuple[int, ...], ...]:
        """One permutation (image list) per generator."""
        return tuple(tuple(r[g] for r in self.rows) for g in range(self.ngens))

    def key(self) -> tuple:
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, CosetTable) and self.source == other.source and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __lt__(self, other: "CosetTable") -> bool:
        return self._key < other._key

    def trace(self, w: Word, start: int = 0) -> int:
        if w.alphabet != self.source.alphabet:
            raise AlphabetMismatch("word over a different alphabet")
        k = self.ngens
        c = start
        rows = self.rows
        for g, e in w.syllables:
            col = g if e > 0 else g + k
            for _ in range(abs(e)):
                c = rows[c][col]
        return c

    def coset_of(self, w: Word) -> int:
        return self.trace(w, 0)

    def contains(self, w: Word) -> bool:
        return self.trace(w, 0) == 0

    def transversal(self) -> list[Word]:
        """Shortlex-least word reaching each coset (breadth-first)."""
        k = self.ngens
        A = self.source.alphabet
        words: list[Word | None] = [None] * self.degree
        words[0] = A.identity()
        queue = [0]
        for c in queue:
            for x in range(2 * k):
                d = self.rows[c][x]
                if words[d] is None:
                    g, e = (x, 1) if x < k else (x - k, -1)
                    words[d] = words[c] * Word(A, ((g, e),))
                    queue.append(d)
        return words  # type: ignore[return-value]

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "basepoint": 0,
            "generators": list(self.source.alphabet.names),
            "action": {n: list(p) for n, p in zip(self.source.alphabet.names, self.action)},
        }

    @classmethod
    def from_json(cls, source: Presentation, data: dict | str) -> "CosetTable":
        if isinstance(data, str):
            data = json.loads(data)
        perms = [data["action"][n] for n in source.alphabet.names]
        t = cls.from_permutations(source, perms)
        if t.degree != data["degree"]:
            raise ValueError("serialized action is not transitive")
        return t

    def __repr__(self) -> str:
        return f"CosetTable(degree={self.degree}, action={self.to_json()['action']})"


def enumerate_cosets(
    pres: Presentation, sub: SubgroupSpec, limits: EnumerationLimits | None = None
) -> CosetTable:
    """Coset table of ``sub`` in ``pres``; raises CosetOverflow when limits run out."""
    limits = limits or EnumerationLimits()
    if sub.ambient.alphabet != pres.alphabet:
        raise AlphabetMismatch("subgroup over a different alphabet")
    k = len(pres.alphabet)
    relators = [kernels.word_columns(r, k) for r in pres.relators]
    subgens = [kernels.word_columns(w, k) for w in sub.generators]
    try:
        rows, _, _ = kernels.impl.hlt_enumerate(
            k, relators, kernels.relator_rotations(pres.relators, k), subgens,
            limits.max_cosets, limits.max_steps,
        )
    except kernels.Overflow as exc:
        raise CosetOverflow(str(exc), limits) from None
    return CosetTable(pres, tuple(map(tuple, standardize(rows))), sub)


def coset_of(table: CosetTable, w: Word) -> int:
    return table.coset_of(w)


def verify_table(table: CosetTable) -> bool:
    """Re-check the table invariants from scratch."""
    n = table.degree
    k = table.ngens
    rows = table.rows
    if n < 1 or any(len(r) != 2 * k for r in rows):
        return False
    for g in range(k):
        images = [rows[c][g] for c in range(n)]
        if sorted(images) != list(range(n)):
            return False
        for c in range(n):
            if rows[images[c]][g + k] != c:
                return False
    seen = {0}
    stack = [0]
    while stack:
        c = stack.pop()
        for d in rows[c]:
            if d not in seen:
                seen.add(d)
                stack.append(d)
    if len(seen) != n:
        return False
    for r in table.source.relators:
        if any(table.trace(r, c) != c for c in range(n)):
            return False
    if table.subgroup is not None:
        if any(table.trace(w, 0) != 0 for w in table.subgroup.generators):
            return False
    return True
