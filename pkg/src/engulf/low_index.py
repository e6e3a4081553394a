"""All subgroups of bounded index, by backtracking over partial coset tables.

Each subgroup is produced exactly once as a standardized (breadth-first
numbered) based coset table: the first undefined entry is always filled,
images tried in ascending order with a fresh coset last, so the numbering
is canonical by construction.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from . import kernels
from .coset_enum import CosetTable
from .words import Presentation, Word

DEFAULT_MAX_NODES = 50_000_000
FRONTIER_DEPTH = 2


def default_max_nodes() -> int:
    env = os.environ.get("ENGULF_MAX_NODES")
    return int(env) if env else DEFAULT_MAX_NODES


@dataclass(frozen=True)
class SearchConstraint:
    max_index: int
    must_contain: tuple[Word, ...] = ()

    def __post_init__(self):
        if self.max_index < 1:
            raise ValueError("max_index must be >= 1")
        object.__setattr__(self, "must_contain", tuple(self.must_contain))


@dataclass
class SubgroupList:
    tables: list[CosetTable]
    constraint: SearchConstraint
    nodes: int
    complete: bool = True
    backend: str = field(default="", compare=False)

    def __len__(self) -> int:
        return len(self.tables)

    def __iter__(self):
        return iter(self.tables)

    def count_by_index(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for t in self.tables:
            out[t.degree] = out.get(t.degree, 0) + 1
        return out

    def to_json(self) -> dict:
        return {
            "bound": self.constraint.max_index,
            "must_contain": [str(w) for w in self.constraint.must_contain],
            "complete": self.complete,
            "nodes": self.nodes,
            "count": len(self.tables),
            "count_by_index": {str(k): v for k, v in sorted(self.count_by_index().items())},
            "tables": [t.to_json() for t in self.tables],
        }


def _search_job(args):
    backend, ngens, max_index, rels, cons, state, budget = args
    return kernels.load(backend).search(ngens, max_index, rels, cons, state, budget)


def low_index_subgroups(
    pres: Presentation,
    constraint: SearchConstraint,
    threads: int = 1,
    max_nodes: int | None = None,
) -> SubgroupList:
    """Every subgroup of index <= bound containing ``must_contain``.

    The tree is split at a fixed depth; subtrees run serially or in a
    process pool, and the merged output (tables and node count) does not
    depend on ``threads``.  If the node budget runs out the result is
    marked incomplete and keeps only subtrees finished within budget.
    """
    max_nodes = default_max_nodes() if max_nodes is None else max_nodes
    k = len(pres.alphabet)
    N = constraint.max_index
    rels = kernels.relator_rotations(pres.relators, k)
    cons = [kernels.word_columns(w, k) for w in constraint.must_contain]
    impl = kernels.impl

    root = impl.root_state(k, N, rels, cons)
    found: list[tuple[int, tuple]] = []
    used = 0
    complete = True
    if root is not None:
        frontier = [root]
        for _ in range(FRONTIER_DEPTH):
            nxt = []
            for st in frontier:
                children, attempted, done = impl.expand(k, N, rels, cons, st)
                used += attempted
                if done is not None:
                    found.append(done)
                nxt.extend(children)
            frontier = nxt
        if used > max_nodes:
            complete = False
            found = []
            frontier = []
        budget = max_nodes - used
        jobs = [(kernels.BACKEND, k, N, rels, cons, st, budget) for st in frontier]
        if threads > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(_search_job, jobs))
        else:
            results = []
            for job in jobs:
                # serial runs stop early once the budget is gone; parallel runs
                # are trimmed to the same outcome below
                job = job[:6] + (max_nodes - used - sum(r[1] for r in results),)
                r = _search_job(job)
                results.append(r)
                if not r[2]:
                    break
        for tables, nodes, ok in results:
            if not complete:
                break
            if used + nodes > max_nodes or not ok:
                used = max_nodes
                complete = False
                break
            used += nodes
            found.extend(tables)
    tables = sorted(CosetTable.from_flat(pres, n, flat) for n, flat in found)
    return SubgroupList(tables, constraint, used, complete, kernels.BACKEND)


def subgroup_contains(table: CosetTable, w: Word) -> bool:
    return table.contains(w)


def _permutations_satisfying(pres: Presentation, n: int):
    k = len(pres.alphabet)
    rels = [list(r.letters()) for r in pres.relators]
    perms = list(itertools.permutations(range(n)))
    inverses = {}
    for p in perms:
        q = [0] * n
        for i, j in enumerate(p):
            q[j] = i
        inverses[p] = tuple(q)
    for choice in itertools.product(perms, repeat=k):
        acts = {}
        for g, p in enumerate(choice):
            acts[g + 1] = p
            acts[-(g + 1)] = inverses[p]
        ok = True
        for r in rels:
            for c in range(n):
                d = c
                for x in r:
                    d = acts[x][d]
                if d != c:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield choice


def _transitive(choice: Sequence[Sequence[int]], n: int) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        c = stack.pop()
        for p in choice:
            for d in (p[c], p.index(c)):
                if d not in seen:
                    seen.add(d)
                    stack.append(d)
    return len(seen) == n


def brute_force_subgroups(pres: Presentation, max_index: int) -> SubgroupList:
    """Independent oracle: every transitive permutation representation of
    degree <= max_index, based at 0 and reduced to canonical form."""
    if max_index > 5:
        raise ValueError("brute force is only meant for tiny bounds")
    found = set()
    for n in range(1, max_index + 1):
        for choice in _permutations_satisfying(pres, n):
            if _transitive(choice, n):
                found.add(CosetTable.from_permutations(pres, choice))
    return SubgroupList(sorted(found), SearchConstraint(max_index), nodes=0, backend="brute-force")
