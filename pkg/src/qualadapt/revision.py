"""Distance-minimal revision of one network by another.

Models are consistent scenarios. The distance between two scenarios sums
the neighbourhood-graph distance of their relations over every unordered
variable pair, and revising ``psi`` by ``mu`` keeps the consistent
scenarios of ``mu`` closest to some consistent scenario of ``psi``.

The search is a two-level A*. The outer search refines ``mu`` one pair at
a time, ordered by the summed per-pair minimum distance to ``psi``; the
bound never overestimates because a minimum of sums is at least the sum of
minimums. When the outer search reaches a scenario, an inner search of the
same shape refines ``psi`` toward that scenario to get its exact distance,
and the scenario goes back on the queue with that exact value. Scenarios
popped with an exact value are optimal; the search keeps going until every
open node's bound exceeds the optimum, so all minimizers are returned.
"""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

from .qcn import QCN, Scenario
from .solver import (
    _matrix_scenario_consistent,
    close_matrix,
    from_matrix,
    is_consistent,
    to_matrix,
)


class RevisionError(ValueError):
    """Revision inputs violate the contract (e.g. an inconsistent network)."""


class SearchBudgetExceeded(RuntimeError):
    def __init__(self, expanded: int):
        super().__init__(f"search budget exhausted after {expanded} node expansions")
        self.expanded = expanded


@dataclass
class RevisionResult:
    scenarios: list[Scenario]
    distance: int
    expanded: int = 0
    psi: QCN | None = field(default=None, repr=False)
    mu: QCN | None = field(default=None, repr=False)


def scenario_distance(s1: QCN, s2: QCN) -> int:
    """Sum of relation distances over unordered variable pairs."""
    if s1.variables != s2.variables:
        raise ValueError("scenarios are over different variables")
    if not (s1.is_scenario() and s2.is_scenario()):
        raise ValueError("distance is defined between scenarios")
    alg = s1.algebra
    return sum(
        alg.distance(next(iter(a)), next(iter(b)))
        for (_, _, a), (_, _, b) in zip(s1.pairs(), s2.pairs())
    )


def lower_bound(qa: QCN, qb: QCN) -> int:
    """Sum over pairs of the smallest relation distance between the two labels."""
    if qa.variables != qb.variables:
        raise ValueError("networks are over different variables")
    alg = qa.algebra
    return sum(alg.min_distance(a, b) for (_, _, a), (_, _, b) in zip(qa.pairs(), qb.pairs()))


def unify(psi: QCN, mu: QCN) -> tuple[QCN, QCN]:
    """Give both networks the union of their variables."""
    if psi.algebra is not mu.algebra:
        raise RevisionError(f"cannot revise {psi.algebra.name} by {mu.algebra.name}")
    return psi.extend(mu.variables), mu.extend(psi.variables)


class _Search:
    """Shared machinery for both search levels."""

    def __init__(self, algebra, n: int, max_nodes: int | None):
        self.alg = algebra
        self.pairs = list(combinations(range(n), 2))
        self.max_nodes = max_nodes
        self.expanded = 0
        self.tick = itertools.count()

    def bound(self, mat, target) -> int:
        md = self.alg.min_distance
        return sum(md(mat[i][j], target[i][j]) for i, j in self.pairs)

    def count(self) -> None:
        self.expanded += 1
        if self.max_nodes is not None and self.expanded > self.max_nodes:
            raise SearchBudgetExceeded(self.expanded - 1)

    def branch_pair(self, mat):
        """Smallest non-singleton label, ties by canonical order; None at a scenario."""
        best = None
        for i, j in self.pairs:
            size = len(mat[i][j])
            if size > 1 and (best is None or size < best[0]):
                best = (size, i, j)
                if size == 2:
                    break
        return None if best is None else best[1:]

    def children(self, mat, i, j):
        alg = self.alg
        for r in alg.sort(mat[i][j]):
            child = [row[:] for row in mat]
            child[i][j] = frozenset((r,))
            child[j][i] = frozenset((alg.converse(r),))
            if close_matrix(alg, child, [(i, j)])[0] is None:
                yield child

    def nearest(self, start, target, cutoff: float) -> int | None:
        """Exact distance from scenario ``target`` to the closest consistent scenario below ``start``.

        Returns ``None`` once the bound exceeds ``cutoff``.
        """
        heap = [(self.bound(start, target), 0, next(self.tick), start)]
        while heap:
            f, negdepth, _, mat = heapq.heappop(heap)
            if f > cutoff:
                return None
            at = self.branch_pair(mat)
            if at is None:
                if _matrix_scenario_consistent(self.alg, mat):
                    return f
                continue
            self.count()
            for child in self.children(mat, *at):
                heapq.heappush(
                    heap, (self.bound(child, target), negdepth - 1, next(self.tick), child)
                )
        return None


def revise(
    psi: QCN,
    mu: QCN,
    *,
    max_nodes: int | None = None,
    observer: Callable[[QCN, int], None] | None = None,
) -> RevisionResult:
    """All consistent scenarios of ``mu`` at minimal distance from ``psi``.

    ``observer(node, bound)`` is called for every expanded outer node, where
    ``node`` is the (closed) refinement of ``mu`` and ``bound`` its lower
    bound. Raises :class:`SearchBudgetExceeded` after ``max_nodes``
    expansions over both search levels.
    """
    psi, mu = unify(psi, mu)
    if not is_consistent(psi):
        raise RevisionError("the network being revised is inconsistent")
    if not is_consistent(mu):
        raise RevisionError("the revising network is inconsistent")
    alg = mu.algebra
    variables = mu.variables

    psi_mat = to_matrix(psi)
    close_matrix(alg, psi_mat)
    mu_mat = to_matrix(mu)
    close_matrix(alg, mu_mat)

    search = _Search(alg, len(variables), max_nodes)
    exact_depth = -(len(search.pairs) + 1)
    # entries: (f, -depth, tick, matrix, exact)
    heap = [(search.bound(mu_mat, psi_mat), 0, next(search.tick), mu_mat, False)]
    best = None
    found = []
    while heap:
        f, negdepth, _, mat, exact = heapq.heappop(heap)
        if best is not None and f > best:
            break
        if exact:
            best = f
            found.append(mat)
            continue
        at = search.branch_pair(mat)
        if at is None:
            if not _matrix_scenario_consistent(alg, mat):
                continue
            cutoff = float("inf") if best is None else best
            dist = search.nearest(psi_mat, mat, cutoff)
            if dist is not None:
                heapq.heappush(heap, (dist, exact_depth, next(search.tick), mat, True))
            continue
        search.count()
        if observer is not None:
            observer(from_matrix(alg, variables, mat), f)
        for child in search.children(mat, *at):
            heapq.heappush(
                heap, (search.bound(child, psi_mat), negdepth - 1, next(search.tick), child, False)
            )

    scenarios = sorted(
        (from_matrix(alg, variables, m, cls=Scenario) for m in found),
        key=lambda s: scenario_sort_key(s),
    )
    return RevisionResult(scenarios, best if best is not None else 0, search.expanded, psi, mu)


def scenario_sort_key(s: QCN) -> tuple[int, ...]:
    alg = s.algebra
    return tuple(alg.index(next(iter(lab))) for _, _, lab in s.pairs())
