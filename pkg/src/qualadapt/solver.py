"""Algebraic closure, scenario enumeration and consistency checking."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator

from . import lp
from .algebra import Algebra
from .qcn import QCN, Scenario

# Endpoint comparisons (s_i ? s_j, s_i ? e_j, e_i ? s_j, e_i ? e_j) for i r j,
# with -1 for <, 0 for =, 1 for >.
ALLEN_ENDPOINTS = {
    "b": (-1, -1, -1, -1),
    "m": (-1, -1, 0, -1),
    "o": (-1, -1, 1, -1),
    "s": (0, -1, 1, -1),
    "d": (1, -1, 1, -1),
    "f": (1, -1, 1, 0),
    "eq": (0, -1, 1, 0),
    "bi": (1, 1, 1, 1),
    "mi": (1, 0, 1, 1),
    "oi": (1, -1, 1, 1),
    "si": (0, -1, 1, 1),
    "di": (-1, -1, 1, 1),
    "fi": (-1, -1, 1, 0),
}
_DURATION_SIGN = {"<": -1, "=": 0, ">": 1}


class ScenarioLimitExceeded(RuntimeError):
    """Raised when an enumeration would yield more than ``limit`` scenarios."""


@dataclass(frozen=True)
class ClosureReport:
    closed: QCN
    contradictory: bool
    iterations: int


# Networks are handled internally as dense label matrices indexed by the
# position of each variable in ``QCN.variables``.

def to_matrix(q: QCN) -> list[list[frozenset[str]]]:
    alg = q.algebra
    n = len(q.variables)
    ident = frozenset((alg.identity,))
    mat = [[ident] * n for _ in range(n)]
    for (i, u), (j, v) in combinations(enumerate(q.variables), 2):
        lab = q._labels[(u, v)]
        mat[i][j] = lab
        mat[j][i] = alg.converse_set(lab)
    return mat


def from_matrix(algebra: Algebra, variables, mat, conflict=None, cls=QCN) -> QCN:
    labels = {
        (u, v): mat[i][j] for (i, u), (j, v) in combinations(enumerate(variables), 2)
    }
    return cls._make(algebra, tuple(variables), labels, conflict)


def close_matrix(algebra: Algebra, mat, changed=None) -> tuple[tuple[int, int] | None, int]:
    """Path consistency in place.

    ``changed`` seeds the worklist (all pairs by default). Returns the first
    pair found empty, or ``None``, and the number of worklist pops.
    """
    n = len(mat)
    compose = algebra.compose_sets
    conv = algebra.converse_set
    queue = deque(changed if changed is not None else combinations(range(n), 2))
    queued = set(queue)
    pops = 0
    while queue:
        i, j = queue.popleft()
        queued.discard((i, j))
        pops += 1
        rij = mat[i][j]
        for k in range(n):
            if k == i or k == j:
                continue
            # i -> j -> k refines (i, k)
            rik = mat[i][k]
            new = rik & compose(rij, mat[j][k])
            if new != rik:
                if not new:
                    return (i, k), pops
                mat[i][k] = new
                mat[k][i] = conv(new)
                key = (i, k) if i < k else (k, i)
                if key not in queued:
                    queued.add(key)
                    queue.append(key)
            # k -> i -> j refines (k, j)
            rkj = mat[k][j]
            new = rkj & compose(mat[k][i], rij)
            if new != rkj:
                if not new:
                    return (k, j), pops
                mat[k][j] = new
                mat[j][k] = conv(new)
                key = (k, j) if k < j else (j, k)
                if key not in queued:
                    queued.add(key)
                    queue.append(key)
    return None, pops


def algebraic_closure(q: QCN) -> ClosureReport:
    """Refine every label by composition along all triangles until stable."""
    if q.contradictory:
        return ClosureReport(q, True, 0)
    mat = to_matrix(q)
    bad, pops = close_matrix(q.algebra, mat)
    if bad is not None:
        u, v = q.variables[bad[0]], q.variables[bad[1]]
        if v < u:
            u, v = v, u
        closed = from_matrix(q.algebra, q.variables, mat, (u, v))
        closed._labels[(u, v)] = frozenset()
        return ClosureReport(closed, True, pops)
    return ClosureReport(from_matrix(q.algebra, q.variables, mat), False, pops)


# scenario consistency

def _semantics(algebra: Algebra):
    if algebra.name == "allen":
        return lambda r: (ALLEN_ENDPOINTS[r], None)
    if algebra.factors is not None and algebra.factors[0].name == "allen":
        def split(r):
            a, s = algebra.parts(r)
            return ALLEN_ENDPOINTS[a], _DURATION_SIGN[s]
        return split
    return None


def endpoint_feasible(n: int, relations: dict[tuple[int, int], tuple]) -> bool:
    """Decide whether intervals 0..n-1 can realise the given endpoint/duration signs.

    ``relations[(i, j)]`` is ``(endpoint_signs, duration_sign_or_None)``.
    Strict inequalities are written ``expr >= eps`` and ``eps`` is maximised
    (capped at 1); the system is realisable iff the optimum is positive.
    The endpoint values can be taken nonnegative because every constraint is
    invariant under translation.
    """
    nvar = 2 * n + 1
    eps = 2 * n
    rows: list[list[int]] = []
    rhs: list[int] = []

    def diff(a: int, b: int) -> list[int]:
        row = [0] * nvar
        row[a] += 1
        row[b] -= 1
        return row

    def require(expr: list[int], sign: int) -> None:
        # expr (sign) 0, as rows of  A x <= 0
        if sign == 0:
            rows.append(list(expr))
            rows.append([-x for x in expr])
            rhs.extend((0, 0))
        else:
            row = [-sign * x for x in expr]
            row[eps] += 1
            rows.append(row)
            rhs.append(0)

    start = lambda i: 2 * i
    end = lambda i: 2 * i + 1
    for i in range(n):
        require(diff(end(i), start(i)), 1)
    for (i, j), (signs, dur) in relations.items():
        points = ((start(i), start(j)), (start(i), end(j)), (end(i), start(j)), (end(i), end(j)))
        for (a, b), sign in zip(points, signs):
            require(diff(a, b), sign)
        if dur is not None:
            expr = [0] * nvar
            expr[end(i)] += 1
            expr[start(i)] -= 1
            expr[end(j)] -= 1
            expr[start(j)] += 1
            require(expr, dur)
    cap = [0] * nvar
    cap[eps] = 1
    rows.append(cap)
    rhs.append(1)
    objective = [0] * nvar
    objective[eps] = 1
    best = lp.maximize(objective, rows, rhs)
    return best is not None and best > 0


def _matrix_scenario_consistent(algebra: Algebra, mat) -> bool:
    sem = _semantics(algebra)
    if sem is None or algebra.name == "allen":
        # closure decides atomic Allen networks
        trial = [row[:] for row in mat]
        return close_matrix(algebra, trial)[0] is None
    n = len(mat)
    rels = {}
    for i, j in combinations(range(n), 2):
        (r,) = mat[i][j]
        rels[(i, j)] = sem(r)
    return endpoint_feasible(n, rels)


def is_consistent_scenario(s: QCN) -> bool:
    """True iff the scenario has a realisation by rational intervals."""
    if not s.is_scenario():
        raise ValueError("not a scenario")
    if s.contradictory:
        return False
    return _matrix_scenario_consistent(s.algebra, to_matrix(s))


# enumeration

def enumerate_scenarios(
    q: QCN, only_consistent: bool = False, limit: int | None = None
) -> Iterator[Scenario]:
    """Scenarios of ``q`` in lexicographic order (canonical pairs, catalog relation order).

    Raises :class:`ScenarioLimitExceeded` once more than ``limit`` would be produced.
    """
    stream = _consistent_scenarios(q) if only_consistent else _raw_scenarios(q)
    for count, s in enumerate(stream):
        if limit is not None and count >= limit:
            raise ScenarioLimitExceeded(f"more than {limit} scenarios")
        yield s


def _raw_scenarios(q: QCN) -> Iterator[Scenario]:
    alg = q.algebra
    keys = list(q._labels)
    choices = [alg.sort(q._labels[k]) for k in keys]
    for combo in product(*choices):
        labels = {k: frozenset((r,)) for k, r in zip(keys, combo)}
        yield Scenario._make(alg, q.variables, labels)


def _consistent_scenarios(q: QCN) -> Iterator[Scenario]:
    if q.contradictory:
        return
    alg = q.algebra
    mat = to_matrix(q)
    if close_matrix(alg, mat)[0] is not None:
        return
    pairs = list(combinations(range(len(mat)), 2))

    def dfs(mat, start):
        for idx in range(start, len(pairs)):
            i, j = pairs[idx]
            if len(mat[i][j]) > 1:
                break
        else:
            if _matrix_scenario_consistent(alg, mat):
                yield from_matrix(alg, q.variables, mat, cls=Scenario)
            return
        for r in alg.sort(mat[i][j]):
            child = [row[:] for row in mat]
            child[i][j] = frozenset((r,))
            child[j][i] = frozenset((alg.converse(r),))
            if close_matrix(alg, child, [(i, j)])[0] is None:
                yield from dfs(child, idx + 1)

    yield from dfs(mat, 0)


def is_consistent(q: QCN) -> bool:
    """True iff ``q`` has at least one consistent scenario."""
    return next(_consistent_scenarios(q), None) is not None
