"""A small exact simplex over ``fractions.Fraction``.

Only the case needed for endpoint feasibility is handled: maximise ``c.x``
subject to ``A x <= b`` with ``b >= 0`` and ``x >= 0``, so the origin is a
feasible starting vertex and no phase one is required. Bland's rule keeps
degenerate problems from cycling.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def maximize(
    c: Sequence[int | Fraction],
    rows: Sequence[Sequence[int | Fraction]],
    rhs: Sequence[int | Fraction],
) -> Fraction | None:
    """Optimal objective value, or ``None`` if unbounded."""
    m, n = len(rows), len(c)
    if any(b < 0 for b in rhs):
        raise ValueError("right-hand side must be nonnegative")
    width = n + m
    tab = []
    for i, row in enumerate(rows):
        line = [Fraction(x) for x in row] + [Fraction(0)] * m + [Fraction(rhs[i])]
        line[n + i] = Fraction(1)
        tab.append(line)
    obj = [-Fraction(x) for x in c] + [Fraction(0)] * (m + 1)
    basis = list(range(n, n + m))

    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            return obj[-1]
        leave, best = None, None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            return None
        pivot_row = tab[leave]
        p = pivot_row[enter]
        if p != 1:
            pivot_row[:] = [x / p for x in pivot_row]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], pivot_row)]
        f = obj[enter]
        obj = [x - f * y for x, y in zip(obj, pivot_row)]
        basis[leave] = enter
