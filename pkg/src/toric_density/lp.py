"""Dense two-phase simplex over exact rationals.

Small problems only (tens of variables); every pivot is exact, Bland's rule
guarantees termination. Variables are nonnegative.
"""

from __future__ import annotations

from fractions import Fraction

from .vectors import frac


class Infeasible(Exception):
    pass


class Unbounded(Exception):
    pass


def _pivot(tab, basis, row, col):
    piv = tab[row][col]
    tab[row] = [x / piv for x in tab[row]]
    prow = tab[row]
    for i, line in enumerate(tab):
        if i != row and line[col] != 0:
            f = line[col]
            tab[i] = [a - f * b for a, b in zip(line, prow)]
    basis[row] = col


def _run_simplex(tab, basis, cost, width, banned=frozenset()):
    """Minimize cost over the tableau; cost has `width` entries (one per column)."""
    m = len(tab)
    while True:
        # reduced costs r_j = c_j - c_B . column_j
        cb = [cost[basis[i]] for i in range(m)]
        entering = -1
        for j in range(width):
            if j in basis or j in banned:
                continue
            r = cost[j] - sum(cb[i] * tab[i][j] for i in range(m))
            if r < 0:
                entering = j
                break  # Bland: smallest index
        if entering < 0:
            obj = sum(cb[i] * tab[i][-1] for i in range(m))
            return obj
        ratio = None
        leave = -1
        for i in range(m):
            a = tab[i][entering]
            if a > 0:
                t = tab[i][-1] / a
                if ratio is None or t < ratio or (t == ratio and basis[i] < basis[leave]):
                    ratio, leave = t, i
        if leave < 0:
            raise Unbounded()
        _pivot(tab, basis, leave, entering)


def solve_lp(objective, a_eq=(), b_eq=(), a_ge=(), b_ge=(), maximize=False):
    """Solve min (or max) objective.x  s.t.  a_eq x = b_eq, a_ge x >= b_ge, x >= 0.

    Returns (optimal value, x) as exact Fractions.
    """
    obj = [frac(c) for c in objective]
    n = len(obj)
    if maximize:
        obj = [-c for c in obj]

    rows = []
    for a, b in zip(a_eq, b_eq):
        rows.append(([frac(x) for x in a], frac(b), 0))
    for a, b in zip(a_ge, b_ge):
        rows.append(([frac(x) for x in a], frac(b), -1))  # surplus coefficient

    m = len(rows)
    nslack = sum(1 for r in rows if r[2] != 0)
    width = n + nslack + m  # structural + surplus + artificial
    tab = []
    sidx = 0
    for a, b, s in rows:
        line = list(a) + [Fraction(0)] * (nslack + m) + [b]
        if s:
            line[n + sidx] = Fraction(s)
            sidx += 1
        tab.append(line)
    # make rhs nonnegative, then attach artificials as the starting basis
    for i in range(m):
        if tab[i][-1] < 0:
            tab[i] = [-x for x in tab[i]]
        tab[i][n + nslack + i] = Fraction(1)
    basis = [n + nslack + i for i in range(m)]

    phase1 = [Fraction(0)] * (n + nslack) + [Fraction(1)] * m
    art_sum = _run_simplex(tab, basis, phase1, width)
    if art_sum != 0:
        raise Infeasible()
    # pivot any lingering artificial out of the basis (or drop a redundant row)
    for i in range(m - 1, -1, -1):
        if basis[i] >= n + nslack:
            col = next((j for j in range(n + nslack) if tab[i][j] != 0), None)
            if col is None:
                del tab[i]
                del basis[i]
            else:
                _pivot(tab, basis, i, col)

    phase2 = list(obj) + [Fraction(0)] * (nslack + m)
    banned = frozenset(range(n + nslack, width))
    val = _run_simplex(tab, basis, phase2, width, banned)
    x = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] = tab[i][-1]
    if maximize:
        val = -val
    return val, tuple(x)
