"""A small exact simplex method over :class:`fractions.Fraction`.

Dense tableau, Bland's rule (so no cycling), pivot updates that skip zero
entries.  Good for the few-dozen-variable programs that show up here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


class Unbounded(Exception):
    pass


class InfeasibleLP(Exception):
    pass


class Tableau:
    """Rows hold ``B^-1 A``; ``cost`` holds reduced costs ``c_j - c_B B^-1 A_j`` (maximisation)."""

    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int],
                 cost: list[Fraction], value: Fraction = ZERO):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.cost = cost
        self.value = value
        self.pivots = 0

    @property
    def ncols(self) -> int:
        return len(self.cost)

    def copy(self) -> "Tableau":
        return Tableau([r[:] for r in self.rows], self.rhs[:], self.basis[:], self.cost[:], self.value)

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        piv = row[c]
        if piv != 1:
            inv = 1 / piv
            for j, a in enumerate(row):
                if a:
                    row[j] = a * inv
            self.rhs[r] *= inv
        nz = [(j, a) for j, a in enumerate(row) if a]
        b = self.rhs[r]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[c]
            if f:
                for j, a in nz:
                    other[j] -= f * a
                self.rhs[i] -= f * b
        f = self.cost[c]
        if f:
            for j, a in nz:
                self.cost[j] -= f * a
            self.value += f * b
        self.basis[r] = c
        self.pivots += 1

    def set_objective(self, c: Sequence[Fraction]) -> None:
        """Install a new objective and price it against the current basis."""
        cost = [Fraction(x) for x in c]
        value = ZERO
        for i, bj in enumerate(self.basis):
            cb = cost[bj]
            if cb:
                for j, a in enumerate(self.rows[i]):
                    if a:
                        cost[j] -= cb * a
                value += cb * self.rhs[i]
        self.cost = cost
        self.value = value

    def optimize(self, allowed: set[int] | None = None, stop_above: Fraction | None = None) -> None:
        """Primal simplex from a feasible basis.  ``allowed`` limits entering columns."""
        while True:
            if stop_above is not None and self.value > stop_above:
                return
            enter = -1
            for j, d in enumerate(self.cost):
                if d > 0 and (allowed is None or j in allowed):
                    enter = j
                    break
            if enter < 0:
                return
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise Unbounded
            self.pivot(best[1], enter)

    def solution(self) -> list[Fraction]:
        x = [ZERO] * self.ncols
        for i, bj in enumerate(self.basis):
            x[bj] = self.rhs[i]
        return x


@dataclass
class LPResult:
    value: Fraction
    x: list[Fraction]


def solve_lp(c: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
             A_eq: Sequence[Sequence] = (), b_eq: Sequence = ()) -> LPResult:
    """Maximise ``c x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``.

    Two-phase simplex.  Raises :class:`InfeasibleLP` or :class:`Unbounded`.
    """
    nx = len(c)
    m_ub, m_eq = len(A_ub), len(A_eq)
    m = m_ub + m_eq
    n_slack = m_ub
    rows, rhs = [], []
    art_rows = []
    for i in range(m_ub):
        row = [Fraction(a) for a in A_ub[i]] + [ZERO] * n_slack
        row[nx + i] = ONE
        b = Fraction(b_ub[i])
        if b < 0:
            row = [-a for a in row]
            b = -b
            art_rows.append(i)
        rows.append(row)
        rhs.append(b)
    for i in range(m_eq):
        row = [Fraction(a) for a in A_eq[i]] + [ZERO] * n_slack
        b = Fraction(b_eq[i])
        if b < 0:
            row = [-a for a in row]
            b = -b
        rows.append(row)
        rhs.append(b)
        art_rows.append(m_ub + i)
    n_art = len(art_rows)
    base_cols = nx + n_slack
    for row in rows:
        row.extend([ZERO] * n_art)
    basis = [nx + i if i < m_ub else -1 for i in range(m)]
    for k, i in enumerate(art_rows):
        rows[i][base_cols + k] = ONE
        basis[i] = base_cols + k
    tab = Tableau(rows, rhs, basis, [ZERO] * (base_cols + n_art))
    if n_art:
        tab.set_objective([ZERO] * base_cols + [-ONE] * n_art)
        tab.optimize()
        if tab.value < 0:
            raise InfeasibleLP
        # drive remaining artificials out of the basis where possible
        for i in range(m):
            if tab.basis[i] >= base_cols:
                for j in range(base_cols):
                    if tab.rows[i][j] != 0:
                        tab.pivot(i, j)
                        break
    allowed = set(range(base_cols))
    tab.set_objective([Fraction(x) for x in c] + [ZERO] * (n_slack + n_art))
    tab.optimize(allowed=allowed)
    x = tab.solution()[:nx]
    return LPResult(tab.value, x)
