"""Small dense two-phase simplex in exact rational arithmetic.

Solves ``max c.x  s.t.  A_eq x = b_eq,  A_ub x <= b_ub,  x >= 0`` with
Bland's rule, so it terminates on degenerate problems. Intended for
problems with a few dozen variables; every pivot is exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    return Fraction(v).limit_denominator(10**12)


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: list[Fraction] | None
    value: Fraction | None
    pivots: int


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0

    def pivot(self, r: int, c: int):
        row = self.rows[r]
        piv = row[c]
        if piv != 1:
            self.rows[r] = row = [v / piv for v in row]
            self.rhs[r] = self.rhs[r] / piv
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[c]
            if f:
                self.rows[i] = [a - f * b for a, b in zip(other, row)]
                self.rhs[i] = self.rhs[i] - f * self.rhs[r]
        self.basis[r] = c
        self.pivots += 1

    def reduced_costs(self, cost: list[Fraction]) -> list[Fraction]:
        red = list(cost)
        for r, bvar in enumerate(self.basis):
            cb = cost[bvar]
            if cb:
                red = [rc - cb * a for rc, a in zip(red, self.rows[r])]
        return red

    def optimize(self, cost: list[Fraction], allowed: set[int]) -> str:
        """Maximize cost over the current basis (Bland's rule)."""
        while True:
            red = self.reduced_costs(cost)
            enter = next((j for j in sorted(allowed) if red[j] > 0), None)
            if enter is None:
                return "optimal"
            best = None
            for r, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = self.rhs[r] / a
                    key = (ratio, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return "unbounded"
            self.pivot(best[1], enter)


def linprog_exact(c: Sequence, A_eq: Sequence[Sequence] = (), b_eq: Sequence = (),
                  A_ub: Sequence[Sequence] = (), b_ub: Sequence = ()) -> LPResult:
    n = len(c)
    eq = [([_frac(v) for v in row], _frac(b)) for row, b in zip(A_eq, b_eq)]
    ub = [([_frac(v) for v in row], _frac(b)) for row, b in zip(A_ub, b_ub)]
    n_slack = len(ub)
    n_rows = len(eq) + len(ub)

    # columns: originals | slacks | artificials (one per row that needs one)
    rows, rhs, needs_art = [], [], []
    for row, b in eq:
        if b < 0:
            row, b = [-v for v in row], -b
        rows.append(row + [Fraction(0)] * n_slack)
        rhs.append(b)
        needs_art.append(True)
    for k, (row, b) in enumerate(ub):
        slack = [Fraction(0)] * n_slack
        slack[k] = Fraction(1)
        if b < 0:
            row, b, slack = [-v for v in row], -b, [-v for v in slack]
            needs_art.append(True)
        else:
            needs_art.append(False)
        rows.append(row + slack)
        rhs.append(b)

    art_cols = {}
    n_art = sum(needs_art)
    base_cols = n + n_slack
    basis = []
    j = 0
    for r in range(n_rows):
        rows[r] = rows[r] + [Fraction(0)] * n_art
        if needs_art[r]:
            col = base_cols + j
            rows[r][col] = Fraction(1)
            art_cols[col] = r
            basis.append(col)
            j += 1
        else:
            basis.append(n + (r - len(eq)))
    tab = _Tableau(rows, rhs, basis)
    total = base_cols + n_art

    if n_art:
        phase1 = [Fraction(0)] * base_cols + [Fraction(-1)] * n_art
        tab.optimize(phase1, set(range(total)))
        infeas = sum((tab.rhs[r] for r, b in enumerate(tab.basis) if b >= base_cols), Fraction(0))
        if infeas > 0:
            return LPResult("infeasible", None, None, tab.pivots)
        # drive zero-level artificials out of the basis; drop redundant rows
        r = 0
        while r < len(tab.rows):
            if tab.basis[r] >= base_cols:
                col = next((k for k in range(base_cols) if tab.rows[r][k] != 0), None)
                if col is None:
                    del tab.rows[r], tab.rhs[r], tab.basis[r]
                    continue
                tab.pivot(r, col)
            r += 1

    cost = [_frac(v) for v in c] + [Fraction(0)] * (total - n)
    status = tab.optimize(cost, set(range(base_cols)))
    if status != "optimal":
        return LPResult(status, None, None, tab.pivots)
    x = [Fraction(0)] * total
    for r, b in enumerate(tab.basis):
        x[b] = tab.rhs[r]
    value = sum((ci * xi for ci, xi in zip(cost, x)), Fraction(0))
    return LPResult("optimal", x[:n], value, tab.pivots)
