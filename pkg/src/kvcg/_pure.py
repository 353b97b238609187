"""Pure-Python compute kernels.

Both hot kernels operate on plain integers (callers pre-scale exact rationals
to a common denominator):

* winner determination — subset DP over players, O(n * 3^m); and
* a two-phase primal simplex with Bland's rule and fraction-free (integer)
  pivoting: every tableau entry stays an exact integer, all entries share one
  denominator, and each pivot divides by the previous pivot element exactly.

`kvcg._speedups` reimplements the same routines in C; results are required
(and tested) to be bit-identical between the two.
"""
from __future__ import annotations

from fractions import Fraction

LP_OPTIMAL = 0
LP_INFEASIBLE = 1
LP_UNBOUNDED = 2


def wd_best(values: list[list[int]], ground: int) -> tuple[int, int, list[int]]:
    """Best partition of the goods in `ground` among players.

    values[k][mask] is player k's (integer) value for bundle `mask`.
    Returns (welfare, total_assigned_goods, bundle_mask_per_player) under the
    canonical order: max welfare, then min total assigned goods, then the
    lexicographically smallest bundle tuple.
    """
    n = len(values)
    size = len(values[0]) if n else 1
    # g[k][S] = best (welfare, cardinality) achievable by players k..n-1
    # when the goods in S are still available.
    g_w = [[0] * size for _ in range(n + 1)]
    g_c = [[0] * size for _ in range(n + 1)]
    for k in range(n - 1, -1, -1):
        vk = values[k]
        next_w = g_w[k + 1]
        next_c = g_c[k + 1]
        row_w = g_w[k]
        row_c = g_c[k]
        s = ground
        while True:
            best_w = -1
            best_c = 0
            t = s
            while True:
                w = vk[t] + next_w[s ^ t]
                if w >= best_w:
                    c = t.bit_count() + next_c[s ^ t]
                    if w > best_w or c < best_c:
                        best_w = w
                        best_c = c
                if t == 0:
                    break
                t = (t - 1) & s
            row_w[s] = best_w
            row_c[s] = best_c
            if s == 0:
                break
            s = (s - 1) & ground

    # Greedy reconstruction: per player take the smallest bundle that still
    # completes to the optimal (welfare, cardinality); this realizes the
    # lexicographically smallest bundle tuple.
    masks = []
    avail = ground
    for k in range(n):
        vk = values[k]
        next_w = g_w[k + 1]
        next_c = g_c[k + 1]
        want_w = g_w[k][avail]
        want_c = g_c[k][avail]
        chosen = avail
        t = avail
        while True:
            if (vk[t] + next_w[avail ^ t] == want_w
                    and t.bit_count() + next_c[avail ^ t] == want_c):
                chosen = t  # submask sweep is descending; last hit is smallest
            if t == 0:
                break
            t = (t - 1) & avail
        masks.append(chosen)
        avail ^= chosen
    return g_w[0][ground], g_c[0][ground], masks


def _exact_div(num: int, den: int) -> int:
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError("fraction-free pivot division was not exact")
    return q


class _Tableau:
    """Integer simplex tableau: true entry = tab[i][j] / den, den > 0.

    Column layout: structural vars | slacks | artificials | rhs.
    """

    def __init__(self, c: list[int], rows: list[list[int]], b: list[int]):
        self.n_vars = len(c)
        self.n_rows = len(rows)
        self.n_cols = self.n_vars + 2 * self.n_rows + 1
        self.rhs = self.n_cols - 1
        self.art0 = self.n_vars + self.n_rows
        self.den = 1
        self.c = c
        self.tab = []
        self.basis = []
        self.art_rows = []
        self.z = [0] * self.n_cols
        for i in range(self.n_rows):
            row = [0] * self.n_cols
            flip = -1 if b[i] < 0 else 1
            for j, a in enumerate(rows[i]):
                row[j] = flip * a
            row[self.n_vars + i] = flip
            row[self.rhs] = flip * b[i]
            if flip < 0:
                row[self.art0 + i] = 1
                self.basis.append(self.art0 + i)
                self.art_rows.append(i)
            else:
                self.basis.append(self.n_vars + i)
            self.tab.append(row)

    def pivot(self, r: int, col: int) -> None:
        d = self.den
        prow = self.tab[r]
        p = prow[col]
        if p <= 0:
            raise ArithmeticError("pivot element must be positive")
        for row in self.tab:
            if row is prow:
                continue
            f = row[col]
            for j in range(self.n_cols):
                row[j] = _exact_div(row[j] * p - f * prow[j], d)
        f = self.z[col]
        for j in range(self.n_cols):
            self.z[j] = _exact_div(self.z[j] * p - f * prow[j], d)
        self.den = p
        self.basis[r] = col

    def bland(self, n_enterable: int, pivot_cap: int) -> int:
        """Pivot until optimal/unbounded. Columns >= n_enterable never enter."""
        for _ in range(pivot_cap):
            enter = -1
            for j in range(n_enterable):
                if self.z[j] > 0:
                    enter = j
                    break
            if enter < 0:
                return LP_OPTIMAL
            leave = -1
            best_num = best_den = 0
            for i in range(self.n_rows):
                a = self.tab[i][enter]
                if a <= 0:
                    continue
                num = self.tab[i][self.rhs]
                if (leave < 0 or num * best_den < best_num * a
                        or (num * best_den == best_num * a
                            and self.basis[i] < self.basis[leave])):
                    leave = i
                    best_num = num
                    best_den = a
            if leave < 0:
                return LP_UNBOUNDED
            self.pivot(leave, enter)
        raise RuntimeError("pivot cap exceeded; possible cycling bug")

    def load_phase1_objective(self) -> None:
        # Maximize -(sum of artificials); reduced costs priced out against
        # the starting basis. z[rhs] holds -(objective value) * den.
        for j in range(self.n_cols):
            self.z[j] = sum(self.tab[i][j] for i in self.art_rows)
        for i in self.art_rows:
            self.z[self.art0 + i] = 0

    def load_phase2_objective(self) -> None:
        d = self.den
        for j in range(self.n_cols):
            cj = self.c[j] * d if j < self.n_vars else 0
            self.z[j] = cj - sum(
                self.c[self.basis[i]] * self.tab[i][j]
                for i in range(self.n_rows) if self.basis[i] < self.n_vars
            )
        self.z[self.rhs] = -sum(
            self.c[self.basis[i]] * self.tab[i][self.rhs]
            for i in range(self.n_rows) if self.basis[i] < self.n_vars
        )

    def evict_artificials(self) -> None:
        """After a zero-valued phase I, pivot basic artificials out; rows with
        no structural entry are inert (0 = 0) and stay put harmlessly."""
        for i in range(self.n_rows):
            if self.basis[i] < self.art0:
                continue
            col = next(
                (j for j in range(self.art0) if self.tab[i][j] != 0), None)
            if col is None:
                continue
            if self.tab[i][col] < 0:
                self.tab[i] = [-x for x in self.tab[i]]
            self.pivot(i, col)

    def solution(self) -> tuple[list[Fraction], Fraction]:
        xs = [Fraction(0)] * self.n_vars
        for i in range(self.n_rows):
            if self.basis[i] < self.n_vars:
                xs[self.basis[i]] = Fraction(self.tab[i][self.rhs], self.den)
        return xs, Fraction(-self.z[self.rhs], self.den)


def lp_solve(c: list[int], rows: list[list[int]], b: list[int],
             pivot_cap: int = 200_000) -> tuple[int, list[Fraction], Fraction]:
    """Maximize c.x subject to rows.x <= b, x >= 0 (all integer data).

    Returns (status, x, objective) with exact Fraction results; on
    INFEASIBLE/UNBOUNDED x is empty and the objective is 0.
    """
    t = _Tableau(c, rows, b)
    if t.art_rows:
        t.load_phase1_objective()
        status = t.bland(t.n_cols - 1, pivot_cap)
        if status != LP_OPTIMAL:
            raise RuntimeError("phase I cannot be unbounded")
        if t.z[t.rhs] != 0:
            return LP_INFEASIBLE, [], Fraction(0)
        t.evict_artificials()
    t.load_phase2_objective()
    status = t.bland(t.art0, pivot_cap)
    if status == LP_UNBOUNDED:
        return LP_UNBOUNDED, [], Fraction(0)
    xs, value = t.solution()
    return LP_OPTIMAL, xs, value
