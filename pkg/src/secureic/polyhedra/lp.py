"""Exact rational linear programming.

A dense two-phase tableau simplex over GMP rationals.  Problems are stated
with free variables::

    maximize  c . x   subject to   G x <= h,   E x = e

and every result carries dual multipliers, so infeasibility always comes
with a Farkas certificate (``lam >= 0``, ``mu`` with ``lam G + mu E = 0`` and
``lam h + mu e < 0``) that callers can re-check by plain multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

from .system import EQ, LT, ConstraintSystem

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"

_ZERO = mpq(0)
_BLAND_AFTER = 30  # consecutive degenerate pivots before switching to Bland's rule


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


@dataclass
class LPResult:
    status: str
    x: list[Fraction] | None = None
    value: Fraction | None = None
    # multipliers for the <= rows and the = rows; at an optimum they certify the
    # value (lam G + mu E = c), on infeasibility they form a Farkas certificate
    lam: list[Fraction] | None = None
    mu: list[Fraction] | None = None


class _Tableau:
    """Standard form ``min cost . z, A z = b, z >= 0`` with b >= 0."""

    def __init__(self, rows, rhs, ncols):
        self.m = len(rows)
        self.ncols = ncols
        self.T = [list(r) + [b] for r, b in zip(rows, rhs)]
        self.basis: list[int] = []
        self.obj: list = []

    def set_objective(self, cost):
        # reduced costs d_j = cost_j - y A_j; last entry holds -(objective value)
        obj = list(cost) + [_ZERO]
        for r, j in enumerate(self.basis):
            cj = obj[j]
            if cj:
                row = self.T[r]
                obj = [a - cj * b for a, b in zip(obj, row)]
        self.obj = obj

    def pivot(self, r, col):
        T = self.T
        prow = T[r]
        piv = prow[col]
        if piv != 1:
            prow = [v / piv for v in prow]
            T[r] = prow
        nz = [j for j, v in enumerate(prow) if v]
        for i in range(self.m):
            if i == r:
                continue
            row = T[i]
            f = row[col]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
        f = self.obj[col]
        if f:
            obj = self.obj
            for j in nz:
                obj[j] -= f * prow[j]
        self.basis[r] = col

    def run(self, allowed) -> str:
        degenerate = 0
        bland = False
        T = self.T
        obj = self.obj
        while True:
            obj = self.obj
            col = -1
            if bland:
                for j in allowed:
                    if obj[j] < 0:
                        col = j
                        break
            else:
                best = _ZERO
                for j in allowed:
                    if obj[j] < best:
                        best = obj[j]
                        col = j
            if col < 0:
                return OPTIMAL
            r = -1
            best_ratio = None
            for i in range(self.m):
                a = T[i][col]
                if a > 0:
                    ratio = T[i][-1] / a
                    if (best_ratio is None or ratio < best_ratio
                            or (ratio == best_ratio and self.basis[i] < self.basis[r])):
                        best_ratio = ratio
                        r = i
            if r < 0:
                return UNBOUNDED
            if best_ratio == 0:
                degenerate += 1
                if degenerate > _BLAND_AFTER:
                    bland = True
            else:
                degenerate = 0
            self.pivot(r, col)


def solve_lp(c: Sequence, G: Sequence[Sequence] = (), h: Sequence = (),
             E: Sequence[Sequence] = (), e: Sequence = (), maximize: bool = True) -> LPResult:
    """Optimize ``c . x`` over ``{G x <= h, E x = e}`` with x free, exactly."""
    d = len(c)
    G = [[mpq(v) for v in row] for row in G]
    E = [[mpq(v) for v in row] for row in E]
    h = [mpq(v) for v in h]
    e = [mpq(v) for v in e]
    cvec = [mpq(v) for v in c]
    if not maximize:
        cvec = [-v for v in cvec]
    mu_rows = len(G)
    m = mu_rows + len(E)

    # columns: x+ (d), x- (d), slack per <= row, artificial per row that needs one
    nslack = mu_rows
    base = 2 * d + nslack
    rows, rhs, sign = [], [], []
    init_col = []
    n_art = 0
    art_rows = []
    for r in range(m):
        if r < mu_rows:
            coeffs, b = G[r], h[r]
        else:
            coeffs, b = E[r - mu_rows], e[r - mu_rows]
        s = -1 if b < 0 else 1
        sign.append(s)
        row = [s * v for v in coeffs] + [-s * v for v in coeffs] + [_ZERO] * nslack
        if r < mu_rows:
            row[2 * d + r] = mpq(s)
        rows.append(row)
        rhs.append(s * b)
        if r < mu_rows and s == 1:
            init_col.append(2 * d + r)
        else:
            init_col.append(base + n_art)
            art_rows.append(r)
            n_art += 1
    ncols = base + n_art
    for r, row in enumerate(rows):
        row.extend([_ZERO] * n_art)
    for k, r in enumerate(art_rows):
        rows[r][base + k] = mpq(1)

    tab = _Tableau(rows, rhs, ncols)
    tab.basis = list(init_col)
    real_cols = range(base)

    def duals(cost):
        y = [cost[init_col[r]] - tab.obj[init_col[r]] for r in range(m)]
        w = [sign[r] * y[r] for r in range(m)]
        return [_frac(-v) for v in w[:mu_rows]], [_frac(-v) for v in w[mu_rows:]]

    if n_art:
        cost1 = [_ZERO] * base + [mpq(1)] * n_art
        tab.set_objective(cost1)
        tab.run(range(ncols))
        if -tab.obj[-1] > 0:
            lam, mu = duals(cost1)
            return LPResult(INFEASIBLE, lam=lam, mu=mu)
        # drive zero-level artificials out of the basis where possible
        for r in range(m):
            if tab.basis[r] >= base:
                row = tab.T[r]
                col = next((j for j in real_cols if row[j] != 0), None)
                if col is not None:
                    tab.pivot(r, col)

    cost2 = [-v for v in cvec] + [v for v in cvec] + [_ZERO] * (nslack + n_art)
    tab.set_objective(cost2)
    status = tab.run(real_cols)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    z = [_ZERO] * ncols
    for r, j in enumerate(tab.basis):
        z[j] = tab.T[r][-1]
    x = [_frac(z[j] - z[d + j]) for j in range(d)]
    value = sum((cv * xv for cv, xv in zip(c, x)), Fraction(0))
    lam, mu = duals(cost2)
    if not maximize:
        lam = [-v for v in lam]
        mu = [-v for v in mu]
    return LPResult(OPTIMAL, x=x, value=value, lam=lam, mu=mu)


def split_system(sys: ConstraintSystem):
    """(G, h, strict flags, E, e) for a ConstraintSystem."""
    G, h, strict, E, e = [], [], [], [], []
    for c in sys.constraints:
        if c.rel == EQ:
            E.append(c.coeffs)
            e.append(c.rhs)
        else:
            G.append(c.coeffs)
            h.append(c.rhs)
            strict.append(c.rel == LT)
    return G, h, strict, E, e


@dataclass
class FeasibilityReport:
    closed_feasible: bool
    open_feasible: bool
    witness: list[Fraction] | None
    # Farkas certificate over sys.constraints (one multiplier per constraint,
    # nonnegative on inequalities) when the open system is infeasible
    certificate: list[Fraction] | None = None

    def __bool__(self):
        return self.open_feasible


def lp_feasible(sys: ConstraintSystem) -> FeasibilityReport:
    """Decide closed and open feasibility of a system, exactly.

    Strict rows ``a x < b`` become ``a x + t <= b``; t is maximized subject to
    ``t <= 1``.  The open system is feasible iff the optimum is positive and
    the closed relaxation iff it is nonnegative.  A witness is returned for
    the strongest kind of feasibility that holds.
    """
    from .screen import screen_feasible

    quick = screen_feasible(sys)
    if quick is not None:
        return quick
    d = len(sys.space)
    G, h, strict, E, e = split_system(sys)
    Gt = [list(row) + [1 if s else 0] for row, s in zip(G, strict)]
    Gt.append([0] * d + [1])
    h_t = list(h) + [1]
    Et = [list(row) + [0] for row in E]
    res = solve_lp([0] * d + [1], Gt, h_t, Et, e)
    if res.status == INFEASIBLE:
        return FeasibilityReport(False, False, None, _certificate(sys, res.lam[:-1], res.mu))
    t = res.x[-1]
    point = res.x[:-1]
    if t > 0:
        return FeasibilityReport(True, True, point)
    cert = _certificate(sys, res.lam[:-1], res.mu)
    if t == 0:
        return FeasibilityReport(True, False, point, cert)
    return FeasibilityReport(False, False, None, cert)


def _certificate(sys, lam, mu) -> list[Fraction]:
    out = []
    it_l, it_m = iter(lam), iter(mu)
    for c in sys.constraints:
        out.append(next(it_m) if c.rel == EQ else next(it_l))
    return out


def check_farkas(sys: ConstraintSystem, cert: Sequence[Fraction]) -> str | None:
    """Verify a certificate by recombination.

    Returns ``"closed"`` if it proves ``0 <= negative`` (no point at all),
    ``"open"`` if it proves ``0 < 0`` through a strict row with positive
    weight, and None if it proves nothing.
    """
    d = len(sys.space)
    combo = [Fraction(0)] * d
    rhs = Fraction(0)
    strict_weight = Fraction(0)
    for w, c in zip(cert, sys.constraints):
        w = Fraction(w)
        if c.rel != EQ and w < 0:
            return None
        if not w:
            continue
        for j, a in enumerate(c.coeffs):
            if a:
                combo[j] += w * a
        rhs += w * c.rhs
        if c.rel == LT:
            strict_weight += w
    if any(combo):
        return None
    if rhs < 0:
        return "closed"
    if rhs == 0 and strict_weight > 0:
        return "open"
    return None


def maximize(sys: ConstraintSystem, objective: Sequence) -> LPResult:
    """Maximize over the closure of ``sys``."""
    G, h, _, E, e = split_system(sys)
    return solve_lp(objective, G, h, E, e)
