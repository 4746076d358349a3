"""Floating-point screening for exact redundancy tests.

HiGHS answers "is ``a.x <= b`` implied by these rows?" in floating point.
The answer is only used once it has been turned into an exact certificate:
rationalized dual multipliers that reproduce the row (implied), or a
rationalized point that satisfies the other rows and violates it (not
implied).  Anything that fails exact verification returns None and the
caller falls back to the exact simplex.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .system import EQ, LE, Constraint

_MAX_DEN = 10**6


def _rational(v: float) -> Fraction:
    return Fraction(v).limit_denominator(_MAX_DEN)


def _matrices(rows: Sequence[Constraint], d: int):
    ineq = [c for c in rows if c.rel != EQ]
    eqs = [c for c in rows if c.rel == EQ]
    G = np.array([c.coeffs for c in ineq], dtype=float).reshape(len(ineq), d)
    h = np.array([c.rhs for c in ineq], dtype=float)
    E = np.array([c.coeffs for c in eqs], dtype=float).reshape(len(eqs), d)
    e = np.array([c.rhs for c in eqs], dtype=float)
    return ineq, eqs, G, h, E, e


def _dual_certifies(ineq, eqs, y, mu, c: Constraint) -> bool:
    lam = [max(_rational(v), Fraction(0)) for v in y]
    mus = [_rational(v) for v in mu]
    d = len(c.coeffs)
    for j in range(d):
        s = sum((l * r.coeffs[j] for l, r in zip(lam, ineq) if l), Fraction(0))
        s += sum((m * r.coeffs[j] for m, r in zip(mus, eqs) if m), Fraction(0))
        if s != c.coeffs[j]:
            return False
    bound = sum((l * r.rhs for l, r in zip(lam, ineq) if l), Fraction(0))
    bound += sum((m * r.rhs for m, r in zip(mus, eqs) if m), Fraction(0))
    return bound <= c.rhs


def screen_implied(others: Sequence[Constraint], c: Constraint) -> bool | None:
    """Exactly certified answer to "do the closed rows ``others`` imply ``c``?", or None."""
    if c.rel != LE or any(o.rel not in (LE, EQ) for o in others):
        return None
    d = len(c.coeffs)
    ineq, eqs, G, h, E, e = _matrices(others, d)
    # cap the objective so that "not implied" always has a finite witness
    G = np.vstack([G, np.array(c.coeffs, dtype=float)])
    h = np.append(h, float(c.rhs) + 1.0)
    res = linprog(-np.array(c.coeffs, dtype=float), A_ub=G, b_ub=h,
                  A_eq=E if len(eqs) else None, b_eq=e if len(eqs) else None,
                  bounds=[(None, None)] * d, method="highs")
    if res.status != 0:
        return None
    if -res.fun <= c.rhs + 1e-7:
        y = -res.ineqlin.marginals
        if abs(y[-1]) > 1e-9:
            return None
        mu = -res.eqlin.marginals if len(eqs) else []
        return True if _dual_certifies(ineq, eqs, y[:-1], mu, c) else None
    x = [_rational(v) for v in res.x]
    if all(o.satisfied_by(x) for o in others) and not c.satisfied_by(x):
        return False
    return None


def screen_feasible(sys):
    """Exactly verified open/closed feasibility report for ``sys``, or None."""
    from .lp import FeasibilityReport, check_farkas

    rows = sys.constraints
    d = len(sys.space)
    ineq = [c for c in rows if c.rel != EQ]
    eqs = [c for c in rows if c.rel == EQ]
    G = np.array([list(c.coeffs) + [1 if c.rel != LE else 0] for c in ineq] + [[0] * d + [1]],
                 dtype=float)
    h = np.array([c.rhs for c in ineq] + [1], dtype=float)
    E = np.array([list(c.coeffs) + [0] for c in eqs], dtype=float).reshape(len(eqs), d + 1)
    e = np.array([c.rhs for c in eqs], dtype=float)
    obj = np.zeros(d + 1)
    obj[-1] = -1.0
    res = linprog(obj, A_ub=G, b_ub=h, A_eq=E if len(eqs) else None, b_eq=e if len(eqs) else None,
                  bounds=[(None, None)] * (d + 1), method="highs")
    if res.status != 0:
        return None
    x = [_rational(v) for v in res.x[:-1]]
    if -res.fun > 1e-9:
        if all(c.satisfied_by(x) for c in rows):
            return FeasibilityReport(True, True, x)
        return None
    y = [max(_rational(v), Fraction(0)) for v in -res.ineqlin.marginals[:-1]]
    mu = [_rational(v) for v in -res.eqlin.marginals] if len(eqs) else []
    it_y, it_m = iter(y), iter(mu)
    cert = [next(it_m) if c.rel == EQ else next(it_y) for c in rows]
    kind = check_farkas(sys, cert)
    if kind == "closed":
        return FeasibilityReport(False, False, None, cert)
    if kind == "open" and all(c.closure().satisfied_by(x) for c in rows):
        return FeasibilityReport(True, False, x, cert)
    return None
