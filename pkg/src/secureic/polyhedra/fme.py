"""Fourier-Motzkin projection and redundancy removal.

Rows are handled internally as ``(coeffs, rhs, rel, name)`` with coprime
integer coefficients, so eliminating a variable never leaves the integers.
A combination of two rows is strict as soon as one parent is strict.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .lp import lp_feasible, maximize, OPTIMAL
from .screen import screen_implied
from .system import EQ, LE, LT, Constraint, ConstraintSystem, VariableSpace


def _normalize(coeffs: list[int], rhs: int, rel: str):
    g = 0
    for v in coeffs:
        if v:
            g = gcd(g, v)
            if g == 1:
                break
    if g == 0:
        return tuple(coeffs), (rhs > 0) - (rhs < 0)
    if g != 1:
        g = gcd(g, rhs)
        if g != 1:
            coeffs = [v // g for v in coeffs]
            rhs //= g
    if rel == EQ:
        lead = next(v for v in coeffs if v)
        if lead < 0:
            coeffs = [-v for v in coeffs]
            rhs = -rhs
    return tuple(coeffs), rhs


def _combine(p: Constraint, mp: int, q: Constraint, mq: int, rel: str, name: str = "") -> Constraint:
    coeffs = [mp * a + mq * b for a, b in zip(p.coeffs, q.coeffs)]
    c, r = _normalize(coeffs, mp * p.rhs + mq * q.rhs, rel)
    return Constraint(c, r, rel, name)


def infeasible_marker(space: VariableSpace, closed: bool) -> Constraint:
    """``0 <= -1`` (empty closure) or ``0 < 0`` (only the open set is empty)."""
    zero = (0,) * len(space)
    return Constraint(zero, -1, LE, "infeasible") if closed else Constraint(zero, 0, LT, "infeasible")


def _is_marker(c: Constraint) -> bool:
    return c.trivially_false


def _prefilter(space: VariableSpace, rows: Iterable[Constraint]) -> list[Constraint] | Constraint:
    """Drop trivially true rows and exact duplicates.  Returns a marker on a trivially false row."""
    best: dict[tuple, Constraint] = {}
    order: list[tuple] = []
    worst_marker = None
    for c in rows:
        if c.is_trivial:
            if c.trivially_false:
                closed = c.rel != LT or c.rhs < 0
                if worst_marker is None or closed:
                    worst_marker = infeasible_marker(space, closed)
            continue
        key = (c.coeffs, c.rel == EQ)
        old = best.get(key)
        if old is None:
            best[key] = c
            order.append(key)
        elif c.rel == EQ:
            if c.rhs != old.rhs:
                worst_marker = infeasible_marker(space, True)
        elif c.rhs < old.rhs or (c.rhs == old.rhs and c.rel == LT):
            best[key] = c
    if worst_marker is not None:
        return worst_marker
    return [best[k] for k in order]


def _reduce_equalities(space, eqs: list[Constraint]) -> list[Constraint] | None:
    """Row-reduce equalities to an independent, normalized set.  None if inconsistent."""
    rows = [[Fraction(v) for v in c.coeffs] + [Fraction(c.rhs)] for c in eqs]
    names = [c.name for c in eqs]
    d = len(space)
    out, out_names = [], []
    for row, name in zip(rows, names):
        for piv_col, prow in out:
            f = row[piv_col]
            if f:
                row = [a - f * b for a, b in zip(row, prow)]
        col = next((j for j in range(d) if row[j]), None)
        if col is None:
            if row[d]:
                return None
            continue
        p = row[col]
        row = [v / p for v in row]
        for k, (pc, prow) in enumerate(out):
            f = prow[col]
            if f:
                out[k] = (pc, [a - f * b for a, b in zip(prow, row)])
        out.append((col, row))
        out_names.append(name)
    return [Constraint.make(row[:d], EQ, row[d], name) for (_, row), name in zip(out, out_names)]


def _implied(space, others: Sequence[Constraint], c: Constraint) -> bool:
    """True iff every point of ``others`` satisfies ``c``."""
    quick = screen_implied(others, c)
    if quick is not None:
        return quick
    if c.rel == LE and not any(o.rel == LT for o in others):
        res = maximize(ConstraintSystem(space, tuple(others)), c.coeffs)
        return res.status == OPTIMAL and res.value <= c.rhs
    neg = tuple(-v for v in c.coeffs)
    negated = Constraint(neg, -c.rhs, LT if c.rel == LE else LE)
    return not lp_feasible(ConstraintSystem(space, tuple(others) + (negated,))).open_feasible


def remove_redundant(sys: ConstraintSystem) -> ConstraintSystem:
    """Drop every inequality implied by the remaining constraints.

    Rows are examined in input order and a dropped row is never used to
    justify a later one, so the result is deterministic and has the same
    solution set.  Equalities are reduced to an independent set first.  An
    empty system comes back as a single marker row (``0 <= -1`` or ``0 < 0``).
    """
    space = sys.space
    rows = _prefilter(space, sys.constraints)
    if isinstance(rows, Constraint):
        return ConstraintSystem(space, (rows,))
    eqs = [c for c in rows if c.rel == EQ]
    ineqs = [c for c in rows if c.rel != EQ]
    if eqs:
        eqs = _reduce_equalities(space, eqs)
        if eqs is None:
            return ConstraintSystem(space, (infeasible_marker(space, True),))
    report = lp_feasible(ConstraintSystem(space, tuple(eqs + ineqs)))
    if not report.open_feasible:
        return ConstraintSystem(space, (infeasible_marker(space, not report.closed_feasible),))
    kept: list[Constraint] = []
    for k, c in enumerate(ineqs):
        others = eqs + kept + ineqs[k + 1:]
        if not _implied(space, others, c):
            kept.append(c)
    return ConstraintSystem(space, tuple(eqs + kept))


def _eliminate_one(space, rows: list[Constraint], col: int) -> list[Constraint]:
    pivot = None
    for c in rows:
        if c.rel == EQ and c.coeffs[col]:
            if pivot is None or abs(c.coeffs[col]) < abs(pivot.coeffs[col]):
                pivot = c
    if pivot is not None:
        a_e = pivot.coeffs[col]
        sgn = 1 if a_e > 0 else -1
        out = []
        for c in rows:
            if c is pivot:
                continue
            a = c.coeffs[col]
            if not a:
                out.append(c)
            else:
                out.append(_combine(c, abs(a_e), pivot, -sgn * a, c.rel, c.name))
        return out
    pos, neg, out = [], [], []
    for c in rows:
        a = c.coeffs[col]
        if a > 0:
            pos.append(c)
        elif a < 0:
            neg.append(c)
        else:
            out.append(c)
    for p in pos:
        ap = p.coeffs[col]
        for q in neg:
            aq = -q.coeffs[col]
            rel = LT if (p.rel == LT or q.rel == LT) else LE
            out.append(_combine(p, aq, q, ap, rel))
    return out


def fme_eliminate(sys: ConstraintSystem, variables: Sequence[str], prune: bool = True,
                  order: str = "given") -> ConstraintSystem:
    """Project ``sys`` onto the variables not listed in ``variables``.

    Equalities are used for substitution whenever one mentions the variable
    being eliminated; otherwise a Fourier-Motzkin step combines every
    positive row with every negative row.  With ``prune`` the intermediate
    system is made irredundant after each step.  ``order="greedy"`` picks the
    next variable minimizing the number of generated rows.
    """
    space = sys.space
    todo = [space.index(v) for v in variables]
    rows = _prefilter(space, sys.constraints)
    if isinstance(rows, Constraint):
        rows = [rows]
    while todo:
        if order == "greedy":
            col = min(todo, key=lambda j: _cost(rows, j))
        else:
            col = todo[0]
        todo.remove(col)
        if any(_is_marker(c) for c in rows):
            break
        rows = _eliminate_one(space, rows, col)
        rows = _prefilter(space, rows)
        if isinstance(rows, Constraint):
            rows = [rows]
            break
        if prune:
            rows = list(remove_redundant(ConstraintSystem(space, tuple(rows))).constraints)
    keep = [j for j in range(len(space)) if space.names[j] not in set(variables)]
    new_space = VariableSpace(space.names[j] for j in keep)
    out = []
    for c in rows:
        if _is_marker(c):
            out = [infeasible_marker(new_space, c.rel != LT or c.rhs < 0)]
            break
        out.append(Constraint(tuple(c.coeffs[j] for j in keep), c.rhs, c.rel, c.name))
    return ConstraintSystem(new_space, tuple(out))


def _cost(rows, col) -> int:
    if any(c.rel == EQ and c.coeffs[col] for c in rows):
        return -1
    p = sum(1 for c in rows if c.coeffs[col] > 0)
    n = sum(1 for c in rows if c.coeffs[col] < 0)
    return p * n - p - n
