"""Canonical closed polyhedra in rate space.

A RateRegion's constraint list is canonical: implicit equalities are made
explicit and row-reduced (pivoting on the leftmost variable), pivot
variables are eliminated from the inequalities, and the remaining
inequalities are irredundant and sorted.  Two nonempty regions are equal iff
their canonical systems are identical; ``region_equal`` nevertheless decides
equality by vertex containment so that a failure comes with a witness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .fme import infeasible_marker, remove_redundant, _reduce_equalities
from .lp import OPTIMAL, UNBOUNDED, maximize
from .system import EQ, LE, Constraint, ConstraintSystem, VariableSpace, as_fraction, fraction_str


class UnboundedRegionError(ValueError):
    pass


@dataclass(frozen=True)
class RateRegion:
    space: VariableSpace
    closed_system: ConstraintSystem
    vertices: tuple[tuple[Fraction, ...], ...] | None = None
    empty: bool = False

    def __eq__(self, other):
        if not isinstance(other, RateRegion):
            return NotImplemented
        return (self.space == other.space and self.empty == other.empty
                and self.closed_system.constraints == other.closed_system.constraints)

    def __hash__(self):
        return hash((self.space, self.empty, self.closed_system.constraints))

    def contains(self, point: Sequence) -> bool:
        return not self.empty and self.closed_system.satisfied_by(point)

    def nontrivial(self) -> list[Constraint]:
        """Constraints other than plain nonnegativity ``-R_i <= 0``."""
        out = []
        for c in self.closed_system.constraints:
            nz = [v for v in c.coeffs if v]
            if c.rel == LE and c.rhs == 0 and len(nz) == 1 and nz[0] < 0:
                continue
            out.append(c)
        return out

    def pretty(self, sep: str = "; ") -> str:
        if self.empty:
            return "empty"
        rows = self.nontrivial()
        return sep.join(c.pretty(self.space) for c in rows) if rows else "R >= 0"

    def to_json(self) -> dict:
        return {
            "space": list(self.space.names),
            "empty": self.empty,
            "constraints": self.closed_system.to_json(),
            "vertices": [[fraction_str(v) for v in pt] for pt in (self.vertices or ())],
        }


def _ineq_to_eq(c: Constraint) -> Constraint:
    return Constraint.make(c.coeffs, EQ, c.rhs, c.name)


def _reduce_modulo(ineq: Constraint, eqs: list[Constraint], pivots: list[int]) -> Constraint:
    row = [Fraction(v) for v in ineq.coeffs]
    rhs = Fraction(ineq.rhs)
    for e, col in zip(eqs, pivots):
        f = row[col]
        if f:
            piv = e.coeffs[col]
            row = [a - f * b / piv for a, b in zip(row, e.coeffs)]
            rhs -= f * e.rhs / piv
    return Constraint.make(row, ineq.rel, rhs, ineq.name)


def canonical_system(sys: ConstraintSystem) -> tuple[ConstraintSystem, bool]:
    """Canonical closed form of ``sys``; the flag is True when the set is empty."""
    space = sys.space
    reduced = remove_redundant(sys.closure())
    if any(c.trivially_false for c in reduced):
        return ConstraintSystem(space, (infeasible_marker(space, True),)), True
    eqs = reduced.equalities
    ineqs = reduced.inequalities
    # implicit equalities: a.x <= b with min a.x = b over the region
    implicit, rest = [], []
    for c in ineqs:
        res = maximize(reduced, [-v for v in c.coeffs])
        if res.status == OPTIMAL and -res.value == c.rhs:
            implicit.append(_ineq_to_eq(c))
        else:
            rest.append(c)
    eqs = _reduce_equalities(space, eqs + implicit) or []
    pivots = [next(j for j, v in enumerate(e.coeffs) if v) for e in eqs]
    rest = [_reduce_modulo(c, eqs, pivots) for c in rest]
    rest = [c for c in rest if not c.trivially_true]
    final = remove_redundant(ConstraintSystem(space, tuple(eqs + rest)))
    return final.sorted(), False


def _solve_square(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    n = len(rows[0]) if rows else 0
    A = [list(r) + [b] for r, b in zip(rows, rhs)]
    m = len(A)
    where = [-1] * n
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if A[i][col] != 0), None)
        if piv is None:
            return None
        A[r], A[piv] = A[piv], A[r]
        p = A[r][col]
        A[r] = [v / p for v in A[r]]
        for i in range(m):
            if i != r and A[i][col]:
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        where[col] = r
        r += 1
    for i in range(r, m):
        if A[i][n] != 0:
            return None
    return [A[where[c]][n] for c in range(n)]


def _check_bounded(sys: ConstraintSystem):
    d = len(sys.space)
    for j in range(d):
        for s in (1, -1):
            obj = [0] * d
            obj[j] = s
            if maximize(sys, obj).status == UNBOUNDED:
                raise UnboundedRegionError(f"{sys.space.names[j]} is unbounded")


def enumerate_vertices(region_or_system) -> list[tuple[Fraction, ...]]:
    """Extreme points of a bounded closed polyhedron, sorted lexicographically.

    Every choice of ``d`` linearly independent constraints (equalities always
    included) is intersected; feasible intersection points are the vertices.
    """
    if isinstance(region_or_system, RateRegion):
        if region_or_system.empty:
            return []
        sys = region_or_system.closed_system
    else:
        sys = region_or_system.closure()
    d = len(sys.space)
    if any(c.trivially_false for c in sys):
        return []
    _check_bounded(sys)
    eqs = [c for c in sys if c.rel == EQ]
    ineqs = [c for c in sys if c.rel != EQ and not c.is_trivial]
    need = d - len(eqs)
    found = set()
    if need < 0:
        # more equalities than dimensions: solve the overdetermined system
        pt = _solve_square([[Fraction(v) for v in c.coeffs] for c in eqs], [Fraction(c.rhs) for c in eqs])
        if pt is not None and sys.satisfied_by(pt):
            found.add(tuple(pt))
        return sorted(found)
    for combo in itertools.combinations(ineqs, need):
        rows = eqs + list(combo)
        pt = _solve_square([[Fraction(v) for v in c.coeffs] for c in rows], [Fraction(c.rhs) for c in rows])
        if pt is not None and all(c.satisfied_by(pt) for c in sys):
            found.add(tuple(pt))
    return sorted(found)


def region_from_system(sys: ConstraintSystem, with_vertices: bool = True) -> RateRegion:
    canon, empty = canonical_system(sys)
    verts = tuple(enumerate_vertices(canon)) if with_vertices and not empty else ()
    return RateRegion(sys.space, canon, verts, empty)


@dataclass
class ContainmentWitness:
    """A vertex of one region that violates a constraint of the other."""

    vertex: tuple[Fraction, ...]
    violated: Constraint
    inside: str  # which region the vertex belongs to ("a" or "b")

    def describe(self, space: VariableSpace) -> str:
        pt = ", ".join(f"{n}={fraction_str(v)}" for n, v in zip(space.names, self.vertex))
        other = "b" if self.inside == "a" else "a"
        return f"vertex ({pt}) of {self.inside} violates {self.violated.pretty(space)} of {other}"


@dataclass
class EqualityResult:
    equal: bool
    witness: ContainmentWitness | None = None
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.equal


def _vertices(r: RateRegion):
    return r.vertices if r.vertices is not None and (r.vertices or r.empty) else tuple(enumerate_vertices(r))


def region_contains(outer: RateRegion, inner: RateRegion) -> ContainmentWitness | None:
    """None if ``inner`` is a subset of ``outer``, else a violating vertex of ``inner``."""
    if inner.empty:
        return None
    for v in _vertices(inner):
        if outer.empty:
            return ContainmentWitness(v, infeasible_marker(outer.space, True), "a")
        for c in outer.closed_system:
            if not c.satisfied_by(v):
                return ContainmentWitness(v, c, "a")
    return None


def region_equal(a: RateRegion, b: RateRegion) -> EqualityResult:
    """Mutual containment via vertices, with a violating vertex on failure."""
    if a.space != b.space:
        raise ValueError(f"dimension mismatch: {a.space.names} vs {b.space.names}")
    w = region_contains(b, a)
    if w is not None:
        return EqualityResult(False, ContainmentWitness(w.vertex, w.violated, "a"))
    w = region_contains(a, b)
    if w is not None:
        return EqualityResult(False, ContainmentWitness(w.vertex, w.violated, "b"))
    return EqualityResult(True)


def box_region(names: Sequence[str], lo=0, hi=1) -> RateRegion:
    space = VariableSpace(names)
    d = len(space)
    rows = []
    for j in range(d):
        e = [0] * d
        e[j] = 1
        rows.append(Constraint.make(e, LE, as_fraction(hi)))
        rows.append(Constraint.make([-v for v in e], LE, -as_fraction(lo)))
    return region_from_system(ConstraintSystem(space, tuple(rows)))


def hull_region(space: VariableSpace, points: Sequence[Sequence]) -> RateRegion:
    """Convex hull of finitely many points, as a canonical RateRegion.

    Computed in lifted form: ``x = sum_k w_k p_k`` with ``w >= 0, sum w = 1``,
    then the weights are projected out.
    """
    from .fme import fme_eliminate

    d = len(space)
    pts = [[as_fraction(v) for v in p] for p in points]
    wnames = [f"w{k}" for k in range(len(pts))]
    lifted = VariableSpace(list(space.names) + wnames)
    rows = []
    for j in range(d):
        rows.append(Constraint.make([1 if i == j else 0 for i in range(d)] + [-p[j] for p in pts], EQ, 0))
    rows.append(Constraint.make([0] * d + [1] * len(pts), EQ, 1))
    for k in range(len(pts)):
        e = [0] * (d + len(pts))
        e[d + k] = -1
        rows.append(Constraint.make(e, LE, 0))
    projected = fme_eliminate(ConstraintSystem(lifted, tuple(rows)), wnames)
    return region_from_system(projected)
