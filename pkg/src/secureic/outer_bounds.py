"""Polymatroidal outer bounds on the (secure) index coding capacity region.

Two constructions are provided.  The g-system is a set function on subsets
of the messages; the h-system is a Shannon-type set function on the messages
plus the codeword (index 0).  Both are projected to rate coordinates by
Fourier-Motzkin elimination, and ``g_to_h`` / ``h_to_g`` map feasible set
functions of one system into the other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .model import ProblemInstance, is_securely_feasible
from .polyhedra import (EQ, LE, Constraint, ConstraintSystem, RateRegion, VariableSpace,
                        fme_eliminate, fraction_str, region_equal, region_from_system)


def subsets(ground, min_size: int = 0):
    ground = sorted(ground)
    for r in range(min_size, len(ground) + 1):
        for c in itertools.combinations(ground, r):
            yield frozenset(c)


def set_name(prefix: str, s) -> str:
    return prefix + "{" + ",".join(str(j) for j in sorted(s)) + "}"


def g_name(s) -> str:
    return set_name("g", s)


def h_name(s) -> str:
    return set_name("h", s)


def rate_names(n: int) -> list[str]:
    return [f"R_{i}" for i in range(1, n + 1)]


def rate_space(n: int) -> VariableSpace:
    return VariableSpace(rate_names(n))


def _by_size_desc(sets):
    return sorted(sets, key=lambda s: (-len(s), sorted(s)))


class _Builder:
    def __init__(self, names):
        self.space = VariableSpace(names)
        self.rows: list[Constraint] = []

    def add(self, coeffs: Iterable[tuple[str, int]], rel: str, rhs=0, name: str = ""):
        # accumulate so that repeated keys (e.g. g(J) on both sides) cancel correctly
        row = [0] * len(self.space)
        for k, v in coeffs:
            row[self.space.index(k)] += v
        self.rows.append(Constraint.make(row, rel, rhs, name))

    def system(self) -> ConstraintSystem:
        return ConstraintSystem(self.space, tuple(self.rows))


def _polymatroid_rows(b: _Builder, ground, name, tag):
    """Monotonicity and submodularity rows over all subsets of ``ground``."""
    ground = sorted(ground)
    for J in subsets(ground):
        rest = [i for i in ground if i not in J]
        for i in rest:
            b.add([(name(J), 1), (name(J | {i}), -1)], LE, 0, f"{tag}mono[{sorted(J)},{i}]")
        for i, k in itertools.combinations(rest, 2):
            b.add([(name(J), 1), (name(J | {i, k}), 1), (name(J | {i}), -1), (name(J | {k}), -1)],
                  LE, 0, f"{tag}submod[{sorted(J)},{i},{k}]")


def g_variable_names(n: int) -> list[str]:
    return [g_name(J) for J in subsets(range(1, n + 1))]


def build_g_system(p: ProblemInstance, secure: bool = True, additional_decoding: bool = True,
                   security: bool | None = None) -> ConstraintSystem:
    """Constraint system over ``g(J), J subset of [n]`` and the rates.

    ``secure=True`` uses rate equalities ``R_i = g(B_i + i) - g(B_i)`` with
    ``g([n]) <= 1`` and adds the security rows for every protected message;
    ``secure=False`` uses rate inequalities with ``g([n]) = 1`` and no
    security rows.  ``security`` overrides whether the security rows are
    emitted (e.g. the secure rate convention without the eavesdropper);
    ``additional_decoding=False`` drops ``g(B_i + i) - g(B_i) = g({i})``.
    """
    n = p.n
    full = p.messages
    if security is None:
        security = secure
    b = _Builder(g_variable_names(n) + rate_names(n))
    b.add([(g_name(()), 1)], EQ, 0, "g(empty)=0")
    b.add([(g_name(full), 1)], LE if secure else EQ, 1, "g([n])<=1" if secure else "g([n])=1")
    _polymatroid_rows(b, full, g_name, "")
    for i in range(1, n + 1):
        Bi = p.interfering(i)
        diff = [(g_name(Bi | {i}), 1), (g_name(Bi), -1)]
        if additional_decoding:
            b.add(diff + [(g_name({i}), -1)], EQ, 0, f"decode[{i}]")
        b.add([(f"R_{i}", 1)] + [(k, -v) for k, v in diff], EQ if secure else LE, 0, f"rate[{i}]")
    if security:
        hidden = p.unknown_to_eavesdropper
        for i in sorted(hidden):
            b.add([(g_name(hidden), 1), (g_name(hidden - {i}), -1)], LE, 0, f"secure[{i}]")
    for i in range(1, n + 1):
        b.add([(f"R_{i}", -1)], LE, 0, f"R_{i}>=0")
    return b.system()


def g_elimination_order(n: int) -> list[str]:
    return [g_name(J) for J in _by_size_desc(subsets(range(1, n + 1)))]


def project_to_rates(sys: ConstraintSystem, n: int, order: str = "given") -> ConstraintSystem:
    eliminate = [v for v in sys.space.names if not v.startswith("R_")]
    prefix_order = {name: k for k, name in enumerate(g_elimination_order(n) + h_elimination_order(n))}
    eliminate.sort(key=lambda v: prefix_order.get(v, -1))
    projected = fme_eliminate(sys, eliminate, order=order)
    return projected.reorder(rate_space(n))


def secure_outer_region(p: ProblemInstance) -> RateRegion:
    """Explicit secure outer bound: the g-system projected to rate space."""
    return region_from_system(project_to_rates(build_g_system(p, secure=True), p.n))


def nonsecure_outer_region(p: ProblemInstance) -> RateRegion:
    return region_from_system(project_to_rates(build_g_system(p, secure=False), p.n))


def h_elimination_order(n: int) -> list[str]:
    ground = range(0, n + 1)
    return [h_name(J) for J in _by_size_desc(subsets(ground))] + ["t"]


def h_variable_names(n: int) -> list[str]:
    return [h_name(J) for J in subsets(range(0, n + 1))]


def build_h_system(p: ProblemInstance, decoding: bool = True) -> ConstraintSystem:
    """Shannon-type outer bound over ``h(J), J subset of {0,...,n}`` (0 is the codeword).

    The ratio bound ``R_i <= h({i}) / h({0})`` is linearized by rescaling
    the whole set function by ``h({0})``: the rescaled function has
    ``h({0}) = 1`` and the unit normalization ``h(N) = 1`` turns into
    ``h(N) = t`` for a free scale ``t >= 1``.  Every other row is homogeneous
    and keeps its form.  ``decoding=False`` drops the decoding equalities
    (used to show that the comparison notices a broken system).
    """
    n = p.n
    N = frozenset(range(0, n + 1))
    msgs = p.messages
    b = _Builder(h_variable_names(n) + ["t"] + rate_names(n))
    b.add([(h_name(()), 1)], EQ, 0, "h(empty)=0")
    b.add([(h_name({0}), 1)], EQ, 1, "h({0})=1")
    b.add([(h_name(msgs), 1)] + [(h_name({i}), -1) for i in msgs], EQ, 0, "h([n])=sum h({i})")
    b.add([(h_name(N), 1), ("t", -1)], EQ, 0, "h(N)=t")
    b.add([(h_name(msgs), 1), ("t", -1)], EQ, 0, "h([n])=t")
    for i in sorted(msgs):
        b.add([(h_name(N - {i}), 1), ("t", -1)], EQ, 0, f"h(N-{i})=t")
    b.add([("t", -1)], LE, -1, "t>=1")
    if decoding:
        for i in sorted(msgs):
            Ai = p.A(i)
            b.add([(h_name(Ai | {i, 0}), 1), (h_name(Ai | {0}), -1)], EQ, 0, f"decode[{i}]")
    _polymatroid_rows(b, N, h_name, "h")
    for i in sorted(msgs):
        b.add([(f"R_{i}", 1), (h_name({i}), -1)], LE, 0, f"rate[{i}]")
        b.add([(f"R_{i}", -1)], LE, 0, f"R_{i}>=0")
    return b.system()


def h_outer_region(p: ProblemInstance) -> RateRegion:
    return region_from_system(project_to_rates(build_h_system(p), p.n))


@dataclass(frozen=True)
class SetFunction:
    """Exact values of a set function on all subsets of its ground set."""

    ground: frozenset[int]
    values: Mapping[frozenset[int], Fraction]

    def __call__(self, J) -> Fraction:
        return self.values[frozenset(J)]

    @classmethod
    def from_point(cls, sys: ConstraintSystem, point, prefix: str, ground) -> SetFunction:
        ground = frozenset(ground)
        vals = {}
        for J in subsets(ground):
            vals[J] = Fraction(point[sys.space.index(set_name(prefix, J))])
        return cls(ground, vals)

    def assignment(self, prefix: str) -> dict[str, Fraction]:
        return {set_name(prefix, J): v for J, v in self.values.items()}


def g_to_h(g: SetFunction) -> SetFunction:
    """Lift a g-function to a Shannon-type h on {0} and the messages."""
    msgs = g.ground
    total = sum((g({i}) for i in msgs), Fraction(0))
    if total == 0:
        raise ValueError("degenerate g: all singleton values are zero")
    single = {i: g({i}) / total for i in msgs}
    vals = {}
    for J in subsets(msgs):
        base = sum((single[i] for i in J), Fraction(0))
        vals[J] = base
        vals[J | {0}] = base + g(msgs - J) / total
    return SetFunction(msgs | {0}, vals)


def h_to_g(h: SetFunction) -> SetFunction:
    """Recover g(J) = (h(J^c + 0) - h(J^c)) / h({0})."""
    msgs = h.ground - {0}
    h0 = h({0})
    if h0 == 0:
        raise ValueError("degenerate h: h({0}) is zero")
    vals = {}
    for J in subsets(msgs):
        comp = msgs - J
        vals[J] = (h(comp | {0}) - h(comp)) / h0
    return SetFunction(msgs, vals)


def h_point(sys: ConstraintSystem, h: SetFunction, rates) -> list[Fraction]:
    """Point of ``build_h_system`` for an unscaled h (any positive scale)."""
    h0 = h({0})
    values = {set_name("h", J): v / h0 for J, v in h.values.items()}
    values["t"] = h(h.ground) / h0
    values.update({f"R_{i}": Fraction(r) for i, r in enumerate(rates, start=1)})
    return sys.point_from_dict(values)


def g_point(sys: ConstraintSystem, g: SetFunction, rates) -> list[Fraction]:
    values = dict(g.assignment("g"))
    values.update({f"R_{i}": Fraction(r) for i, r in enumerate(rates, start=1)})
    return sys.point_from_dict(values)


@dataclass
class GHCheck:
    equal: bool
    g_region: RateRegion
    h_region: RateRegion
    witness: object = None

    def __bool__(self):
        return self.equal


def check_gh_equivalence(p: ProblemInstance, h_system: ConstraintSystem | None = None) -> GHCheck:
    """Compare the non-secure g-region with the h-region (eavesdropper ignored)."""
    base = p.without_eavesdropper()
    g_reg = nonsecure_outer_region(base)
    h_sys = h_system if h_system is not None else build_h_system(base)
    h_reg = region_from_system(project_to_rates(h_sys, p.n))
    res = region_equal(g_reg, h_reg)
    return GHCheck(res.equal, g_reg, h_reg, res.witness)


BOUNDS = ("secure-g", "nonsecure-g", "h")


def outer_region(p: ProblemInstance, bound: str = "secure-g") -> RateRegion:
    if bound == "secure-g":
        return secure_outer_region(p)
    if bound == "nonsecure-g":
        return nonsecure_outer_region(p)
    if bound == "h":
        return h_outer_region(p)
    raise ValueError(f"unknown bound {bound!r}; expected one of {BOUNDS}")


def region_json(p: ProblemInstance, bound: str, region: RateRegion) -> dict:
    return {
        "problem": p.render(),
        "bound": bound,
        "constraints": region.closed_system.to_json(),
        "vertices": [[fraction_str(v) for v in pt] for pt in (region.vertices or ())],
    }
