"""Capacity certification, sweeps, the n=3 golden table and a code verifier.

An instance's secure capacity is certified when an inner bound reaches the
polymatroidal outer bound.  Inner bounds come from secure composite coding,
first without a key and, if that is conflicted or falls short, with a
vanishing shared key.  Configurations are chosen so that every vertex of
the outer region lies in some configuration's region; time sharing between
those configurations (the multi-configuration system) then covers the hull.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .inner_bounds import (CompositeSystemSpec, ConflictReport, DecodingConfiguration, all_configs,
                           conflict_receivers, contains_rates, default_configs, detect_conflict, full_decoding,
                           inner_bound, lifted_closed_system, project_composite, zero_forced_system)
from .model import ProblemInstance, canonicalize, enumerate_instances, is_securely_feasible, parse_instance
from .outer_bounds import rate_space, secure_outer_region
from .polyhedra import (EQ, LE, Constraint, ConstraintSystem, ContainmentWitness, RateRegion,
                        VariableSpace, fraction_str, lp_feasible, maximize, region_equal, region_from_system)
from .polyhedra.lp import OPTIMAL

MATCHED_NO_KEY = "MATCHED_NO_KEY"
MATCHED_WITH_KEY = "MATCHED_WITH_KEY"
UNMATCHED = "UNMATCHED"
INFEASIBLE = "INFEASIBLE"

SWEEP_RANGE = (2, 3, 4)


# ---------------------------------------------------------------- policies

@dataclass(frozen=True)
class ConfigPolicy:
    """Which decoding configurations certification may use.

    ``"full"`` uses only ``D_i = [n] - A_i``; ``"search"`` starts there and
    falls back to every valid configuration, largest decoding sets first;
    ``"fixed"`` uses exactly ``configs``.
    """

    mode: str = "search"
    configs: tuple[DecodingConfiguration, ...] = ()

    def __post_init__(self):
        if self.mode not in ("full", "search", "fixed"):
            raise ValueError(f"unknown configuration policy {self.mode!r}")
        if self.mode == "fixed" and not self.configs:
            raise ValueError("a fixed policy needs at least one configuration")

    def candidates(self, p: ProblemInstance) -> Iterable[DecodingConfiguration]:
        if self.mode == "fixed":
            return iter(self.configs)
        return iter(default_configs(p, search=self.mode == "search"))

    def describe(self) -> str:
        if self.mode == "fixed":
            return "fixed(" + " | ".join(D.render() for D in self.configs) + ")"
        return self.mode


def as_policy(policy) -> ConfigPolicy:
    if policy is None:
        return ConfigPolicy()
    if isinstance(policy, ConfigPolicy):
        return policy
    if isinstance(policy, str):
        return ConfigPolicy(policy)
    if isinstance(policy, DecodingConfiguration):
        return ConfigPolicy("fixed", (policy,))
    return ConfigPolicy("fixed", tuple(policy))


# ------------------------------------------------------------ conflicts

@dataclass
class ConflictSearch:
    conflict: bool
    first: ConflictReport
    free_config: DecodingConfiguration | None = None
    tried: int = 0
    space: VariableSpace | None = None


def find_conflict_free(p: ProblemInstance, policy=None) -> ConflictSearch:
    """First configuration (in policy order) whose system has no conflict.

    After each conflicted configuration the receivers whose decoding rows
    the conflict needs are recorded; later configurations that agree with
    it on those receivers contain the same conflicting rows and are skipped.
    """
    policy = as_policy(policy)
    first = None
    tried = 0
    patterns: list[tuple[tuple[int, frozenset], ...]] = []
    for D in policy.candidates(p):
        if any(all(D.sets[i - 1] == Di for i, Di in pat) for pat in patterns):
            continue
        tried += 1
        sys = zero_forced_system(CompositeSystemSpec(p, (D,)))
        rep = detect_conflict(sys, p.n, explain=first is None)
        if first is None:
            first, space = rep, sys.space
        if not rep.conflict:
            return ConflictSearch(False, first, D, tried, space)
        if policy.mode == "search":
            patterns.append(tuple((i, D.sets[i - 1]) for i in conflict_receivers(sys, p.n)))
    return ConflictSearch(True, first, None, tried, space)


# --------------------------------------------------------- certification

@dataclass
class LiftedCheck:
    """Outcome of comparing a rate region with a lifted (unprojected) system."""

    equal: bool
    witness: str | None = None


def _lifted_equal(outer: RateRegion, lifted: ConstraintSystem) -> LiftedCheck:
    """Equality of ``outer`` and the projection of ``lifted`` without projecting.

    Every vertex of ``outer`` must be feasible for ``lifted`` once the rates
    are fixed, and every facet of ``outer`` must bound the maximum of its
    left-hand side over ``lifted``.  Both checks are exact LPs.
    """
    space = outer.space
    for v in outer.vertices:
        if not contains_rates(lifted, v):
            pt = ", ".join(f"{n}={fraction_str(x)}" for n, x in zip(space.names, v))
            return LiftedCheck(False, f"outer vertex ({pt}) is not achievable")
    index = [lifted.space.index(n) for n in space.names]
    for c in outer.closed_system:
        senses = [1, -1] if c.rel == EQ else [1]
        for s in senses:
            obj = [0] * len(lifted.space)
            for j, a in zip(index, c.coeffs):
                obj[j] = s * a
            res = maximize(lifted, obj)
            if res.status != OPTIMAL or res.value > s * c.rhs:
                return LiftedCheck(False, f"inner region violates {c.pretty(space)}")
    return LiftedCheck(True)


def _cover(p: ProblemInstance, outer: RateRegion, configs: Iterable[DecodingConfiguration],
           key: bool) -> tuple[list[DecodingConfiguration], list]:
    """Greedy vertex cover of ``outer`` by single-configuration regions."""
    todo = list(outer.vertices)
    used: list[DecodingConfiguration] = []
    for D in configs:
        if not todo:
            break
        spec = CompositeSystemSpec(p, (D,), key=key)
        if not key and not lp_feasible(zero_forced_system(spec)).open_feasible:
            continue
        lifted = lifted_closed_system(spec)
        hit = [v for v in todo if contains_rates(lifted, v)]
        if hit:
            used.append(D)
            todo = [v for v in todo if v not in hit]
    return used, todo


@dataclass
class CapacityReport:
    problem: ProblemInstance
    outer: RateRegion
    status: str
    conflict: bool
    inner_nokey: RateRegion | None = None
    inner_key: RateRegion | None = None
    config_used: tuple[DecodingConfiguration, ...] = ()
    conflict_free_config: DecodingConfiguration | None = None
    verified_by: tuple[str, ...] = ()
    conflict_witness: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def matched(self) -> bool:
        return self.status in (MATCHED_NO_KEY, MATCHED_WITH_KEY)

    @property
    def capacity(self) -> RateRegion | None:
        return self.outer if self.matched else None

    def to_json(self) -> dict:
        return {
            "problem": self.problem.render(),
            "status": self.status,
            "conflict": self.conflict,
            "config": [D.render() for D in self.config_used],
            "conflict_witness": list(self.conflict_witness),
            "verified_by": list(self.verified_by),
            "outer": _region_json(self.outer),
            "inner": _region_json(self.capacity) if self.matched else None,
            "inner_nokey": _region_json(self.inner_nokey) if self.inner_nokey else None,
            "inner_key": _region_json(self.inner_key) if self.inner_key else None,
            "notes": list(self.notes),
        }

    def summary(self) -> str:
        cfg = " | ".join(D.render() for D in self.config_used) or "-"
        return f"{self.problem.render()}  {self.status}  conflict={self.conflict}  configs={cfg}"


def _region_json(r: RateRegion) -> dict:
    return {
        "constraints": [c.pretty(r.space) for c in r.nontrivial()],
        "vertices": [[fraction_str(x) for x in v] for v in (r.vertices or ())],
        "empty": r.empty,
    }


def _multi_spec(p, used, key) -> CompositeSystemSpec:
    return CompositeSystemSpec(p, tuple(used), key=key)


def _verify(p: ProblemInstance, outer: RateRegion, used, key: bool, project: bool):
    """Independent re-check of a cover; returns (ok, inner region or None, methods, notes)."""
    spec = _multi_spec(p, used, key)
    notes = []
    if not key and not lp_feasible(zero_forced_system(spec)).open_feasible:
        return False, None, (), ["multi-configuration system is not open-feasible"]
    lifted = lifted_closed_system(spec)
    check = _lifted_equal(outer, lifted)
    methods = ["lp"]
    if not check.equal:
        return False, None, tuple(methods), [check.witness]
    inner = None
    if project:
        if key:
            inner = inner_bound(spec).region
        else:
            inner = region_from_system(project_composite(zero_forced_system(spec), p.n))
        res = region_equal(inner, outer)
        methods.append("vertices")
        if not res.equal:
            notes.append(res.witness.describe(outer.space))
            return False, inner, tuple(methods), notes
    return True, inner, tuple(methods), notes


def certify_capacity(p: ProblemInstance, config_policy=None, key: str = "auto",
                     project: bool | None = None) -> CapacityReport:
    """Compare the secure outer bound with composite-coding inner bounds.

    ``key`` is ``"auto"`` (no key first, then key), ``"off"`` or ``"on"``.
    ``project`` controls whether the matching inner region is also computed
    explicitly by projection and compared vertex by vertex; it defaults to
    True for n <= 3.  The LP comparison with the lifted system always runs.
    """
    if key not in ("auto", "on", "off"):
        raise ValueError(f"key must be auto, on or off, got {key!r}")
    policy = as_policy(config_policy)
    if project is None:
        project = p.n <= 3
    outer = secure_outer_region(p)
    if not is_securely_feasible(p):
        return CapacityReport(p, outer, INFEASIBLE, conflict=True)
    search = find_conflict_free(p, policy)
    report = CapacityReport(p, outer, UNMATCHED, conflict=search.conflict,
                            conflict_free_config=search.free_config)
    if search.conflict:
        report.conflict_witness = [c.pretty(search.space) for c in search.first.witness]
    if key != "on":
        if not search.conflict:
            candidates = itertools.chain([search.free_config], policy.candidates(p))
            used, left = _cover(p, outer, _dedupe(candidates), key=False)
            if not left:
                ok, inner, methods, notes = _verify(p, outer, used, False, project)
                report.notes += notes
                if ok:
                    report.status = MATCHED_NO_KEY
                    report.inner_nokey = inner if inner is not None else outer
                    report.config_used = tuple(used)
                    report.verified_by = methods
                    return report
        elif project:
            report.inner_nokey = inner_bound(CompositeSystemSpec(p, (next(policy.candidates(p)),))).region
    if key != "off":
        used, left = _cover(p, outer, policy.candidates(p), key=True)
        if not left:
            ok, inner, methods, notes = _verify(p, outer, used, True, project)
            report.notes += notes
            if ok:
                report.status = MATCHED_WITH_KEY
                report.inner_key = inner if inner is not None else outer
                report.config_used = tuple(used)
                report.verified_by = methods
                return report
        else:
            report.notes.append(f"{len(left)} outer vertices not reached with a key")
    return report


def _dedupe(configs):
    seen = set()
    for D in configs:
        if D not in seen:
            seen.add(D)
            yield D


# ---------------------------------------------------------------- sweeps

@dataclass
class SweepSummary:
    n: int
    feasible_count: int
    conflict_free_count: int
    matched_no_key: int
    matched_with_key: int
    unmatched: int
    reports: list = field(default_factory=list)
    unmatched_instances: list[str] = field(default_factory=list)

    def counts(self) -> dict:
        return {
            "n": self.n,
            "feasible": self.feasible_count,
            "conflict_free": self.conflict_free_count,
            "matched_no_key": self.matched_no_key,
            "matched_with_key": self.matched_with_key,
            "unmatched": self.unmatched,
        }


def _check_sweep_n(n: int):
    if n not in SWEEP_RANGE:
        raise ValueError(f"sweeps support n in {SWEEP_RANGE}, got {n}")


def count_conflict_free(n: int, config_policy=None) -> tuple[int, int]:
    """(feasible, conflict-free) counts; no bounds are projected."""
    _check_sweep_n(n)
    insts = enumerate_instances(n, feasible_only=True)
    free = sum(not find_conflict_free(p, config_policy).conflict for p in insts)
    return len(insts), free


def classify_sweep(n: int, config_policy=None, key: str = "auto", project: bool | None = None,
                   progress: Callable[[CapacityReport], None] | None = None) -> SweepSummary:
    _check_sweep_n(n)
    reports = []
    for p in enumerate_instances(n, feasible_only=True):
        rep = certify_capacity(p, config_policy, key=key, project=project)
        reports.append(rep)
        if progress:
            progress(rep)
    statuses = Counter(r.status for r in reports)
    return SweepSummary(
        n=n,
        feasible_count=len(reports),
        conflict_free_count=sum(not r.conflict for r in reports),
        matched_no_key=statuses[MATCHED_NO_KEY],
        matched_with_key=statuses[MATCHED_WITH_KEY],
        unmatched=statuses[UNMATCHED],
        reports=reports,
        unmatched_instances=[r.problem.render() for r in reports if r.status == UNMATCHED],
    )


# ------------------------------------------------------------ golden table

# Rows as printed (only non-trivial facets; nonnegativity is implied).
GOLDEN_TABLE1: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("(1|-),(2|3),(3|2);(e|1)", ("R_2 = R_3", "R_1 + R_3 <= 1")),
    ("(1|2,3),(2|1),(3|-);(e|3)", ("R_2 + R_3 <= 1", "R_1 = R_2")),
    ("(1|3),(2|3),(3|2);(e|-)", ("R_1 + R_2 <= 1", "R_2 = R_3", "R_1 <= R_3")),
    ("(1|3),(2|3),(3|2);(e|1)", ("R_1 + R_2 <= 1", "R_2 = R_3")),
    ("(1|3),(2|1),(3|2);(e|-)", ("R_1 + R_2 <= 1", "R_1 = R_2 = R_3")),
    ("(1|2,3),(2|1,3),(3|-);(e|3)", ("R_1 = R_2", "R_2 + R_3 <= 1")),
    ("(1|3),(2|3),(3|1,2);(e|-)", ("R_1 + R_2 <= 1", "R_1 <= R_3", "R_2 <= R_3", "R_3 <= R_1 + R_2")),
    ("(1|3),(2|3),(3|1,2);(e|1)", ("R_2 = R_3", "R_1 + R_3 <= 1")),
    ("(1|3),(2|3),(3|1,2);(e|2)", ("R_1 = R_3", "R_2 + R_3 <= 1")),
    ("(1|3),(2|1),(3|1,2);(e|-)", ("R_1 = R_3", "R_2 + R_3 <= 1", "R_2 <= R_1")),
    ("(1|3),(2|1),(3|1,2);(e|2)", ("R_1 = R_3", "R_2 + R_3 <= 1")),
    ("(1|3),(2|1,3),(3|1);(e|-)", ("R_1 + R_2 <= 1", "R_1 = R_3", "R_2 <= R_3")),
    ("(1|3),(2|1,3),(3|1);(e|2)", ("R_1 + R_2 <= 1", "R_1 = R_3")),
    ("(1|2,3),(2|1,3),(3|1);(e|-)", ("R_3 <= R_1", "R_2 <= R_1", "R_2 + R_3 <= 1", "R_1 <= R_2 + R_3")),
    ("(1|2,3),(2|1,3),(3|1);(e|2)", ("R_1 = R_3", "R_2 + R_3 <= 1")),
    ("(1|2,3),(2|1,3),(3|1);(e|3)", ("R_1 = R_2", "R_2 + R_3 <= 1")),
    ("(1|2,3),(2|1,3),(3|1,2);(e|-)", ("R_1 <= 1", "R_2 <= 1", "R_3 <= 1", "R_1 <= R_2 + R_3",
                                        "R_2 <= R_1 + R_3", "R_3 <= R_1 + R_2")),
    ("(1|2,3),(2|1,3),(3|1,2);(e|1)", ("R_1 <= 1", "R_2 <= 1", "R_2 = R_3")),
    ("(1|2,3),(2|1,3),(3|1,2);(e|2)", ("R_2 <= 1", "R_3 <= 1", "R_1 = R_3")),
    ("(1|2,3),(2|1,3),(3|1,2);(e|3)", ("R_1 <= 1", "R_3 <= 1", "R_1 = R_2")),
)

_TERM = re.compile(r"([+-]?)(\d*)(R_\d+)?")


def _parse_side(text: str, names: Sequence[str]) -> tuple[list[int], int]:
    coeffs = [0] * len(names)
    const = 0
    text = text.replace(" ", "")
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if m.end() == pos or not (m.group(2) or m.group(3)):
            raise ValueError(f"cannot parse {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        num = int(m.group(2)) if m.group(2) else 1
        if m.group(3):
            coeffs[names.index(m.group(3))] += sign * num
        else:
            const += sign * num
        pos = m.end()
    return coeffs, const


def parse_constraints(rows: Iterable[str], n: int) -> ConstraintSystem:
    """Linear rate constraints like ``R_1 + R_3 <= 1`` or ``R_1 = R_2 = R_3``."""
    space = rate_space(n)
    names = list(space.names)
    out = []
    for row in rows:
        parts = re.split(r"(<=|>=|=)", row)
        sides, rels = parts[0::2], parts[1::2]
        for k, rel in enumerate(rels):
            a, ca = _parse_side(sides[k], names)
            b, cb = _parse_side(sides[k + 1], names)
            lhs = [x - y for x, y in zip(a, b)]
            rhs = cb - ca
            if rel == ">=":
                lhs, rhs = [-x for x in lhs], -rhs
            out.append(Constraint.make(lhs, EQ if rel == "=" else LE, rhs, row))
    for j in range(n):
        e = [0] * n
        e[j] = -1
        out.append(Constraint.make(e, LE, 0, f"{names[j]}>=0"))
    return ConstraintSystem(space, tuple(out))


def golden_region(constraints: Sequence[str], n: int = 3) -> RateRegion:
    return region_from_system(parse_constraints(constraints, n))


@dataclass
class TableRow:
    problem: ProblemInstance
    region: RateRegion
    golden: RateRegion
    match: bool
    witness: ContainmentWitness | None = None


def reproduce_table1() -> list[TableRow]:
    """Recompute every golden row and compare it semantically."""
    rows = []
    for text, cons in GOLDEN_TABLE1:
        p = parse_instance(text)
        ours = secure_outer_region(p)
        gold = golden_region(cons, p.n)
        res = region_equal(ours, gold)
        rows.append(TableRow(p, ours, gold, res.equal, res.witness))
    return rows


def golden_covers_enumeration() -> bool:
    """Do the golden rows and the n=3 enumeration agree up to relabeling?"""
    gold = Counter(canonicalize(parse_instance(t)) for t, _ in GOLDEN_TABLE1)
    ours = Counter(canonicalize(p) for p in enumerate_instances(3, feasible_only=True))
    return gold == ours


# ------------------------------------------------------------ linear codes

MAX_CODE_BITS = 20


@dataclass(frozen=True)
class LinearCode:
    """Binary linear index code: output bit k is the XOR of the message bits in row k."""

    lengths: tuple[int, ...]
    generator: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(int(t) for t in self.lengths))
        object.__setattr__(self, "generator", tuple(tuple(int(b) & 1 for b in row) for row in self.generator))
        if any(t < 0 for t in self.lengths):
            raise ValueError("message lengths must be nonnegative")
        width = sum(self.lengths)
        for row in self.generator:
            if len(row) != width:
                raise ValueError(f"generator rows must have {width} columns")

    @property
    def r(self) -> int:
        return len(self.generator)

    @property
    def n(self) -> int:
        return len(self.lengths)

    def offsets(self) -> list[int]:
        return list(itertools.accumulate((0,) + self.lengths[:-1]))

    @classmethod
    def from_expressions(cls, lengths: Sequence[int], outputs: Sequence[str]) -> LinearCode:
        """Build from XOR expressions over message bits, e.g. ``["x1", "x2+x3"]``.

        ``xI`` names the only bit of a one-bit message; ``xI.k`` names bit k.
        """
        lengths = tuple(lengths)
        offs = list(itertools.accumulate((0,) + lengths[:-1]))
        rows = []
        for expr in outputs:
            row = [0] * sum(lengths)
            for tok in re.split(r"[+^]|⊕", expr.replace(" ", "")):
                m = re.fullmatch(r"x(\d+)(?:\.(\d+))?", tok)
                if not m:
                    raise ValueError(f"bad term {tok!r} in {expr!r}")
                i, k = int(m.group(1)), int(m.group(2) or 1)
                if not 1 <= i <= len(lengths) or not 1 <= k <= lengths[i - 1]:
                    raise ValueError(f"{tok} is out of range")
                row[offs[i - 1] + k - 1] ^= 1
            rows.append(tuple(row))
        return cls(lengths, tuple(rows))

    def encode(self, bits: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a & b for a, b in zip(row, bits)) & 1 for row in self.generator)


@dataclass
class CodeReport:
    decodes: dict[int, bool]
    leakage: dict[int, Fraction]
    rates: tuple[Fraction, ...]

    @property
    def decodable(self) -> bool:
        return all(self.decodes.values())

    @property
    def secure(self) -> bool:
        return all(v == 0 for v in self.leakage.values())

    def to_json(self) -> dict:
        return {
            "decodes": {str(i): ok for i, ok in self.decodes.items()},
            "leakage_bits": {str(i): fraction_str(v) for i, v in self.leakage.items()},
            "rates": [fraction_str(r) for r in self.rates],
            "decodable": self.decodable,
            "secure": self.secure,
        }


def _entropy(samples: list) -> Fraction:
    """Exact entropy in bits of the empirical distribution of ``samples``.

    Only dyadic distributions have rational entropy; a linear code over
    uniform bits always produces one.
    """
    counts = Counter(samples)
    total = len(samples)
    h = Fraction(0)
    for c in counts.values():
        p = Fraction(c, total)
        inv = p.denominator / p.numerator
        if p.numerator != 1 or p.denominator & (p.denominator - 1):
            raise ValueError("distribution is not dyadic; entropy is irrational")
        h += p * int(math.log2(inv))
    return h


def verify_linear_code(p: ProblemInstance, code: LinearCode) -> CodeReport:
    """Exhaustive zero-error decoding and exact leakage check of a linear code."""
    if code.n != p.n:
        raise ValueError(f"code has {code.n} messages, instance has {p.n}")
    width = sum(code.lengths)
    if width > MAX_CODE_BITS:
        raise ValueError(f"at most {MAX_CODE_BITS} message bits can be enumerated, got {width}")
    if code.r == 0 and width:
        raise ValueError("output length r = 0 with nonzero message lengths")
    offs = code.offsets()

    def part(bits, S):
        return tuple(tuple(bits[offs[j - 1]:offs[j - 1] + code.lengths[j - 1]]) for j in sorted(S))

    table = [(bits, code.encode(bits)) for bits in itertools.product((0, 1), repeat=width)]
    decodes = {}
    for i in range(1, p.n + 1):
        seen: dict = {}
        ok = True
        for bits, y in table:
            key = (y, part(bits, p.A(i)))
            xi = part(bits, {i})
            if seen.setdefault(key, xi) != xi:
                ok = False
                break
        decodes[i] = ok
    leakage = {}
    Ae = p.eavesdropper
    for i in sorted(p.unknown_to_eavesdropper):
        # I(X_i; Y | X_Ae) = H(Y, X_Ae) + H(X_i, X_Ae) - H(X_Ae) - H(Y, X_i, X_Ae)
        h = (_entropy([(y, part(b, Ae)) for b, y in table])
             + _entropy([part(b, Ae | {i}) for b, y in table])
             - _entropy([part(b, Ae) for b, y in table])
             - _entropy([(y, part(b, Ae | {i})) for b, y in table]))
        leakage[i] = h
    rates = tuple(Fraction(t, code.r) if code.r else Fraction(0) for t in code.lengths)
    return CodeReport(decodes, leakage, rates)
