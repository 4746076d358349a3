"""Secure composite coding inner bounds.

Variables per decoding configuration ``D`` (numbered 1, 2, ...): composite
index rates ``S{K}[c]`` for nonempty ``K`` and message-part rates
``R_i[c]``.  The total rate is ``R_i = sum_c R_i[c]``.  With a shared key the
security rows gain ``+ zeta`` on the right.

The achievability conditions are strict.  The no-key region is the closure
of the set of rates admitting composite rates that satisfy them all; the
key region is the limit of the key-assisted regions as the key rate goes to
zero, which equals the projection of the closed system at ``zeta = 0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .model import ProblemInstance, is_securely_feasible
from .outer_bounds import rate_names, rate_space, set_name, subsets
from .polyhedra import (EQ, LE, LT, Constraint, ConstraintSystem, RateRegion, VariableSpace,
                        check_farkas, fme_eliminate, lp_feasible, region_from_system)

ZETA = "zeta"


class InvalidConfiguration(ValueError):
    pass


@dataclass(frozen=True)
class DecodingConfiguration:
    """D_i for each receiver: the messages receiver i decodes jointly (i in D_i)."""

    sets: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))

    @classmethod
    def from_lists(cls, sets) -> DecodingConfiguration:
        return cls(tuple(frozenset(s) for s in sets))

    def validate(self, p: ProblemInstance):
        if len(self.sets) != p.n:
            raise InvalidConfiguration(f"need {p.n} decoding sets, got {len(self.sets)}")
        for i, D in enumerate(self.sets, start=1):
            if i not in D:
                raise InvalidConfiguration(f"receiver {i} must decode its own message")
            if D & p.A(i):
                raise InvalidConfiguration(f"D_{i} overlaps the side information of receiver {i}")
            if not D <= p.messages:
                raise InvalidConfiguration(f"D_{i} is not a subset of [{p.n}]")

    def render(self) -> str:
        return ";".join(f"{i}:{','.join(map(str, sorted(D)))}" for i, D in enumerate(self.sets, start=1))

    def to_json(self) -> list[list[int]]:
        return [sorted(D) for D in self.sets]


def parse_config(text: str, n: int) -> DecodingConfiguration:
    """``"1:1;2:1,2;3:1,3"`` (receiver:set pairs, any order)."""
    sets: dict[int, frozenset[int]] = {}
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        recv, _, members = part.partition(":")
        try:
            i = int(recv)
            sets[i] = frozenset(int(x) for x in members.split(",") if x.strip())
        except ValueError as exc:
            raise InvalidConfiguration(f"bad configuration item {part!r}") from exc
    if set(sets) != set(range(1, n + 1)):
        raise InvalidConfiguration(f"configuration must list receivers 1..{n}")
    return DecodingConfiguration(tuple(sets[i] for i in range(1, n + 1)))


def full_decoding(p: ProblemInstance) -> DecodingConfiguration:
    return DecodingConfiguration(tuple(p.messages - p.A(i) for i in range(1, p.n + 1)))


def all_configs(p: ProblemInstance):
    """Every valid configuration, largest decoding sets first."""
    choices = []
    for i in range(1, p.n + 1):
        B = sorted(p.interfering(i))
        opts = [frozenset(c) | {i} for r in range(len(B), -1, -1) for c in itertools.combinations(B, r)]
        choices.append(opts)
    for combo in itertools.product(*choices):
        yield DecodingConfiguration(combo)


def default_configs(p: ProblemInstance, search: bool = False) -> list[DecodingConfiguration]:
    """Full decoding first; with ``search`` every other valid configuration follows."""
    first = full_decoding(p)
    if not search:
        return [first]
    return [first] + [D for D in all_configs(p) if D != first]


def s_name(K, c: int) -> str:
    return f"{set_name('S', K)}[{c}]"


def r_part_name(i: int, c: int) -> str:
    return f"R_{i}[{c}]"


@dataclass(frozen=True)
class CompositeSystemSpec:
    instance: ProblemInstance
    configs: tuple[DecodingConfiguration, ...]
    secure: bool = True
    key: bool = False

    def __post_init__(self):
        object.__setattr__(self, "configs", tuple(self.configs))
        if not self.configs:
            raise InvalidConfiguration("at least one decoding configuration is required")
        for D in self.configs:
            D.validate(self.instance)

    @property
    def space(self) -> VariableSpace:
        n = self.instance.n
        names = rate_names(n)
        for c in range(1, len(self.configs) + 1):
            names += [r_part_name(i, c) for i in range(1, n + 1)]
            names += [s_name(K, c) for K in subsets(range(1, n + 1), 1)]
        if self.key:
            names.append(ZETA)
        return VariableSpace(names)


def build_composite_system(spec: CompositeSystemSpec) -> ConstraintSystem:
    p = spec.instance
    n = p.n
    if spec.secure and not is_securely_feasible(p):
        raise ValueError(f"{p.render()} is not securely feasible")
    space = spec.space
    rows: list[Constraint] = []

    def add(terms, rel, rhs, name):
        row = [0] * len(space)
        for var, coef in terms:
            row[space.index(var)] += coef
        rows.append(Constraint.make(row, rel, rhs, name))

    nonempty = list(subsets(range(1, n + 1), 1))
    cfgs = list(enumerate(spec.configs, start=1))
    for i in range(1, n + 1):
        Ai = p.A(i)
        add([(s_name(J, c), 1) for c, _ in cfgs for J in nonempty if not J <= Ai], LT, 1, f"link[{i}]")
    for c, D in cfgs:
        for i in range(1, n + 1):
            visible = D.sets[i - 1] | p.A(i)
            for K in subsets(D.sets[i - 1], 1):
                lhs = [(r_part_name(k, c), 1) for k in sorted(K)]
                rhs = [(s_name(J, c), -1) for J in nonempty if J <= visible and J & K]
                add(lhs + rhs, LT, 0, f"decode[{i},K={_fmt(K)},D{c}]")
    if spec.secure:
        Ae = p.eavesdropper
        hidden = p.unknown_to_eavesdropper
        for c, _ in cfgs:
            for i in sorted(hidden):
                for P in subsets(hidden, 1):
                    lhs = [(s_name(K, c), 1) for K in nonempty if K <= P | Ae and not K <= Ae]
                    rhs = [(r_part_name(j, c), -1) for j in sorted(P - {i})]
                    if spec.key:
                        rhs.append((ZETA, -1))
                    add(lhs + rhs, LT, 0, f"secure[i={i},P={_fmt(P)},D{c}]")
    for i in range(1, n + 1):
        add([(f"R_{i}", 1)] + [(r_part_name(i, c), -1) for c, _ in cfgs], EQ, 0, f"split[{i}]")
    for name in space.names:
        add([(name, -1)], LE, 0, f"{name}>=0")
    return ConstraintSystem(space, tuple(rows))


def _fmt(K) -> str:
    return "{" + ",".join(map(str, sorted(K))) + "}"


def _is_s(name: str) -> bool:
    return name.startswith("S{")


def apply_zero_forcing(sys: ConstraintSystem) -> tuple[ConstraintSystem, list[str]]:
    """Set composite rates to zero wherever a row reads ``(sum of S terms) < 0``.

    Returns the reduced system, with an explicit ``S = 0`` row for each forced
    variable and its zero substituted everywhere else, and the forced names
    in the order they were found.  Iterates to a fixpoint.
    """
    space = sys.space
    rows = list(sys.constraints)
    forced: list[str] = []
    while True:
        new = []
        for c in rows:
            if c.rel != LT or c.rhs != 0 or c.is_trivial:
                continue
            support = [j for j, v in enumerate(c.coeffs) if v]
            # rows like R_2[1] < 0 (left over once a decoding row lost all its
            # composite rates) are kept: they are conflicts, not forcing rules
            if all(c.coeffs[j] > 0 for j in support) and all(_is_s(space.names[j]) for j in support):
                new.extend(space.names[j] for j in support if space.names[j] not in forced)
        new = list(dict.fromkeys(new))
        if not new:
            break
        forced.extend(new)
        idx = {space.index(v) for v in new}
        kept = []
        for c in rows:
            coeffs = tuple(0 if j in idx else v for j, v in enumerate(c.coeffs))
            if coeffs != c.coeffs:
                c = Constraint.make(coeffs, c.rel, c.rhs, c.name)
            if c.is_trivial:
                if c.trivially_false and not (c.rel == LT and c.rhs == 0):
                    raise AssertionError(f"zero-forcing produced an inconsistent row {c.name}")
                continue
            kept.append(c)
        rows = kept
    zeros = []
    for v in forced:
        row = [0] * len(space)
        row[space.index(v)] = 1
        zeros.append(Constraint(tuple(row), 0, EQ, f"{v}=0"))
    return ConstraintSystem(space, tuple(rows) + tuple(zeros)), forced


@dataclass
class ConflictReport:
    conflict: bool
    witness: list[Constraint] = field(default_factory=list)
    opposing_pairs: list[tuple[Constraint, Constraint]] = field(default_factory=list)
    certificate_kind: str | None = None

    def __bool__(self):
        return self.conflict


def _positive_rates(sys: ConstraintSystem, n: int) -> ConstraintSystem:
    extra = []
    for i in range(1, n + 1):
        row = [0] * len(sys.space)
        row[sys.space.index(f"R_{i}")] = -1
        extra.append(Constraint(tuple(row), 0, LT, f"R_{i}>0"))
    return sys.add(*extra)


def detect_conflict(sys: ConstraintSystem, n: int, explain: bool = True) -> ConflictReport:
    """Does the strict system admit a solution with every rate positive?

    On a conflict the Farkas certificate's support is shrunk greedily to a
    small infeasible subset (the witness), and every pair of strict rows that
    bound the same expression from both sides is listed as well.
    ``explain=False`` skips both and only returns the verdict.
    """
    probe = _positive_rates(sys, n)
    report = lp_feasible(probe)
    if report.open_feasible:
        return ConflictReport(False)
    kind = check_farkas(probe, report.certificate)
    assert kind is not None, "LP returned an invalid Farkas certificate"
    if not explain:
        return ConflictReport(True, certificate_kind=kind)
    support = [c for w, c in zip(report.certificate, probe.constraints) if w != 0]
    witness = list(support)
    for c in list(support):
        trial = [x for x in witness if x is not c]
        if trial and not lp_feasible(ConstraintSystem(sys.space, tuple(trial))).open_feasible:
            witness = trial
    pairs = []
    strict = [c for c in sys.constraints if c.rel == LT]
    for a, b in itertools.combinations(strict, 2):
        if all(x == -y for x, y in zip(a.coeffs, b.coeffs)) and a.rhs + b.rhs <= 0:
            pairs.append((a, b))
    return ConflictReport(True, witness, pairs, kind)


def zero_forced_system(spec: CompositeSystemSpec) -> ConstraintSystem:
    sys = build_composite_system(spec)
    if spec.secure and not spec.key:
        sys, _ = apply_zero_forcing(sys)
    return sys


def _internal_vars(space: VariableSpace) -> list[str]:
    # per-configuration rates go first (they sit in equalities), then composite
    # rates from the largest subsets down
    parts = [v for v in space.names if v.startswith("R_") and "[" in v]
    s_vars = [v for v in space.names if _is_s(v)]
    s_vars.sort(key=lambda v: (-v.count(",") - (v[2] != "}"), v))
    return parts + s_vars


def project_composite(sys: ConstraintSystem, n: int, keep_zeta: bool = False,
                      closed: bool = True) -> ConstraintSystem:
    """Eliminate composite and per-configuration rates (closed relaxation by default)."""
    if closed:
        sys = sys.closure()
    projected = fme_eliminate(sys, _internal_vars(sys.space))
    target = rate_names(n) + ([ZETA] if keep_zeta and ZETA in sys.space else [])
    return projected.reorder(VariableSpace(target))


def zero_rate_region(n: int) -> RateRegion:
    space = rate_space(n)
    rows = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        rows.append(Constraint(tuple(e), 0, EQ))
    return region_from_system(ConstraintSystem(space, tuple(rows)))


@dataclass
class InnerResult:
    region: RateRegion
    conflict: ConflictReport | None
    system: ConstraintSystem


def inner_region(spec: CompositeSystemSpec) -> RateRegion:
    return inner_bound(spec).region


def inner_bound(spec: CompositeSystemSpec) -> InnerResult:
    """Achievable region for a composite spec, plus the conflict analysis.

    Without a key: if the strict system has no solution the only rate
    achievable here is the all-zero tuple; otherwise the region is the
    closure of the projection, which for a nonempty open system is the
    projection of the closed relaxation.  With a key: the closed system is
    projected keeping ``zeta`` and the result is sliced at ``zeta = 0``.
    """
    n = spec.instance.n
    sys = zero_forced_system(spec)
    if spec.key:
        projected = project_composite(sys, n, keep_zeta=True)
        limit = projected.substitute({ZETA: 0}) if ZETA in projected.space else projected
        return InnerResult(region_from_system(limit.reorder(rate_space(n))), None, sys)
    conflict = detect_conflict(sys, n) if spec.secure else None
    if not lp_feasible(sys).open_feasible:
        return InnerResult(zero_rate_region(n), conflict, sys)
    return InnerResult(region_from_system(project_composite(sys, n)), conflict, sys)


def key_region_parametric(spec: CompositeSystemSpec) -> ConstraintSystem:
    """Closed key-assisted region over (rates, zeta) before taking the limit."""
    if not spec.key:
        spec = CompositeSystemSpec(spec.instance, spec.configs, spec.secure, True)
    return project_composite(zero_forced_system(spec), spec.instance.n, keep_zeta=True)


def lifted_closed_system(spec: CompositeSystemSpec) -> ConstraintSystem:
    """Closed system whose projection to the rates is the relevant inner region.

    No key: the zero-forced system (meaningful only when it is open-feasible).
    Key: the key-limit system, i.e. the closure at ``zeta = 0``; zero forcing
    is unnecessary because the closure already pins those rates to zero.
    """
    if spec.key:
        plain = CompositeSystemSpec(spec.instance, spec.configs, spec.secure, False)
        return build_composite_system(plain).closure()
    return zero_forced_system(spec).closure()


def contains_rates(lifted: ConstraintSystem, rates) -> bool:
    """Is the rate tuple in the projection of the closed lifted system?"""
    fixed = {f"R_{i}": Fraction(r) for i, r in enumerate(rates, start=1)}
    return lp_feasible(lifted.substitute(fixed)).closed_feasible


def conflict_receivers(sys: ConstraintSystem, n: int) -> list[int]:
    """Receivers whose decoding rows a conflict really needs.

    Only decoding rows depend on the configuration, and receiver i's rows
    depend on ``D_i`` alone.  If the system stays conflicted with the
    decoding rows of every other receiver removed, any configuration that
    agrees on ``D_i`` for the returned receivers is conflicted as well.
    Assumes ``sys`` is conflicted and built for a single configuration.
    """
    probe = _positive_rates(sys, n)
    needed = list(range(1, n + 1))
    for i in range(1, n + 1):
        trial = [j for j in needed if j != i]
        keep = tuple(c for c in probe.constraints
                     if not c.name.startswith("decode[") or _decode_receiver(c.name) in trial)
        if not lp_feasible(ConstraintSystem(probe.space, keep)).open_feasible:
            needed = trial
    return needed


def _decode_receiver(name: str) -> int:
    return int(name[len("decode["):name.index(",")])
