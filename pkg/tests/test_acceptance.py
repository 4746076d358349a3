"""Acceptance criteria 1-10, one test each.

Every test records a PASS/FAIL line (with its runtime) that is printed in
the pytest terminal summary.  The n=4 sweeps make this file slow (about 20
minutes in total); run it alone with ``pytest tests/test_acceptance.py``.
"""

import random
import time
from fractions import Fraction as F

import pytest

from secureic.analysis import (MATCHED_NO_KEY, MATCHED_WITH_KEY, LinearCode, classify_sweep,
                               count_conflict_free, golden_region, reproduce_table1,
                               verify_linear_code)
from secureic.inner_bounds import (CompositeSystemSpec, apply_zero_forcing,
                                   build_composite_system, detect_conflict, full_decoding,
                                   inner_region, parse_config)
from secureic.model import enumerate_instances, parse_instance, side_info_classes
from secureic.outer_bounds import (SetFunction, build_g_system, build_h_system,
                                   check_gh_equivalence, g_point, g_to_h, h_point, h_to_g,
                                   nonsecure_outer_region, project_to_rates, secure_outer_region)
from secureic.polyhedra import (LT, Constraint, ConstraintSystem, check_farkas, fme_eliminate,
                                lp_feasible, maximize, region_from_system)
from secureic.polyhedra.region import region_contains

NARROW_CONFIG = "1:1;2:1,2;3:1,3"


def test_criterion_01_nonsecure_swap_region(criterion, swap_plain):
    with criterion(1, "non-secure region of the swap instance", limit=1.0):
        region = nonsecure_outer_region(swap_plain)
        golden = golden_region(["R_1 + R_2 <= 1", "R_1 + R_3 <= 1"])
        # RateRegion equality compares canonical constraint systems
        assert region == golden
        assert region.contains((1, 1, 1)) is False and region.contains((0, 1, 1))


def test_criterion_02_secure_swap_region(criterion, swap_eve):
    with criterion(2, "secure region of the swap instance", limit=1.0):
        region = secure_outer_region(swap_eve)
        assert region == golden_region(["R_2 = R_3", "R_1 + R_3 <= 1"])
        assert len(region.nontrivial()) == 2


def test_criterion_03_table1(criterion):
    with criterion(3, "golden n=3 table, 20 rows by region equality", limit=30.0) as notes:
        rows = reproduce_table1()
        bad = [r.problem.render() for r in rows if not r.match]
        notes.append(f"{len(rows) - len(bad)}/{len(rows)} rows")
        assert len(rows) == 20 and not bad, bad


@pytest.mark.slow
def test_criterion_04_counts(criterion):
    with criterion(4, "counts 20, 833, conflict-free 1 and 43", limit=600.0) as notes:
        assert len(enumerate_instances(3, feasible_only=True)) == 20
        assert len(enumerate_instances(4, feasible_only=True)) == 833
        assert count_conflict_free(3) == (20, 1)
        t = time.perf_counter()
        total, free = count_conflict_free(4)
        notes.append(f"n=4 conflict sweep {time.perf_counter() - t:.0f} s")
        assert (total, free) == (833, 43)


def _printed_narrow_rows(space, forced):
    """The published inequality list for the narrow configuration, forced zeros substituted."""

    def S(*K):
        return "S{" + ",".join(map(str, K)) + "}[1]"

    def R(i):
        return f"R_{i}[1]"

    def row(lhs, rhs, const=0):
        coeffs = [0] * len(space)
        for v in lhs:
            coeffs[space.index(v)] += 1
        for v in rhs:
            coeffs[space.index(v)] -= 1
        return Constraint.make(coeffs, LT, const)

    all7 = [S(1), S(2), S(1, 2), S(3), S(1, 3), S(2, 3), S(1, 2, 3)]
    rows = [
        row(all7, [], 1),
        row([R(1)], [S(1)]),
        row([R(2)], [S(2), S(1, 2), S(2, 3), S(1, 2, 3)]),
        row([R(3)], [S(3), S(1, 3), S(2, 3), S(1, 2, 3)]),
        row([R(1), R(2)], [S(1), S(2), S(1, 2), S(1, 3), S(2, 3), S(1, 2, 3)]),
        row([R(1), R(3)], [S(1), S(1, 2), S(3), S(1, 3), S(2, 3), S(1, 2, 3)]),
        row([S(2), S(1, 2), S(1, 3), S(2, 3), S(1, 2, 3)], [R(2)]),
        row([S(1, 2), S(3), S(1, 3), S(2, 3), S(1, 2, 3)], [R(3)]),
    ]
    return ConstraintSystem(space, tuple(rows)).substitute({v: 0 for v in forced})


def test_criterion_05_narrow_conflict(criterion, swap_eve):
    with criterion(5, "narrow-configuration inequality list and conflict witness"):
        spec = CompositeSystemSpec(swap_eve, (parse_config(NARROW_CONFIG, 3),))
        sys, forced = apply_zero_forcing(build_composite_system(spec))
        assert sorted(forced) == ["S{1,2}[1]", "S{1,3}[1]", "S{2}[1]", "S{3}[1]"]
        ours = sys.substitute({v: 0 for v in forced})
        printed = _printed_narrow_rows(sys.space, forced)
        rows = {(c.coeffs, c.rel, c.rhs) for c in ours}
        assert all((c.coeffs, c.rel, c.rhs) in rows for c in printed)
        # our remaining strict rows add nothing beyond the printed ones
        closed = [c for c in ours if c.rel != LT]
        base = printed.add(*closed)
        for c in ours:
            if c.rel == LT:
                assert maximize(base, list(c.coeffs)).value <= c.rhs
        rep = detect_conflict(sys, 3)
        assert rep.conflict and rep.certificate_kind == "open"
        names = sys.space.names
        for target in ("R_2[1]", "R_3[1]"):
            j = names.index(target)
            assert any(a.coeffs[j] and b.coeffs[j] and a.coeffs[j] == -b.coeffs[j]
                       for a, b in rep.opposing_pairs), target


def test_criterion_06_key_resolution(criterion, swap_eve):
    with criterion(6, "narrow configuration with key equals the secure outer region"):
        spec = CompositeSystemSpec(swap_eve, (parse_config(NARROW_CONFIG, 3),), key=True)
        assert inner_region(spec) == secure_outer_region(swap_eve)


@pytest.mark.slow
def test_criterion_07_capacity(criterion):
    with criterion(7, "capacity matched for every feasible n <= 4") as notes:
        for n, limit in ((2, 60.0), (3, 60.0), (4, 7200.0)):
            t = time.perf_counter()
            s = classify_sweep(n)
            took = time.perf_counter() - t
            c = s.counts()
            notes.append(f"n={n}: {c['matched_no_key']} no-key + {c['matched_with_key']} key "
                         f"of {c['feasible']} in {took:.0f} s")
            assert s.unmatched == 0, s.unmatched_instances
            assert all(r.status in (MATCHED_NO_KEY, MATCHED_WITH_KEY) for r in s.reports)
            assert took < limit, f"n={n} sweep took {took:.0f} s"
        assert (s.feasible_count, s.conflict_free_count) == (833, 43)


@pytest.mark.slow
def test_criterion_08_gh_equivalence(criterion, n3_feasible):
    with criterion(8, "g- and h-regions equal (n=3 all, n=4 sample of 50)") as notes:
        cache = {}
        for p in n3_feasible:
            base = p.without_eavesdropper()
            if base not in cache:
                cache[base] = check_gh_equivalence(base).equal
            assert cache[base], p.render()
        for p in side_info_classes(3):
            assert check_gh_equivalence(p).equal, p.render()
        sample = random.Random(2024).sample(side_info_classes(4), 50)
        for p in sample:
            assert check_gh_equivalence(p).equal, p.render()
        notes.append(f"{len(side_info_classes(3))} n=3 classes, {len(sample)} n=4 classes")


def _random_points(rng, k, n):
    return [tuple(F(rng.randint(0, 12), 12) for _ in range(n)) for _ in range(k)]


def test_criterion_09_properties(criterion, n3_feasible, swap_eve):
    with criterion(9, "property suites") as notes:
        rng = random.Random(9)
        # inner inside outer, secure inside non-secure
        for p in n3_feasible:
            outer = secure_outer_region(p)
            assert region_contains(nonsecure_outer_region(p), outer) is None
            for key in (False, True):
                inner = inner_region(CompositeSystemSpec(p, (full_decoding(p),), key=key))
                assert region_contains(outer, inner) is None
        # projection soundness with Farkas re-verification
        checked = 0
        for p in (swap_eve, parse_instance("(1|3),(2|3),(3|1,2);(e|-)")):
            sys = build_g_system(p)
            proj = project_to_rates(sys, 3)
            for pt in _random_points(rng, 100, 3):
                lifted = sys.substitute({f"R_{i}": v for i, v in enumerate(pt, start=1)})
                rep = lp_feasible(lifted)
                assert rep.closed_feasible == proj.satisfied_by(pt)
                if not rep.closed_feasible:
                    assert check_farkas(lifted, rep.certificate) == "closed"
                checked += 1
        spec = CompositeSystemSpec(swap_eve, (parse_config(NARROW_CONFIG, 3),), key=True)
        comp = build_composite_system(spec)
        elim = [v for v in comp.space.names if not (v.startswith("R_") and "[" not in v)]
        proj = fme_eliminate(comp, elim)
        for pt in _random_points(rng, 100, 3):
            z = F(rng.randint(0, 4), 8)
            values = dict(zip(proj.space.names, pt + (z,)))
            lifted = comp.substitute(values)
            rep = lp_feasible(lifted)
            assert rep.open_feasible == proj.satisfied_by(pt + (z,))
            if not rep.open_feasible:
                assert check_farkas(lifted, rep.certificate) in ("open", "closed")
            checked += 1
        notes.append(f"{checked} projection points")
        # g <-> h maps preserve constraints at sampled vertices
        for k, p in enumerate(n3_feasible):
            base = p.without_eavesdropper()
            gsys, hsys = build_g_system(base, secure=False), build_h_system(base)
            for _ in range(2):
                obj = [rng.randint(-3, 3) for _ in gsys.space.names]
                x = maximize(gsys, obj).x
                g = SetFunction.from_point(gsys, x, "g", base.messages)
                rates = [x[gsys.space.index(f"R_{i}")] for i in (1, 2, 3)]
                if sum(g({i}) for i in base.messages):
                    assert hsys.satisfied_by(h_point(hsys, g_to_h(g), rates))
                obj = [rng.randint(-3, 3) for _ in hsys.space.names]
                y = maximize(hsys, obj).x
                h = SetFunction.from_point(hsys, y, "h", range(4))
                rates = [y[hsys.space.index(f"R_{i}")] for i in (1, 2, 3)]
                assert gsys.satisfied_by(g_point(gsys, h_to_g(h), rates))
        # dropping the additional decoding rows strictly enlarges the region
        p = parse_instance("(1|3),(2|3),(3|2);(e|-)")
        full = secure_outer_region(p)
        loose = region_from_system(project_to_rates(build_g_system(p, additional_decoding=False), 3))
        assert region_contains(loose, full) is None
        assert region_contains(full, loose) is not None


def test_criterion_10_xor_pair_code(criterion, swap_eve):
    with criterion(10, "linear code x1, x2+x3 is secure, decodable, on the boundary", limit=1.0):
        rep = verify_linear_code(swap_eve, LinearCode.from_expressions([1, 1, 1], ["x1", "x2+x3"]))
        assert rep.decodable and rep.secure
        assert all(v == 0 for v in rep.leakage.values())
        assert rep.rates == (F(1, 2), F(1, 2), F(1, 2))
        outer = secure_outer_region(swap_eve)
        assert outer.contains(rep.rates)
        assert not outer.contains((F(1, 2) + F(1, 100), F(1, 2), F(1, 2)))
