import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from secureic.polyhedra import (EQ, LE, LT, Constraint, ConstraintSystem, VariableSpace,
                                box_region, check_farkas, enumerate_vertices, fme_eliminate,
                                hull_region, lp_feasible, maximize, region_equal,
                                region_from_system, remove_redundant, system_from_dicts)
from secureic.polyhedra.screen import screen_feasible, screen_implied


def _sys(names, rows):
    return system_from_dicts(names, rows)


def _brute_vertices(sys):
    """Oracle: intersect every d-subset of rows as equalities, keep feasible points."""
    d = len(sys.space)
    rows = [c for c in sys.closure().constraints]
    pts = set()
    for combo in itertools.combinations(rows, d):
        A = [[F(v) for v in c.coeffs] + [F(c.rhs)] for c in combo]
        # Gauss-Jordan
        ok = True
        for col in range(d):
            piv = next((r for r in range(col, d) if A[r][col]), None)
            if piv is None:
                ok = False
                break
            A[col], A[piv] = A[piv], A[col]
            for r in range(d):
                if r != col and A[r][col]:
                    f = A[r][col] / A[col][col]
                    A[r] = [a - f * b for a, b in zip(A[r], A[col])]
        if not ok:
            continue
        x = tuple(A[r][d] / A[r][r] for r in range(d))
        if all(c.satisfied_by(x) for c in rows):
            pts.add(x)
    return sorted(pts)


# ----------------------------------------------------------------- systems

def test_constraint_normalization():
    s = VariableSpace(["x", "y"])
    c = Constraint.from_dict(s, {"x": "3/2", "y": 3}, LE, "9/2")
    assert c.coeffs == (1, 2) and c.rhs == 3
    e = Constraint.from_dict(s, {"x": -2, "y": 4}, EQ, 0)
    assert e.coeffs == (1, -2)
    g = Constraint.from_dict(s, {"x": 1}, ">=", 1)
    assert g.coeffs == (-1, 0) and g.rhs == -1 and g.rel == LE


def test_floats_rejected():
    s = VariableSpace(["x"])
    with pytest.raises(TypeError):
        Constraint.from_dict(s, {"x": 0.5}, LE, 1)


def test_json_roundtrip():
    sys = _sys(["R_1", "R_2"], [({"R_1": "3/2", "R_2": 1}, "<", 1), ({"R_1": 1}, "=", "1/3")])
    data = sys.to_json()
    assert data[0] == {"coeffs": {"R_1": "3", "R_2": "2"}, "rel": "<", "rhs": "2"}
    assert ConstraintSystem.from_json(sys.space, data) == sys


# ---------------------------------------------------------------------- LP

def test_lp_closed_box():
    r = lp_feasible(_sys(["x"], [({"x": 1}, "<=", 1), ({"x": 1}, ">=", 0)]))
    assert r.closed_feasible and r.open_feasible


def test_lp_opposing_strict_pair():
    sys = _sys(["x", "y"], [({"x": 1, "y": -1}, "<", 0), ({"y": 1, "x": -1}, "<", 0)])
    r = lp_feasible(sys)
    assert r.closed_feasible and not r.open_feasible
    assert r.witness[0] == r.witness[1]
    assert check_farkas(sys, r.certificate) == "open"


def test_lp_infeasible_certificate():
    sys = _sys(["x"], [({"x": 1}, "<=", 0), ({"x": 1}, ">=", 1)])
    r = lp_feasible(sys)
    assert not r.closed_feasible
    assert check_farkas(sys, r.certificate) == "closed"


def test_check_farkas_rejects_bogus():
    sys = _sys(["x"], [({"x": 1}, "<=", 0), ({"x": 1}, ">=", 1)])
    assert check_farkas(sys, [1, 0]) is None
    assert check_farkas(sys, [-1, -1]) is None


def test_maximize():
    sys = _sys(["x", "y"], [({"x": 1, "y": 1}, "<=", 1), ({"x": 1}, ">=", 0), ({"y": 1}, ">=", 0)])
    res = maximize(sys, [2, 1])
    assert res.value == 2


# ------------------------------------------------------------- redundancy

def test_remove_redundant_parallel():
    sys = _sys(["x"], [({"x": 1}, "<=", 1), ({"x": 1}, "<=", 2)])
    out = remove_redundant(sys)
    assert [c.rhs for c in out] == [1]


def test_remove_redundant_implied_sum():
    sys = _sys(["x", "y"], [({"x": 1}, "<=", 1), ({"y": 1}, "<=", 1), ({"x": 1, "y": 1}, "<=", 2)])
    out = remove_redundant(sys)
    assert len(out) == 2
    assert all(sum(1 for v in c.coeffs if v) == 1 for c in out)


def test_remove_redundant_preserves_vertices():
    sys = _sys(["x", "y"], [({"x": 1}, "<=", 1), ({"y": 1}, "<=", 1), ({"x": 1, "y": 1}, "<=", 2),
                            ({"x": 1}, ">=", 0), ({"y": 1}, ">=", 0), ({"x": 2, "y": 1}, "<=", 5)])
    assert _brute_vertices(sys) == _brute_vertices(remove_redundant(sys))


# -------------------------------------------------------------------- FME

def test_fme_textbook():
    sys = _sys(["x", "y"], [({"x": 1, "y": 1}, "<=", 1), ({"y": 1}, ">=", 0)])
    out = fme_eliminate(sys, ["y"])
    assert out.space.names == ("x",)
    assert [(c.coeffs, c.rel, c.rhs) for c in out] == [((1,), LE, 1)]


def test_fme_strictness_propagates():
    sys = _sys(["x", "y"], [({"x": 1, "y": -1}, "<", 0), ({"y": 1}, "<=", 1)])
    out = fme_eliminate(sys, ["y"])
    assert [(c.coeffs, c.rel, c.rhs) for c in out] == [((1,), LT, 1)]


def test_fme_equality_substitution():
    sys = _sys(["x", "y", "z"], [({"x": 1, "y": -1}, "=", 0), ({"y": 1, "z": 1}, "<=", 1),
                                 ({"z": 1}, ">=", 0)])
    out = fme_eliminate(sys, ["y", "z"])
    assert [(c.coeffs, c.rel, c.rhs) for c in out] == [((1,), LE, 1)]


def test_fme_infeasible_projection():
    sys = _sys(["x", "y"], [({"x": 1, "y": -1}, "<", 0), ({"y": 1, "x": -1}, "<", 0)])
    out = fme_eliminate(sys, ["y"])
    assert not lp_feasible(out).open_feasible


# --------------------------------------------------------------- vertices

def test_vertices_two_sum_region():
    sys = _sys(["R_1", "R_2", "R_3"],
               [({"R_1": 1, "R_2": 1}, "<=", 1), ({"R_1": 1, "R_3": 1}, "<=", 1)]
               + [({f"R_{i}": 1}, ">=", 0) for i in (1, 2, 3)]
               + [({f"R_{i}": 1}, "<=", 1) for i in (1, 2, 3)])
    verts = enumerate_vertices(region_from_system(sys))
    assert verts == _brute_vertices(sys)
    for v in [(0, 0, 0), (1, 0, 0), (0, 1, 1)]:
        assert tuple(map(F, v)) in verts


def test_vertices_equality_region():
    sys = _sys(["R_1", "R_2", "R_3"],
               [({"R_2": 1, "R_3": -1}, "=", 0), ({"R_1": 1, "R_3": 1}, "<=", 1)]
               + [({f"R_{i}": 1}, ">=", 0) for i in (1, 2, 3)]
               + [({f"R_{i}": 1}, "<=", 1) for i in (1, 2, 3)])
    verts = enumerate_vertices(region_from_system(sys))
    expect = [tuple(map(F, v)) for v in [(0, 0, 0), (0, 1, 1), (1, 0, 0)]]
    assert verts == expect
    assert set(_brute_vertices(sys)) == set(expect)


def test_vertices_unit_box():
    assert len(box_region(["a", "b"]).vertices) == 4


# ---------------------------------------------------------- region equality

def test_region_equal_reordered():
    rows = [({"R_1": 1, "R_2": 1}, "<=", 1), ({"R_1": 1}, ">=", 0), ({"R_2": 1}, ">=", 0)]
    a = region_from_system(_sys(["R_1", "R_2"], rows))
    b = region_from_system(_sys(["R_1", "R_2"], rows[::-1]))
    assert region_equal(a, b)
    assert a == b


def test_region_equal_witness():
    a = region_from_system(_sys(["R_1"], [({"R_1": 1}, "<=", 1), ({"R_1": 1}, ">=", 0)]))
    b = region_from_system(_sys(["R_1"], [({"R_1": 1}, "<=", "1/2"), ({"R_1": 1}, ">=", 0)]))
    res = region_equal(a, b)
    assert not res
    assert res.witness.vertex == (F(1),)
    assert not res.witness.violated.satisfied_by(res.witness.vertex)


def test_region_equal_dimension_mismatch():
    with pytest.raises(ValueError):
        region_equal(box_region(["a"]), box_region(["a", "b"]))


def test_hull_region_triangle():
    space = VariableSpace(["x", "y"])
    r = hull_region(space, [(0, 0), (1, 0), (0, 1), (F(1, 4), F(1, 4))])
    assert len(r.vertices) == 3
    assert r.contains((F(1, 2), F(1, 2))) and not r.contains((1, 1))


# --------------------------------------------------------------- screening

def test_screen_agrees_with_exact():
    sys = _sys(["x", "y"], [({"x": 1}, "<=", 1), ({"y": 1}, "<=", 1), ({"x": 1, "y": 1}, "<=", 2)])
    rows = sys.constraints
    assert screen_implied(rows[:2], rows[2]) is True
    assert screen_implied(rows[1:], rows[0]) is False
    rep = screen_feasible(sys)
    assert rep is not None and rep.open_feasible and sys.satisfied_by(rep.witness)


# ------------------------------------------------------------- properties

_small = st.integers(min_value=-3, max_value=3)


@st.composite
def _random_system(draw):
    names = ["x", "y", "z"]
    rows = [({"x": 1}, ">=", 0), ({"y": 1}, ">=", 0), ({"z": 1}, ">=", 0),
            ({"x": 1, "y": 1, "z": 1}, "<=", 3)]
    for _ in range(draw(st.integers(1, 4))):
        coeffs = {v: draw(_small) for v in names}
        rows.append((coeffs, draw(st.sampled_from(["<=", "<"])), draw(st.integers(0, 4))))
    return _sys(names, rows)


_points = st.lists(st.tuples(st.fractions(-1, 4, max_denominator=6),
                             st.fractions(-1, 4, max_denominator=6)), min_size=100, max_size=100)


@settings(max_examples=15, deadline=None)
@given(_random_system(), _points)
def test_projection_soundness(sys, pts):
    proj = fme_eliminate(sys, ["z"])
    closed = fme_eliminate(sys.closure(), ["z"])
    for x, y in pts:
        inside_closed = closed.satisfied_by((x, y))
        lifted = sys.substitute({"x": x, "y": y})
        rep = lp_feasible(lifted)
        assert inside_closed == rep.closed_feasible
        assert proj.satisfied_by((x, y)) == rep.open_feasible
        if not rep.open_feasible:
            assert check_farkas(lifted, rep.certificate) is not None


@settings(max_examples=15, deadline=None)
@given(_random_system())
def test_redundancy_preserves_solution_set(sys):
    closed = sys.closure()
    assert _brute_vertices(closed) == _brute_vertices(remove_redundant(closed))


@settings(max_examples=10, deadline=None)
@given(_random_system())
def test_deterministic(sys):
    a = fme_eliminate(sys, ["z", "y"])
    b = fme_eliminate(sys, ["z", "y"])
    assert a == b and a.to_json() == b.to_json()
