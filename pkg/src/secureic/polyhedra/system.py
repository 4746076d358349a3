"""Linear constraint systems with exact rational coefficients.

Every constraint is stored normalized: integer coefficients with gcd 1 and,
for equalities, a positive leading coefficient.  Relations are ``"<="``,
``"<"`` and ``"="``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

LE, LT, EQ = "<=", "<", "="
RELATIONS = (LE, LT, EQ)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass ints, Fractions or 'p/q' strings")
    return Fraction(x)


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class VariableSpace:
    """An ordered set of variable names with a name <-> column bijection."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        self.names = tuple(names)
        self._index = {name: i for i, name in enumerate(self.names)}
        if len(self._index) != len(self.names):
            raise ValueError("duplicate variable names")

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self._index

    def __eq__(self, other):
        return isinstance(other, VariableSpace) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VariableSpace({list(self.names)!r})"

    def index(self, name: str) -> int:
        return self._index[name]

    def without(self, names: Iterable[str]) -> VariableSpace:
        drop = set(names)
        return VariableSpace(n for n in self.names if n not in drop)


def normalize_row(coeffs: Sequence, rhs, rel: str) -> tuple[tuple[int, ...], int]:
    """Scale a row to coprime integers; equalities get a positive leading coefficient."""
    if type(rhs) is int and all(type(c) is int for c in coeffs):
        ints, irhs = list(coeffs), rhs
    else:
        fr = [as_fraction(c) for c in coeffs]
        r = as_fraction(rhs)
        den = lcm(*(f.denominator for f in fr), r.denominator)
        ints = [int(f * den) for f in fr]
        irhs = int(r * den)
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        # trivial row: keep only the sign of the right-hand side
        return tuple(ints), (irhs > 0) - (irhs < 0)
    g = gcd(g, irhs)
    ints = [v // g for v in ints]
    irhs //= g
    if rel == EQ:
        lead = next(v for v in ints if v)
        if lead < 0:
            ints = [-v for v in ints]
            irhs = -irhs
    return tuple(ints), irhs


@dataclass(frozen=True)
class Constraint:
    """``coeffs . x  rel  rhs`` over some VariableSpace (coefficients by column)."""

    coeffs: tuple[int, ...]
    rhs: int
    rel: str
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")

    @classmethod
    def make(cls, coeffs: Sequence, rel: str, rhs, name: str = "") -> Constraint:
        c, r = normalize_row(coeffs, rhs, rel)
        return cls(c, r, rel, name)

    @classmethod
    def from_dict(cls, space: VariableSpace, coeffs: Mapping[str, object], rel: str, rhs,
                  name: str = "") -> Constraint:
        row = [Fraction(0)] * len(space)
        for var, c in coeffs.items():
            row[space.index(var)] += as_fraction(c)
        if rel == ">=":
            return cls.make([-c for c in row], LE, -as_fraction(rhs), name)
        if rel == ">":
            return cls.make([-c for c in row], LT, -as_fraction(rhs), name)
        return cls.make(row, rel, rhs, name)

    @property
    def is_trivial(self) -> bool:
        return not any(self.coeffs)

    @property
    def trivially_true(self) -> bool:
        if not self.is_trivial:
            return False
        if self.rel == EQ:
            return self.rhs == 0
        if self.rel == LT:
            return self.rhs > 0
        return self.rhs >= 0

    @property
    def trivially_false(self) -> bool:
        return self.is_trivial and not self.trivially_true

    def lhs(self, point: Sequence) -> Fraction:
        return sum((Fraction(c) * as_fraction(x) for c, x in zip(self.coeffs, point) if c), Fraction(0))

    def satisfied_by(self, point: Sequence) -> bool:
        v = self.lhs(point)
        if self.rel == EQ:
            return v == self.rhs
        if self.rel == LT:
            return v < self.rhs
        return v <= self.rhs

    def closure(self) -> Constraint:
        return self if self.rel != LT else Constraint(self.coeffs, self.rhs, LE, self.name)

    def as_dict(self, space: VariableSpace) -> dict[str, int]:
        return {space.names[i]: c for i, c in enumerate(self.coeffs) if c}

    def to_json(self, space: VariableSpace) -> dict:
        return {
            "coeffs": {k: fraction_str(v) for k, v in self.as_dict(space).items()},
            "rel": self.rel,
            "rhs": fraction_str(self.rhs),
        }

    @classmethod
    def from_json(cls, space: VariableSpace, data: Mapping) -> Constraint:
        return cls.from_dict(space, data["coeffs"], data["rel"], data["rhs"])

    def pretty(self, space: VariableSpace) -> str:
        lhs = [(space.names[i], c) for i, c in enumerate(self.coeffs) if c > 0]
        rhs_terms = [(space.names[i], -c) for i, c in enumerate(self.coeffs) if c < 0]
        const = Fraction(self.rhs)
        # put negative-coefficient terms on the right, keeping the constant when it is nonzero
        left = _terms(lhs) if lhs else "0"
        right_parts = _terms(rhs_terms) if rhs_terms else ""
        if const != 0 or not right_parts:
            if right_parts:
                right = f"{right_parts} {'+' if const > 0 else '-'} {fraction_str(abs(const))}"
            else:
                right = fraction_str(const)
        else:
            right = right_parts
        return f"{left} {self.rel} {right}"

    def sort_key(self):
        return (self.rel != EQ, tuple(-abs(c) for c in self.coeffs), self.coeffs, self.rhs, self.rel)


def _terms(terms) -> str:
    out = []
    for k, (name, c) in enumerate(terms):
        coef = "" if c == 1 else f"{fraction_str(c)} "
        out.append(f"{coef}{name}" if k == 0 else f"+ {coef}{name}")
    return " ".join(out)


@dataclass(frozen=True)
class ConstraintSystem:
    """A conjunction of constraints over one VariableSpace."""

    space: VariableSpace
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        width = len(self.space)
        for c in self.constraints:
            if len(c.coeffs) != width:
                raise ValueError("constraint width does not match the variable space")

    def __len__(self):
        return len(self.constraints)

    def __iter__(self):
        return iter(self.constraints)

    @property
    def equalities(self) -> list[Constraint]:
        return [c for c in self.constraints if c.rel == EQ]

    @property
    def inequalities(self) -> list[Constraint]:
        return [c for c in self.constraints if c.rel != EQ]

    @property
    def has_strict(self) -> bool:
        return any(c.rel == LT for c in self.constraints)

    def add(self, *constraints: Constraint) -> ConstraintSystem:
        return ConstraintSystem(self.space, self.constraints + tuple(constraints))

    def add_dict(self, coeffs: Mapping[str, object], rel: str, rhs, name: str = "") -> ConstraintSystem:
        return self.add(Constraint.from_dict(self.space, coeffs, rel, rhs, name))

    def closure(self) -> ConstraintSystem:
        return ConstraintSystem(self.space, tuple(c.closure() for c in self.constraints))

    def without(self, index: int) -> ConstraintSystem:
        return ConstraintSystem(self.space, self.constraints[:index] + self.constraints[index + 1:])

    def satisfied_by(self, point: Sequence) -> bool:
        return all(c.satisfied_by(point) for c in self.constraints)

    def point_from_dict(self, values: Mapping[str, object]) -> list[Fraction]:
        pt = [Fraction(0)] * len(self.space)
        for k, v in values.items():
            pt[self.space.index(k)] = as_fraction(v)
        return pt

    def substitute(self, values: Mapping[str, object]) -> ConstraintSystem:
        """Fix some variables to constants; the result lives on the remaining variables."""
        fixed = {self.space.index(k): as_fraction(v) for k, v in values.items()}
        space = VariableSpace(n for i, n in enumerate(self.space.names) if i not in fixed)
        out = []
        for c in self.constraints:
            shift = sum((c.coeffs[i] * v for i, v in fixed.items()), Fraction(0))
            coeffs = [x for i, x in enumerate(c.coeffs) if i not in fixed]
            out.append(Constraint.make(coeffs, c.rel, c.rhs - shift, c.name))
        return ConstraintSystem(space, tuple(out))

    def reorder(self, space: VariableSpace) -> ConstraintSystem:
        """Re-express over ``space``, which must contain every variable used here."""
        out = []
        for c in self.constraints:
            row = [0] * len(space)
            for i, v in enumerate(c.coeffs):
                if v:
                    row[space.index(self.space.names[i])] = v
            out.append(Constraint(tuple(row), c.rhs, c.rel, c.name))
        return ConstraintSystem(space, tuple(out))

    def sorted(self) -> ConstraintSystem:
        return ConstraintSystem(self.space, tuple(sorted(self.constraints, key=Constraint.sort_key)))

    def to_json(self) -> list[dict]:
        return [c.to_json(self.space) for c in self.constraints]

    @classmethod
    def from_json(cls, space: VariableSpace, data: Iterable[Mapping]) -> ConstraintSystem:
        return cls(space, tuple(Constraint.from_json(space, d) for d in data))

    def pretty(self, sep: str = "\n") -> str:
        return sep.join(c.pretty(self.space) for c in self.constraints)


def system_from_dicts(names: Iterable[str], rows: Iterable[tuple]) -> ConstraintSystem:
    """Convenience builder: rows are ``(coeff_dict, rel, rhs)`` with rel in <=, <, =, >=, >."""
    space = VariableSpace(names)
    return ConstraintSystem(space, tuple(Constraint.from_dict(space, *row) for row in rows))
