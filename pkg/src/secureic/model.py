"""Secure index coding problem instances.

An instance is written ``(1|-),(2|3),(3|2);(e|1)``: receiver ``i`` wants
message ``i`` and knows the messages listed after the bar, and the
eavesdropper ``e`` knows the messages in its own set.  Message indices are
1-based everywhere in the public API.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property

MAX_ENUMERATE_N = 5


class ParseError(ValueError):
    """Raised for malformed or invalid problem strings."""


@dataclass(frozen=True)
class ProblemInstance:
    """Receivers ``(i|A_i)`` for ``i = 1..n`` plus an eavesdropper ``(e|A_e)``."""

    n: int
    side_info: tuple[frozenset[int], ...]
    eavesdropper: frozenset[int]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        side_info = tuple(frozenset(a) for a in self.side_info)
        object.__setattr__(self, "side_info", side_info)
        object.__setattr__(self, "eavesdropper", frozenset(self.eavesdropper))
        if len(side_info) != self.n:
            raise ValueError(f"expected {self.n} side-information sets, got {len(side_info)}")
        full = self.messages
        for i, a in enumerate(side_info, start=1):
            if not a <= full:
                raise ValueError(f"A_{i} = {sorted(a)} is not a subset of [{self.n}]")
            if i in a:
                raise ValueError(f"receiver {i} cannot already know message {i}")
        if not self.eavesdropper <= full:
            raise ValueError("A_e must be a subset of [n]")
        if self.eavesdropper == full:
            raise ValueError("A_e must be a strict subset of [n]")

    @classmethod
    def from_lists(cls, side_info, eavesdropper=()) -> ProblemInstance:
        return cls(len(side_info), tuple(frozenset(a) for a in side_info), frozenset(eavesdropper))

    @property
    def messages(self) -> frozenset[int]:
        return frozenset(range(1, self.n + 1))

    def A(self, i: int) -> frozenset[int]:
        return self.side_info[i - 1]

    def interfering(self, i: int) -> frozenset[int]:
        """B_i = [n] minus (A_i and i)."""
        return self.messages - self.side_info[i - 1] - {i}

    @property
    def unknown_to_eavesdropper(self) -> frozenset[int]:
        """A_e^c, the messages that must stay hidden."""
        return self.messages - self.eavesdropper

    def permute(self, perm: dict[int, int]) -> ProblemInstance:
        """Relabel messages: receiver ``perm[i]`` gets ``perm(A_i)``."""
        side = [frozenset()] * self.n
        for i in range(1, self.n + 1):
            side[perm[i] - 1] = frozenset(perm[j] for j in self.side_info[i - 1])
        return ProblemInstance(self.n, tuple(side), frozenset(perm[j] for j in self.eavesdropper))

    def without_eavesdropper(self) -> ProblemInstance:
        return ProblemInstance(self.n, self.side_info, frozenset())

    def render(self) -> str:
        receivers = ",".join(f"({i}|{_render_set(a)})" for i, a in enumerate(self.side_info, start=1))
        return f"{receivers};(e|{_render_set(self.eavesdropper)})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "side_info": [sorted(a) for a in self.side_info],
            "eavesdropper": sorted(self.eavesdropper),
        }

    @classmethod
    def from_json(cls, data: dict) -> ProblemInstance:
        return cls.from_lists(data["side_info"], data["eavesdropper"])

    @cached_property
    def label(self) -> str:
        return canonicalize(self)

    def __str__(self) -> str:
        return self.render()


def _render_set(s) -> str:
    return ",".join(str(j) for j in sorted(s)) if s else "-"


_RECEIVER = re.compile(r"\((\d+|e)\|([^()|]*)\)")


def _parse_set(text: str, where: str) -> frozenset[int]:
    text = text.strip()
    if text == "-" or text == "":
        return frozenset()
    items = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok.isdigit():
            raise ParseError(f"bad index {tok!r} in {where}")
        items.append(int(tok))
    if len(set(items)) != len(items):
        raise ParseError(f"repeated index in {where}")
    return frozenset(items)


def parse_instance(text: str) -> ProblemInstance:
    """Parse ``(1|2),(2|1);(e|-)``-style notation.

    Receivers may be listed in any order, but each of ``1..n`` must appear
    exactly once.  The eavesdropper part is mandatory.
    """
    compact = re.sub(r"\s+", "", text)
    if compact.count(";") != 1:
        raise ParseError("expected exactly one ';' separating receivers from the eavesdropper")
    recv_part, eve_part = compact.split(";")
    eve = _RECEIVER.fullmatch(eve_part)
    if eve is None or eve.group(1) != "e":
        raise ParseError(f"bad eavesdropper clause {eve_part!r}")

    side: dict[int, frozenset[int]] = {}
    pos = 0
    while pos < len(recv_part):
        m = _RECEIVER.match(recv_part, pos)
        if m is None or m.group(1) == "e":
            raise ParseError(f"bad receiver clause at {recv_part[pos:]!r}")
        i = int(m.group(1))
        if i in side:
            raise ParseError(f"receiver {i} listed twice")
        side[i] = _parse_set(m.group(2), f"receiver {i}")
        pos = m.end()
        if pos < len(recv_part):
            if recv_part[pos] != ",":
                raise ParseError(f"expected ',' at {recv_part[pos:]!r}")
            pos += 1
            if pos == len(recv_part):
                raise ParseError("trailing ','")
    if not side:
        raise ParseError("no receivers")
    n = len(side)
    if set(side) != set(range(1, n + 1)):
        raise ParseError(f"receivers must be exactly 1..{n}, got {sorted(side)}")
    try:
        return ProblemInstance(n, tuple(side[i] for i in range(1, n + 1)),
                               _parse_set(eve.group(2), "eavesdropper"))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def is_securely_feasible(p: ProblemInstance) -> bool:
    """False iff some receiver of a protected message knows no more than the eavesdropper."""
    return not any(p.side_info[i - 1] <= p.eavesdropper for i in p.unknown_to_eavesdropper)


def canonicalize(p: ProblemInstance) -> str:
    """Lexicographically smallest rendering over all relabelings of [n]."""
    return min(
        p.permute(dict(zip(range(1, p.n + 1), perm))).render()
        for perm in itertools.permutations(range(1, p.n + 1))
    )


def canonical_instance(p: ProblemInstance) -> ProblemInstance:
    return parse_instance(canonicalize(p))


def _side_info_choices(n: int):
    ground = range(1, n + 1)
    per_receiver = []
    for i in ground:
        others = [j for j in ground if j != i]
        per_receiver.append([frozenset(c) for r in range(len(others) + 1)
                             for c in itertools.combinations(others, r)])
    return itertools.product(*per_receiver)


def _eavesdropper_choices(n: int):
    return [frozenset(c) for r in range(n) for c in itertools.combinations(range(1, n + 1), r)]


def side_info_classes(n: int) -> list[ProblemInstance]:
    """Canonical representatives (with ``A_e`` empty) of the non-secure problems on n messages."""
    perms = [dict(zip(range(1, n + 1), perm)) for perm in itertools.permutations(range(1, n + 1))]
    seen: set[tuple] = set()
    labels: set[str] = set()
    for side in _side_info_choices(n):
        if side in seen:
            continue
        orbit = [ProblemInstance(n, side, frozenset()).permute(pi) for pi in perms]
        seen.update(q.side_info for q in orbit)
        labels.add(min(q.render() for q in orbit))
    return [parse_instance(label) for label in sorted(labels)]


def enumerate_instances(n: int, feasible_only: bool = False,
                        reduce_eavesdropper: bool = False) -> list[ProblemInstance]:
    """List problem instances on n messages.

    By default the receivers' side information is taken up to relabeling and
    every eavesdropper set ``A_e`` is paired with each representative as is;
    this is how Table-style listings count problems (20 securely feasible
    ones for n=3, 833 for n=4).  With ``reduce_eavesdropper`` the whole
    instance, eavesdropper included, is taken up to relabeling instead
    (17 and 730).  Output is sorted by the instances' renderings.
    """
    if not 1 <= n <= MAX_ENUMERATE_N:
        raise ValueError(f"n must be in 1..{MAX_ENUMERATE_N}, got {n}")
    out = []
    for rep in side_info_classes(n):
        for ae in _eavesdropper_choices(n):
            p = ProblemInstance(n, rep.side_info, ae)
            if feasible_only and not is_securely_feasible(p):
                continue
            out.append(p)
    if reduce_eavesdropper:
        out = [parse_instance(label) for label in sorted({canonicalize(p) for p in out})]
    return sorted(out, key=lambda p: p.render())
