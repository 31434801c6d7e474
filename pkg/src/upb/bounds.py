"""Known values and lower bounds for the minimum UPB size.

``f_N`` is the trivial bound sum(d_j - 1) + 1. :func:`f_m` walks the rule
cascade (bipartite qubit case, parity rule, all-qubit family, table of
sporadic values, the two general theorems) and reports which rule fired.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

from upb.errors import DomainError

__all__ = [
    "SystemSpec",
    "Rule",
    "BoundReport",
    "f_N",
    "f_m",
    "theorem1_applicable",
    "theorem1_b",
    "theorem2_k",
    "open_case",
    "KNOWN_TABLE",
]


@dataclass(frozen=True)
class SystemSpec:
    """Local dimensions, sorted ascending.

    ``perm[i]`` is the position in the caller's original ordering of the
    party stored at sorted position ``i``.
    """

    dims: tuple[int, ...]
    perm: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if len(self.dims) < 2:
            raise DomainError("need at least two parties")
        if any(int(d) != d or d < 2 for d in self.dims):
            raise DomainError(f"every local dimension must be an integer >= 2, got {self.dims}")
        if list(self.dims) != sorted(self.dims):
            raise DomainError("dims must be sorted; use SystemSpec.of() to sort")
        if not self.perm:
            object.__setattr__(self, "perm", tuple(range(len(self.dims))))
        elif sorted(self.perm) != list(range(len(self.dims))):
            raise DomainError("perm must be a permutation of the party indices")

    @classmethod
    def of(cls, dims: Iterable[int]) -> "SystemSpec":
        original = [int(d) for d in dims]
        order = sorted(range(len(original)), key=lambda i: (original[i], i))
        return cls(tuple(original[i] for i in order), tuple(order))

    @property
    def p(self) -> int:
        return len(self.dims)

    @property
    def original_dims(self) -> tuple[int, ...]:
        out = [0] * self.p
        for sorted_pos, orig_pos in enumerate(self.perm):
            out[orig_pos] = self.dims[sorted_pos]
        return tuple(out)


class Rule(str, enum.Enum):
    CASE1 = "Case1"
    CASE2 = "Case2"
    CASE3_QUBITS = "Case3_qubits"
    CASE4_TABLE = "Case4_table"
    THEOREM1 = "Theorem1"
    THEOREM2 = "Theorem2"
    UNKNOWN = "Unknown"


CITATIONS = {
    Rule.CASE1: "min(d1,d2) = 2 bipartite: f_m = d1*d2",
    Rule.CASE2: "f_m = f_N iff not case 1 and (f_N even or all d_j odd)",
    Rule.CASE3_QUBITS: "p qubits with p = 2 mod 4: f_m = p + 2",
    Rule.CASE4_TABLE: "sporadic known value",
    Rule.THEOREM1: "d_p - 1 >= sum_{j<p}(d_j - 1) >= 3: f_m = f_N + 1",
    Rule.THEOREM2: "(2,2,4k+1): f_m = f_N + 1",
    Rule.UNKNOWN: "open: only f_m >= f_N + 1 is known",
}

KNOWN_TABLE = {
    (4, 4): 8,
    (2, 2, 3): 6,
    (2, 2, 5): 8,
    (2, 2, 2, 2): 6,
    (2, 2, 2, 4): 8,
    (2, 2, 2, 2, 5): 10,
}


@dataclass(frozen=True)
class BoundReport:
    f_N: int
    value: int
    exact: bool
    rule: Rule
    note: str = ""

    def __post_init__(self):
        if self.exact and self.value < self.f_N:
            raise DomainError("an exact value cannot be below f_N")
        if not self.exact and self.value not in (self.f_N, self.f_N + 1):
            raise DomainError("a lower bound must be f_N or f_N + 1")

    @property
    def status(self) -> str:
        return "Exact" if self.exact else "LowerBoundOnly"

    @property
    def citation(self) -> str:
        return CITATIONS[self.rule]

    def as_dict(self) -> dict:
        return {
            "f_N": self.f_N,
            "f_m": {"status": self.status, "value": self.value},
            "rule": self.rule.value,
            "citation": self.citation,
            "note": self.note,
        }

    def __str__(self):
        return f"{self.status}({self.value})"


def _spec(spec) -> SystemSpec:
    return spec if isinstance(spec, SystemSpec) else SystemSpec.of(spec)


def f_N(spec) -> int:
    spec = _spec(spec)
    return sum(d - 1 for d in spec.dims) + 1


def _case1(spec: SystemSpec) -> bool:
    return spec.p == 2 and spec.dims[0] == 2


def _case2(spec: SystemSpec) -> bool:
    return not _case1(spec) and (f_N(spec) % 2 == 0 or all(d % 2 for d in spec.dims))


def _case3(spec: SystemSpec) -> bool:
    return all(d == 2 for d in spec.dims) and spec.p % 4 == 2


def theorem1_applicable(spec) -> tuple[bool, str]:
    """Check the hypotheses of the general theorem; the string names the first failure."""
    spec = _spec(spec)
    if _case1(spec):
        return False, "case (1) holds"
    if _case2(spec):
        return False, "case (2) holds"
    largest = spec.dims[-1] - 1
    rest = sum(d - 1 for d in spec.dims[:-1])
    if largest < rest:
        return False, f"d_p-1 = {largest} < sum_{{j<p}}(d_j-1) = {rest}"
    if rest < 3:
        return False, f"sum_{{j<p}}(d_j-1) = {rest} < 3"
    return True, "all hypotheses hold"


def theorem1_b(spec) -> int:
    """Half the gap between d_p - 1 and the other parties' total."""
    spec = _spec(spec)
    gap = (spec.dims[-1] - 1) - sum(d - 1 for d in spec.dims[:-1])
    if gap < 0 or gap % 2:
        raise DomainError(f"gap {gap} is not a nonnegative even integer")
    return gap // 2


def theorem2_k(spec) -> int | None:
    """k when dims are (2, 2, 4k+1) with k >= 1, else None."""
    spec = _spec(spec)
    if spec.p == 3 and spec.dims[:2] == (2, 2) and spec.dims[2] % 4 == 1 and spec.dims[2] >= 5:
        return (spec.dims[2] - 1) // 4
    return None


def open_case(spec) -> str:
    """Describe which known open family the dims belong to, if any."""
    spec = _spec(spec)
    d = spec.dims
    if spec.p == 3 and d[:2] == (2, 2) and d[2] % 4 == 3 and d[2] >= 7:
        return "open case (1): (2,2,4k-1) with k >= 2"
    if all(x == 2 for x in d) and spec.p % 4 == 0:
        return "open case (2): 4k qubits with k >= 2"
    if d == (3, 4, 4):
        return "open case (3): (3,4,4), the smallest unsolved tripartite case"
    return "no known result fixes f_m here"


def f_m(spec) -> BoundReport:
    """Exact value or lower bound of the minimum UPB size, with the governing rule."""
    spec = _spec(spec)
    fn = f_N(spec)
    if _case1(spec):
        return BoundReport(fn, spec.dims[0] * spec.dims[1], True, Rule.CASE1)
    if _case2(spec):
        return BoundReport(fn, fn, True, Rule.CASE2)
    if _case3(spec):
        return BoundReport(fn, spec.p + 2, True, Rule.CASE3_QUBITS)
    if spec.dims in KNOWN_TABLE:
        return BoundReport(fn, KNOWN_TABLE[spec.dims], True, Rule.CASE4_TABLE)
    if theorem1_applicable(spec)[0]:
        return BoundReport(fn, fn + 1, True, Rule.THEOREM1)
    if theorem2_k(spec) is not None:
        return BoundReport(fn, fn + 1, True, Rule.THEOREM2)
    # f_N itself is excluded by the parity rule failing
    return BoundReport(fn, fn + 1, False, Rule.UNKNOWN, open_case(spec))
