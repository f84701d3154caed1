"""Points of Baire space as memoized query-able streams.

A point is a total rule position -> natural together with a write-once memo,
so repeated queries are cheap and deterministic.  Equality of points is only
semi-decidable; every comparison takes an explicit depth budget and reports
BelowThreshold instead of guessing equality.  Points that are known to be
eventually periodic carry a tail hint, which makes their pairwise distance
exactly computable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Optional, Sequence, Union

from .coding import decode, pair_code


class BairePoint:
    """A lazily evaluated infinite sequence of naturals.

    tail_hint, when present, is a pair (preperiod_len, period_len) promising
    that the sequence is periodic with the given period length from the given
    position on.  The hint is metadata used by exact comparisons; the rule
    itself is always the source of truth.
    """

    __slots__ = ("_rule", "_memo", "tail_hint", "label")

    def __init__(
        self,
        rule: Callable[[int], int],
        tail_hint: Optional[tuple[int, int]] = None,
        label: str = "",
    ):
        self._rule = rule
        self._memo: dict[int, int] = {}
        self.tail_hint = tail_hint
        self.label = label

    def __call__(self, n: int) -> int:
        memo = self._memo
        v = memo.get(n)
        if v is None:
            v = self._rule(n)
            memo[n] = v
        return v

    def prefix(self, n: int) -> tuple[int, ...]:
        return tuple(self(i) for i in range(n))

    def __repr__(self) -> str:
        shown = ",".join(str(self(i)) for i in range(6))
        name = self.label or "point"
        return f"<{name} {shown},...>"


def query(p: BairePoint, n: int) -> int:
    """Value of the point at position n (memoized)."""
    return p(n)


def from_rule(rule: Callable[[int], int], label: str = "") -> BairePoint:
    return BairePoint(rule, label=label)


def eventually_periodic(pre: Sequence[int], period: Sequence[int], label: str = "") -> BairePoint:
    """The point pre[0], ..., pre[-1], period[0], period[1], ... (repeating)."""
    if not period:
        raise ValueError("period must be nonempty")
    pre_t = tuple(pre)
    per_t = tuple(period)
    np = len(pre_t)
    q = len(per_t)

    def rule(n: int) -> int:
        return pre_t[n] if n < np else per_t[(n - np) % q]

    return BairePoint(rule, tail_hint=(np, q), label=label)


def constant(v: int, label: str = "") -> BairePoint:
    return eventually_periodic((), (v,), label=label or f"const{v}")


@dataclass(frozen=True)
class Exact:
    """A decided distance: the least disagreement was found."""

    value: Fraction


@dataclass(frozen=True)
class BelowThreshold:
    """No disagreement within the budget; the true distance is < threshold."""

    threshold: Fraction


DistanceResult = Union[Exact, BelowThreshold]


def distance(a: BairePoint, b: BairePoint, budget: int) -> DistanceResult:
    """First-disagreement distance, scanned up to the budget.

    Exact(1/(k+1)) for the least k < budget with a(k) != b(k); otherwise
    BelowThreshold(1/(budget+1)).  Equality is never decided.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    for k in range(budget):
        if a(k) != b(k):
            return Exact(Fraction(1, k + 1))
    return BelowThreshold(Fraction(1, budget + 1))


def exact_distance(a: BairePoint, b: BairePoint) -> Fraction:
    """Exact first-disagreement distance of two eventually periodic points.

    Requires tail hints on both points: the scan bound
    max(preperiods) + lcm(periods) is provably sufficient, so a clean pass
    certifies genuine equality (distance 0).
    """
    if a.tail_hint is None or b.tail_hint is None:
        raise ValueError("exact_distance needs tail hints on both points")
    bound = max(a.tail_hint[0], b.tail_hint[0]) + lcm(a.tail_hint[1], b.tail_hint[1])
    for k in range(bound):
        if a(k) != b(k):
            return Fraction(1, k + 1)
    return Fraction(0)


def in_basic_nbhd(a: BairePoint, s: int) -> bool:
    """Whether a lies in the basic neighborhood of the coded finite sequence."""
    u = decode(s)
    return all(a(i) == u[i] for i in range(len(u)))


def pair_points(a: BairePoint, b: BairePoint) -> BairePoint:
    """The point g with g(pair_code(0,n)) = a(n), g(pair_code(1,n)) = b(n).

    Positions that do not code a two-entry sequence starting with 0 or 1
    are 0.
    """

    def rule(t: int) -> int:
        u = decode(t)
        if len(u) == 2 and u[0] in (0, 1):
            return a(u[1]) if u[0] == 0 else b(u[1])
        return 0

    return BairePoint(rule, label="pair")


def slice_point(g: BairePoint, i: int) -> BairePoint:
    """The i-th component of g under the pairing convention."""
    return BairePoint(lambda n: g(pair_code(i, n)), label=f"slice{i}")
