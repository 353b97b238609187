"""Valuations over bundles, interval candidate sets, and auction instances.

A valuation is a dense table over all 2^m bundles with v({}) = 0 and
nonnegative entries; a pure report is just a valuation. What a player knows
about their own true valuation is an interval box: a closed range
[lo(S), hi(S)] per bundle S. The box's width ceiling is its `delta`, the
instance-level uncertainty parameter; reporting every interval's center is
the canonical low-regret play.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .goods import check_mask

ZERO = Fraction(0)


def _as_fraction_table(m: int, table: Iterable) -> tuple[Fraction, ...]:
    out = tuple(Fraction(x) for x in table)
    if len(out) != 1 << m:
        raise ValueError(f"table has {len(out)} entries, expected {1 << m} for m={m}")
    return out


@dataclass(frozen=True)
class Valuation:
    """A set function over bundles: table[mask] is the value of that bundle."""

    m: int
    table: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", _as_fraction_table(self.m, self.table))
        if self.table[0] != 0:
            raise ValueError("value of the empty bundle must be 0")
        for mask, x in enumerate(self.table):
            if x < 0:
                raise ValueError(f"negative value {x} at bundle mask {mask}")

    @classmethod
    def zero(cls, m: int) -> "Valuation":
        return cls(m, (ZERO,) * (1 << m))

    @classmethod
    def from_pairs(cls, m: int, pairs: Mapping[int, Fraction]) -> "Valuation":
        table = [ZERO] * (1 << m)
        for mask, value in pairs.items():
            table[check_mask(mask, m)] = Fraction(value)
        return cls(m, tuple(table))

    def value(self, mask: int) -> Fraction:
        return self.table[mask]

    def scaled(self, c: Fraction) -> "Valuation":
        c = Fraction(c)
        if c < 0:
            raise ValueError("scale factor must be nonnegative")
        return Valuation(self.m, tuple(x * c for x in self.table))

    def with_value(self, mask: int, value: Fraction) -> "Valuation":
        table = list(self.table)
        table[check_mask(mask, self.m)] = Fraction(value)
        return Valuation(self.m, tuple(table))

    def downset_max(self) -> tuple[Fraction, ...]:
        """best[T] = max value over all submasks of T (including T)."""
        best = list(self.table)
        for g in range(self.m):
            bit = 1 << g
            for t in range(1 << self.m):
                if t & bit and best[t ^ bit] > best[t]:
                    best[t] = best[t ^ bit]
        return tuple(best)

    def peaked_sets(self) -> tuple[int, ...]:
        """Bundles whose value strictly exceeds every proper sub-bundle's.

        These are exactly the bundles the mechanism can award to this report:
        at equal reported welfare the tie-break hands over the smaller bundle,
        so a bundle tied with one of its subsets is never won.
        """
        best = self.downset_max()
        out = [0]
        for t in range(1, 1 << self.m):
            # Every proper submask of t is a submask of t minus one bit.
            sub = t
            ok = True
            while sub:
                low = sub & -sub
                if best[t ^ low] >= self.table[t]:
                    ok = False
                    break
                sub ^= low
            if ok:
                out.append(t)
        return tuple(out)

    def is_monotone(self) -> bool:
        for t in range(1 << self.m):
            sub = t
            while sub:
                low = sub & -sub
                if self.table[t ^ low] > self.table[t]:
                    return False
                sub ^= low
        return True


@dataclass(frozen=True)
class CandidateBox:
    """Per-bundle closed intervals [lo(S), hi(S)] describing what a player
    considers possible for their own valuation. Interval ends are attainable,
    so suprema over the box are maxima."""

    lo: Valuation
    hi: Valuation

    def __post_init__(self):
        if self.lo.m != self.hi.m:
            raise ValueError("lo/hi dimension mismatch")
        for mask in range(1 << self.lo.m):
            if self.lo.table[mask] > self.hi.table[mask]:
                raise ValueError(
                    f"lo > hi at bundle mask {mask}: "
                    f"{self.lo.table[mask]} > {self.hi.table[mask]}"
                )

    @property
    def m(self) -> int:
        return self.lo.m

    @classmethod
    def exact(cls, theta: Valuation) -> "CandidateBox":
        return cls(theta, theta)

    def spread(self, mask: int) -> Fraction:
        """Width hi(S) - lo(S) of one bundle's interval."""
        return self.hi.table[mask] - self.lo.table[mask]

    def delta(self) -> Fraction:
        """Largest interval width over all bundles."""
        return max(self.spread(mask) for mask in range(1 << self.m))

    def midpoint(self) -> Valuation:
        """The center-of-every-interval report."""
        half = Fraction(1, 2)
        return Valuation(
            self.m,
            tuple((lo + hi) * half for lo, hi in zip(self.lo.table, self.hi.table)),
        )

    def contains(self, theta: Valuation) -> bool:
        return theta.m == self.m and all(
            self.lo.table[s] <= theta.table[s] <= self.hi.table[s]
            for s in range(1 << self.m)
        )

    def corner(self, hi_at: int | None = None) -> Valuation:
        """The lo-corner of the box, with hi substituted at one bundle."""
        table = list(self.lo.table)
        if hi_at is not None:
            table[check_mask(hi_at, self.m)] = self.hi.table[hi_at]
        return Valuation(self.m, tuple(table))

    def scaled(self, c: Fraction) -> "CandidateBox":
        return CandidateBox(self.lo.scaled(c), self.hi.scaled(c))


@dataclass(frozen=True)
class AuctionInstance:
    """A full auction problem: one candidate box and one true valuation per
    player, plus (optionally) the reports actually submitted."""

    m: int
    n: int
    boxes: tuple[CandidateBox, ...]
    truths: tuple[Valuation, ...]
    reports: tuple[Valuation, ...] | None = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need at least one good")
        if self.n < 1:
            raise ValueError("need at least one player")
        if len(self.boxes) != self.n or len(self.truths) != self.n:
            raise ValueError("boxes/truths must have one entry per player")
        for i, (box, theta) in enumerate(zip(self.boxes, self.truths)):
            if box.m != self.m or theta.m != self.m:
                raise ValueError(f"player {i + 1}: dimension mismatch")
            if not box.contains(theta):
                raise ValueError(f"player {i + 1}: truth outside candidate box")
        if self.reports is not None:
            if len(self.reports) != self.n:
                raise ValueError("reports must have one entry per player")
            for i, rep in enumerate(self.reports):
                if rep.m != self.m:
                    raise ValueError(f"player {i + 1}: report dimension mismatch")

    def delta(self) -> Fraction:
        return max(box.delta() for box in self.boxes)

    def midpoints(self) -> tuple[Valuation, ...]:
        return tuple(box.midpoint() for box in self.boxes)

    def with_reports(self, reports: Sequence[Valuation]) -> "AuctionInstance":
        return AuctionInstance(self.m, self.n, self.boxes, self.truths, tuple(reports))
