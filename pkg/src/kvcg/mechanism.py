"""Welfare maximization and the VCG outcome.

The winner determination problem is solved exactly by a subset DP over
players. Ties are resolved canonically: highest reported welfare, then the
fewest assigned goods (so goods of zero marginal use stay unassigned, and a
winner's bundle is always strictly better than any of its proper subsets),
then the lexicographically smallest tuple of bundle masks. Prices charge each
winner the externality they impose on the others.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import kernels
from .goods import full_mask, popcount
from .model import Valuation


@dataclass(frozen=True)
class Allocation:
    """One bundle mask per player; unassigned goods are implicit."""

    m: int
    masks: tuple[int, ...]

    def __post_init__(self):
        seen = 0
        for mask in self.masks:
            if mask < 0 or mask > full_mask(self.m):
                raise ValueError(f"bundle mask {mask} out of range for m={self.m}")
            if mask & seen:
                raise ValueError("allocation assigns a good twice")
            seen |= mask
        object.__setattr__(self, "masks", tuple(self.masks))

    @property
    def unassigned(self) -> int:
        used = 0
        for mask in self.masks:
            used |= mask
        return full_mask(self.m) & ~used

    def total_assigned(self) -> int:
        return sum(popcount(mask) for mask in self.masks)


@dataclass(frozen=True)
class Outcome:
    allocation: Allocation
    prices: tuple[Fraction, ...]


def _check_profile(profile: Sequence[Valuation]) -> int:
    if not profile:
        raise ValueError("profile must contain at least one player")
    m = profile[0].m
    for v in profile:
        if v.m != m:
            raise ValueError("profile valuations disagree on the good count")
    return m


def _scaled_tables(profile: Sequence[Valuation]) -> tuple[list[list[int]], int]:
    den = 1
    for v in profile:
        for x in v.table:
            den = math.lcm(den, x.denominator)
    values = [
        [x.numerator * (den // x.denominator) for x in v.table] for v in profile
    ]
    return values, den


def social_welfare(profile: Sequence[Valuation], allocation: Allocation) -> Fraction:
    """Sum of each player's value for their assigned bundle."""
    m = _check_profile(profile)
    if allocation.m != m or len(allocation.masks) != len(profile):
        raise ValueError("allocation does not match the profile")
    return sum(
        (v.table[mask] for v, mask in zip(profile, allocation.masks)),
        start=Fraction(0),
    )


def max_welfare(profile: Sequence[Valuation], *,
                ground: int | None = None) -> tuple[Fraction, Allocation]:
    """Maximum reported welfare and its canonical allocation.

    `ground` restricts the goods available for assignment (used when pricing
    and when evaluating opponents' best use of a residual bundle).
    """
    m = _check_profile(profile)
    if ground is None:
        ground = full_mask(m)
    values, den = _scaled_tables(profile)
    welfare, _cards, masks = kernels.wd_best(values, ground)
    return Fraction(welfare, den), Allocation(m, tuple(masks))


def msw_without(profile: Sequence[Valuation], i: int) -> Fraction:
    """Max welfare of everyone but player i, over all the goods.

    With a single player the opponent set is empty and the max is 0.
    """
    rest = [v for k, v in enumerate(profile) if k != i]
    if not rest:
        return Fraction(0)
    value, _ = max_welfare(rest)
    return value


def vcg_outcome(profile: Sequence[Valuation]) -> Outcome:
    """Welfare-maximizing allocation plus externality prices."""
    if len(profile) < 2:
        raise ValueError("the auction needs at least two players")
    _, allocation = max_welfare(profile)
    prices = []
    for i in range(len(profile)):
        others = sum(
            (v.table[mask] for k, (v, mask) in
             enumerate(zip(profile, allocation.masks)) if k != i),
            start=Fraction(0),
        )
        prices.append(msw_without(profile, i) - others)
    return Outcome(allocation, tuple(prices))


def utility(theta_i: Valuation, i: int, outcome: Outcome) -> Fraction:
    """Quasi-linear payoff: value of the won bundle minus the price paid."""
    return theta_i.table[outcome.allocation.masks[i]] - outcome.prices[i]
