"""Opponent behavior compressed to a welfare curve.

Under VCG the opponents influence a player only through one set function:
w(S) = the best welfare the opponents can realize when that player walks away
with bundle S. Any such curve is non-increasing in S with w(all goods) = 0,
and conversely every curve of that shape is realizable by a single opponent
whose valuation is the curve read on complements. That reduction makes the
adversary in the regret computation a single curve, independent of how many
opponents there are.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .goods import complement, full_mask
from .mechanism import max_welfare
from .model import Valuation, ZERO


@dataclass(frozen=True)
class WelfareCurve:
    """w(S) = opponents' best welfare when the player keeps bundle S."""

    m: int
    table: tuple[Fraction, ...]

    def __post_init__(self):
        table = tuple(Fraction(x) for x in self.table)
        object.__setattr__(self, "table", table)
        if len(table) != 1 << self.m:
            raise ValueError("curve table has the wrong length")
        if table[full_mask(self.m)] != 0:
            raise ValueError("curve must be 0 when the player takes everything")
        for s, x in enumerate(table):
            if x < 0:
                raise ValueError(f"curve negative at mask {s}")
            for g in range(self.m):
                if not s >> g & 1:
                    sup = s | 1 << g
                    if table[sup] > table[s]:
                        raise ValueError(
                            f"curve increases from mask {s} to {sup}")

    @classmethod
    def zero(cls, m: int) -> "WelfareCurve":
        return cls(m, (ZERO,) * (1 << m))

    def value(self, mask: int) -> Fraction:
        return self.table[mask]


def realize_curve(curve: WelfareCurve, n_opponents: int,
                  j: int = 0) -> tuple[Valuation, ...]:
    """Opponent reports realizing `curve` exactly.

    Opponent j values every bundle X at curve(complement of X); the others bid
    zero. For every bundle S the opponents' best welfare on the goods outside
    S is then exactly curve(S).
    """
    if n_opponents < 1:
        raise ValueError("need at least one opponent")
    if not 0 <= j < n_opponents:
        raise ValueError("designated opponent index out of range")
    m = curve.m
    table = [ZERO] * (1 << m)
    for x in range(1, 1 << m):
        table[x] = curve.table[complement(x, m)]
    chosen = Valuation(m, tuple(table))
    return tuple(
        chosen if k == j else Valuation.zero(m) for k in range(n_opponents)
    )


def curve_of_opponents(opponents: Sequence[Valuation], m: int) -> WelfareCurve:
    """Measure the welfare curve a concrete opponent profile induces."""
    table = []
    for s in range(1 << m):
        if not opponents:
            table.append(ZERO)
            continue
        value, _ = max_welfare(opponents, ground=complement(s, m))
        table.append(value)
    return WelfareCurve(m, tuple(table))
