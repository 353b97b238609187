"""Seeded random instance generation.

Instances are pure functions of their parameters and a seed: per-object seeds
are derived by hashing, so regenerating any part in any order gives identical
results. All drawn values live on a decimal grid (default quarter-unit steps)
so scenario files round-trip exactly.
"""
from __future__ import annotations

import hashlib
import random
from fractions import Fraction

from .model import AuctionInstance, CandidateBox, Valuation, ZERO

DEFAULT_STEP = Fraction(1, 4)
DEFAULT_VALUE_CAP = Fraction(20)


def derive_seed(master: int, *parts) -> int:
    """Stable sub-seed: independent of Python's hash randomization."""
    text = ":".join([str(master), *map(str, parts)])
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


def _draw_valuation(rng: random.Random, m: int, step: Fraction,
                    cap: Fraction, monotone: bool, additive: bool) -> Valuation:
    levels = int(cap / step)
    table = [ZERO] * (1 << m)
    if additive:
        # Additive valuations are monotone by construction.
        per_good_cap = max(1, levels // max(1, m))
        singles = [step * rng.randint(0, per_good_cap) for _ in range(m)]
        for t in range(1, 1 << m):
            table[t] = sum(
                (singles[g] for g in range(m) if t >> g & 1), start=ZERO
            )
        return Valuation(m, tuple(table))
    if monotone:
        # Build upward so v(S) <= v(T) for S subset of T.
        headroom = max(1, levels // max(1, m))
        for t in range(1, 1 << m):
            floor = ZERO
            sub = t
            while sub:
                low = sub & -sub
                if table[t ^ low] > floor:
                    floor = table[t ^ low]
                sub ^= low
            table[t] = floor + step * rng.randint(0, headroom)
        return Valuation(m, tuple(table))
    for t in range(1, 1 << m):
        table[t] = step * rng.randint(0, levels)
    return Valuation(m, tuple(table))


def gen_box(m: int, delta: Fraction, seed: int, *,
            step: Fraction = DEFAULT_STEP, value_cap: Fraction = DEFAULT_VALUE_CAP,
            monotone: bool = False, additive: bool = False,
            ) -> tuple[CandidateBox, Valuation]:
    """Draw a true valuation and an interval box around it with every
    interval's width at most `delta`. Returns (box, truth)."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    rng = random.Random(derive_seed(seed, "box"))
    truth = _draw_valuation(rng, m, step, value_cap, monotone, additive)
    width_levels = int(delta / step)
    lo = [ZERO] * (1 << m)
    hi = [ZERO] * (1 << m)
    for t in range(1, 1 << m):
        width = step * rng.randint(0, width_levels)
        below = step * rng.randint(0, int(width / step))
        lo[t] = max(ZERO, truth.table[t] - below)
        hi[t] = lo[t] + width
    box = CandidateBox(Valuation(m, tuple(lo)), Valuation(m, tuple(hi)))
    assert box.contains(truth)
    return box, truth


def gen_instance(m: int, n: int, delta: Fraction, seed: int, *,
                 monotone: bool = False, additive: bool = False,
                 step: Fraction = DEFAULT_STEP,
                 value_cap: Fraction = DEFAULT_VALUE_CAP) -> AuctionInstance:
    """Generate a full instance: per-player truths inside per-player boxes,
    each box delta-approximate. Deterministic in (parameters, seed)."""
    if m < 1:
        raise ValueError("need m >= 1 goods")
    if n < 2:
        raise ValueError("need n >= 2 players")
    boxes = []
    truths = []
    for i in range(n):
        box, truth = gen_box(
            m, delta, derive_seed(seed, "player", i),
            step=step, value_cap=value_cap, monotone=monotone, additive=additive,
        )
        boxes.append(box)
        truths.append(truth)
    return AuctionInstance(m, n, tuple(boxes), tuple(truths))
