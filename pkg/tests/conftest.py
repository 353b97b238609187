"""Shared test fixtures and independent reference oracles.

The references here deliberately avoid the package's own algorithms:
winner determination by enumerating every good-to-player assignment, and the
per-pair curve optimum by Bellman-Ford on the difference-constraint graph.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from kvcg import Allocation, CandidateBox, Valuation
from kvcg.goods import popcount


def M(text: str) -> Fraction:
    """Exact decimal literal."""
    from kvcg import parse_money
    return parse_money(text)


def valuation(m: int, **by_mask) -> Valuation:
    """Valuation from mask=value keywords, e.g. valuation(2, m1='3', m3='5')."""
    pairs = {int(k[1:]): M(v) for k, v in by_mask.items()}
    return Valuation.from_pairs(m, pairs)


def box1(x, width) -> CandidateBox:
    """Single-good box [x, x+width]."""
    lo = Valuation.from_pairs(1, {1: Fraction(x)})
    hi = Valuation.from_pairs(1, {1: Fraction(x) + Fraction(width)})
    return CandidateBox(lo, hi)


def brute_force_best(profile) -> tuple[Fraction, Allocation]:
    """Independent winner determination: enumerate all (n+1)^m assignments
    of goods to players (or to nobody) and apply the canonical order."""
    n = len(profile)
    m = profile[0].m
    best_key = None
    best_masks = None
    for assignment in itertools.product(range(n + 1), repeat=m):
        masks = [0] * n
        for good, owner in enumerate(assignment):
            if owner > 0:
                masks[owner - 1] |= 1 << good
        welfare = sum(
            (profile[i].table[masks[i]] for i in range(n)), start=Fraction(0))
        cards = sum(popcount(x) for x in masks)
        key = (-welfare, cards, tuple(masks))
        if best_key is None or key < best_key:
            best_key = key
            best_masks = tuple(masks)
    return -best_key[0], Allocation(m, best_masks)


def bellman_ford_pair(v: Valuation, s1: int, s2: int) -> Fraction | None:
    """Independent optimum of max w(s1) - w(s2) over curves against which the
    report wins s2: shortest path s2 -> s1 in the constraint graph.

    Edges: s2 -> S with weight v(s2) - v(S) (the winner constraints) and
    S -> S+good with weight 0 (monotonicity). Returns None when the system
    has a negative cycle (no curve lets the report win s2).
    """
    m = v.m
    size = 1 << m
    edges = []
    for s in range(size):
        if s != s2:
            edges.append((s2, s, v.table[s2] - v.table[s]))
        for g in range(m):
            if not s >> g & 1:
                edges.append((s, s | 1 << g, Fraction(0)))
    INF = None
    dist: list[Fraction | None] = [INF] * size
    dist[s2] = Fraction(0)
    for _ in range(size):
        changed = False
        for a, b, w in edges:
            if dist[a] is not None and (dist[b] is None or dist[a] + w < dist[b]):
                dist[b] = dist[a] + w
                changed = True
        if not changed:
            break
    else:
        # still relaxing after V rounds: negative cycle
        for a, b, w in edges:
            if dist[a] is not None and (dist[b] is None or dist[a] + w < dist[b]):
                return None
    return dist[s1]


def reference_exact_regret(box: CandidateBox, v: Valuation) -> Fraction:
    """Independent regret supremum: Bellman-Ford per winnable bundle pair."""
    best = Fraction(0)
    size = 1 << v.m
    for s2 in range(size):
        if any(v.table[t] >= v.table[s2] for t in _proper(s2)):
            continue  # not winnable under the canonical tie-break
        for s1 in range(size):
            d = bellman_ford_pair(v, s1, s2)
            if d is None:
                continue
            const = (box.hi.table[s1] - box.lo.table[s2]
                     if s1 != s2 else Fraction(0))
            best = max(best, const + d)
    return best


def _proper(mask: int):
    if mask == 0:
        return
    sub = (mask - 1) & mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def random_valuation(rng: random.Random, m: int, levels: int = 60,
                     den: int = 4) -> Valuation:
    table = [Fraction(0)] + [
        Fraction(rng.randint(0, levels), den) for _ in range((1 << m) - 1)
    ]
    return Valuation(m, tuple(table))


@pytest.fixture
def rng():
    return random.Random(20240401)
