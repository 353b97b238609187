"""Worst-case regret of a pure report, with checkable adversary witnesses.

For a report v and a candidate box K, the regret is the supremum over
candidate truths and opponent behavior of (best welfare the truth could have
claimed) minus (welfare actually realized under the report), both scored with
the truth for the player and the opponents' reports for everyone else.

Three routes compute or bound it:

* `regret_structured` replays two hand-built adversaries per bundle (a huge
  bid on the complement plus a calibrated bid on everything) and is a lower
  bound that is tight for a single good.
* `regret_exact_box` is the exact supremum. Opponents collapse to a welfare
  curve, the curve's feasible set per candidate won bundle is a small
  difference-constraint polytope, and a fraction-free rational simplex
  maximizes the loss over it for every ordered bundle pair.
* `regret_bruteforce` greedily simulates box-corner truths against gridded
  curves through the real mechanism: always a lower bound.

Suprema may be approached rather than attained (ties must be broken by an
arbitrarily small bump); certificates carry an `attained` flag and replay
through the real mechanism to within eps of their value.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import kernels
from .curves import WelfareCurve, realize_curve
from .goods import complement, full_mask, popcount
from .mechanism import max_welfare, social_welfare, vcg_outcome
from .model import CandidateBox, Valuation, ZERO


@dataclass(frozen=True)
class RegretCertificate:
    """A regret value plus the adversary that (nearly) realizes it.

    `s1` carries the forgone welfare (the truth is at its interval top
    there), `s2` is the bundle the report wins against the witness curve.
    When `attained` is False the value is a supremum: replaying the witness
    with tie-bump `eps` yields simulated loss >= value - eps_coeff * eps.
    """

    value: Fraction
    witness_theta: Valuation
    witness_curve: WelfareCurve
    s1: int
    s2: int
    attained: bool
    eps_coeff: int = 1
    method: str = "exact"


class OracleCapError(ValueError):
    """Raised when the exact oracle is asked for more goods than its cap."""


def _zero_certificate(box: CandidateBox, v: Valuation, method: str) -> RegretCertificate:
    # Winner against all-zero opponents, under the canonical tie-break.
    best = 0
    for t in range(1, 1 << v.m):
        if (v.table[t], -popcount(t)) > (v.table[best], -popcount(best)):
            best = t
    return RegretCertificate(
        value=ZERO,
        witness_theta=box.corner(),
        witness_curve=WelfareCurve.zero(box.m),
        s1=best,
        s2=best,
        attained=True,
        method=method,
    )


def _spike_curve(m: int, t: int, top: Fraction, inner: Fraction) -> WelfareCurve:
    """Curve worth `inner` on nonempty subsets of t, `top` at the empty
    bundle, 0 elsewhere — the shape induced by one opponent bidding `inner`
    on the complement of t and `top` on everything."""
    table = [ZERO] * (1 << m)
    table[0] = top
    sub = t
    while sub:
        table[sub] = inner
        sub = (sub - 1) & t
        if sub == 0:
            break
    return WelfareCurve(m, tuple(table))


def regret_structured(box: CandidateBox, v: Valuation, n: int) -> RegretCertificate:
    """Lower-bound regret from the two explicit adversary families.

    Family (a), any bundle t: opponents lock the player out, so the truth at
    hi(t) forgoes hi(t) - (best report on a subset of t). Family (b), bundles
    t the report can actually win: the player is made to win t while the
    truth sits at lo(t), losing v(t) - lo(t).
    """
    if n < 2:
        raise ValueError("regret needs at least one opponent")
    m = box.m
    down = v.downset_max()
    huge = Fraction(1) + sum(v.table, start=ZERO) + sum(box.hi.table, start=ZERO)
    best: RegretCertificate | None = None

    for t in range(1, 1 << m):
        h = ZERO if t == full_mask(m) else huge
        loss_a = box.hi.table[t] - down[t]
        if best is None or loss_a > best.value:
            best = RegretCertificate(
                value=loss_a,
                witness_theta=box.corner(hi_at=t),
                witness_curve=_spike_curve(m, t, h + down[t], h),
                s1=t,
                s2=0,
                attained=False,
                method="structured",
            )
    for t in v.peaked_sets():
        if t == 0:
            continue
        h = ZERO if t == full_mask(m) else huge
        loss_b = v.table[t] - box.lo.table[t]
        if best is None or loss_b > best.value:
            best = RegretCertificate(
                value=loss_b,
                witness_theta=box.corner(),
                witness_curve=_spike_curve(m, t, h + v.table[t], h),
                s1=0,
                s2=t,
                attained=False,
                method="structured",
            )
    if best is None or best.value <= 0:
        return _zero_certificate(box, v, "structured")
    return best


def _lp_rows_monotone(m: int) -> tuple[list[list[int]], list[int]]:
    """w(T) <= w(T minus one good) for every bundle; variables are all masks
    except the full bundle (whose curve value is identically 0)."""
    n_vars = (1 << m) - 1
    rows = []
    for t in range(1, n_vars):
        sub = t
        while sub:
            g = sub & -sub
            row = [0] * n_vars
            row[t] = 1
            row[t ^ g] = -1
            rows.append(row)
            sub ^= g
    return rows, [0] * len(rows)


def _lp_pair(m: int, v_scaled: list[int], mono_rows, mono_b,
             s1: int, s2: int) -> tuple[int, list[Fraction], Fraction]:
    """Maximize w(s1) - w(s2) over curves against which the report wins s2."""
    n_vars = (1 << m) - 1
    c = [0] * n_vars
    if s1 != full_mask(m):
        c[s1] += 1
    if s2 != full_mask(m):
        c[s2] -= 1
    rows = [row[:] for row in mono_rows]
    b = list(mono_b)
    for s in range(1 << m):
        if s == s2:
            continue
        row = [0] * n_vars
        if s != full_mask(m):
            row[s] += 1
        if s2 != full_mask(m):
            row[s2] -= 1
        rows.append(row)
        b.append(v_scaled[s2] - v_scaled[s])
    return kernels.lp_solve(c, rows, b)


def regret_exact_box(box: CandidateBox, v: Valuation, n: int, *,
                     m_cap: int = 5) -> RegretCertificate:
    """The exact worst-case regret of report v against box K.

    Enumerates ordered bundle pairs (s1, s2): s1 is where the forgone
    welfare sits, s2 the bundle the report ends up winning. Only bundles
    that strictly beat all their proper subsets under v can be won (the
    tie-break hands ties to the smaller bundle), so s2 ranges over those.
    Per pair, an exact rational simplex maximizes the loss over the curve
    polytope; a one-constraint relaxation prunes pairs that cannot beat the
    best value so far.
    """
    if n < 2:
        raise ValueError("regret needs at least one opponent")
    m = box.m
    if m > m_cap:
        raise OracleCapError(f"m={m} exceeds the oracle cap {m_cap}")
    den = 1
    for x in v.table:
        den = math.lcm(den, x.denominator)
    v_scaled = [int(x * den) for x in v.table]
    mono_rows, mono_b = _lp_rows_monotone(m)

    pairs = []
    for s2 in v.peaked_sets():
        for s1 in range(1 << m):
            if s1 == s2:
                continue
            const = box.hi.table[s1] - box.lo.table[s2]
            bound = const + v.table[s2] - v.table[s1]
            if bound > 0:
                pairs.append((bound, s1, s2, const))
    pairs.sort(key=lambda p: (-p[0], p[1], p[2]))

    best = _zero_certificate(box, v, "exact")
    for bound, s1, s2, const in pairs:
        if bound <= best.value:
            break
        status, xs, obj = _lp_pair(m, v_scaled, mono_rows, mono_b, s1, s2)
        if status == kernels.LP_INFEASIBLE:
            continue
        if status == kernels.LP_UNBOUNDED:
            raise RuntimeError("pair LP cannot be unbounded")
        value = const + obj / den
        if value <= best.value:
            continue
        table = [x / den for x in xs] + [ZERO]
        curve = WelfareCurve(m, tuple(table))
        tied = any(
            s != s2 and curve.table[s] + v.table[s] == curve.table[s2] + v.table[s2]
            for s in range(1 << m)
        )
        best = RegretCertificate(
            value=value,
            witness_theta=box.corner(hi_at=s1),
            witness_curve=curve,
            s1=s1,
            s2=s2,
            attained=not tied,
            method="exact",
        )
    return best


def _eq31_loss(theta: Valuation, report: Valuation,
               opponents: Sequence[Valuation]) -> Fraction:
    """Realized loss of `report` vs truth `theta` against fixed opponents.

    Scored on (theta, opponents' reports); prices cancel out of the loss, so
    only the winning allocation is needed.
    """
    reports = [report, *opponents]
    scored = [theta, *opponents]
    _, winning = max_welfare(reports)
    top, _ = max_welfare(scored)
    return top - social_welfare(scored, winning)


def replay_certificate(box: CandidateBox, v: Valuation, n: int,
                       cert: RegretCertificate,
                       eps: Fraction) -> tuple[Fraction, Fraction]:
    """Re-run a certificate's adversary through the real mechanism.

    The witness curve is realized by one opponent, with an `eps` bump on the
    complement of s2 (or an `eps` shave everywhere when s2 is the full
    bundle) so the intended winner wins strictly. Returns (simulated loss,
    eps actually used); the loss is >= value - eps_coeff * eps_used.
    """
    if n < 2:
        raise ValueError("replay needs at least one opponent")
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    m = box.m
    w = cert.witness_curve.table
    s2 = cert.s2

    if s2 == full_mask(m):
        positive = [x for x in w if x > 0]
        eps_used = min(eps, min(positive)) if positive else ZERO
        table = [ZERO] * (1 << m)
        for x in range(1, 1 << m):
            val = w[complement(x, m)]
            table[x] = val - eps_used if val > 0 else ZERO
    else:
        gap = min(
            (v.table[s2] - v.table[t] for t in _proper_subs(s2)),
            default=None,
        )
        eps_used = eps if gap is None else min(eps, gap / 2)
        table = [ZERO] * (1 << m)
        for x in range(1, 1 << m):
            table[x] = w[complement(x, m)]
        table[complement(s2, m)] = w[s2] + eps_used
    adversary = Valuation(m, tuple(table))
    opponents = [adversary] + [Valuation.zero(m)] * (n - 2)

    outcome = vcg_outcome([v, *opponents])
    if outcome.allocation.masks[0] != s2:
        raise RuntimeError(
            "witness replay did not reproduce the certified winning bundle")
    loss = _eq31_loss(cert.witness_theta, v, opponents)
    return loss, eps_used


def _proper_subs(mask: int):
    if mask == 0:
        return
    sub = (mask - 1) & mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def regret_bruteforce(box: CandidateBox, v: Valuation, n: int,
                      grid_step: Fraction, *,
                      max_corners: int = 64, max_curves: int = 2000,
                      seed: int = 0) -> Fraction:
    """Grid-search lower bound on regret through the real mechanism.

    Truths range over box corners, opponent curves over monotone tables on a
    decimal grid; each pair is simulated exactly. Exhaustive when small,
    seeded sampling beyond the caps — either way every probe is a genuine
    adversary, so the result never exceeds the exact supremum.
    """
    if n < 2:
        raise ValueError("regret needs at least one opponent")
    grid_step = Fraction(grid_step)
    if grid_step <= 0:
        raise ValueError("grid step must be positive")
    m = box.m
    size = 1 << m
    rng = random.Random(seed)

    cap = max(max(box.hi.table), max(v.table)) + grid_step
    levels = int(cap / grid_step)

    n_corners = 1 << (size - 1)
    if n_corners <= max_corners:
        corner_choices = range(n_corners)
    else:
        corner_choices = [rng.getrandbits(size - 1) for _ in range(max_corners)]
    thetas = []
    for bits in corner_choices:
        table = [ZERO] * size
        for s in range(1, size):
            high = bits >> (s - 1) & 1
            table[s] = box.hi.table[s] if high else box.lo.table[s]
        thetas.append(Valuation(m, tuple(table)))

    curves = _grid_curves(m, grid_step, levels, max_curves, rng)

    best = ZERO
    for curve in curves:
        opponents = list(realize_curve(curve, n - 1))
        for theta in thetas:
            loss = _eq31_loss(theta, v, opponents)
            if loss > best:
                best = loss
    return best


def _grid_curves(m: int, step: Fraction, levels: int, cap: int,
                 rng: random.Random) -> list[WelfareCurve]:
    """Monotone non-increasing grid tables with value 0 on the full bundle.

    Bundles are filled largest-first so each one's floor is the max over its
    immediate supersets. Falls back to seeded sampling when the exhaustive
    count would exceed `cap`.
    """
    order = sorted(range(1 << m), key=popcount, reverse=True)

    def floor_levels(table: dict[int, int], s: int) -> int:
        return max(
            (table[s | 1 << g] for g in range(m) if not s >> g & 1),
            default=0,
        )

    results: list[dict[int, int]] = []
    exhausted = False

    def extend(idx: int, table: dict[int, int]) -> bool:
        nonlocal exhausted
        if len(results) > cap:
            exhausted = True
            return False
        if idx == len(order):
            results.append(dict(table))
            return True
        s = order[idx]
        if s == full_mask(m):
            table[s] = 0
            return extend(idx + 1, table)
        for level in range(floor_levels(table, s), levels + 1):
            table[s] = level
            if not extend(idx + 1, table):
                return False
        return True

    extend(0, {})
    if exhausted:
        results = []
        for _ in range(cap):
            table: dict[int, int] = {}
            for s in order:
                lo = 0 if s == full_mask(m) else floor_levels(table, s)
                table[s] = lo if s == full_mask(m) else rng.randint(lo, levels)
            results.append(table)
    return [
        WelfareCurve(m, tuple(step * t[s] for s in range(1 << m)))
        for t in results
    ]
