"""Regret oracle: closed forms, sandwich, witnesses, independent references."""
import random
from fractions import Fraction

import pytest

from kvcg import (CandidateBox, OracleCapError, gen_box, regret_bruteforce,
                  regret_exact_box, regret_structured, replay_certificate)
from kvcg.curves import realize_curve
from kvcg.mechanism import max_welfare, social_welfare
from kvcg.model import Valuation
from conftest import (M, box1, random_valuation, reference_exact_regret,
                      valuation)


def single_good_closed_form(x, d, y):
    x, d, y = Fraction(x), Fraction(d), Fraction(y)
    return max(Fraction(0), y - x, x + d - y)


def simulate_single_good(x, d, y, step=Fraction(1, 8)):
    """Dense-grid simulation oracle for one good: sweep the opponent's bid c
    and both interval-end truths through the real mechanism."""
    x, d, y = Fraction(x), Fraction(d), Fraction(y)
    report = Valuation.from_pairs(1, {1: y})
    best = Fraction(0)
    c = Fraction(0)
    top = max(x + d, y) + 1
    while c <= top:
        opp = Valuation.from_pairs(1, {1: c})
        for theta_g in (x, x + d):
            theta = Valuation.from_pairs(1, {1: theta_g})
            _, alloc = max_welfare([report, opp])
            top_w, _ = max_welfare([theta, opp])
            loss = top_w - social_welfare([theta, opp], alloc)
            best = max(best, loss)
        c += step
    return best


@pytest.mark.parametrize("x,d,y", [
    (10, 2, 11), (10, 2, 13), (10, 2, 10), (10, 2, 12), (0, 0, 0),
    (5, 3, 2), (5, 3, 9), (7, 0, 7), (7, 0, 9), ("2.5", "0.5", "2.75"),
])
def test_single_good_closed_form(x, d, y):
    box = box1(M(str(x)) if isinstance(x, str) else Fraction(x),
               M(str(d)) if isinstance(d, str) else Fraction(d))
    y = M(str(y)) if isinstance(y, str) else Fraction(y)
    v = Valuation.from_pairs(1, {1: y})
    expect = single_good_closed_form(box.lo.table[1], box.delta(), y)
    assert regret_exact_box(box, v, 2).value == expect
    assert regret_structured(box, v, 2).value == expect  # tight at m=1
    # one-point cross-check against the grid simulation
    sim = simulate_single_good(box.lo.table[1], box.delta(), y)
    assert sim <= expect
    assert sim >= expect - Fraction(1, 8)


def test_single_good_known_values():
    box = box1(10, 2)
    assert regret_exact_box(box, valuation(1, m1="11"), 2).value == 1
    assert regret_structured(box, valuation(1, m1="11"), 2).value == 1
    assert regret_structured(box, valuation(1, m1="13"), 2).value == 3
    assert regret_exact_box(box, box.midpoint(), 2).value == 1  # delta/2


def test_truthful_exact_knowledge_has_zero_regret():
    theta = valuation(2, m1="4", m2="2", m3="5")
    box = CandidateBox(theta, theta)
    assert regret_exact_box(box, theta, 3).value == 0
    assert regret_structured(box, theta, 3).value == 0
    assert regret_bruteforce(box, theta, 2, Fraction(1)) == 0


def test_untruthful_with_exact_knowledge_pays():
    theta = valuation(1, m1="10")
    box = CandidateBox(theta, theta)
    v = valuation(1, m1="12")
    assert regret_exact_box(box, v, 2).value == 2


def test_midpoint_within_delta(rng):
    for _ in range(60):
        m = rng.randint(1, 3)
        box, _ = gen_box(m, M("2"), rng.randrange(10**9))
        cert = regret_exact_box(box, box.midpoint(), 2)
        assert cert.value <= box.delta()


def test_matches_independent_reference(rng):
    for _ in range(120):
        m = rng.randint(1, 3)
        box, _ = gen_box(m, M("1.5"), rng.randrange(10**9))
        v = random_valuation(rng, m, levels=40)
        cert = regret_exact_box(box, v, 2)
        assert cert.value == reference_exact_regret(box, v)


def test_matches_independent_reference_m4(rng):
    for trial in range(25):
        box, _ = gen_box(4, M("2"), rng.randrange(10**9))
        v = box.midpoint() if trial % 3 == 0 else random_valuation(rng, 4)
        cert = regret_exact_box(box, v, 2)
        assert cert.value == reference_exact_regret(box, v)


def test_sandwich(rng):
    for _ in range(40):
        m = rng.randint(1, 2)
        box, _ = gen_box(m, M("2"), rng.randrange(10**9))
        v = random_valuation(rng, m, levels=30)
        exact = regret_exact_box(box, v, 2).value
        structured = regret_structured(box, v, 2).value
        brute = regret_bruteforce(box, v, 2, Fraction(1), seed=rng.randrange(99))
        assert structured <= exact
        assert brute <= exact


def test_brute_force_bracket_m1():
    box = box1(10, 2)
    v = valuation(1, m1="11")
    h = Fraction(1, 4)
    got = regret_bruteforce(box, v, 2, h)
    assert 1 - h <= got <= 1


def test_homogeneity(rng):
    c = Fraction(3, 2)
    for _ in range(25):
        m = rng.randint(1, 3)
        box, _ = gen_box(m, M("2"), rng.randrange(10**9))
        v = random_valuation(rng, m, levels=30)
        base = regret_exact_box(box, v, 2)
        scaled = regret_exact_box(box.scaled(c), v.scaled(c), 2)
        assert scaled.value == base.value * c
        assert regret_structured(box.scaled(c), v.scaled(c), 2).value == \
            regret_structured(box, v, 2).value * c


def test_regret_independent_of_player_count(rng):
    for _ in range(20):
        box, _ = gen_box(2, M("2"), rng.randrange(10**9))
        v = random_valuation(rng, 2, levels=30)
        values = {n: regret_exact_box(box, v, n).value for n in (2, 3, 5)}
        assert len(set(values.values())) == 1


def test_witness_replay(rng):
    for eps in (Fraction(1, 1000), Fraction(1, 10**6)):
        for _ in range(30):
            m = rng.randint(1, 3)
            box, _ = gen_box(m, M("2"), rng.randrange(10**9))
            v = random_valuation(rng, m, levels=30)
            n = rng.choice([2, 3])
            for fn in (regret_exact_box, regret_structured):
                cert = fn(box, v, n)
                loss, eps_used = replay_certificate(box, v, n, cert, eps)
                assert eps_used <= eps
                assert loss >= cert.value - cert.eps_coeff * eps_used
                assert loss <= regret_exact_box(box, v, n).value


def test_witness_curve_feasibility(rng):
    # The certified curve must let the report win s2: no bundle strictly
    # beats it, and the tie flag reflects exact ties.
    for _ in range(40):
        m = rng.randint(1, 3)
        box, _ = gen_box(m, M("2"), rng.randrange(10**9))
        v = random_valuation(rng, m, levels=30)
        cert = regret_exact_box(box, v, 2)
        w = cert.witness_curve.table
        won = w[cert.s2] + v.table[cert.s2]
        ties = False
        for s in range(1 << m):
            assert w[s] + v.table[s] <= won
            if s != cert.s2 and w[s] + v.table[s] == won:
                ties = True
        assert cert.attained == (not ties)
        assert box.contains(cert.witness_theta)


def test_unwinnable_bundle_never_certified():
    # Report ties {a} with {a,b}: the tie-break means {a,b} can never be won,
    # so no adversary can charge the player for surrendering it.
    lo = valuation(2, m1="10", m3="0")
    hi = valuation(2, m1="10", m3="0")
    box = CandidateBox(lo, hi)
    v = valuation(2, m1="5", m3="5")
    cert = regret_exact_box(box, v, 2)
    assert cert.s2 != 3
    # The true supremum here is 5 (winning the empty bundle while the truth
    # holds 10 at {a} and the opponent bids just over 5 on everything).
    assert cert.value == 5
    loss, eps_used = replay_certificate(box, v, 2, cert, Fraction(1, 10**6))
    assert loss >= cert.value - eps_used


def test_oracle_cap():
    box, _ = gen_box(3, M("1"), 5)
    with pytest.raises(OracleCapError):
        regret_exact_box(box, box.midpoint(), 2, m_cap=2)
    big, _ = gen_box(6, M("1"), 5)
    with pytest.raises(OracleCapError):
        regret_exact_box(big, big.midpoint(), 2)  # default cap is 5


def test_oracle_needs_opponent():
    box, _ = gen_box(1, M("1"), 5)
    with pytest.raises(ValueError):
        regret_exact_box(box, box.midpoint(), 1)
