import random
from fractions import Fraction
from itertools import product

import pytest

from kvcg import (Allocation, max_welfare, msw_without, social_welfare,
                  utility, vcg_outcome)
from kvcg.model import Valuation
from conftest import M, brute_force_best, random_valuation, valuation


def test_social_welfare_example():
    v1 = valuation(2, m1="3", m3="3")
    v2 = valuation(2, m2="2", m3="2")
    assert social_welfare([v1, v2], Allocation(2, (1, 2))) == 5
    assert social_welfare([v1, v2], Allocation(2, (0, 0))) == 0


def test_social_welfare_rejects_overlap():
    v = valuation(2, m1="3")
    with pytest.raises(ValueError):
        Allocation(2, (1, 1))
    with pytest.raises(ValueError):
        social_welfare([v], Allocation(1, (1,)))


def test_max_welfare_example():
    v1 = valuation(2, m1="3", m3="3")
    v2 = valuation(2, m2="2", m3="2")
    value, alloc = max_welfare([v1, v2])
    assert value == 5 and alloc.masks == (1, 2)


def test_max_welfare_single_player_tiebreak():
    value, alloc = max_welfare([valuation(2, m1="3", m3="3")])
    assert value == 3 and alloc.masks == (1,)  # good b stays unassigned


def test_max_welfare_all_zero():
    value, alloc = max_welfare([Valuation.zero(2), Valuation.zero(2)])
    assert value == 0 and alloc.masks == (0, 0)


def test_msw_without_examples():
    v1 = valuation(1, m1="10")
    v2 = valuation(1, m1="7")
    assert msw_without([v1, v2], 0) == 7
    assert msw_without([v1, v2], 1) == 10
    assert msw_without([v1, Valuation.zero(1)], 1) == 10
    assert msw_without([v1], 0) == 0  # no opponents


def test_vcg_second_price_degeneration():
    out = vcg_outcome([valuation(1, m1="10"), valuation(1, m1="7")])
    assert out.allocation.masks == (1, 0)
    assert out.prices == (7, 0)
    assert utility(valuation(1, m1="10"), 0, out) == 3
    assert utility(Valuation.zero(1), 1, out) == 0


def test_vcg_two_good_example():
    v1 = valuation(2, m1="3", m3="3")
    v2 = valuation(2, m2="2", m3="2")
    out = vcg_outcome([v1, v2])
    assert out.allocation.masks == (1, 2)
    assert out.prices == (0, 0)


def test_vcg_zero_player_pays_nothing():
    out = vcg_outcome([valuation(2, m1="4", m2="4", m3="8"), Valuation.zero(2)])
    assert out.allocation.masks[1] == 0
    assert out.prices[1] == 0


def test_matches_brute_force(rng):
    for _ in range(150):
        m = rng.randint(1, 3)
        n = rng.randint(1, 3)
        profile = [random_valuation(rng, m) for _ in range(n)]
        value, alloc = max_welfare(profile)
        ref_value, ref_alloc = brute_force_best(profile)
        assert value == ref_value
        assert alloc == ref_alloc


def test_price_utility_identity(rng):
    # utility(theta_i) == SW((theta_i, v_-i), A) - msw_without(v, i), exactly
    for _ in range(60):
        m = rng.randint(1, 3)
        n = rng.randint(2, 3)
        reports = [random_valuation(rng, m) for _ in range(n)]
        truths = [random_valuation(rng, m) for _ in range(n)]
        out = vcg_outcome(reports)
        for i in range(n):
            scored = list(reports)
            scored[i] = truths[i]
            lhs = utility(truths[i], i, out)
            rhs = social_welfare(scored, out.allocation) - msw_without(reports, i)
            assert lhs == rhs


def test_truthful_dominance_on_grid(rng):
    # No single-player grid deviation beats the truthful report.
    for _ in range(20):
        n = rng.randint(2, 3)
        truths = [random_valuation(rng, 1, levels=8, den=1) for _ in range(n)]
        out_true = vcg_outcome(truths)
        for i in range(n):
            base = utility(truths[i], i, out_true)
            for dev in range(9):
                reports = list(truths)
                reports[i] = Valuation.from_pairs(1, {1: Fraction(dev)})
                alt = utility(truths[i], i, vcg_outcome(reports))
                assert alt <= base


def test_truthful_dominance_two_goods(rng):
    grid = [Fraction(k) for k in range(0, 7, 2)]
    for _ in range(4):
        truths = [random_valuation(rng, 2, levels=6, den=1) for _ in range(2)]
        out_true = vcg_outcome(truths)
        for i in range(2):
            base = utility(truths[i], i, out_true)
            for va, vb, vab in product(grid, repeat=3):
                reports = list(truths)
                reports[i] = Valuation.from_pairs(
                    2, {1: va, 2: vb, 3: vab})
                alt = utility(truths[i], i, vcg_outcome(reports))
                assert alt <= base


def test_prices_nonnegative_and_ir(rng):
    for _ in range(80):
        m = rng.randint(1, 3)
        n = rng.randint(2, 4)
        truths = [random_valuation(rng, m) for _ in range(n)]
        out = vcg_outcome(truths)
        for i in range(n):
            assert out.prices[i] >= 0
            assert utility(truths[i], i, out) >= 0


def test_winner_strictly_beats_proper_subsets(rng):
    # The canonical tie-break guarantees v_i(A_i) > v_i(T) for T strictly
    # inside a nonempty won bundle.
    from kvcg.goods import submasks
    for _ in range(120):
        m = rng.randint(1, 3)
        n = rng.randint(2, 3)
        reports = [random_valuation(rng, m, levels=6, den=2) for _ in range(n)]
        out = vcg_outcome(reports)
        for i, won in enumerate(out.allocation.masks):
            if won == 0:
                continue
            for sub in submasks(won):
                if sub != won:
                    assert reports[i].table[sub] < reports[i].table[won]


def test_scale_invariance(rng):
    c = Fraction(7, 3)
    for _ in range(40):
        m = rng.randint(1, 3)
        n = rng.randint(2, 3)
        reports = [random_valuation(rng, m) for _ in range(n)]
        out = vcg_outcome(reports)
        scaled_out = vcg_outcome([v.scaled(c) for v in reports])
        assert scaled_out.allocation == out.allocation
        assert scaled_out.prices == tuple(p * c for p in out.prices)
        value, _ = max_welfare(reports)
        scaled_value, _ = max_welfare([v.scaled(c) for v in reports])
        assert scaled_value == value * c


def test_vcg_needs_two_players():
    with pytest.raises(ValueError):
        vcg_outcome([valuation(1, m1="1")])
