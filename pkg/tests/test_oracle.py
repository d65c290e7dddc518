import pytest
from hypothesis import given

from braidcrack.braid import Braid, equal, inverse, product, sigma
from braidcrack.oracle import (
    CoordinateOverflow,
    act,
    act_letter,
    base_point,
    brute_centralizer,
    brute_conjugators,
    coordinates,
    oracle_equal,
)

from conftest import braid_pairs, braids


def test_braid_relation():
    assert oracle_equal(sigma(3, 1, 2, 1), sigma(3, 2, 1, 2))


def test_distinct_generators():
    assert not oracle_equal(sigma(3, 1), sigma(3, 2))


@given(braid_pairs(max_len=10))
def test_agrees_with_normal_form(pair):
    a, b = pair
    assert oracle_equal(a, b) == equal(a, b)


@given(braids(max_len=10))
def test_generator_actions_are_inverse(w):
    start = act(base_point(w.n), w.letters)
    for i in range(1, w.n):
        assert act_letter(act_letter(start, i), -i) == start
        assert act_letter(act_letter(start, -i), i) == start


def test_overflow_reported():
    w = Braid(4, (1, -2) * 30)
    with pytest.raises(CoordinateOverflow):
        coordinates(w, limit=10)


def test_brute_conjugators_examples():
    s1 = sigma(3, 1)
    assert brute_conjugators(s1, s1, 0).words == [Braid.identity(3)]
    assert sigma(3, 1, 2) in brute_conjugators(s1, sigma(3, 2), 2)
    assert len(brute_conjugators(s1, sigma(3, 1, 1), 3)) == 0


def test_brute_conjugators_verify():
    x, y = sigma(4, 1, -2), sigma(4, 2, -3)
    res = brute_conjugators(x, y, 4)
    assert res.words
    for g in res.words:
        lhs = product(g, x, inverse(g))
        assert equal(lhs, y) and oracle_equal(lhs, y)


def test_brute_centralizer_examples():
    d2 = Braid.delta(3, 2)
    assert len(brute_centralizer(d2, 2)) == 1 + 4 + 4 * 3
    c = brute_centralizer(sigma(4, 1), 1)
    assert sigma(4, 1) in c and sigma(4, 3) in c
    assert sigma(3, 1, 2) in brute_centralizer(sigma(3, 1, 2), 3)


def test_brute_budget_flag():
    res = brute_conjugators(sigma(5, 1), sigma(5, 4), 6, budget=100)
    assert res.partial


def test_max_len_cap():
    with pytest.raises(ValueError):
        brute_conjugators(sigma(3, 1), sigma(3, 1), 8)
