import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from braidcrack.braid import (
    Braid,
    NormalForm,
    StrandMismatch,
    conjugate,
    embed,
    equal,
    equal_mod_delta_sq,
    inf,
    inverse,
    is_left_weighted,
    letters_to_perm,
    normal_form,
    parabolic_word,
    prefix_leq,
    product,
    shift,
    sigma,
    sup,
    support,
    symmetric_form,
    unshift,
    word_length,
)
from braidcrack.oracle import oracle_equal

from conftest import braid_pairs, braids, perturb


def test_product_cancels():
    assert product(sigma(3, 1), sigma(3, -1)).letters == ()


def test_inverse_reverses_and_negates():
    assert inverse(sigma(3, 1, 2)).letters == (-2, -1)


def test_conjugate_s1s2_s1_is_s2():
    assert equal(conjugate(sigma(3, 1, 2), sigma(3, 1)), sigma(3, 2))


def test_strand_mismatch():
    with pytest.raises(StrandMismatch):
        product(sigma(3, 1), sigma(4, 1))


def test_letter_range_checked():
    with pytest.raises(ValueError):
        Braid(3, (3,))
    with pytest.raises(ValueError):
        Braid(3, (0,))


def test_identity_normal_form():
    nf = normal_form(Braid.identity(4))
    assert (nf.p, nf.factors) == (0, ())


def test_delta_normal_form():
    nf = normal_form(sigma(3, 1, 2, 1))
    assert (nf.p, nf.factors) == (1, ())


def test_sigma1_inverse_normal_form():
    nf = normal_form(sigma(3, -1))
    assert nf.p == -1
    assert nf.factors == (letters_to_perm(3, (1, 2)),)
    # independent check of Delta^-1 s1 s2 = s1^-1
    assert oracle_equal(product(Braid.delta(3, -1), sigma(3, 1, 2)), sigma(3, -1))


def test_mod_delta_sq():
    assert equal_mod_delta_sq(Braid.delta(4, 2), Braid.identity(4))
    assert not equal_mod_delta_sq(Braid.delta(4, 1), Braid.identity(4))


@given(braids())
def test_delta_sq_central(w):
    d2 = Braid.delta(w.n, 2)
    assert equal(product(w, d2, inverse(w)), d2)


def test_prefix_order_examples():
    assert prefix_leq(Braid.identity(3), sigma(3, 1, 2, 2, 1))
    assert prefix_leq(sigma(3, 1), Braid.delta(3))
    assert not prefix_leq(sigma(3, 1), sigma(3, 2))


def test_shift_examples():
    assert shift(sigma(3, 1, -2)).letters == (2, -3)
    assert shift(sigma(3, 1, -2)).n == 4
    assert unshift(sigma(4, 2, 3)).letters == (1, 2)
    with pytest.raises(ValueError):
        unshift(sigma(4, 1, 2))


def test_word_length_examples():
    assert word_length(Braid.identity(3), "artin-letters") == 0
    assert word_length(sigma(4, 1, 1, 2, 1, 3, -2, -2, -1, -1, -1), "artin-letters") == 10
    assert word_length(Braid.delta(3), "canonical-length") == 0
    with pytest.raises(ValueError):
        word_length(Braid.identity(3), "geodesic")


@given(braids(max_len=16))
def test_inverse_product_is_identity(w):
    assert normal_form(product(w, inverse(w))).key() == normal_form(Braid.identity(w.n)).key()


@given(braids(max_len=16), st.integers(0, 10_000))
def test_normal_form_invariant_under_relations(w, seed):
    w2 = perturb(w, random.Random(seed))
    assert normal_form(w).key() == normal_form(w2).key()


@given(braids(max_len=16))
def test_normal_form_idempotent_and_left_weighted(w):
    nf = normal_form(w)
    again = normal_form(nf.to_braid())
    assert again == nf
    for a, b in zip(nf.factors, nf.factors[1:]):
        assert is_left_weighted(a, b)
    assert nf.inf == inf(w) and nf.sup == sup(w)
    assert NormalForm.from_json(nf.to_json()) == nf


@given(braids(max_len=16))
def test_word_bound(w):
    neg = sum(1 for x in w.letters if x < 0)
    pos = len(w.letters) - neg
    assert -neg <= inf(w)
    assert sup(w) <= pos


@given(braid_pairs())
def test_shift_homomorphism(pair):
    u, v = pair
    assert shift(product(u, v)).letters == product(shift(u), shift(v)).letters
    assert unshift(shift(u)).letters == u.letters
    if equal(u, v):
        assert equal(shift(u), shift(v))


@given(braids(max_len=14))
def test_symmetric_form(w):
    a, b = symmetric_form(w)
    assert all(x > 0 for x in a.letters + b.letters)
    assert equal(product(inverse(a), b), w)
    assert equal(parabolic_word(w), w)
    assert {abs(x) for x in parabolic_word(w).letters} <= support(w)


def test_support_of_conjugated_parabolic_word():
    w = product(sigma(6, 3, 4), sigma(6, 5, -3), sigma(6, 3, -4))
    assert support(w) == frozenset({3, 4, 5})


def test_embed():
    assert embed(sigma(3, 1), 5).n == 5
    with pytest.raises(ValueError):
        embed(sigma(5, 1), 3)


def test_json_roundtrip():
    w = sigma(5, 1, -3, 4)
    assert Braid.from_json(w.to_json()) == w
