import random

from hypothesis import given
from hypothesis import strategies as st

from braidcrack.braid import Braid, equal, inverse, normal_form, product, sigma
from braidcrack.conjugacy import (
    FOUND,
    NOT_CONJUGATE,
    UNKNOWN,
    MSCSPInstance,
    cdp,
    csp_solve,
    cycling_decycling,
    lambda_invariant,
    mscsp_solve,
    sss_compute,
    verify_system,
)
from braidcrack.oracle import brute_conjugators, oracle_equal

from conftest import braids


def keys(words):
    return {normal_form(w).key() for w in words}


def test_cycling_delta_power_unchanged():
    rep, g = cycling_decycling(normal_form(Braid.delta(4, 2)))
    assert rep == normal_form(Braid.delta(4, 2))
    assert equal(g, Braid.identity(4))


def test_cycling_reaches_length_one():
    x = sigma(3, -1, 2, 1)
    rep, g = cycling_decycling(normal_form(x))
    assert rep.canonical_length == 1
    assert brute_conjugators(x, sigma(3, 2), 2).words


@given(braids(max_len=12))
def test_cycling_monotone_and_witnessed(x):
    nf = normal_form(x)
    rep, g = cycling_decycling(nf)
    assert rep.inf >= nf.inf and rep.sup <= nf.sup
    assert equal(product(g, x, inverse(g)), rep.to_braid())


def test_sss_examples():
    assert len(sss_compute(Braid.delta(3))) == 1
    assert set(sss_compute(sigma(3, 1)).members) == keys([sigma(3, 1), sigma(3, 2)])
    assert set(sss_compute(sigma(4, 1)).members) == keys([sigma(4, 1), sigma(4, 2), sigma(4, 3)])


def test_sss_matches_brute_force():
    # every canonical-length-1 conjugate of s1 s2^-1 in B_3 reachable by a
    # short conjugator lies in the summit set
    x = sigma(3, 1, -2)
    ss = sss_compute(x)
    for g in brute_conjugators(x, x, 0).words:
        assert normal_form(product(g, x, inverse(g))).key() in ss.members
    found = set()
    for g_len in range(4):
        rng = random.Random(g_len)
        for _ in range(30):
            g = Braid(3, tuple(rng.choice((1, -1, 2, -2)) for _ in range(g_len)))
            y = normal_form(product(g, x, inverse(g)))
            rep, _ = cycling_decycling(y)
            found.add(rep.key())
    assert found <= set(ss.members)


def test_sss_conjugators_recorded():
    x = sigma(4, 1, 2, -3)
    ss = sss_compute(x)
    base = ss.base.to_braid()
    for k, c in ss.conjugator_to.items():
        assert equal(product(c, base, inverse(c)), ss.members[k].to_braid())


def test_sss_truncation_flag():
    ss = sss_compute(sigma(6, 1, 2, -3, 4, -5, 1), budget=2)
    assert ss.truncated and len(ss) <= 2


def test_cdp_csp_examples():
    s1, s2 = sigma(3, 1), sigma(3, 2)
    assert cdp(s1, s2) is True
    res = csp_solve(s1, s2)
    assert res.status == FOUND
    assert equal(product(res.conjugator, s1, inverse(res.conjugator)), s2)
    assert cdp(s1, sigma(3, 1, 1)) is False
    x = sigma(4, 1, -2, 3)
    g = csp_solve(x, x).conjugator
    assert equal(product(g, x), product(x, g))


def test_truncated_is_unknown():
    x = sigma(6, 1, 2, -3, 4, -5, 1, 2)
    y = product(sigma(6, 5, 4), x, inverse(sigma(6, 5, 4)))
    res = csp_solve(x, product(sigma(6, 3), y, sigma(6, -3)), budget=1)
    assert res.status in (FOUND, UNKNOWN)


def test_lambda_examples():
    assert lambda_invariant(sigma(3, 1)) == (0, 1, 1)
    assert lambda_invariant(sigma(3, 1)) != lambda_invariant(sigma(3, -1))


@given(braids(max_len=10), st.integers(0, 10_000))
def test_lambda_conjugation_invariant(x, seed):
    rng = random.Random(seed)
    g = Braid(x.n, tuple(rng.choice((1, -1)) * rng.randint(1, x.n - 1) for _ in range(rng.randint(0, 6))))
    assert lambda_invariant(x) == lambda_invariant(product(g, x, inverse(g)))


@given(braids(min_n=3, max_n=4, max_len=6), st.integers(0, 10_000))
def test_csp_solve_verifies(x, seed):
    rng = random.Random(seed)
    g = Braid(x.n, tuple(rng.choice((1, -1)) * rng.randint(1, x.n - 1) for _ in range(rng.randint(0, 4))))
    y = product(g, x, inverse(g))
    res = csp_solve(x, y)
    assert res.status == FOUND
    h = res.conjugator
    assert oracle_equal(product(h, x, inverse(h)), y)


def test_mscsp_trivial():
    inst = MSCSPInstance(4, [(sigma(4, 1), sigma(4, 1)), (sigma(4, 2, 3), sigma(4, 2, 3))])
    res = mscsp_solve(inst)
    assert res.found and equal(res.conjugator, Braid.identity(4))


def test_mscsp_two_equations():
    g = sigma(4, 1, -2, 3)
    xs = [sigma(4, 1, 2), sigma(4, -3, 2, 2)]
    gi = inverse(g)
    inst = MSCSPInstance(4, [(x, product(g, x, gi)) for x in xs])
    res = mscsp_solve(inst)
    assert res.found
    assert all(verify_system(res.conjugator, inst.equations))


def test_mscsp_inconsistent():
    inst = MSCSPInstance(4, [(sigma(4, 1), sigma(4, 1, 1))])
    res = mscsp_solve(inst)
    assert res.status == NOT_CONJUGATE and res.proved and res.failed_equations == [0]


def test_mscsp_json_roundtrip():
    inst = MSCSPInstance(4, [(sigma(4, 1), sigma(4, 2))])
    assert MSCSPInstance.from_json(inst.to_json()) == inst
