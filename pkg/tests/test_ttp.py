import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braidcrack.braid import Braid, equal_mod_delta_sq, normal_form, product, sigma
from braidcrack.ttp import (
    EQUIVALENT,
    EXACT,
    INVALID,
    InfeasibleSplit,
    MSCSPvInstance,
    TTPParams,
    gz_bound,
    keypair_from_json,
    keypair_to_json,
    to_mscspv_instance,
    ttp_keygen,
    verify_attack_solution,
)


def small(seed=0, **kw):
    base = dict(n=8, alpha=2, beta=2, gamma=3, max_word_len=3, m=8, seed=seed)
    base.update(kw)
    return TTPParams(**base)


@pytest.mark.parametrize("n,m,g", [(3, 4, 2), (5, 10, 4), (10, 18, 5), (8, 1, 1)])
def test_gz_spot_values(n, m, g):
    assert gz_bound(n, m) == g


@given(st.integers(3, 30), st.integers(1, 200))
def test_gz_is_minimal(n, m):
    g = gz_bound(n, m)
    assert (2 * n - 2) ** g >= 2**m
    assert g == 0 or (2 * n - 2) ** (g - 1) < 2**m


@settings(max_examples=15)
@given(st.integers(0, 2**32))
def test_key_invariants(seed):
    kp = ttp_keygen(small(seed))
    sec, pub = kp.secret, kp.public
    assert all(abs(l - r) >= 2 for l in sec.BL for r in sec.BR)
    assert len(sec.BL) == 2 and len(sec.BR) == 2
    assert all(nf.p in (0, 1) for nf in pub.w_pub + pub.v_pub)
    for w in pub.w_words():
        for v in pub.v_words():
            assert equal_mod_delta_sq(product(w, v), product(v, w))
    assert len(sec.z) == gz_bound(8, 8)


def test_keygen_deterministic():
    a, b = ttp_keygen(small(5)), ttp_keygen(small(5))
    assert keypair_to_json(a) == keypair_to_json(b)


def test_identity_hook_and_single_words():
    kp = ttp_keygen(small(1, identity_z=True, single_generator_words=1))
    assert kp.secret.z == Braid.identity(8)
    assert len(kp.secret.w_words[0]) == 1 and len(kp.secret.v_words[0]) == 1
    for w, nf in zip(kp.secret.w_words, kp.public.w_pub):
        assert normal_form(w).mod_delta_sq() == nf


def test_z_support_hook():
    kp = ttp_keygen(small(2, z_support=(3,)))
    assert set(abs(x) for x in kp.secret.z.letters) == {3}


def test_validation():
    with pytest.raises(InfeasibleSplit):
        ttp_keygen(TTPParams(n=6, alpha=3, beta=2, gamma=1))
    with pytest.raises(ValueError):
        ttp_keygen(TTPParams(n=4, alpha=1, beta=1, gamma=1))
    with pytest.raises(ValueError):
        ttp_keygen(small(0, z_support=(9,)))


def test_json_roundtrip():
    kp = ttp_keygen(small(3))
    sec, pub = keypair_to_json(kp)
    back = keypair_from_json(sec, pub)
    assert keypair_to_json(back) == (sec, pub)
    inst = to_mscspv_instance(kp.public)
    assert MSCSPvInstance.from_json(inst.to_json()) == inst
    assert inst.g_z == gz_bound(8, 8) and inst.gamma == 3
    assert len(inst.family("w")) == 3 and len(inst.untagged().family("w")) == 0


def test_verdicts():
    kp = ttp_keygen(small(4))
    z = kp.secret.z
    xs = kp.secret.w_words + kp.secret.v_words
    assert verify_attack_solution(kp, z, xs) == EXACT
    assert verify_attack_solution(kp, product(z, Braid.delta(8, 2))) == EQUIVALENT
    assert verify_attack_solution(kp, product(z, sigma(8, 1, 2, 3, 4, 5, 6, 7))) == INVALID
    assert verify_attack_solution(kp, z, xs[:-1]) == INVALID
