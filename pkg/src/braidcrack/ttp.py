"""The AAGL trusted-third-party key generator and ground-truth checks."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field

from .braid import Braid, NormalForm, equal, equal_mod_delta_sq, inverse, normal_form, product
from .centralizer import verify_commutes

EXACT = "exact"
EQUIVALENT = "equivalent"
INVALID = "invalid"
VERDICT_RANK = {INVALID: 0, EQUIVALENT: 1, EXACT: 2}


class InfeasibleSplit(ValueError):
    pass


def gz_bound(n: int, m: int) -> int:
    """Smallest g with g * log2(2n - 2) >= m, i.e. (2n - 2)^g >= 2^m."""
    if n < 3 or m < 1:
        raise ValueError("need n >= 3 and m >= 1")
    base, target = 2 * n - 2, 1 << m
    g, acc = 0, 1
    while acc < target:
        g += 1
        acc *= base
    return g


@dataclass
class TTPParams:
    n: int
    alpha: int
    beta: int
    gamma: int
    max_word_len: int = 4
    m: int = 16
    seed: int = 0
    # test hooks: force z = e; make the first k words of each family a
    # single generator
    identity_z: bool = False
    single_generator_words: int = 0
    # scenario hook: draw z from the subgroup on these generator indices
    z_support: tuple[int, ...] = ()

    def validate(self) -> None:
        if self.n < 5:
            raise ValueError("n must be at least 5")
        if self.alpha < 1 or self.beta < 1:
            raise ValueError("alpha and beta must be positive")
        if self.gamma < 0 or self.max_word_len < 1 or self.m < 1:
            raise ValueError("gamma >= 0, max_word_len >= 1, m >= 1 required")
        if any(not 1 <= i < self.n for i in self.z_support):
            raise ValueError("z_support index out of range")
        if self.alpha + self.beta > self.n - 2:
            raise InfeasibleSplit(f"no separated split of {self.alpha}+{self.beta} generators in B_{self.n}")

    def public_echo(self) -> dict:
        return {"n": self.n, "gamma": self.gamma, "max_word_len": self.max_word_len, "m": self.m}


@dataclass
class TTPSecret:
    z: Braid
    BL: tuple[int, ...]
    BR: tuple[int, ...]
    w_words: list[Braid]
    v_words: list[Braid]

    def to_json(self) -> dict:
        return {
            "z": list(self.z.letters),
            "BL": list(self.BL),
            "BR": list(self.BR),
            "w": [list(w.letters) for w in self.w_words],
            "v": [list(v.letters) for v in self.v_words],
        }

    @classmethod
    def from_json(cls, n: int, data: dict) -> TTPSecret:
        return cls(
            Braid(n, tuple(data["z"])),
            tuple(data["BL"]),
            tuple(data["BR"]),
            [Braid(n, tuple(w)) for w in data["w"]],
            [Braid(n, tuple(v)) for v in data["v"]],
        )


@dataclass
class TTPPublic:
    n: int
    w_pub: list[NormalForm]
    v_pub: list[NormalForm]
    params: dict = field(default_factory=dict)

    def w_words(self) -> list[Braid]:
        return [nf.to_braid() for nf in self.w_pub]

    def v_words(self) -> list[Braid]:
        return [nf.to_braid() for nf in self.v_pub]


@dataclass
class TTPKeyPair:
    params: TTPParams
    secret: TTPSecret
    public: TTPPublic

    @property
    def n(self) -> int:
        return self.params.n


def _random_reduced(rng: random.Random, letters: list[int], length: int) -> tuple[int, ...]:
    out: list[int] = []
    while len(out) < length:
        x = rng.choice(letters) * rng.choice((1, -1))
        if out and out[-1] == -x:
            continue
        out.append(x)
    return tuple(out)


def choose_split_with_cut(rng: random.Random, n: int, alpha: int, beta: int) -> tuple[tuple[int, ...], tuple[int, ...], int]:
    """BL inside ``1..cut``, BR inside ``cut+2..n-1``; the gap ``cut+1``
    separates them."""
    cuts = list(range(alpha, n - 1 - beta))
    if not cuts:
        raise InfeasibleSplit(f"no separated split of {alpha}+{beta} generators in B_{n}")
    cut = rng.choice(cuts)
    BL = tuple(sorted(rng.sample(range(1, cut + 1), alpha)))
    BR = tuple(sorted(rng.sample(range(cut + 2, n), beta)))
    return BL, BR, cut


def choose_split(rng: random.Random, n: int, alpha: int, beta: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    BL, BR, _ = choose_split_with_cut(rng, n, alpha, beta)
    return BL, BR


def ttp_keygen(params: TTPParams) -> TTPKeyPair:
    params.validate()
    n = params.n
    rng = random.Random(params.seed)
    BL, BR = choose_split(rng, n, params.alpha, params.beta)
    gz = gz_bound(n, params.m)
    if params.identity_z:
        z = Braid.identity(n)
    else:
        z_gens = list(params.z_support or range(1, n))
        z = Braid(n, _random_reduced(rng, z_gens, gz))

    def family(gens: tuple[int, ...]) -> list[Braid]:
        out = []
        for i in range(params.gamma):
            if i < params.single_generator_words:
                out.append(Braid(n, (rng.choice(gens) * rng.choice((1, -1)),)))
            else:
                length = rng.randint(1, params.max_word_len)
                out.append(Braid(n, _random_reduced(rng, list(gens), length)))
        return out

    w_words = family(BL)
    v_words = family(BR)
    zi = inverse(z)
    w_pub = [normal_form(product(z, w, zi)).mod_delta_sq() for w in w_words]
    v_pub = [normal_form(product(z, v, zi)).mod_delta_sq() for v in v_words]
    secret = TTPSecret(z, BL, BR, w_words, v_words)
    public = TTPPublic(n, w_pub, v_pub, params.public_echo())
    return TTPKeyPair(params, secret, public)


@dataclass
class MSCSPvInstance:
    """Published conjugates with family tags; the conjugated words are hidden."""

    n: int
    y_family: list[tuple[Braid, str]]
    gamma: int = 0
    g_z: int | None = None
    max_word_len: int | None = None

    def family(self, tag: str) -> list[Braid]:
        return [y for y, t in self.y_family if t == tag]

    @property
    def ys(self) -> list[Braid]:
        return [y for y, _ in self.y_family]

    def untagged(self) -> MSCSPvInstance:
        return MSCSPvInstance(self.n, [(y, "?") for y, _ in self.y_family], self.gamma, self.g_z, self.max_word_len)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "equations": [{"y": list(y.letters), "family": t} for y, t in self.y_family],
            "gamma": self.gamma,
            "g_z": self.g_z,
            "max_word_len": self.max_word_len,
        }

    @classmethod
    def from_json(cls, data: dict) -> MSCSPvInstance:
        n = int(data["n"])
        return cls(
            n,
            [(Braid(n, tuple(e["y"])), e.get("family", "?")) for e in data["equations"]],
            int(data.get("gamma") or 0),
            data.get("g_z"),
            data.get("max_word_len"),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MSCSPvInstance):
            return NotImplemented
        return self.to_json() == other.to_json()


def to_mscspv_instance(public: TTPPublic) -> MSCSPvInstance:
    pairs = [(nf.to_braid(), "w") for nf in public.w_pub] + [(nf.to_braid(), "v") for nf in public.v_pub]
    m = public.params.get("m")
    return MSCSPvInstance(
        public.n,
        pairs,
        gamma=len(public.w_pub),
        g_z=gz_bound(public.n, m) if m else None,
        max_word_len=public.params.get("max_word_len"),
    )


def verify_attack_solution(keypair: TTPKeyPair, candidate_z: Braid, recovered_x: list[Braid] | None = None) -> str:
    sec = keypair.secret
    z = sec.z
    if recovered_x is not None:
        ys = [nf.to_braid() for nf in keypair.public.w_pub + keypair.public.v_pub]
        if len(recovered_x) != len(ys):
            return INVALID
        ci = inverse(candidate_z)
        for x, y in zip(recovered_x, ys):
            if not equal_mod_delta_sq(product(candidate_z, x, ci), y):
                return INVALID
    if equal(candidate_z, z):
        return EXACT
    h = product(inverse(candidate_z), z)
    if all(verify_commutes(h, u) for u in sec.w_words + sec.v_words):
        return EQUIVALENT
    return INVALID


def keypair_to_json(kp: TTPKeyPair) -> tuple[dict, dict]:
    """(secret file, public file)."""
    inst = to_mscspv_instance(kp.public)
    pub = inst.to_json()
    pub["params"] = kp.public.params
    sec = {"n": kp.n, "params": asdict(kp.params), "secret": kp.secret.to_json()}
    return sec, pub


def keypair_from_json(secret: dict, public: dict) -> TTPKeyPair:
    raw = dict(secret["params"])
    raw["z_support"] = tuple(raw.get("z_support", ()))
    params = TTPParams(**raw)
    n = params.n
    sec = TTPSecret.from_json(n, secret["secret"])
    inst = MSCSPvInstance.from_json(public)
    w_pub = [normal_form(y).mod_delta_sq() for y in inst.family("w")]
    v_pub = [normal_form(y).mod_delta_sq() for y in inst.family("v")]
    return TTPKeyPair(params, sec, TTPPublic(n, w_pub, v_pub, params.public_echo()))
