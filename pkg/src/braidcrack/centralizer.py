"""Finite, verified samples of centralizers."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .braid import Braid, equal, equal_mod_delta_sq, inverse, normal_form, perm_to_letters, product
from .conjugacy import DEFAULT_BUDGET, shortest_word, sss_compute

STRATEGIES = ("sss-loops", "public-products", "random-products")


@dataclass
class CentralizerSample:
    base: Braid
    elements: list[Braid] = field(default_factory=list)
    strategy: str = "sss-loops"
    verified: bool = True
    mod_delta_sq: bool = False
    truncated: bool = False
    seed: int | None = None
    bases: list[Braid] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.elements)

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "elements": [list(e.letters) for e in self.elements],
            "strategy": self.strategy,
            "seed": self.seed,
            "mod_delta_sq": self.mod_delta_sq,
            "truncated": self.truncated,
        }


def verify_commutes(c: Braid, u: Braid, mod_delta_sq: bool = False) -> bool:
    eq = equal_mod_delta_sq if mod_delta_sq else equal
    return eq(product(c, u), product(u, c))


def _order_dedup(words: Sequence[Braid], budget: int) -> list[Braid]:
    best: dict[tuple, Braid] = {}
    for w in words:
        w = shortest_word(w)
        key = normal_form(w).key()
        cur = best.get(key)
        if cur is None or (len(w), w.letters) < (len(cur), cur.letters):
            best[key] = w
    out = sorted(best.values(), key=lambda w: (len(w), w.letters))
    return out[:budget]


def sss_loops(u: Braid, sss_budget: int = DEFAULT_BUDGET) -> tuple[list[Braid], bool]:
    """Centralizer elements from closed paths in the summit conjugation graph.

    For an edge ``m -> rho^-1 m rho`` the loop ``c_{m'}^-1 rho^-1 c_m``
    fixes the base representative; pulling back by the cycling conjugator
    gives elements of C(u).
    """
    n = u.n
    ss = sss_compute(u, sss_budget, with_edges=True)
    g = ss.to_base
    gi = inverse(g)
    found: list[Braid] = [u, Braid.delta(n, 2)]
    for src, rho, dst in ss.edges:
        if dst not in ss.conjugator_to:
            continue
        rho_w = Braid(n, perm_to_letters(rho))
        loop = product(inverse(ss.conjugator_to[dst]), inverse(rho_w), ss.conjugator_to[src])
        if normal_form(loop).key() == normal_form(Braid.identity(n)).key():
            continue
        h = product(gi, loop, g)
        found.append(h)
        found.append(inverse(h))
    return found, ss.truncated


def sample_centralizer(
    u: Braid,
    strategy: str = "sss-loops",
    budget: int = 64,
    seed: int = 0,
    aux: Sequence[Braid] = (),
    mod_delta_sq: bool = False,
    sss_budget: int = DEFAULT_BUDGET,
) -> CentralizerSample:
    """Verified, deduplicated elements of C(u), at most ``budget`` of them,
    ordered by (artin length, letters).

    ``public-products`` draws candidates ``a^{+-1} b^{+-1}`` from ``aux``;
    ``random-products`` multiplies elements of a verified pool (``aux`` if
    given, otherwise the ``sss-loops`` sample).
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if budget < 1:
        raise ValueError("budget must be positive")
    truncated = False
    if strategy == "sss-loops":
        cands, truncated = sss_loops(u, sss_budget)
    elif strategy == "public-products":
        signed = []
        for a in aux:
            signed.append(a)
            signed.append(inverse(a))
        cands = list(signed)
        for i, a in enumerate(signed):
            for b in signed[i:]:
                cands.append(product(a, b))
                cands.append(product(b, a))
        cands.sort(key=lambda w: (len(w.reduced()), w.letters))
    else:
        rng = random.Random(seed)
        if aux:
            pool = [a for a in aux if verify_commutes(a, u, mod_delta_sq)]
        else:
            pool, truncated = sss_loops(u, sss_budget)
        pool = pool + [inverse(a) for a in pool]
        cands = list(pool)
        if pool:
            for _ in range(4 * budget):
                k = rng.randint(2, 3)
                cands.append(product(*[rng.choice(pool) for _ in range(k)]))
    kept = [c for c in _order_dedup(cands, len(cands)) if verify_commutes(c, u, mod_delta_sq)]
    return CentralizerSample(
        base=u,
        elements=kept[:budget],
        strategy=strategy,
        mod_delta_sq=mod_delta_sq,
        truncated=truncated,
        seed=seed,
        bases=[u],
    )


def approx_intersection(samples: Sequence[CentralizerSample], budget: int = 64) -> CentralizerSample:
    """Elements from any sample that commute with every base."""
    if not samples:
        raise ValueError("need at least one sample")
    bases: list[Braid] = []
    for s in samples:
        bases.extend(s.bases or [s.base])
    n = bases[0].n
    if any(b.n != n for b in bases):
        raise ValueError("strand mismatch")
    mod = any(s.mod_delta_sq for s in samples)
    if len(samples) == 1:
        s = samples[0]
        return CentralizerSample(s.base, list(s.elements[:budget]), s.strategy, True, s.mod_delta_sq, s.truncated, s.seed, list(bases))
    pool: list[Braid] = []
    for s in samples:
        pool.extend(s.elements)
    kept = [c for c in _order_dedup(pool, len(pool)) if all(verify_commutes(c, b, mod) for b in bases)]
    return CentralizerSample(
        base=bases[0],
        elements=kept[:budget],
        strategy="intersection",
        mod_delta_sq=mod,
        truncated=any(s.truncated for s in samples),
        bases=bases,
    )
