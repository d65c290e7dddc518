"""Exact arithmetic in the Artin braid group B_n.

Words are flat tuples of signed generator indices (``3`` is sigma_3,
``-3`` its inverse).  Equality is decided through the left Garside normal
form ``Delta^p A_1 ... A_k`` where each ``A_i`` is a permutation braid,
stored as a tuple of 0-based images: strand starting at position ``j``
ends at position ``perm[j]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

LENGTH_KINDS = ("artin-letters", "canonical-length", "sup-minus-inf")


class StrandMismatch(ValueError):
    pass


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class Braid:
    """A braid word on ``n`` strands.  Letters are kept as given; products
    are freely reduced."""

    n: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"need at least 2 strands, got {self.n}")
        letters = tuple(int(x) for x in self.letters)
        for x in letters:
            if x == 0 or abs(x) >= self.n:
                raise ValueError(f"letter {x} out of range for B_{self.n}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def identity(cls, n: int) -> Braid:
        return cls(n, ())

    @classmethod
    def delta(cls, n: int, power: int = 1) -> Braid:
        return cls(n, delta_letters(n, power))

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: Braid) -> Braid:
        return product(self, other)

    def __invert__(self) -> Braid:
        return inverse(self)

    def __pow__(self, k: int) -> Braid:
        base = self if k >= 0 else inverse(self)
        return Braid(self.n, free_reduce(base.letters * abs(k)))

    def reduced(self) -> Braid:
        return Braid(self.n, free_reduce(self.letters))

    def is_identity_word(self) -> bool:
        return not free_reduce(self.letters)

    def exponent_sum(self) -> int:
        return sum(1 if x > 0 else -1 for x in self.letters)

    def nf(self) -> NormalForm:
        return normal_form(self)

    def to_json(self) -> dict:
        return {"n": self.n, "word": list(self.letters)}

    @classmethod
    def from_json(cls, data: dict) -> Braid:
        return cls(int(data["n"]), tuple(data["word"]))

    def __repr__(self) -> str:
        return f"Braid({self.n}, {list(self.letters)})"


def _check(a: Braid, b: Braid) -> None:
    if a.n != b.n:
        raise StrandMismatch(f"B_{a.n} vs B_{b.n}")


def product(*words: Braid) -> Braid:
    if not words:
        raise ValueError("product of nothing")
    n = words[0].n
    letters: list[int] = []
    for w in words:
        _check(words[0], w)
        letters.extend(w.letters)
    return Braid(n, free_reduce(letters))


def inverse(a: Braid) -> Braid:
    return Braid(a.n, tuple(-x for x in reversed(a.letters)))


def conjugate(z: Braid, x: Braid) -> Braid:
    """``z x z^-1``."""
    return product(z, x, inverse(z))


def commutator(a: Braid, b: Braid) -> Braid:
    return product(a, b, inverse(a), inverse(b))


# --- permutation braids -------------------------------------------------

Perm = tuple[int, ...]


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def delta_perm(n: int) -> Perm:
    return tuple(range(n - 1, -1, -1))


def perm_inverse(p: Sequence[int]) -> Perm:
    inv = [0] * len(p)
    for j, v in enumerate(p):
        inv[v] = j
    return tuple(inv)


def perm_product(a: Sequence[int], b: Sequence[int]) -> Perm:
    """Permutation of the braid ``a * b`` (a first)."""
    return tuple(b[v] for v in a)


def perm_tau(p: Sequence[int]) -> Perm:
    """Conjugation by Delta: sigma_i -> sigma_{n-i}."""
    n = len(p)
    return tuple(n - 1 - p[n - 1 - j] for j in range(n))


def starting_set(p: Sequence[int]) -> frozenset[int]:
    """1-based generators that are left prefixes of the permutation braid."""
    return frozenset(i + 1 for i in range(len(p) - 1) if p[i] > p[i + 1])


def finishing_set(p: Sequence[int]) -> frozenset[int]:
    """1-based generators that are right suffixes of the permutation braid."""
    inv = perm_inverse(p)
    return frozenset(i + 1 for i in range(len(p) - 1) if inv[i] > inv[i + 1])


def is_left_weighted(a: Sequence[int], b: Sequence[int]) -> bool:
    return starting_set(b) <= finishing_set(a)


def perm_to_letters(p: Sequence[int]) -> tuple[int, ...]:
    """A positive word for the permutation braid (greedy prefix peeling)."""
    p = list(p)
    out: list[int] = []
    i = 0
    while i < len(p) - 1:
        if p[i] > p[i + 1]:
            out.append(i + 1)
            p[i], p[i + 1] = p[i + 1], p[i]
            i = max(i - 1, 0)
        else:
            i += 1
    return tuple(out)


def letters_to_perm(n: int, letters: Iterable[int]) -> Perm:
    """Permutation of a positive word (not checked to be simple)."""
    pos = list(range(n))  # pos[strand] = current position
    at = list(range(n))  # at[position] = strand
    for x in letters:
        i = x - 1
        s, t = at[i], at[i + 1]
        at[i], at[i + 1] = t, s
        pos[s], pos[t] = i + 1, i
    return tuple(pos)


@lru_cache(maxsize=None)
def delta_letters(n: int, power: int = 1) -> tuple[int, ...]:
    one = perm_to_letters(delta_perm(n))
    if power >= 0:
        return one * power
    inv = tuple(-x for x in reversed(one))
    return inv * (-power)


def _left_weight(a: Perm, b: Perm) -> tuple[Perm, Perm, bool]:
    """Push generators from the front of ``b`` onto ``a`` until the pair is
    left-weighted."""
    n = len(a)
    ainv = list(perm_inverse(a))
    bl = list(b)
    changed = False
    i = 0
    while i < n - 1:
        if bl[i] > bl[i + 1] and ainv[i] < ainv[i + 1]:
            bl[i], bl[i + 1] = bl[i + 1], bl[i]
            ainv[i], ainv[i + 1] = ainv[i + 1], ainv[i]
            changed = True
            i = max(i - 1, 0)
        else:
            i += 1
    if not changed:
        return a, b, False
    return perm_inverse(ainv), tuple(bl), True


@dataclass(frozen=True)
class NormalForm:
    """Left normal form ``Delta^p A_1 ... A_k``."""

    n: int
    p: int
    factors: tuple[Perm, ...]

    @property
    def inf(self) -> int:
        return self.p

    @property
    def sup(self) -> int:
        return self.p + len(self.factors)

    @property
    def canonical_length(self) -> int:
        return len(self.factors)

    def mod_delta_sq(self) -> NormalForm:
        return NormalForm(self.n, self.p % 2, self.factors)

    def to_braid(self) -> Braid:
        letters = list(delta_letters(self.n, self.p))
        for f in self.factors:
            letters.extend(perm_to_letters(f))
        return Braid(self.n, tuple(letters))

    def key(self) -> tuple:
        return (self.n, self.p, self.factors)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "factors": [[v + 1 for v in f] for f in self.factors],
        }

    @classmethod
    def from_json(cls, data: dict) -> NormalForm:
        return cls(
            int(data["n"]),
            int(data["p"]),
            tuple(tuple(v - 1 for v in f) for f in data["factors"]),
        )


def _sigma_perm(n: int, i: int) -> Perm:
    p = list(range(n))
    p[i - 1], p[i] = i, i - 1
    return tuple(p)


def _co_sigma_perm(n: int, i: int) -> Perm:
    """Permutation of the simple element X with X sigma_i = Delta."""
    p = list(range(n - 1, -1, -1))
    for j, v in enumerate(p):
        if v == i - 1:
            p[j] = i
        elif v == i:
            p[j] = i - 1
    return tuple(p)


def _insert(factors: list[Perm], new: Perm, ident: Perm) -> None:
    factors.append(new)
    j = len(factors) - 1
    while j > 0:
        a2, b2, changed = _left_weight(factors[j - 1], factors[j])
        if not changed:
            break
        factors[j - 1] = a2
        if b2 == ident:
            del factors[j]
        else:
            factors[j] = b2
        j -= 1


@lru_cache(maxsize=200_000)
def _normal_form(n: int, letters: tuple[int, ...]) -> NormalForm:
    ident = identity_perm(n)
    dperm = delta_perm(n)
    negs_after = sum(1 for x in letters if x < 0)
    p = -negs_after
    factors: list[Perm] = []
    for x in letters:
        if x < 0:
            negs_after -= 1
            f = _co_sigma_perm(n, -x)
        else:
            f = _sigma_perm(n, x)
        if negs_after % 2:
            f = perm_tau(f)
        _insert(factors, f, ident)
    lead = 0
    while lead < len(factors) and factors[lead] == dperm:
        lead += 1
    return NormalForm(n, p + lead, tuple(factors[lead:]))


def normal_form(w: Braid) -> NormalForm:
    return _normal_form(w.n, free_reduce(w.letters))


def nf_from_factors(n: int, p: int, factors: Iterable[Perm]) -> NormalForm:
    """Normalize ``Delta^p`` times an arbitrary sequence of simple factors."""
    ident = identity_perm(n)
    dperm = delta_perm(n)
    out: list[Perm] = []
    for f in factors:
        if f != ident:
            _insert(out, tuple(f), ident)
    lead = 0
    while lead < len(out) and out[lead] == dperm:
        lead += 1
    return NormalForm(n, p + lead, tuple(out[lead:]))


def equal(a: Braid, b: Braid) -> bool:
    _check(a, b)
    if free_reduce(a.letters) == free_reduce(b.letters):
        return True
    return normal_form(a) == normal_form(b)


def equal_mod_delta_sq(a: Braid, b: Braid) -> bool:
    _check(a, b)
    return normal_form(a).mod_delta_sq() == normal_form(b).mod_delta_sq()


def is_identity(a: Braid) -> bool:
    nf = normal_form(a)
    return nf.p == 0 and not nf.factors


def inf(w: Braid) -> int:
    return normal_form(w).inf


def sup(w: Braid) -> int:
    return normal_form(w).sup


def prefix_leq(a: Braid, b: Braid) -> bool:
    """``a`` is a prefix of ``b``: ``a^-1 b`` is a positive braid."""
    _check(a, b)
    return inf(product(inverse(a), b)) >= 0


def shift(w: Braid, by: int = 1) -> Braid:
    """Index shift ``sigma_i -> sigma_{i+by}``, landing in B_{n+by}."""
    return Braid(w.n + by, tuple(x + by if x > 0 else x - by for x in w.letters))


def unshift(w: Braid, by: int = 1) -> Braid:
    """Inverse of ``shift``: letter for letter when no low letter occurs,
    otherwise on the reduced word or, failing that, on a word inside the
    support of ``w``."""
    letters = w.letters
    if any(abs(x) <= by for x in letters):
        letters = free_reduce(letters)
    if any(abs(x) <= by for x in letters):
        letters = parabolic_word(w).letters
    for x in letters:
        if abs(x) <= by:
            raise ValueError(f"cannot unshift: letter {x} present")
    return Braid(w.n - by, tuple(x - by if x > 0 else x + by for x in letters))


def symmetric_form(w: Braid) -> tuple[Braid, Braid]:
    """Positive words ``a``, ``b`` with ``w = a^-1 b`` and no common left
    divisor.  Elements of a standard parabolic subgroup keep all their
    letters inside it, so this also exposes the support of ``w``."""
    nf = normal_form(w)
    n, p, k = nf.n, nf.p, len(nf.factors)
    if p >= 0:
        return Braid.identity(n), nf.to_braid()
    if p + k <= 0:
        return normal_form(inverse(w)).to_braid(), Braid.identity(n)
    r = -p
    head = Braid(n, tuple(x for f in nf.factors[:r] for x in perm_to_letters(f)))
    a = normal_form(product(inverse(head), Braid.delta(n, r))).to_braid()
    b = Braid(n, tuple(x for f in nf.factors[r:] for x in perm_to_letters(f)))
    return a, b


def support(w: Braid) -> frozenset[int]:
    """Generators of the smallest standard parabolic subgroup holding ``w``."""
    a, b = symmetric_form(w)
    return frozenset(abs(x) for x in a.letters + b.letters)


def parabolic_word(w: Braid) -> Braid:
    """A word for ``w`` using only letters from its support."""
    a, b = symmetric_form(w)
    return product(inverse(a), b)


def embed(w: Braid, n: int) -> Braid:
    """View ``w`` in B_n for some n >= w.n."""
    if n < w.n:
        raise ValueError(f"cannot embed B_{w.n} into B_{n}")
    return Braid(n, w.letters)


def word_length(w: Braid, kind: str = "artin-letters") -> int:
    if kind == "artin-letters":
        return len(free_reduce(w.letters))
    if kind == "canonical-length":
        return normal_form(w).canonical_length
    if kind == "sup-minus-inf":
        nf = normal_form(w)
        return nf.sup - nf.inf
    raise ValueError(f"unknown length kind {kind!r}")


def sigma(n: int, *letters: int) -> Braid:
    """Shorthand: ``sigma(4, 1, 1, -2)`` is sigma_1^2 sigma_2^-1 in B_4."""
    return Braid(n, letters)
