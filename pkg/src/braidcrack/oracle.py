"""Ground-truth deciders that share no code with the Garside machinery.

Equality goes through the Dynnikov action of B_n on integer laminations of
the punctured disk, which is faithful.  Coordinates are Python integers, so
nothing can wrap; the ``limit`` guard exists for callers that want a hard
ceiling on coordinate size anyway.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .braid import Braid, StrandMismatch

MAX_ORACLE_STRANDS = 12


class CoordinateOverflow(ArithmeticError):
    pass


def _pos(x: int) -> int:
    return x if x > 0 else 0


def _neg(x: int) -> int:
    return x if x < 0 else 0


def base_point(n: int) -> tuple[int, ...]:
    return (0, 1) * n


def act_letter(coords: tuple[int, ...], letter: int) -> tuple[int, ...]:
    i = 2 * (abs(letter) - 1)
    a1, b1, a2, b2 = coords[i : i + 4]
    if letter > 0:
        t = a1 - _neg(b1) - a2 + _pos(b2)
        new = (
            a1 + _pos(b1) + _pos(_pos(b2) - t),
            b2 - _pos(t),
            a2 + _neg(b2) + _neg(_neg(b1) + t),
            b1 + _pos(t),
        )
    else:
        t = a1 + _neg(b1) - a2 - _pos(b2)
        new = (
            a1 - _pos(b1) - _pos(_pos(b2) + t),
            b2 + _neg(t),
            a2 - _neg(b2) - _neg(_neg(b1) - t),
            b1 - _neg(t),
        )
    return coords[:i] + new + coords[i + 4 :]


def act(coords: tuple[int, ...], letters, limit: int | None = None) -> tuple[int, ...]:
    for x in letters:
        coords = act_letter(coords, x)
        if limit is not None and max(abs(c) for c in coords) > limit:
            raise CoordinateOverflow(f"coordinate exceeded {limit}")
    return coords


def coordinates(w: Braid, limit: int | None = None) -> tuple[int, ...]:
    return act(base_point(w.n), w.letters, limit)


def oracle_equal(a: Braid, b: Braid, limit: int | None = None) -> bool:
    if a.n != b.n:
        raise StrandMismatch(f"B_{a.n} vs B_{b.n}")
    if a.n > MAX_ORACLE_STRANDS:
        raise ValueError(f"oracle limited to n <= {MAX_ORACLE_STRANDS}")
    return coordinates(a, limit) == coordinates(b, limit)


@dataclass
class BruteResult:
    words: list[Braid] = field(default_factory=list)
    partial: bool = False
    visited: int = 0

    def __contains__(self, w: Braid) -> bool:
        return any(w.letters == g.letters for g in self.words)

    def __len__(self) -> int:
        return len(self.words)


def reduced_words(n: int, max_len: int) -> Iterator[tuple[int, ...]]:
    """Freely reduced words up to ``max_len``, shortlex order."""
    alphabet = [s * i for i in range(1, n) for s in (1, -1)]
    level: list[tuple[int, ...]] = [()]
    yield ()
    for _ in range(max_len):
        nxt = []
        for w in level:
            for x in alphabet:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        yield from nxt
        level = nxt


def brute_conjugators(x: Braid, y: Braid, max_len: int, budget: int = 2_000_000) -> BruteResult:
    """All reduced ``g`` with ``|g| <= max_len`` and ``g x g^-1 = y``.

    Tested as ``g x = y g`` on coordinates, growing ``g`` letter by letter.
    """
    if x.n != y.n:
        raise StrandMismatch(f"B_{x.n} vs B_{y.n}")
    if max_len > 7:
        raise ValueError("max_len is capped at 7")
    n = x.n
    alphabet = [s * i for i in range(1, n) for s in (1, -1)]
    res = BruteResult()
    start_left = base_point(n)
    start_right = act(base_point(n), y.letters)
    # depth-first with explicit stack; order fixed afterwards by sorting
    stack: list[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]] = [((), start_left, start_right)]
    while stack:
        g, left, right = stack.pop()
        res.visited += 1
        if res.visited > budget:
            res.partial = True
            break
        if act(left, x.letters) == right:
            res.words.append(Braid(n, g))
        if len(g) == max_len:
            continue
        for s in alphabet:
            if g and g[-1] == -s:
                continue
            stack.append((g + (s,), act_letter(left, s), act_letter(right, s)))
    res.words.sort(key=lambda w: (len(w.letters), w.letters))
    return res


def brute_centralizer(u: Braid, max_len: int, budget: int = 2_000_000) -> BruteResult:
    return brute_conjugators(u, u, max_len, budget)


def brute_is_conjugate(x: Braid, y: Braid, max_len: int, budget: int = 2_000_000) -> bool | None:
    """True if a short conjugator exists, None if the search was cut short,
    False if none exists up to ``max_len``."""
    res = brute_conjugators(x, y, max_len, budget)
    if res.words:
        return True
    return None if res.partial else False
