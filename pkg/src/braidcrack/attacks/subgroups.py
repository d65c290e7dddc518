"""Recovering the secret generator index sets once z is known."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..braid import Braid, inverse, product, support
from ..centralizer import verify_commutes
from ..ttp import MSCSPvInstance
from .common import short_word_mod


@dataclass
class SubgroupRecovery:
    BL: tuple[int, ...]
    BR: tuple[int, ...]
    BL_commuting: tuple[int, ...]
    BR_commuting: tuple[int, ...]
    flagged: tuple[int, ...] = ()
    ambiguous: tuple[int, ...] = ()
    degenerate: bool = False
    w_words: list[Braid] = field(default_factory=list)
    v_words: list[Braid] = field(default_factory=list)

    def __iter__(self):
        yield self.BL
        yield self.BR

    def to_json(self) -> dict:
        return {
            "BL": list(self.BL),
            "BR": list(self.BR),
            "BL_commuting": list(self.BL_commuting),
            "BR_commuting": list(self.BR_commuting),
            "flagged": list(self.flagged),
            "ambiguous": list(self.ambiguous),
            "degenerate": self.degenerate,
        }


def recover_subgroups(inst: MSCSPvInstance, z: Braid) -> SubgroupRecovery:
    """Un-conjugate every public element by ``z`` and read off the index sets.

    A generator commuting with every w-word is a BR candidate and one
    commuting with every v-word a BL candidate.  Those commutation sets can
    include generators no word uses; the returned BL/BR are the supports of
    the recovered words, and the unused commuting generators are flagged.
    """
    n = inst.n
    zi = inverse(z)
    w_words = [short_word_mod(product(zi, y, z)) for y in inst.family("w")]
    v_words = [short_word_mod(product(zi, y, z)) for y in inst.family("v")]
    gens = [Braid(n, (i,)) for i in range(1, n)]
    br_comm = tuple(i for i, g in enumerate(gens, 1) if all(verify_commutes(g, w) for w in w_words))
    bl_comm = tuple(i for i, g in enumerate(gens, 1) if all(verify_commutes(g, v) for v in v_words))
    bl_used: set[int] = set()
    for w in w_words:
        bl_used |= support(w)
    br_used: set[int] = set()
    for v in v_words:
        br_used |= support(v)
    flagged = (set(bl_comm) - bl_used) | (set(br_comm) - br_used)
    ambiguous = set(bl_comm) & set(br_comm)
    return SubgroupRecovery(
        BL=tuple(sorted(bl_used)),
        BR=tuple(sorted(br_used)),
        BL_commuting=bl_comm,
        BR_commuting=br_comm,
        flagged=tuple(sorted(flagged)),
        ambiguous=tuple(sorted(ambiguous)),
        degenerate=not w_words and not v_words,
        w_words=w_words,
        v_words=v_words,
    )
