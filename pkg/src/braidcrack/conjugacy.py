"""Conjugacy machinery: cycling/decycling, super summit sets, CDP/CSP.

Conventions: a conjugator ``g`` for ``x -> y`` always means ``y = g x g^-1``.
Super summit sets are explored breadth-first through minimal simple
elements; each member records the conjugator taking the summit
representative to it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .braid import (
    Braid,
    NormalForm,
    Perm,
    delta_perm,
    equal,
    identity_perm,
    inverse,
    nf_from_factors,
    normal_form,
    perm_inverse,
    perm_product,
    perm_tau,
    perm_to_letters,
    product,
)

DEFAULT_BUDGET = 20_000

FOUND = "found"
NOT_CONJUGATE = "not-conjugate"
UNKNOWN = "unknown"


def _perm_braid(n: int, p: Perm, inv: bool = False) -> Braid:
    w = Braid(n, perm_to_letters(p))
    return inverse(w) if inv else w


def shortest_word(w: Braid) -> Braid:
    """Pick the shorter of the freely reduced word and the normal-form word."""
    r = w.reduced()
    alt = normal_form(r).to_braid()
    return alt if len(alt) < len(r) else r


# --- weak-order lattice on permutation braids ---------------------------


def _crossings(p: Perm) -> set[tuple[int, int]]:
    n = len(p)
    return {(i, j) for i in range(n) for j in range(i + 1, n) if p[i] > p[j]}


def _perm_from_crossings(n: int, inv: set[tuple[int, int]]) -> Perm:
    out = []
    for i in range(n):
        up = sum(1 for j in range(i + 1, n) if (i, j) in inv)
        down = sum(1 for j in range(i) if (j, i) in inv)
        out.append(i + up - down)
    return tuple(out)


def simple_join(a: Perm, b: Perm) -> Perm:
    """Least common right multiple of two permutation braids."""
    n = len(a)
    inv = _crossings(a) | _crossings(b)
    changed = True
    while changed:
        changed = False
        for i, j in list(inv):
            for k in range(j + 1, n):
                if (j, k) in inv and (i, k) not in inv:
                    inv.add((i, k))
                    changed = True
    return _perm_from_crossings(n, inv)


def simple_leq(a: Perm, b: Perm) -> bool:
    return _crossings(a) <= _crossings(b)


def _complement(a: Perm, b: NormalForm) -> Perm:
    """Smallest positive ``c`` with ``a`` a prefix of ``b c``; ``b`` positive."""
    n = b.n
    if b.p > 0:
        return identity_perm(n)
    cur = a
    for f in b.factors:
        # cur <- f^-1 (cur v f)
        j = simple_join(cur, f)
        cur = tuple(j[v] for v in perm_inverse(f))
    return cur


# --- cycling / decycling -------------------------------------------------


def cycle_once(x: NormalForm) -> tuple[NormalForm, Perm, bool]:
    """Returns (c(x), factor s, inverted) with c(x) = s^-1 x s when not
    inverted.  Only valid when x has factors."""
    first = x.factors[0]
    s = perm_tau(first) if x.p % 2 else first
    new = nf_from_factors(x.n, x.p, x.factors[1:] + (s,))
    return new, s, False


def decycle_once(x: NormalForm) -> tuple[NormalForm, Perm]:
    """d(x) = A_k x A_k^-1."""
    last = x.factors[-1]
    new = nf_from_factors(x.n, x.p, (perm_tau(last) if x.p % 2 else last,) + x.factors[:-1])
    return new, last


def cycling_decycling(x: NormalForm | Braid) -> tuple[NormalForm, Braid]:
    """Move ``x`` into its super summit set.  Returns ``(rep, g)`` with
    ``rep = g x g^-1``."""
    if isinstance(x, Braid):
        x = normal_form(x)
    n = x.n
    limit = n * (n - 1) // 2
    g_letters: list[int] = []
    cur = x
    # raise inf
    stale = 0
    while cur.factors and stale < limit:
        before = cur.inf
        cur, s, _ = cycle_once(cur)
        # c(x) = s^-1 x s, so prepend s^-1
        g_letters[:0] = [-v for v in reversed(perm_to_letters(s))]
        stale = 0 if cur.inf > before else stale + 1
    # lower sup
    stale = 0
    while cur.factors and stale < limit:
        before = cur.sup
        cur, last = decycle_once(cur)
        g_letters[:0] = list(perm_to_letters(last))
        stale = 0 if cur.sup < before else stale + 1
    g = Braid(n, tuple(g_letters)).reduced()
    return cur, shortest_word(g)


# --- super summit sets ----------------------------------------------------


def _inf_fix(x: NormalForm, rho: Perm) -> Perm:
    """Smallest simple rho' >= rho with inf(rho'^-1 x rho') >= inf(x)."""
    while True:
        a = perm_tau(rho) if x.p % 2 else rho
        b = nf_from_factors(x.n, 0, x.factors + (rho,))
        c = _complement(a, b)
        if c == identity_perm(x.n):
            return rho
        rho = perm_product(rho, c)


def _invert_nf(x: NormalForm) -> NormalForm:
    return normal_form(inverse(x.to_braid()))


def minimal_simple(x: NormalForm, x_inv: NormalForm, i: int) -> Perm:
    """Smallest simple element with prefix sigma_i conjugating ``x`` inside
    its super summit set (``x`` must already be a summit element)."""
    n = x.n
    rho = list(range(n))
    rho[i - 1], rho[i] = i, i - 1
    rho = tuple(rho)
    while True:
        r1 = _inf_fix(x, rho)
        r2 = _inf_fix(x_inv, r1)
        if r2 == rho:
            return rho
        rho = r2


def conjugate_by_simple(x: NormalForm, rho: Perm) -> NormalForm:
    """rho^-1 x rho."""
    w = product(_perm_braid(x.n, rho, inv=True), x.to_braid(), _perm_braid(x.n, rho))
    return normal_form(w)


@dataclass
class SummitSet:
    base: NormalForm
    members: dict[tuple, NormalForm] = field(default_factory=dict)
    conjugator_to: dict[tuple, Braid] = field(default_factory=dict)
    edges: list[tuple[tuple, Perm, tuple]] = field(default_factory=list)
    summit_inf: int = 0
    summit_sup: int = 0
    truncated: bool = False
    origin: Braid | None = None
    to_base: Braid | None = None

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, nf: NormalForm) -> bool:
        return nf.key() in self.members

    @property
    def canonical(self) -> NormalForm:
        return self.members[min(self.members)]


def sss_compute(x: Braid | NormalForm, budget: int = DEFAULT_BUDGET, with_edges: bool = False) -> SummitSet:
    """Super summit set of ``x`` closed under minimal simple conjugation.

    ``conjugator_to[key]`` maps the base representative to the member.
    ``to_base`` maps the input ``x`` to the base representative.
    """
    xb = x if isinstance(x, Braid) else x.to_braid()
    rep, g = cycling_decycling(normal_form(xb))
    n = rep.n
    ss = SummitSet(base=rep, summit_inf=rep.inf, summit_sup=rep.sup, origin=xb, to_base=g)
    ss.members[rep.key()] = rep
    ss.conjugator_to[rep.key()] = Braid.identity(n)
    if not rep.factors:
        return ss
    queue = deque([rep.key()])
    while queue:
        key = queue.popleft()
        m = ss.members[key]
        m_inv = _invert_nf(m)
        seen_rho: set[Perm] = set()
        for i in range(1, n):
            rho = minimal_simple(m, m_inv, i)
            if rho in seen_rho:
                continue
            seen_rho.add(rho)
            new = conjugate_by_simple(m, rho)
            nk = new.key()
            if with_edges:
                ss.edges.append((key, rho, nk))
            if nk in ss.members:
                continue
            if len(ss.members) >= budget:
                ss.truncated = True
                continue
            ss.members[nk] = new
            c = product(_perm_braid(n, rho, inv=True), ss.conjugator_to[key])
            ss.conjugator_to[nk] = shortest_word(c)
            queue.append(nk)
    return ss


@dataclass
class ConjugacyResult:
    status: str
    conjugator: Braid | None = None
    sss_size: int = 0

    @property
    def found(self) -> bool:
        return self.status == FOUND


def lambda_invariant(x: Braid) -> tuple[int, int, int]:
    rep, _ = cycling_decycling(normal_form(x))
    return (rep.inf, rep.sup, x.exponent_sum())


def csp_solve(x: Braid, y: Braid, budget: int = DEFAULT_BUDGET, sss: SummitSet | None = None) -> ConjugacyResult:
    """Find ``g`` with ``g x g^-1 = y``."""
    if x.n != y.n:
        raise ValueError("strand mismatch")
    if x.exponent_sum() != y.exponent_sum():
        return ConjugacyResult(NOT_CONJUGATE)
    if sss is None:
        sss = sss_compute(x, budget)
    y_rep, g_y = cycling_decycling(normal_form(y))
    if (y_rep.inf, y_rep.sup) != (sss.summit_inf, sss.summit_sup):
        return ConjugacyResult(NOT_CONJUGATE, sss_size=len(sss))
    key = y_rep.key()
    if key not in sss.members:
        status = UNKNOWN if sss.truncated else NOT_CONJUGATE
        return ConjugacyResult(status, sss_size=len(sss))
    g = product(inverse(g_y), sss.conjugator_to[key], sss.to_base)
    g = shortest_word(g)
    if not equal(product(g, x, inverse(g)), y):
        raise AssertionError("summit conjugator failed to verify")
    return ConjugacyResult(FOUND, g, len(sss))


def cdp(x: Braid, y: Braid, budget: int = DEFAULT_BUDGET) -> bool | None:
    """True/False when decided, None when the summit set was truncated."""
    res = csp_solve(x, y, budget)
    if res.status == FOUND:
        return True
    if res.status == NOT_CONJUGATE:
        return False
    return None


# --- simultaneous conjugacy ---------------------------------------------


@dataclass
class MSCSPInstance:
    n: int
    equations: list[tuple[Braid, Braid]]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "equations": [{"x": list(x.letters), "y": list(y.letters)} for x, y in self.equations],
        }

    @classmethod
    def from_json(cls, data: dict) -> MSCSPInstance:
        n = int(data["n"])
        return cls(n, [(Braid(n, tuple(e["x"])), Braid(n, tuple(e["y"]))) for e in data["equations"]])


def verify_system(g: Braid, equations: Sequence[tuple[Braid, Braid]], mod_delta_sq: bool = False) -> list[bool]:
    from .braid import equal_mod_delta_sq

    eq = equal_mod_delta_sq if mod_delta_sq else equal
    gi = inverse(g)
    return [eq(product(g, x, gi), y) for x, y in equations]


@dataclass
class MSCSPResult:
    status: str
    conjugator: Braid | None = None
    failed_equations: list[int] = field(default_factory=list)
    candidates_tried: int = 0
    proved: bool = False

    @property
    def found(self) -> bool:
        return self.status == FOUND


def lift_residue(x: Braid, y: Braid) -> Braid | None:
    """The unique ``y Delta^(2k)`` with the exponent sum of ``x``, or None."""
    n = x.n
    diff = x.exponent_sum() - y.exponent_sum()
    step = n * (n - 1)
    if diff % step:
        return None
    k = diff // step
    return product(y, Braid.delta(n, 2 * k)) if k else y


def mscsp_solve(
    inst: MSCSPInstance,
    budget: int = DEFAULT_BUDGET,
    correction_budget: int = 2000,
    mod_delta_sq: bool = False,
    centralizer_budget: int = 64,
    known_centralizer: Sequence[Braid] = (),
) -> MSCSPResult:
    """Common conjugator for every equation of ``inst``.

    Solves one CSP on the equation with the smallest summit set, then
    right-multiplies by centralizer elements of that ``x`` in order of
    increasing length until every equation verifies.  With
    ``mod_delta_sq`` the right-hand sides are residues and are first lifted
    to the representative with matching exponent sum.  Elements passed in
    ``known_centralizer`` are trusted to commute with every ``x`` and join
    the correction generators.
    """
    from .centralizer import sample_centralizer

    if not inst.equations:
        raise ValueError("empty instance")
    n = inst.n
    eqs: list[tuple[Braid, Braid]] = []
    for idx, (x, y) in enumerate(inst.equations):
        if mod_delta_sq:
            y = lift_residue(x, y)
            if y is None:
                return MSCSPResult(NOT_CONJUGATE, failed_equations=[idx], proved=True)
        eqs.append((x, y))
    e = Braid.identity(n)
    if all(verify_system(e, eqs)):
        return MSCSPResult(FOUND, e)
    summits = []
    for idx, (x, _) in enumerate(eqs):
        ss = sss_compute(x, budget)
        summits.append((ss.truncated, len(ss), idx, ss))
    summits.sort(key=lambda t: (t[0], t[1], t[2]))
    best_fail: list[int] = list(range(len(eqs)))
    tried = 0
    for _, _, idx, ss in summits:
        x, y = eqs[idx]
        res = csp_solve(x, y, budget, sss=ss)
        if res.status == NOT_CONJUGATE:
            return MSCSPResult(NOT_CONJUGATE, failed_equations=[idx], proved=True)
        if res.status != FOUND:
            continue
        g0 = res.conjugator
        sample = sample_centralizer(x, "sss-loops", centralizer_budget, seed=0)
        gens = list(known_centralizer) + sample.elements
        for h in _coset_candidates(n, gens, correction_budget):
            tried += 1
            g = shortest_word(product(g0, h))
            ok = verify_system(g, eqs)
            if all(ok):
                return MSCSPResult(FOUND, g, candidates_tried=tried)
            fails = [i for i, v in enumerate(ok) if not v]
            if len(fails) < len(best_fail):
                best_fail = fails
        break
    return MSCSPResult(UNKNOWN, failed_equations=best_fail, candidates_tried=tried)


def _coset_candidates(n: int, gens: Sequence[Braid], budget: int):
    """Products of centralizer generators and their inverses, shortest first,
    distinct as group elements."""
    alphabet: list[Braid] = []
    for g in gens:
        alphabet.append(g)
        alphabet.append(inverse(g))
    seen: set[tuple] = set()
    frontier: list[Braid] = [Braid.identity(n)]
    count = 0
    while frontier:
        nxt: list[Braid] = []
        frontier.sort(key=lambda w: (len(w), w.letters))
        for w in frontier:
            key = normal_form(w).key()
            if key in seen:
                continue
            seen.add(key)
            yield w
            count += 1
            if count >= budget:
                return
            nxt.extend(product(w, a) for a in alphabet)
        frontier = nxt
