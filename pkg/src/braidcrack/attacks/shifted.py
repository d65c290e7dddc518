"""Shifted conjugacy: the shift operator ``d``, shifted decomposition
systems, their reduction to conjugacy in B_{n+1}, and the attack on a
reused commitment nonce.

Throughout, ``c``, ``x`` and secrets live in B_n and the public ``y`` in
B_{n+1}, with ``y = w d(c) sigma_1 d(x)``.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from ..braid import (
    Braid,
    embed,
    equal,
    free_reduce,
    inverse,
    is_identity,
    normal_form,
    parabolic_word,
    product,
    shift,
    support,
    unshift,
)
from ..centralizer import verify_commutes
from ..conjugacy import MSCSPInstance, cdp, csp_solve, lambda_invariant, mscsp_solve, shortest_word
from .centralizer_attack import PairGroup, bounded_conjugators
from .common import FAILED, SOLVED, AttackConfig, AttackReport, Stopwatch, finish, nf_key, random_word, words_up_to

# --- operators ------------------------------------------------------------


def d(w: Braid) -> Braid:
    return shift(w, 1)


def delta_small(n: int) -> Braid:
    """``sigma_{n-1} ... sigma_1`` in B_n."""
    return Braid(n, tuple(range(n - 1, 0, -1)))


def _s1(n: int) -> Braid:
    return Braid(n, (1,))


def shifted_conjugate(a: Braid, b: Braid) -> Braid:
    """``a * b = a d(b) sigma_1 d(a)^-1`` in B_{n+1}."""
    if a.n != b.n:
        raise ValueError("strand mismatch")
    N = a.n + 1
    return product(embed(a, N), d(b), _s1(N), d(inverse(a)))


def ce_transform(
    y1: Braid, y2: Braid, c1: Braid | None = None, c2: Braid | None = None
) -> tuple[Braid, Braid | None]:
    """``(y1^-1 y2, sigma_1^-1 d(c1)^-1 d(c2) sigma_1)``.  The first equals
    ``d(x)^-1 middle d(x)``; ``w`` cancels.  The middle is None unless both
    ``c`` are given."""
    target = product(inverse(y1), y2)
    if c1 is None or c2 is None:
        return target, None
    N = y1.n
    s = _s1(N)
    return target, product(inverse(s), d(inverse(c1)), d(c2), s)


def lift_to_bn1(target: Braid, middle: Braid | None) -> tuple[Braid, Braid | None]:
    """Conjugate by ``delta_{n+1}``, which turns ``d(x)`` into ``x``: from
    ``target = d(x)^-1 middle d(x)`` the lift reads
    ``T = x^-1 M x``, a conjugacy problem with conjugator ``x^-1``."""
    D = delta_small(target.n)
    Di = inverse(D)
    lt = product(D, target, Di)
    lm = None if middle is None else product(D, middle, Di)
    return lt, lm


def lifted_middle(c: Braid) -> Braid:
    """The lift of ``sigma_1^-1 d(c) sigma_1``, written without the
    conjugation: ``sigma_n ... sigma_2 d(c) sigma_2^-1 ... sigma_n^-1``."""
    N = c.n + 1
    P = Braid(N, tuple(range(N - 1, 1, -1)))
    return product(P, d(c), inverse(P))


def correction_subgroup(c1: Braid, c2: Braid) -> list[Braid]:
    """``d1..d6``: generators and inverses of an abelian subgroup of the
    centralizer of the lifted middle for ``(c1, c2)``."""
    N = c1.n + 1
    d1 = Braid.delta(N, 2)
    d2 = lifted_middle(product(inverse(c1), c2))
    d3 = Braid(N, tuple(range(1, N)) + tuple(range(N - 1, 0, -1)))
    gens = [d1, d2, d3]
    _, mid = ce_transform(Braid.identity(N), Braid.identity(N), c1, c2)
    _, lm = lift_to_bn1(Braid.identity(N), mid)
    if not equal(d2, lm):
        raise AssertionError("lifted middle identity failed")
    for g in gens:
        if not verify_commutes(g, lm):
            raise AssertionError("correction generator does not centralize the lifted middle")
    for i in range(3):
        for j in range(i + 1, 3):
            if not verify_commutes(gens[i], gens[j]):
                raise AssertionError("correction generators do not commute")
    return gens + [inverse(g) for g in gens]


# --- instances ------------------------------------------------------------


@dataclass
class MSSDPInstance:
    """Equations ``y_i = w d(c_i) sigma_1 d(x)``.  ``c_i`` is None when
    hidden; ``w``/``x`` are kept only in experiment mode."""

    n: int
    equations: list[tuple[Braid | None, Braid]]
    w: Braid | None = None
    x: Braid | None = None

    @property
    def ys(self) -> list[Braid]:
        return [y for _, y in self.equations]

    @property
    def cs(self) -> list[Braid | None]:
        return [c for c, _ in self.equations]

    def hidden(self) -> MSSDPInstance:
        """The variant: same ``y``, no ``c``, no secrets."""
        return MSSDPInstance(self.n, [(None, y) for y in self.ys])

    def public(self) -> MSSDPInstance:
        return MSSDPInstance(self.n, list(self.equations))

    def to_json(self) -> dict:
        out: dict = {"n": self.n, "equations": []}
        for c, y in self.equations:
            e: dict = {"y": list(y.letters)}
            if c is not None:
                e["c"] = list(c.letters)
            out["equations"].append(e)
        if self.w is not None:
            out["w"] = list(self.w.letters)
        if self.x is not None:
            out["x"] = list(self.x.letters)
        return out

    @classmethod
    def from_json(cls, data: dict) -> MSSDPInstance:
        n = int(data["n"])
        eqs = []
        for e in data["equations"]:
            c = Braid(n, tuple(e["c"])) if "c" in e and e["c"] is not None else None
            eqs.append((c, Braid(n + 1, tuple(e["y"]))))
        w = Braid(n + 1, tuple(data["w"])) if data.get("w") is not None else None
        x = Braid(n, tuple(data["x"])) if data.get("x") is not None else None
        return cls(n, eqs, w, x)


def sdp_rhs(w: Braid, c: Braid, x: Braid) -> Braid:
    N = c.n + 1
    return product(embed(w, N), d(c), _s1(N), d(x))


def verify_mssdp(inst: MSSDPInstance, w: Braid, x: Braid, cs: Sequence[Braid] | None = None) -> list[bool]:
    """Exact check of every equation; ``cs`` overrides the instance's."""
    cs = list(inst.cs) if cs is None else list(cs)
    out = []
    for c, y in zip(cs, inst.ys):
        out.append(c is not None and equal(sdp_rhs(w, c, x), y))
    return out


def mssdp_instance(
    n: int,
    count: int = 4,
    w_len: int = 2,
    x_len: int = 2,
    c_len: int = 2,
    seed: int = 0,
    reuse_nonce: bool = False,
) -> MSSDPInstance:
    """A seeded instance with ``c_{2k-1} != c_{2k}``.  With ``reuse_nonce``
    the secret has the commitment shape ``w = r``, ``x = r^-1``."""
    rng = random.Random(seed)
    if reuse_nonce:
        r = random_word(rng, n, w_len)
        w, x = embed(r, n + 1), inverse(r)
    else:
        w = random_word(rng, n + 1, w_len)
        x = random_word(rng, n, x_len)
    cs: list[Braid] = []
    while len(cs) < count:
        c = random_word(rng, n, rng.randint(1, c_len))
        if len(cs) % 2 == 1 and equal(c, cs[-1]):
            continue
        cs.append(c)
    return MSSDPInstance(n, [(c, sdp_rhs(w, c, x)) for c in cs], w, x)


# --- the two-coset search -------------------------------------------------


def _size(z: Braid) -> int:
    """Zero exactly at the identity."""
    nf = normal_form(z)
    return nf.canonical_length + abs(nf.p)


def _as_bn(t: Braid, n: int) -> Braid | None:
    """``t`` in B_{n+1} as a word of B_n, or None if it needs ``sigma_n``."""
    if n in support(t):
        return None
    return Braid(n, parabolic_word(t).letters)


@dataclass
class SearchResult:
    t: Braid | None
    expanded: int = 0
    frontier: int = 0
    visited: int = 0
    best_f: int | None = None
    expanded_keys: list[tuple] = field(default_factory=list)


def coset_search(
    starts: tuple[Braid, Braid],
    gens: tuple[Sequence[Braid], Sequence[Braid]],
    objective: Callable[[Braid, Braid], int],
    budget: int,
    depth: int,
) -> SearchResult:
    """Best-first search over pairs ``(t, u)`` in two cosets.

    A node expands to ``(t C_i, u C_j)`` for every generator or identity on
    each side (not both identities).  The frontier is ordered by
    ``(f, artin length, insertion)``; expanded pairs go to a visited set
    and are never expanded again.  Stops at ``f = 0``."""
    cache: dict[tuple, int] = {}

    def f(t: Braid, u: Braid, key: tuple) -> int:
        if key not in cache:
            cache[key] = objective(t, u)
        return cache[key]

    def key_of(t: Braid, u: Braid) -> tuple:
        return (nf_key(t), nf_key(u))

    t0, u0 = (shortest_word(s) for s in starts)
    n = t0.n
    e = Braid.identity(n)
    left = [e] + list(gens[0])
    right = [e] + list(gens[1])
    counter = 0
    k0 = key_of(t0, u0)
    f0 = f(t0, u0, k0)
    heap = [(f0, len(t0) + len(u0), counter, 0, t0, u0, k0)]
    queued = {k0}
    visited: set[tuple] = set()
    res = SearchResult(None, best_f=f0)
    while heap and res.expanded < budget:
        fv, _, _, dep, t, u, key = heapq.heappop(heap)
        if key in visited:
            continue
        res.best_f = fv if res.best_f is None else min(res.best_f, fv)
        if fv == 0:
            res.t = t
            break
        visited.add(key)
        res.expanded += 1
        res.expanded_keys.append(key)
        if dep >= depth:
            continue
        for a in left:
            for b in right:
                if a is e and b is e:
                    continue
                t2 = shortest_word(product(t, a)) if a is not e else t
                u2 = shortest_word(product(u, b)) if b is not e else u
                k2 = key_of(t2, u2)
                if k2 in visited or k2 in queued:
                    continue
                queued.add(k2)
                counter += 1
                heapq.heappush(heap, (f(t2, u2, k2), len(t2) + len(u2), counter, dep + 1, t2, u2, k2))
    res.frontier = len(heap)
    res.visited = len(visited)
    return res


# --- solvers --------------------------------------------------------------


def _pick_pairs(cs: Sequence[Braid]) -> tuple[list[tuple[int, int]], bool]:
    """Two index pairs with distinct ``c``, preferring ``(1,2), (3,4)``.
    The flag says a preferred pair was degenerate."""
    m = len(cs)
    preferred = [(i, i + 1) for i in range(0, m - 1, 2)]
    degenerate = any(equal(cs[i], cs[j]) for i, j in preferred)
    order = preferred + [(i, j) for i in range(m) for j in range(i + 1, m) if (i, j) not in preferred]
    picked = [(i, j) for i, j in order if not equal(cs[i], cs[j])]
    return picked[:2], degenerate


def _recover_w(y1: Braid, c1: Braid, x: Braid) -> Braid:
    # y1 = w d(c1) s1 d(x)
    N = y1.n
    return product(y1, d(inverse(x)), inverse(_s1(N)), d(inverse(c1)))


def _lifted_pair(inst: MSSDPInstance, i: int, j: int) -> tuple[Braid, Braid]:
    """(lifted middle, lifted target) for equations ``i``, ``j``."""
    target, mid = ce_transform(inst.ys[i], inst.ys[j], inst.cs[i], inst.cs[j])
    lt, lm = lift_to_bn1(target, mid)
    return lm, lt


def _new_report(cfg: AttackConfig, strategy: str) -> AttackReport:
    data = cfg.to_json()
    data["strategy"] = strategy
    return AttackReport(data)


def solve_mssdp(
    inst: MSSDPInstance,
    cfg: AttackConfig | None = None,
    reuse_nonce: bool = False,
) -> AttackReport:
    """Recover ``(w, x)`` from at least four equations with known ``c``.

    Each pair of equations with distinct ``c`` becomes a conjugacy problem
    in B_{n+1} with conjugator ``x^-1``; one summit-set solution per pair
    is then corrected inside the abelian correction subgroups until both
    agree and every equation holds.  With ``reuse_nonce`` the solution must
    also satisfy ``x = w^-1``."""
    cfg = cfg or AttackConfig(strategy="mssdp")
    cfg.validate()
    watch = Stopwatch()
    report = _new_report(cfg, "dsc" if reuse_nonce else "mssdp")
    n, N = inst.n, inst.n + 1
    if len(inst.equations) < 4:
        report.diagnostic = "need at least four equations"
        return finish(report, watch)
    if any(c is None for c in inst.cs):
        report.diagnostic = "hidden c: use the variant solver"
        return finish(report, watch)
    cs = [c for c in inst.cs if c is not None]
    pairs, degenerate = _pick_pairs(cs)
    report.extra["degenerate"] = degenerate
    if len(pairs) < 2:
        report.extra["stage"] = "degenerate"
        report.diagnostic = "fewer than two equation pairs with distinct c"
        return finish(report, watch)
    report.extra["pairs"] = [list(p) for p in pairs]
    lifted = [_lifted_pair(inst, i, j) for i, j in pairs]
    starts = []
    for X, Y in lifted:
        res = csp_solve(X, Y, cfg.cdp_budget)
        report.bump("csp_calls")
        if not res.found:
            report.extra["stage"] = "csp"
            report.diagnostic = f"lifted conjugacy problem {res.status}"
            return finish(report, watch)
        starts.append(res.conjugator)
    gens = tuple(correction_subgroup(cs[i], cs[j]) for i, j in pairs)
    i1 = pairs[0][0]
    ys = inst.ys

    def part(t: Braid) -> int:
        x = _as_bn(inverse(t), n)
        out = 0
        if x is None:
            # d(x) needs one more strand; score in B_{n+2}
            x = inverse(t)
            out += 1
        M = x.n + 1
        w = _recover_w(embed(ys[i1], M), embed(cs[i1], M - 1), x)
        for c, y in zip(cs, ys):
            out += _size(product(inverse(embed(y, M)), sdp_rhs(w, embed(c, M - 1), x)))
        if reuse_nonce:
            out += _size(product(w, embed(x, M)))
        return out

    def objective(t: Braid, u: Braid) -> int:
        return part(t) + part(u) + _size(product(inverse(t), u))

    sr = coset_search((starts[0], starts[1]), gens, objective, cfg.correction_budget, cfg.search_depth)
    report.counters.update(expanded=sr.expanded, frontier=sr.frontier, visited=sr.visited)
    report.extra["best_f"] = sr.best_f
    report.mscsp_built = MSCSPInstance(N, [(X, Y) for X, Y in lifted])
    report.extra["stage"] = "correction"
    if sr.t is None:
        # variation: one common solution of both lifted equations, then
        # the same correction search from (g, g)
        res = mscsp_solve(report.mscsp_built, cfg.cdp_budget, cfg.correction_budget)
        report.bump("mscsp_calls")
        if res.found:
            sr = coset_search((res.conjugator, res.conjugator), gens, objective, cfg.correction_budget, cfg.search_depth)
            report.bump("expanded", sr.expanded)
            report.extra["best_f"] = min(report.extra["best_f"], sr.best_f)
            report.extra["stage"] = "joint"
    if sr.t is None:
        report.diagnostic = "correction search budget exhausted"
        return finish(report, watch)
    x = _as_bn(inverse(sr.t), n)
    assert x is not None
    w = shortest_word(_recover_w(ys[i1], cs[i1], x))
    report.mscsp_solution = sr.t
    report.candidate_z = x
    report.extra["x"] = list(x.letters)
    report.extra["w"] = list(w.letters)
    report.verifier = lambda: all(verify_mssdp(inst, w, x))
    report.outcome = SOLVED
    return finish(report, watch)


def _variant_check(ys: Sequence[Braid], x: Braid) -> tuple[Braid, list[Braid]] | None:
    """Given ``x``, the solution ``w' = w d(c_1)``, ``c_i' = c_1^-1 c_i``
    if every ``y_i d(x)^-1 sigma_1^-1`` differs from the first by a
    shifted element; None otherwise."""
    N = x.n + 1
    us = [product(y, d(inverse(x)), inverse(_s1(N))) for y in ys]
    u1i = inverse(us[0])
    cs = []
    for u in us:
        r = product(u1i, u)
        if 1 in support(r):
            return None
        cs.append(unshift(r))
    return us[0], cs


def solve_mssdpv(inst: MSSDPInstance, cfg: AttackConfig | None = None) -> AttackReport:
    """Recover ``(w, x, c_i)`` from at least four equations with hidden
    ``c``: lifted targets are matched against short lifted middles, the
    matched system is solved for ``x^-1``, and when that fails the matched
    middles drive the two-coset correction search."""
    cfg = cfg or AttackConfig(strategy="mssdpv")
    cfg.validate()
    watch = Stopwatch()
    report = _new_report(cfg, "mssdpv")
    n, N = inst.n, inst.n + 1
    ys = inst.ys
    if len(ys) < 4:
        report.diagnostic = "need at least four equations"
        return finish(report, watch)
    pairs = [(i, i + 1) for i in range(0, len(ys) - 1, 2)]
    targets = []
    for i, j in pairs:
        t, _ = ce_transform(ys[i], ys[j])
        if is_identity(t):
            report.bump("degenerate_pairs")
            continue
        lt, _ = lift_to_bn1(t, None)
        targets.append(((i, j), lt))
    report.extra["degenerate"] = len(targets) < len(pairs)
    if not targets:
        report.extra["stage"] = "degenerate"
        report.diagnostic = "every CE target is trivial"
        return finish(report, watch)

    # step A: middles
    g_a = cfg.resolved_g_a(n)
    cands: list[tuple[Braid, Braid]] = []
    seen: set[tuple] = set()
    for c in words_up_to(n, g_a, min_len=1):
        k = nf_key(c)
        if k in seen:
            continue
        seen.add(k)
        cands.append((c, lifted_middle(c)))
    lam_cache: dict[tuple, tuple] = {}
    groups: list[PairGroup] = []
    cdiff: list[list[Braid]] = []
    for _, lt in targets:
        lam_t = lambda_invariant(lt)
        middles, diffs = [], []
        for c, m in cands:
            key = nf_key(c)
            if key not in lam_cache:
                lam_cache[key] = lambda_invariant(m)
            if lam_cache[key] != lam_t:
                continue
            report.bump("cdp_calls")
            if cdp(m, lt, cfg.cdp_budget):
                middles.append(m)
                diffs.append(c)
        report.trace.append({"tested": len(cands), "hits": len(middles)})
        if not middles:
            report.extra["stage"] = "middle"
            report.diagnostic = "no short middle conjugate to a lifted target"
            return finish(report, watch)
        groups.append(PairGroup(lt, middles))
        cdiff.append(diffs)
    report.pairs = [(gr.middles[0], gr.b) for gr in groups]

    def accept_x(x: Braid) -> bool:
        sol = _variant_check(ys, x)
        if sol is None:
            return False
        w, cs = sol
        report.candidate_z = x
        report.extra["x"] = list(x.letters)
        report.extra["w"] = list(shortest_word(w).letters)
        report.extra["c"] = [list(c.letters) for c in cs]
        report.verifier = lambda: all(verify_mssdp(inst, w, x, cs))
        return True

    # step A continued: the matched system in x^-1
    g_x = cfg.max_conjugator_len if cfg.max_conjugator_len is not None else 2 * g_a

    def stream():
        if all(len(gr.middles) == 1 for gr in groups):
            res = mscsp_solve(MSCSPInstance(N, [(gr.middles[0], gr.b) for gr in groups]), cfg.cdp_budget, cfg.correction_budget)
            report.bump("mscsp_calls")
            if res.found:
                yield res.conjugator
        yield from bounded_conjugators(groups, g_x, cfg.candidate_budget)

    tried: set[tuple] = set()
    for z in stream():
        k = nf_key(z)
        if k in tried:
            continue
        tried.add(k)
        report.bump("conjugator_candidates")
        mids = [gr.match(z) for gr in groups]
        if any(m is None for m in mids):
            continue
        x = _as_bn(inverse(z), n)
        if x is None or not accept_x(x):
            continue
        report.mscsp_built = MSCSPInstance(N, [(m, gr.b) for m, gr in zip(mids, groups)])
        report.mscsp_solution = z
        report.extra["stage"] = "conjugator"
        report.outcome = SOLVED
        return finish(report, watch)

    # step B: correction search on the first two matched targets
    if len(groups) >= 2:
        for ca in cdiff[0]:
            for cb in cdiff[1]:
                if _fallback(groups[:2], (ca, cb), n, cfg, report, accept_x):
                    report.extra["stage"] = "correction"
                    report.outcome = SOLVED
                    return finish(report, watch)
    report.extra["stage"] = "correction" if len(groups) >= 2 else "conjugator"
    report.outcome = FAILED
    report.diagnostic = "middles matched but no x verified"
    return finish(report, watch)


def _fallback(groups, diffs, n, cfg, report, accept_x) -> bool:
    N = n + 1
    e = Braid.identity(n)
    starts = []
    lifted = []
    for gr, c in zip(groups, diffs):
        X = lifted_middle(c)
        res = csp_solve(X, gr.b, cfg.cdp_budget)
        report.bump("csp_calls")
        if not res.found:
            return False
        starts.append(res.conjugator)
        lifted.append((X, gr.b))
    gens = tuple(correction_subgroup(e, c) for c in diffs)
    ys_ok: dict[tuple, bool] = {}

    def objective(t: Braid, u: Braid) -> int:
        out = _size(product(inverse(t), u))
        for s in (t, u):
            x = _as_bn(inverse(s), n)
            if x is None:
                out += 2
                continue
            k = nf_key(x)
            if k not in ys_ok:
                ys_ok[k] = accept_x(x)
            out += 0 if ys_ok[k] else 1
        return out

    sr = coset_search((starts[0], starts[1]), gens, objective, cfg.correction_budget, cfg.search_depth)
    report.bump("expanded", sr.expanded)
    if sr.t is None:
        return False
    x = _as_bn(inverse(sr.t), n)
    if x is None or not accept_x(x):
        return False
    report.mscsp_built = MSCSPInstance(N, lifted)
    report.mscsp_solution = sr.t
    return True


# --- reused nonce ---------------------------------------------------------


def recover_secret(r: Braid, rs: Braid) -> Braid:
    """``s`` from ``r`` and ``r * s``: ``r^-1 (r*s) d(r) sigma_1^-1 = d(s)``,
    which free reduction alone exposes when ``r*s`` is the literal word."""
    N = rs.n
    letters = free_reduce(product(inverse(embed(r, N)), rs, d(r), inverse(_s1(N))).letters)
    return unshift(Braid(N, letters))


def dsc_attack(
    commitments: Sequence[tuple[Braid, Braid]],
    public_rs: Braid,
    cfg: AttackConfig | None = None,
) -> AttackReport:
    """Commitments ``(p_i, r * p_i)`` sharing one nonce ``r`` and a public
    ``r * s``: solve for ``r`` as a decomposition system with ``x = w^-1``,
    then strip ``r`` from ``r * s``.  The recovered ``s`` is accepted only
    if it recomputes ``r * s``."""
    cfg = cfg or AttackConfig(strategy="dsc")
    n = public_rs.n - 1
    inst = MSSDPInstance(n, [(p, y) for p, y in commitments])
    report = solve_mssdp(inst, cfg, reuse_nonce=True)
    if report.outcome != SOLVED:
        return report
    watch = Stopwatch()
    x = Braid(n, tuple(report.extra["x"]))
    r = inverse(x)
    try:
        s = recover_secret(r, public_rs)
    except ValueError as exc:
        report.outcome = FAILED
        report.diagnostic = f"unshift failed: {exc}"
        return finish(report, watch)
    report.extra["r"] = list(r.letters)
    report.extra["s"] = list(s.letters)
    base = report.verifier
    report.verifier = lambda: (base is None or base()) and equal(shifted_conjugate(r, s), public_rs)
    wall = report.wall_time
    report = finish(report, watch)
    report.wall_time += wall
    return report
