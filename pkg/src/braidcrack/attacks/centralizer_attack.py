"""Centralizer attacks on the MSCSPv: find pairs ``(a, b)`` with ``b`` a
public centralizer element conjugate to a short middle element ``a``, then
solve the resulting simultaneous conjugacy system."""

from __future__ import annotations

import random
from typing import Iterator, Sequence

from ..braid import Braid, inverse, normal_form, product
from ..centralizer import sample_centralizer
from ..conjugacy import MSCSPInstance, cdp, lambda_invariant, mscsp_solve, shortest_word
from ..ttp import MSCSPvInstance, choose_split_with_cut
from .common import (
    FAILED,
    PARTIAL,
    SOLVED,
    AcceptOracle,
    AttackConfig,
    AttackReport,
    Stopwatch,
    center_window,
    finish,
    nf_key,
    random_word,
    unconjugate_short,
    words_up_to,
)


class PairGroup:
    """One centralizer element ``b`` and every middle candidate ``a`` found
    conjugate to it."""

    def __init__(self, b: Braid, middles: list[Braid]):
        self.b = b
        self.middles = middles
        self.keys = {nf_key(a): a for a in middles}

    def match(self, z: Braid) -> Braid | None:
        return self.keys.get(nf_key(product(inverse(z), self.b, z)))


def _within_bound(b: Braid, g_z: int | None, g_a: int) -> bool:
    # b = z a z^-1 with |z| <= g_z and |a| <= g_a sits between
    # Delta^-(2 g_z + g_a) and Delta^(2 g_z + g_a)
    if g_z is None:
        return True
    nf = normal_form(b)
    bound = 2 * g_z + g_a
    return nf.inf >= -bound and nf.sup <= bound


def collect_b_candidates(
    ys: Sequence[Braid],
    aux_for: Sequence[Sequence[Braid]],
    cfg: AttackConfig,
    report: AttackReport,
) -> list[Braid]:
    """Step A: centralizer samples of every public element, deduplicated
    up to Delta^2 and ordered shortest first."""
    seen: dict[tuple, Braid] = {}
    for idx, (u, aux) in enumerate(zip(ys, aux_for)):
        u = center_window(u)
        sample = sample_centralizer(
            u,
            cfg.centralizer_strategy,
            cfg.centralizer_budget,
            seed=cfg.seed + idx,
            aux=[center_window(a) for a in aux],
            sss_budget=cfg.cdp_budget,
        )
        report.counters.setdefault("centralizer_sizes", []).append(len(sample))
        if sample.truncated:
            report.bump("centralizer_truncated")
        for b in [u] + sample.elements:
            b = shortest_word(center_window(b))
            key = nf_key(b)
            if b.letters and key not in seen:
                seen[key] = b
    return sorted(seen.values(), key=lambda w: (len(w), w.letters))


def find_pairs(
    bs: Sequence[Braid],
    cfg: AttackConfig,
    g_z: int | None,
    report: AttackReport,
) -> list[PairGroup]:
    """Step B: for each ``b``, the middle elements ``a`` with ``|a| <= g_a``
    passing the lambda filter and then the conjugacy decision.

    Each visit adds ``|candidates tested| + |hits| + 1`` to the O_1 tally.
    """
    n = bs[0].n if bs else 2
    g_a = cfg.resolved_g_a(n)
    rng = random.Random(cfg.seed)
    if cfg.search_mode == "exhaustive":
        pool = list(words_up_to(n, g_a, min_len=1))
    else:
        pool = []
    lam_cache: dict[tuple, tuple] = {}

    def lam(w: Braid) -> tuple:
        if w.letters not in lam_cache:
            lam_cache[w.letters] = lambda_invariant(w)
        return lam_cache[w.letters]

    groups: list[PairGroup] = []
    o1 = 0
    for bi, b in enumerate(bs):
        if len(groups) >= cfg.t:
            break
        if cfg.bound_mode and not _within_bound(b, g_z, g_a):
            report.bump("bound_filtered")
            continue
        if cfg.search_mode == "random":
            draws = [random_word(rng, n, rng.randint(1, g_a)) for _ in range(cfg.random_draws)]
        else:
            draws = pool
        lam_b = lam(b)
        hits: dict[tuple, Braid] = {}
        tested = 0
        for a in draws:
            tested += 1
            report.bump("candidates_tried")
            if lam(a) != lam_b:
                continue
            report.bump("cdp_calls")
            if cdp(a, b, cfg.cdp_budget):
                hits.setdefault(nf_key(a), a)
        o1 += tested + len(hits) + 1
        report.trace.append({"b": bi, "tested": tested, "hits": len(hits)})
        if hits:
            groups.append(PairGroup(b, sorted(hits.values(), key=lambda w: (len(w), w.letters))))
    report.counters["O_1"] = report.counters.get("O_1", 0) + o1
    return groups


def bounded_conjugators(groups: Sequence[PairGroup], g: int, budget: int) -> Iterator[Braid]:
    """Meet in the middle: every ``z = u v`` with ``|u| <= ceil(g/2)``,
    ``|v| <= floor(g/2)`` and ``z^-1 b z`` a middle of the first group,
    shortest first, distinct as elements."""
    if not groups:
        return
    n = groups[0].b.n
    head = min(groups, key=lambda gr: len(gr.middles))
    table: dict[tuple, list[Braid]] = {}
    for v in words_up_to(n, g // 2):
        vi = inverse(v)
        for a in head.middles:
            table.setdefault(nf_key(product(v, a, vi)), []).append(v)
    found: dict[tuple, Braid] = {}
    steps = 0
    for u in words_up_to(n, g - g // 2):
        steps += 1
        if steps > budget:
            break
        for v in table.get(nf_key(product(inverse(u), head.b, u)), ()):
            z = product(u, v)
            key = nf_key(z)
            cur = found.get(key)
            if cur is None or (len(z), z.letters) < (len(cur), cur.letters):
                found[key] = z
    yield from sorted(found.values(), key=lambda w: (len(w), w.letters))


def solve_pairs(
    groups: Sequence[PairGroup],
    ys: Sequence[Braid],
    max_word_len: int,
    g_bound: int,
    cfg: AttackConfig,
    report: AttackReport,
    accept: AcceptOracle | None = None,
) -> bool:
    """Step C.  Candidates come from the summit-set MSCSP solver when every
    ``b`` has a single middle, then from the bounded search; each must map
    every ``b`` onto one of its middles and every public element onto a
    short word.  Returns True and fills the report on success."""
    n = groups[0].b.n

    def stream() -> Iterator[Braid]:
        if all(len(gr.middles) == 1 for gr in groups):
            inst = MSCSPInstance(n, [(gr.middles[0], gr.b) for gr in groups])
            res = mscsp_solve(inst, cfg.cdp_budget, cfg.correction_budget)
            report.bump("mscsp_calls")
            if res.found:
                yield res.conjugator
        yield from bounded_conjugators(groups, g_bound, cfg.candidate_budget)

    seen: set[tuple] = set()
    for z in stream():
        key = nf_key(z)
        if key in seen:
            continue
        seen.add(key)
        report.bump("conjugator_candidates")
        if report.counters["conjugator_candidates"] > cfg.candidate_budget:
            report.bump("candidate_budget_exhausted")
            break
        middles = [gr.match(z) for gr in groups]
        if any(a is None for a in middles):
            continue
        xs = unconjugate_short(z, ys, max_word_len)
        if xs is None:
            report.bump("public_test_rejections")
            continue
        if accept is not None:
            report.bump("oracle_queries")
            if not accept(z, xs):
                continue
        report.candidate_z = z
        report.pairs = [(a, gr.b) for a, gr in zip(middles, groups)]
        report.mscsp_built = MSCSPInstance(n, list(report.pairs))
        report.mscsp_solution = z
        report.recovered_x = xs
        report.public_ys = list(ys)
        return True
    return False


def _run(
    inst: MSCSPvInstance,
    cfg: AttackConfig,
    aux_for: list[list[Braid]],
    accept: AcceptOracle | None,
    watch: Stopwatch,
    report: AttackReport,
) -> AttackReport:
    n = inst.n
    ys = inst.ys
    g_a = cfg.resolved_g_a(n)
    g_z = cfg.max_conjugator_len if cfg.max_conjugator_len is not None else inst.g_z
    max_word_len = inst.max_word_len or g_a
    bs = collect_b_candidates(ys, aux_for, cfg, report)
    report.counters["b_candidates"] = len(bs)
    if not bs:
        report.outcome = FAILED
        report.diagnostic = "empty centralizer approximation"
        return finish(report, watch)
    groups = find_pairs(bs, cfg, g_z, report)
    report.counters["pair_groups"] = len(groups)
    if not groups:
        report.outcome = FAILED
        report.diagnostic = "no (a, b) pairs found"
        return finish(report, watch)
    report.pairs = [(gr.middles[0], gr.b) for gr in groups]
    if g_z is None:
        g_z = 2 * g_a
    if solve_pairs(groups, ys, max_word_len, g_z, cfg, report, accept):
        report.outcome = SOLVED
    else:
        report.outcome = PARTIAL
        report.diagnostic = "pairs found but no conjugator passed every test"
    return finish(report, watch)


def attack_centralizer(inst: MSCSPvInstance, cfg: AttackConfig, accept: AcceptOracle | None = None) -> AttackReport:
    cfg.validate()
    watch = Stopwatch()
    report = AttackReport(cfg.to_json(), mod_delta_sq=False)
    tags = {t for _, t in inst.y_family}
    if not {"w", "v"} <= tags:
        report.diagnostic = "instance needs both family tags"
        return finish(report, watch)
    aux_for = []
    for _, tag in inst.y_family:
        other = "v" if tag == "w" else "w"
        aux_for.append(inst.family(other))
    return _run(inst, cfg, aux_for, accept, watch, report)


def attack_general_mscspv(inst: MSCSPvInstance, cfg: AttackConfig, accept: AcceptOracle | None = None) -> AttackReport:
    """No family structure assumed: every public element's centralizer is
    sampled against all the others."""
    cfg.validate()
    watch = Stopwatch()
    report = AttackReport(cfg.to_json(), mod_delta_sq=False)
    ys = inst.ys
    if not ys:
        report.diagnostic = "empty instance"
        return finish(report, watch)
    aux_for = [[y for j, y in enumerate(ys) if j != i] for i in range(len(ys))]
    return _run(inst.untagged(), cfg, aux_for, accept, watch, report)


def guess_hit_rate(n: int, alpha: int, beta: int, draws: int = 1000, seed: int = 0, universe: str = "separated") -> float:
    """Fraction of random single-generator middle guesses that land in
    BL or BR, each draw against a fresh split.

    ``separated`` guesses among the ``n - 2`` generators other than the
    gap between the families; ``all`` among all ``n - 1``."""
    if universe not in ("separated", "all"):
        raise ValueError(f"unknown universe {universe!r}")
    if draws < 1:
        raise ValueError("draws must be positive")
    rng = random.Random(seed)
    hits = 0
    for _ in range(draws):
        BL, BR, cut = choose_split_with_cut(rng, n, alpha, beta)
        pool = [i for i in range(1, n) if universe == "all" or i != cut + 1]
        if rng.choice(pool) in BL + BR:
            hits += 1
    return hits / draws
