"""Conjugacy-extractor attacks: public transforms that turn the hidden-x
system into plain conjugacy problems."""

from __future__ import annotations

import random
from typing import Sequence

from ..braid import Braid, inverse, product, support
from ..centralizer import approx_intersection, sample_centralizer, verify_commutes
from ..conjugacy import MSCSPInstance, csp_solve, mscsp_solve, shortest_word
from ..ttp import MSCSPvInstance
from .centralizer_attack import PairGroup, bounded_conjugators
from .common import (
    FAILED,
    SOLVED,
    AcceptOracle,
    AttackConfig,
    AttackReport,
    Stopwatch,
    center_window,
    finish,
    random_word,
    unconjugate_short,
    words_up_to,
)


def ce_recover(o: Braid, u_pub: Braid) -> Braid:
    """``o = z u`` and ``u' = z u z^-1`` give ``z = (o^-1 u')^-1``."""
    return inverse(product(inverse(o), u_pub))


def _accept(z: Braid, ys, max_word_len: int, accept: AcceptOracle | None, report: AttackReport):
    report.bump("conjugator_candidates")
    xs = unconjugate_short(z, ys, max_word_len)
    if xs is None:
        return None
    if accept is not None:
        report.bump("oracle_queries")
        if not accept(z, xs):
            return None
    return xs


def attack_ce_subgroup(
    inst: MSCSPvInstance,
    R: Sequence[int] | Sequence[Braid],
    cfg: AttackConfig,
    accept: AcceptOracle | None = None,
) -> AttackReport:
    """``z`` is assumed to lie in the subgroup generated by ``R`` (generator
    indices or words).  Elements ``S_I`` commuting with ``R`` commute with
    ``z``, so ``u' S_I u'^-1 = (z u) S_I (z u)^-1`` and the system in
    ``o = z u`` is an ordinary simultaneous conjugacy problem."""
    cfg.validate()
    watch = Stopwatch()
    report = AttackReport(cfg.to_json())
    n = inst.n
    if R and isinstance(R[0], Braid):
        gens = list(R)
        indices = None
    else:
        indices = tuple(sorted(int(i) for i in R))
        gens = [Braid(n, (i,)) for i in indices]
    if not gens:
        report.diagnostic = "empty subgroup"
        return finish(report, watch)
    samples = [sample_centralizer(g, "sss-loops", cfg.centralizer_budget, seed=cfg.seed) for g in gens]
    S = [s for s in approx_intersection(samples, cfg.centralizer_budget).elements if s.letters]
    report.counters["S_size"] = len(S)
    ys = inst.ys
    g_a = cfg.resolved_g_a(n)
    max_word_len = inst.max_word_len or g_a
    corr_len = inst.g_z if inst.g_z is not None else g_a
    if indices is not None:
        corrections = list(words_up_to(n, corr_len, indices))
    else:
        corrections = [Braid.identity(n)]
    for ui, y in enumerate(ys):
        u_pub = center_window(y)
        eqs = []
        for s in S:
            if verify_commutes(s, u_pub):
                report.bump("commuting_skipped")
                continue
            eqs.append((s, product(u_pub, s, inverse(u_pub))))
            if len(eqs) >= cfg.t:
                break
        if not eqs:
            continue
        built = MSCSPInstance(n, eqs)
        groups = [PairGroup(yy, [x]) for x, yy in eqs]
        for o in _solutions(built, groups, corr_len + max_word_len, gens, cfg, report):
            base = center_window(ce_recover(o, u_pub))
            for h in corrections:
                z = shortest_word(product(base, h))
                if indices is not None and not support(z) <= set(indices):
                    continue
                xs = _accept(z, ys, max_word_len, accept, report)
                if xs is None:
                    continue
                report.candidate_z = z
                report.mscsp_built = built
                report.mscsp_solution = o
                report.recovered_x = xs
                report.public_ys = list(ys)
                report.extra["public_index"] = ui
                report.outcome = SOLVED
                return finish(report, watch)
    report.outcome = FAILED
    if report.counters.get("mscsp_calls", 0) == 0:
        report.diagnostic = "every S element commuted with the publics"
    else:
        report.diagnostic = "no recovered z passed the public test"
    return finish(report, watch)


def _solutions(built, groups, bound, gens, cfg, report):
    """Solutions ``o`` of the extracted system: the summit-set solver's
    answer first, then every short one from the bounded search."""
    res = mscsp_solve(built, cfg.cdp_budget, cfg.correction_budget, known_centralizer=gens)
    report.bump("mscsp_calls")
    if res.found:
        yield res.conjugator
    for o in bounded_conjugators(groups, bound, cfg.candidate_budget):
        if all(gr.match(o) is not None for gr in groups):
            report.bump("bounded_solutions")
            yield o


def _probes(n: int, cfg: AttackConfig) -> list[Braid]:
    if cfg.search_mode == "random":
        rng = random.Random(cfg.seed)
        return [random_word(rng, n, rng.randint(1, 2)) for _ in range(cfg.random_draws)]
    return [Braid(n, (i,)) for i in range(1, n)]


def attack_ce_partial(inst: MSCSPvInstance, cfg: AttackConfig, accept: AcceptOracle | None = None) -> AttackReport:
    """Probe elements ``V`` that commute with a left factor ``z_T`` of
    ``z = z_T zbar`` make ``u' V u'^-1`` conjugate to ``V`` by ``z u zbar^-1``;
    solving that CSP yields ``z_T``, and ``zbar`` is found by brute force.
    Optionally iterates on ``z_T^-1 u' z_T``."""
    cfg.validate()
    watch = Stopwatch()
    report = AttackReport(cfg.to_json())
    n = inst.n
    ys = inst.ys
    g_a = cfg.resolved_g_a(n)
    max_word_len = inst.max_word_len or g_a
    residuals = list(words_up_to(n, g_a))
    probes = _probes(n, cfg)
    budget = cfg.candidate_budget
    for ui, y in enumerate(ys):
        prefix = Braid.identity(n)
        u_cur = center_window(y)
        for it in range(cfg.iterations):
            step_prefixes = []
            for V in probes:
                if verify_commutes(V, u_cur):
                    report.bump("commuting_probes")
                    continue
                target = product(u_cur, V, inverse(u_cur))
                res = csp_solve(V, target, cfg.cdp_budget)
                report.bump("csp_calls")
                if not res.found:
                    continue
                z_t = shortest_word(center_window(ce_recover(res.conjugator, u_cur)))
                full = shortest_word(product(prefix, z_t))
                step_prefixes.append(full)
                for r in residuals:
                    if report.counters.get("conjugator_candidates", 0) >= budget:
                        break
                    z = shortest_word(product(full, r))
                    xs = _accept(z, ys, max_word_len, accept, report)
                    if xs is None:
                        continue
                    report.candidate_z = z
                    report.recovered_x = xs
                    report.public_ys = list(ys)
                    report.extra["prefix"] = list(full.letters)
                    report.extra["residual"] = list(r.letters)
                    report.trace.append({"public": ui, "iteration": it, "probe": list(V.letters)})
                    report.outcome = SOLVED
                    return finish(report, watch)
            report.trace.append({"public": ui, "iteration": it, "prefixes": len(step_prefixes)})
            if not step_prefixes:
                break
            # continue from the shortest recovered prefix
            best = min(step_prefixes, key=lambda w: (len(w), w.letters))
            z_t = product(inverse(prefix), best)
            prefix = best
            u_cur = center_window(product(inverse(z_t), u_cur, z_t))
    report.outcome = FAILED
    report.diagnostic = "no probe yielded a completable prefix"
    return finish(report, watch)
