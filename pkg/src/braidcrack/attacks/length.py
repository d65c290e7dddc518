"""Length-based attacks: peel conjugators off public products by greedy
descent, then finish with a short brute-force search or a conjugacy
system."""

from __future__ import annotations

from typing import Sequence

from ..braid import Braid, inverse, product, word_length
from ..centralizer import approx_intersection, sample_centralizer, verify_commutes
from ..conjugacy import MSCSPInstance, mscsp_solve, shortest_word, verify_system
from ..ttp import MSCSPvInstance
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
    short_word_mod,
    signed_generators,
    unconjugate_short,
    words_up_to,
)


def length_of(x: Braid, kind: str) -> int:
    if kind == "artin-letters":
        return len(short_word_mod(x))
    return word_length(x, kind)


def order_key(lengths: Sequence[int], tie: int = 0) -> tuple:
    """Sum first, then the vector lexicographically."""
    return (sum(lengths), tuple(lengths), tie)


def _score(elems: Sequence[Braid], kind: str) -> tuple:
    lens = [length_of(e, kind) for e in elems]
    tie = sum(len(shortest_word(e)) for e in elems)
    return order_key(lens, tie)


def peel(
    elems: Sequence[Braid],
    moves: Sequence[Braid],
    kind: str,
    stop: int,
    max_steps: int,
    trace: list[dict] | None = None,
) -> tuple[Braid, list[Braid]]:
    """Greedy peel: apply ``e -> s^-1 e s`` for the move that lowers the
    length vector most, accumulating ``A = s_1 s_2 ...``.  Stops when every
    length is below ``stop``, when no move improves, or after
    ``max_steps``."""
    n = elems[0].n
    A = Braid.identity(n)
    cur = list(elems)
    cur_key = _score(cur, kind)
    for step in range(max_steps):
        if max(cur_key[1]) < stop:
            break
        best = None
        for s in moves:
            si = inverse(s)
            cand = [product(si, e, s) for e in cur]
            key = _score(cand, kind)
            if key < cur_key and (best is None or key < best[0]):
                best = (key, s, cand)
        if best is None:
            break
        cur_key, s, cur = best
        A = shortest_word(product(A, s))
        if trace is not None:
            trace.append({"step": step, "move": list(s.letters), "lengths": list(cur_key[1])})
    return A, cur


def _moves(n: int, cfg: AttackConfig, opposite: Sequence[Braid]) -> list[Braid]:
    out: list[Braid] = []
    if cfg.peel_moves in ("generators", "both"):
        out += [Braid(n, (x,)) for x in signed_generators(n)]
    if cfg.peel_moves in ("centralizer", "both") and opposite:
        # a_c = 1: one centralizer sample is enough
        sample = sample_centralizer(center_window(opposite[0]), "sss-loops", cfg.centralizer_budget, seed=cfg.seed)
        cr = approx_intersection([sample], cfg.centralizer_budget)
        for c in cr.elements:
            out.append(c)
            out.append(inverse(c))
    seen: set[tuple] = set()
    uniq = []
    for m in out:
        k = nf_key(m)
        if k not in seen and m.letters:
            seen.add(k)
            uniq.append(m)
    return uniq


def _tracks(ys: Sequence[Braid]) -> list[list[Braid]]:
    """Peel runs: the family itself, then each ``r t r^-1`` product."""
    runs = [list(ys)]
    for i, r in enumerate(ys):
        for j, t in enumerate(ys):
            if i != j:
                runs.append([product(r, t, inverse(r))])
    return runs


def _try_candidates(
    cands,
    ys: Sequence[Braid],
    max_word_len: int,
    report: AttackReport,
    cfg: AttackConfig,
    accept: AcceptOracle | None,
) -> tuple[Braid, list[Braid]] | None:
    seen: set[tuple] = set()
    for z in cands:
        k = nf_key(z)
        if k in seen:
            continue
        seen.add(k)
        report.bump("conjugator_candidates")
        if report.counters["conjugator_candidates"] > cfg.candidate_budget:
            report.bump("candidate_budget_exhausted")
            return None
        xs = unconjugate_short(z, ys, max_word_len)
        if xs is None:
            continue
        if accept is not None:
            report.bump("oracle_queries")
            if not accept(z, xs):
                continue
        return z, xs
    return None


def attack_length(inst: MSCSPvInstance, cfg: AttackConfig, accept: AcceptOracle | None = None) -> AttackReport:
    cfg.validate()
    watch = Stopwatch()
    report = AttackReport(cfg.to_json())
    n = inst.n
    if not inst.family("w") or not inst.family("v"):
        report.diagnostic = "instance needs both family tags"
        return finish(report, watch)
    g_a = cfg.resolved_g_a(n)
    max_word_len = inst.max_word_len or g_a
    stop = cfg.stop_constant if cfg.stop_constant is not None else 2 * max_word_len
    ys_all = inst.ys
    stored: dict[str, list[Braid]] = {"w": [], "v": []}
    for tag, other in (("w", "v"), ("v", "w")):
        fam = [center_window(y) for y in inst.family(tag)]
        moves = _moves(n, cfg, [center_window(y) for y in inst.family(other)])
        for run in _tracks(fam):
            trace: list[dict] = []
            A, _ = peel(run, moves, cfg.length_kind, stop, cfg.max_peels, trace)
            report.bump("peel_runs")
            report.bump("peels", len(trace))
            report.trace.append({"family": tag, "A": list(A.letters), "peels": trace})
            if all(nf_key(A) != nf_key(s) for s in stored[tag]):
                stored[tag].append(A)
    report.extra["BW"] = [list(a.letters) for a in stored["w"]]
    report.extra["BV"] = [list(a.letters) for a in stored["v"]]
    residuals = list(words_up_to(n, g_a))

    if cfg.length_mode == "residual":
        def cands():
            for A in stored["w"] + stored["v"]:
                for r in residuals:
                    yield shortest_word(product(A, inverse(r)))

        hit = _try_candidates(cands(), ys_all, max_word_len, report, cfg, accept)
        if hit is not None:
            z, xs = hit
            report.candidate_z, report.recovered_x, report.public_ys = z, xs, list(ys_all)
            report.outcome = SOLVED
        else:
            report.outcome = FAILED
            report.diagnostic = "no residual completed a peeled prefix"
        return finish(report, watch)

    # prefix variant: pairs (M1, Y) and (M2, Y^-1) from stored prefixes
    eqs: list[tuple[Braid, Braid]] = []
    for v_hat in stored["v"]:
        for w_hat in stored["w"]:
            m1 = product(inverse(v_hat), w_hat)
            y = product(w_hat, inverse(v_hat))
            m2 = product(v_hat, inverse(w_hat))
            eqs.append((shortest_word(m1), shortest_word(y)))
            eqs.append((shortest_word(m2), shortest_word(inverse(y))))
    eqs = [e for e in eqs if e[0].letters or e[1].letters]
    if not eqs:
        report.outcome = FAILED
        report.diagnostic = "no conjugacy equations from peeled prefixes"
        return finish(report, watch)
    built = MSCSPInstance(n, eqs)
    res = mscsp_solve(built, cfg.cdp_budget, cfg.correction_budget)
    report.bump("mscsp_calls")
    if not res.found:
        report.outcome = PARTIAL
        report.mscsp_built = built
        report.diagnostic = f"conjugacy system unsolved ({res.status})"
        return finish(report, watch)
    g = res.conjugator

    def cands7():
        for r in residuals:
            yield shortest_word(product(g, r))

    hit = _try_candidates(cands7(), ys_all, max_word_len, report, cfg, accept)
    report.mscsp_built = built
    report.mscsp_solution = g
    if hit is None:
        report.outcome = PARTIAL
        report.diagnostic = "system solved but no candidate passed the public test"
        return finish(report, watch)
    z, xs = hit
    report.candidate_z, report.recovered_x, report.public_ys = z, xs, list(ys_all)
    report.outcome = SOLVED
    return finish(report, watch)


# --- transformed-system length attack on a plain MSCSP -------------------


def attack_mscsp_ce_length(
    inst: MSCSPInstance,
    cfg: AttackConfig,
    B: Sequence[Braid],
    accept: AcceptOracle | None = None,
) -> AttackReport:
    """For ``y_i = g x_i g^-1`` with ``g`` in the subgroup generated by
    ``B``: elements ``d`` commuting with all of ``B`` commute with ``g``, so
    ``y_i d y_i^-1 = g (x_i d x_i^-1) g^-1`` is a second system with the
    same solution.  Generators of ``B`` are peeled off all equations at
    once."""
    cfg.validate()
    watch = Stopwatch()
    report = AttackReport(cfg.to_json())
    n = inst.n
    eqs = list(inst.equations)
    report.mscsp_built = inst
    e = Braid.identity(n)
    if all(verify_system(e, eqs)):
        report.candidate_z = e
        report.outcome = SOLVED
        report.counters["peels"] = 0
        return finish(report, watch)
    samples = [sample_centralizer(b, "sss-loops", cfg.centralizer_budget, seed=cfg.seed) for b in B]
    D = approx_intersection(samples, cfg.centralizer_budget).elements
    report.counters["D_size"] = len(D)
    transformed: list[tuple[Braid, Braid]] = []
    for x, y in eqs:
        for d in D:
            if verify_commutes(d, y):
                report.bump("degenerate_transforms")
                continue
            transformed.append((product(x, d, inverse(x)), product(y, d, inverse(y))))
    report.counters["transformed_equations"] = len(transformed)
    targets = [y for _, y in transformed] + [y for _, y in eqs]
    moves: list[Braid] = []
    for b in B:
        moves += [b, inverse(b)]
    A = Braid.identity(n)
    cur = list(targets)
    cur_key = _score(cur, cfg.length_kind)
    for step in range(cfg.max_peels):
        best = None
        for s in moves:
            si = inverse(s)
            cand = [product(si, t, s) for t in cur]
            key = _score(cand, cfg.length_kind)
            if key < cur_key and (best is None or key < best[0]):
                best = (key, s, cand)
        if best is None:
            break
        cur_key, s, cur = best
        A = shortest_word(product(A, s))
        report.bump("peels")
        report.trace.append({"step": step, "move": list(s.letters), "objective": cur_key[0]})
        if all(verify_system(A, eqs)):
            break
    cands = [A] + [shortest_word(product(A, r)) for r in _subgroup_words(B, cfg.resolved_g_a(n))]
    for z in cands:
        report.bump("conjugator_candidates")
        if all(verify_system(z, eqs)) and (accept is None or accept(z, [x for x, _ in eqs])):
            report.candidate_z = z
            report.outcome = SOLVED
            return finish(report, watch)
    report.outcome = FAILED
    report.diagnostic = "peeling stalled before the system verified"
    return finish(report, watch)


def _subgroup_words(B: Sequence[Braid], max_len: int):
    """Products of at most ``max_len`` generators of ``B`` and inverses."""
    if not B:
        return
    n = B[0].n
    alphabet = []
    for b in B:
        alphabet += [b, inverse(b)]
    level = [Braid.identity(n)]
    seen = {nf_key(level[0])}
    for _ in range(max_len):
        nxt = []
        for w in level:
            for a in alphabet:
                c = product(w, a)
                k = nf_key(c)
                if k in seen:
                    continue
                seen.add(k)
                nxt.append(c)
                yield c
        level = nxt
