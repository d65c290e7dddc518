"""Command-line front end."""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from .attacks import AttackConfig, run_attack
from .attacks.common import STRATEGIES, random_word
from .braid import Braid, equal, normal_form
from .conjugacy import csp_solve
from .harness import ExperimentSpec, SoundnessError, default_out_dir, emit_report, run_experiment
from .oracle import oracle_equal
from .ttp import TTPParams, keypair_to_json, ttp_keygen


def _dump(obj, path: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text)


def cmd_keygen(args) -> int:
    params = TTPParams(
        n=args.n,
        alpha=args.alpha,
        beta=args.beta,
        gamma=args.gamma,
        max_word_len=args.max_word_len,
        m=args.m,
        seed=args.seed,
        single_generator_words=args.single,
    )
    sec, pub = keypair_to_json(ttp_keygen(params))
    out = Path(args.out) if args.out else default_out_dir()
    out.mkdir(parents=True, exist_ok=True)
    _dump(pub, str(out / "public.json"))
    _dump(sec, str(out / "secret.json"))
    print(f"wrote {out / 'public.json'} and {out / 'secret.json'}")
    return 0


def _load_config(args) -> AttackConfig:
    data = json.loads(Path(args.config).read_text()) if args.config else {}
    if args.strategy:
        data["strategy"] = args.strategy
    if args.seed is not None:
        data["seed"] = args.seed
    return AttackConfig.from_json(data)


def cmd_attack(args) -> int:
    cfg = _load_config(args)
    data = json.loads(Path(args.inp).read_text())
    report = run_attack(cfg, data)
    _dump(report.to_json(), args.report)
    print(f"{cfg.strategy}: {report.outcome} {report.diagnostic}".rstrip(), file=sys.stderr)
    return report.exit_code


def cmd_oracle(args) -> int:
    """Cross-check normal-form equality against curve coordinates."""
    rng = random.Random(args.seed)
    agree = disagree = 0
    for _ in range(args.count):
        n = rng.randint(3, args.max_n)
        a = random_word(rng, n, rng.randint(0, args.length))
        b = a if rng.random() < 0.5 else random_word(rng, n, rng.randint(0, args.length))
        if equal(a, b) == oracle_equal(a, b):
            agree += 1
        else:
            disagree += 1
    _dump({"seed": args.seed, "queries": args.count, "agree": agree, "disagree": disagree}, args.out)
    return 0 if disagree == 0 else 1


def cmd_bench(args) -> int:
    rng = random.Random(args.seed)
    rows = []
    for n in range(3, args.max_n + 1):
        words = [random_word(rng, n, args.length) for _ in range(args.count)]
        t0 = time.perf_counter()
        for w in words:
            normal_form(Braid(n, w.letters + (1,)))
        t_nf = (time.perf_counter() - t0) / args.count
        t0 = time.perf_counter()
        for w in words[: max(1, args.count // 10)]:
            g = random_word(rng, n, 3)
            csp_solve(w, g * w * ~g)
        t_csp = (time.perf_counter() - t0) / max(1, args.count // 10)
        rows.append({"n": n, "normal_form_s": t_nf, "csp_s": t_csp})
    print("n\tnormal_form_s\tcsp_s")
    for r in rows:
        print(f"{r['n']}\t{r['normal_form_s']:.6f}\t{r['csp_s']:.6f}")
    if args.out:
        _dump(rows, args.out)
    return 0


def cmd_experiment(args) -> int:
    spec = ExperimentSpec.from_json(json.loads(Path(args.spec).read_text()))
    if args.seed is not None:
        spec.seed_base = args.seed
    if args.reps is not None:
        spec.repetitions = args.reps
    if args.workers is not None:
        spec.workers = args.workers
    batch = run_experiment(spec)
    out = args.out or spec.out_dir or default_out_dir()
    emit_report(batch, out)
    s = batch["summary"]
    print(f"{spec.config.strategy}: {s['outcomes']} success={s['success_rate']:.3f} -> {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="braidcrack", description="Braid-group cryptanalysis toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("keygen", help="generate a TTP key pair")
    k.add_argument("--n", type=int, default=8)
    k.add_argument("--alpha", type=int, default=3)
    k.add_argument("--beta", type=int, default=3)
    k.add_argument("--gamma", type=int, default=2)
    k.add_argument("--max-word-len", type=int, default=4)
    k.add_argument("--m", type=int, default=16)
    k.add_argument("--single", type=int, default=0, help="single-generator words per family")
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--out", help="output directory")
    k.set_defaults(func=cmd_keygen)

    a = sub.add_parser("attack", help="attack an instance file")
    a.add_argument("--strategy", choices=STRATEGIES)
    a.add_argument("--in", dest="inp", required=True)
    a.add_argument("--config")
    a.add_argument("--seed", type=int)
    a.add_argument("--report", help="report path (default stdout)")
    a.set_defaults(func=cmd_attack)

    o = sub.add_parser("oracle", help="cross-check normal forms against curve coordinates")
    o.add_argument("--count", type=int, default=500)
    o.add_argument("--max-n", type=int, default=7)
    o.add_argument("--length", type=int, default=24)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--out")
    o.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bench", help="time normal forms and conjugacy search")
    b.add_argument("--count", type=int, default=50)
    b.add_argument("--max-n", type=int, default=6)
    b.add_argument("--length", type=int, default=12)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)

    e = sub.add_parser("experiment", help="run a seeded batch from a spec file")
    e.add_argument("spec")
    e.add_argument("--seed", type=int)
    e.add_argument("--reps", type=int)
    e.add_argument("--workers", type=int)
    e.add_argument("--out")
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, NotImplementedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SoundnessError as exc:
        print(f"soundness breach: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
