"""Seeded experiment batches: generate, attack, judge, record."""

from __future__ import annotations

import json
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .attacks import (
    AttackConfig,
    AttackReport,
    MSCSPV_STRATEGIES,
    run_attack,
)
from .attacks.common import SOLVED, random_word
from .attacks.shifted import mssdp_instance, sdp_rhs, shifted_conjugate
from .braid import Braid, equal, inverse, product
from .conjugacy import MSCSPInstance, lift_residue
from .oracle import oracle_equal
from .ttp import (
    EQUIVALENT,
    EXACT,
    INVALID,
    VERDICT_RANK,
    TTPParams,
    keypair_to_json,
    ttp_keygen,
    verify_attack_solution,
)

OUT_ENV = "BRAIDCRACK_OUT"
DEFAULT_OUT = "braidcrack_out"
SHIFTED = ("mssdp", "mssdpv", "dsc")


class SoundnessError(RuntimeError):
    """A report claimed ``solved`` for equations that do not hold."""


def default_out_dir() -> Path:
    return Path(os.environ.get(OUT_ENV, DEFAULT_OUT))


@dataclass
class ExperimentSpec:
    """``params`` drives key generation for the MSCSPv strategies;
    ``shifted`` (n, count, w_len, x_len, c_len) and ``subgroup_instance``
    (n, a, b, g_len, x_len, count) drive the other generators.  With
    ``instance`` set, that file is attacked on every repetition."""

    config: AttackConfig
    params: TTPParams | None = None
    instance: str | None = None
    shifted: dict = field(default_factory=dict)
    subgroup_instance: dict = field(default_factory=dict)
    repetitions: int = 1
    seed_base: int = 0
    out_dir: str | None = None
    use_oracle: bool = False
    workers: int = 1

    def validate(self) -> None:
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        self.config.validate()
        if self.instance is not None and not Path(self.instance).is_file():
            raise FileNotFoundError(self.instance)
        s = self.config.strategy
        if self.instance is None and s in MSCSPV_STRATEGIES and self.params is None:
            raise ValueError(f"strategy {s!r} needs TTP params or an instance file")

    def to_json(self) -> dict:
        out = asdict(self)
        out["config"] = self.config.to_json()
        out["params"] = None if self.params is None else asdict(self.params)
        out.pop("out_dir")
        out.pop("workers")
        return out

    @classmethod
    def from_json(cls, data: dict) -> ExperimentSpec:
        data = dict(data)
        cfg = AttackConfig.from_json(data.pop("config", {}))
        params = data.pop("params", None)
        if params is not None:
            params = dict(params)
            params["z_support"] = tuple(params.get("z_support", ()))
            params = TTPParams(**params)
        return cls(cfg, params, **data)


# --- instance generators --------------------------------------------------


def subgroup_mscsp(n: int, a: list[int], b: list[int], g_len: int, x_len: int, count: int, seed: int):
    """``y_i = g x_i g^-1`` with ``x_i`` in the subgroup on ``a`` and ``g``
    in the subgroup on ``b``; returns (instance, g).  By default ``a`` is
    every generator, since commuting subgroups make the system trivial."""
    rng = random.Random(seed)

    def word(idx: list[int], length: int) -> Braid:
        out: list[int] = []
        while len(out) < length:
            x = rng.choice(idx) * rng.choice((1, -1))
            if out and out[-1] == -x:
                continue
            out.append(x)
        return Braid(n, tuple(out))

    g = word(b, g_len)
    gi = inverse(g)
    xs = [word(a, rng.randint(1, x_len)) for _ in range(count)]
    return MSCSPInstance(n, [(x, product(g, x, gi)) for x in xs]), g


def _build(spec: ExperimentSpec, seed: int) -> tuple[dict, dict]:
    """(instance file contents, ground truth)."""
    s = spec.config.strategy
    if spec.instance is not None:
        return json.loads(Path(spec.instance).read_text()), {}
    if s in MSCSPV_STRATEGIES:
        params = TTPParams(**{**asdict(spec.params), "seed": seed})
        kp = ttp_keygen(params)
        _, pub = keypair_to_json(kp)
        return pub, {"keypair": kp}
    if s == "mscsp-ce":
        o = {"n": 8, "b": [5, 6], "g_len": 3, "x_len": 3, "count": 3, **spec.subgroup_instance}
        o.setdefault("a", list(range(1, o["n"])))
        inst, g = subgroup_mscsp(o["n"], o["a"], o["b"], o["g_len"], o["x_len"], o["count"], seed)
        data = inst.to_json()
        data["subgroup"] = list(o["b"])
        return data, {"g": g, "mscsp": inst}
    o = {"n": 4, "count": 4, "w_len": 2, "x_len": 2, "c_len": 1, **spec.shifted}
    inst = mssdp_instance(o["n"], o["count"], o["w_len"], o["x_len"], o["c_len"], seed, reuse_nonce=(s == "dsc"))
    data = inst.public().to_json()
    truth: dict = {"mssdp": inst}
    if s == "dsc":
        r = inverse(inst.x)
        sec = random_word(random.Random(seed ^ 0x5EC), o["n"], max(1, o["x_len"]))
        data["rs"] = list(shifted_conjugate(r, sec).letters)
        truth["s"] = sec
    return data, truth


# --- judging ----------------------------------------------------------------


def _oracle_mod(a: Braid, b: Braid) -> bool:
    lifted = lift_residue(a, b)
    return lifted is not None and oracle_equal(a, lifted)


def independent_check(report: AttackReport, truth: dict) -> bool:
    """Re-verify a solved report with the curve-coordinate oracle rather
    than the normal form."""
    if report.mscsp_built is not None and report.mscsp_solution is not None:
        g = report.mscsp_solution
        gi = inverse(g)
        for x, y in report.mscsp_built.equations:
            lhs = product(g, x, gi)
            if not (_oracle_mod(lhs, y) if report.mod_delta_sq else oracle_equal(lhs, y)):
                return False
    if report.recovered_x is not None:
        z = report.candidate_z
        zi = inverse(z)
        for x, y in zip(report.recovered_x, report.public_ys or []):
            if not _oracle_mod(product(z, x, zi), y):
                return False
    inst = truth.get("mssdp")
    if inst is not None and "x" in report.extra:
        n = inst.n
        x = Braid(n, tuple(report.extra["x"]))
        w = Braid(n + 1, tuple(report.extra["w"]))
        cs = [Braid(n, tuple(c)) for c in report.extra["c"]] if "c" in report.extra else inst.cs
        for c, y in zip(cs, inst.ys):
            if not oracle_equal(sdp_rhs(w, c, x), y):
                return False
    return True


def verdict_for(report: AttackReport, truth: dict) -> str | None:
    if report.outcome != SOLVED:
        return None
    if "keypair" in truth:
        return verify_attack_solution(truth["keypair"], report.candidate_z, report.recovered_x)
    if "g" in truth:
        return EXACT if equal(report.candidate_z, truth["g"]) else EQUIVALENT
    if "s" in truth:
        return EXACT if equal(Braid(truth["s"].n, tuple(report.extra["s"])), truth["s"]) else INVALID
    inst = truth.get("mssdp")
    if inst is not None:
        return EXACT if equal(Braid(inst.n, tuple(report.extra["x"])), inst.x) else EQUIVALENT
    return None


def _oracle_for(truth: dict):
    kp = truth.get("keypair")
    if kp is None:
        return None
    return lambda z, xs: VERDICT_RANK[verify_attack_solution(kp, z, xs)] >= VERDICT_RANK[EQUIVALENT]


def run_one(spec: ExperimentSpec, index: int) -> dict:
    seed = spec.seed_base + index
    cfg = AttackConfig.from_json({**spec.config.to_json(), "seed": seed})
    data, truth = _build(spec, seed)
    accept = _oracle_for(truth) if spec.use_oracle else None
    report = run_attack(cfg, data, accept)
    if report.outcome == SOLVED and not (report.equations_verify() and independent_check(report, truth)):
        raise SoundnessError(f"run {index} (seed {seed}) claimed solved but does not verify")
    report.verdict = verdict_for(report, truth)
    return {"run": index, "seed": seed, "report": report.to_json(timing=True)}


# --- batches ----------------------------------------------------------------


def strip_timing(obj):
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k not in ("wall_time", "wall_times")}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


def summarize(spec: ExperimentSpec | None, runs: list[dict]) -> dict:
    reps = len(runs)
    outcomes: dict[str, int] = {}
    verdicts: dict[str, int] = {}
    keys: set[str] = set()
    for r in runs:
        rep = r["report"]
        outcomes[rep["outcome"]] = outcomes.get(rep["outcome"], 0) + 1
        v = rep["verdict"] or "none"
        verdicts[v] = verdicts.get(v, 0) + 1
        keys.update(k for k, val in rep["counters"].items() if isinstance(val, (int, float)))
    means = {}
    for k in sorted(keys):
        vals = [r["report"]["counters"].get(k, 0) for r in runs]
        vals = [v if isinstance(v, (int, float)) else 0 for v in vals]
        means[k] = sum(vals) / reps
    times = [r["report"].get("wall_time", 0.0) for r in runs]
    return {
        "spec": None if spec is None else spec.to_json(),
        "repetitions": reps,
        "success_rate": outcomes.get(SOLVED, 0) / reps if reps else 0.0,
        "outcomes": dict(sorted(outcomes.items())),
        "verdicts": dict(sorted(verdicts.items())),
        "counter_means": means,
        "O_1_mean": means.get("O_1", 0.0),
        "wall_times": {
            "total": sum(times),
            "mean": sum(times) / reps if reps else 0.0,
            "max": max(times, default=0.0),
        },
    }


def run_experiment(spec: ExperimentSpec) -> dict:
    """Every repetition in index order; a soundness breach aborts the
    batch.  Parallel runs are merged by index."""
    spec.validate()
    idx = range(spec.repetitions)
    if spec.workers > 1:
        with ProcessPoolExecutor(spec.workers) as pool:
            runs = list(pool.map(run_one, [spec] * spec.repetitions, idx))
    else:
        runs = [run_one(spec, i) for i in idx]
    runs.sort(key=lambda r: r["run"])
    return {"summary": summarize(spec, runs), "runs": runs}


TABLE_COLUMNS = ("strategy", "reps", "solved", "partial", "failed", "success", "O_1_mean", "mean_s")


def format_table(batches: list[dict]) -> str:
    lines = ["\t".join(TABLE_COLUMNS)]
    for b in batches:
        s = b["summary"]
        strat = (s.get("spec") or {}).get("config", {}).get("strategy", "?")
        o = s["outcomes"]
        lines.append(
            "\t".join(
                [
                    strat,
                    str(s["repetitions"]),
                    str(o.get("solved", 0)),
                    str(o.get("partial", 0)),
                    str(o.get("failed", 0)),
                    f"{s['success_rate']:.3f}",
                    f"{s['O_1_mean']:.1f}",
                    f"{s['wall_times']['mean']:.2f}",
                ]
            )
        )
    return "\n".join(lines) + "\n"


def emit_report(batch: dict, out_dir: str | Path | None = None) -> list[Path]:
    """``run_NNN.json`` per run, ``summary.json`` and ``summary.txt``."""
    out = Path(out_dir) if out_dir is not None else default_out_dir()
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for r in batch.get("runs", []):
        p = out / f"run_{r['run']:03d}.json"
        p.write_text(json.dumps(r, indent=2, sort_keys=True) + "\n")
        written.append(p)
    if "summary" in batch:
        p = out / "summary.json"
        p.write_text(json.dumps(batch["summary"], indent=2, sort_keys=True) + "\n")
        written.append(p)
    p = out / "summary.txt"
    p.write_text(format_table([batch] if "summary" in batch else []))
    written.append(p)
    return written
