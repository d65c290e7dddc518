"""Configuration, reports and small helpers shared by every attack."""

from __future__ import annotations

import math
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterator, Sequence

from ..braid import (
    Braid,
    equal_mod_delta_sq,
    free_reduce,
    inverse,
    normal_form,
    parabolic_word,
    product,
)
from ..conjugacy import DEFAULT_BUDGET, MSCSPInstance, verify_system

SOLVED = "solved"
PARTIAL = "partial"
FAILED = "failed"
EXIT_CODES = {SOLVED: 0, FAILED: 2, PARTIAL: 3}

STRATEGIES = (
    "centralizer",
    "general",
    "length",
    "ce-subgroup",
    "ce-partial",
    "mscsp-ce",
    "mssdp",
    "mssdpv",
    "dsc",
    "differential-evolution",
)
RESERVED = ("differential-evolution",)

# An attacker-side test of a candidate secret against the live protocol,
# e.g. an impersonation attempt.  Gets the candidate and the recovered
# hidden words.
AcceptOracle = Callable[[Braid, list[Braid]], bool]


@dataclass
class AttackConfig:
    strategy: str = "centralizer"
    g_a: int | None = None
    centralizer_budget: int = 64
    centralizer_strategy: str = "public-products"
    cdp_budget: int = DEFAULT_BUDGET
    t: int = 4
    seed: int = 0
    search_mode: str = "exhaustive"
    random_draws: int = 64
    length_kind: str = "canonical-length"
    stop_constant: int | None = None
    bound_mode: bool = True
    candidate_budget: int = 20000
    correction_budget: int = 500
    max_conjugator_len: int | None = None
    peel_moves: str = "generators"
    max_peels: int = 24
    # "residual": brute-force the short leftover after peeling;
    # "prefix-csp": pair stored prefixes into conjugacy equations
    length_mode: str = "residual"
    iterations: int = 2
    search_depth: int = 3
    # generator indices of the subgroup holding the secret (ce-subgroup,
    # mscsp-ce); instance files may carry it instead
    subgroup: list[int] | None = None

    def validate(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.g_a is not None and self.g_a < 1:
            raise ValueError("g_a must be at least 1")
        if self.t < 1:
            raise ValueError("t must be at least 1")
        if self.search_mode not in ("exhaustive", "random"):
            raise ValueError(f"unknown search mode {self.search_mode!r}")
        if self.peel_moves not in ("generators", "centralizer", "both"):
            raise ValueError(f"unknown peel move set {self.peel_moves!r}")
        if self.search_depth < 0:
            raise ValueError("search_depth must be non-negative")
        if self.length_mode not in ("residual", "prefix-csp"):
            raise ValueError(f"unknown length mode {self.length_mode!r}")

    def resolved_g_a(self, n: int) -> int:
        if self.g_a is not None:
            return self.g_a
        return max(1, int(math.floor(math.log2(n))))

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> AttackConfig:
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        cfg = cls(**data)
        if cfg.subgroup is not None:
            cfg.subgroup = [int(i) for i in cfg.subgroup]
        cfg.validate()
        return cfg


@dataclass
class AttackReport:
    config: dict
    outcome: str = FAILED
    candidate_z: Braid | None = None
    mscsp_built: MSCSPInstance | None = None
    mscsp_solution: Braid | None = None
    mod_delta_sq: bool = False
    recovered_x: list[Braid] | None = None
    public_ys: list[Braid] | None = None
    pairs: list[tuple[Braid, Braid]] = field(default_factory=list)
    counters: dict = field(default_factory=dict)
    trace: list[dict] = field(default_factory=list)
    diagnostic: str = ""
    verdict: str | None = None
    extra: dict = field(default_factory=dict)
    wall_time: float = 0.0
    # extra exact check for claims outside the conjugacy equations
    verifier: Callable[[], bool] | None = field(default=None, repr=False, compare=False)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.outcome]

    def bump(self, name: str, by: int = 1) -> None:
        self.counters[name] = self.counters.get(name, 0) + by

    def equations_verify(self) -> bool:
        """Re-check every claim the report makes; used before ``solved`` is
        allowed to stand."""
        if self.verifier is not None and not self.verifier():
            return False
        if self.mscsp_built is not None and self.mscsp_built.equations:
            g = self.mscsp_solution if self.mscsp_solution is not None else self.candidate_z
            if g is None or not all(verify_system(g, self.mscsp_built.equations, self.mod_delta_sq)):
                return False
        if self.recovered_x is not None:
            if self.candidate_z is None or self.public_ys is None:
                return False
            if len(self.recovered_x) != len(self.public_ys):
                return False
            z = self.candidate_z
            zi = inverse(z)
            for x, y in zip(self.recovered_x, self.public_ys):
                if not equal_mod_delta_sq(product(z, x, zi), y):
                    return False
        return self.candidate_z is not None

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "config": self.config,
            "outcome": self.outcome,
            "exit_code": self.exit_code,
            "candidate_z": None if self.candidate_z is None else list(self.candidate_z.letters),
            "mscsp_built": None if self.mscsp_built is None else self.mscsp_built.to_json(),
            "mscsp_solution": None if self.mscsp_solution is None else list(self.mscsp_solution.letters),
            "mod_delta_sq": self.mod_delta_sq,
            "recovered_x": None if self.recovered_x is None else [list(x.letters) for x in self.recovered_x],
            "pairs": [{"a": list(a.letters), "b": list(b.letters)} for a, b in self.pairs],
            "counters": dict(sorted(self.counters.items())),
            "trace": self.trace,
            "diagnostic": self.diagnostic,
            "verdict": self.verdict,
            "extra": self.extra,
        }
        if timing:
            out["wall_time"] = self.wall_time
        return out


class Stopwatch:
    def __init__(self) -> None:
        self.start = time.perf_counter()

    def elapsed(self) -> float:
        return time.perf_counter() - self.start


def finish(report: AttackReport, watch: Stopwatch) -> AttackReport:
    """Downgrade any ``solved`` claim that does not re-verify."""
    if report.outcome == SOLVED and not report.equations_verify():
        report.outcome = FAILED
        report.diagnostic = "solution failed re-verification"
        report.bump("soundness_rejections")
    report.wall_time = watch.elapsed()
    return report


# --- words ----------------------------------------------------------------


def signed_generators(n: int, indices: Sequence[int] | None = None) -> list[int]:
    idx = range(1, n) if indices is None else indices
    return [s * i for i in idx for s in (1, -1)]


def words_up_to(n: int, max_len: int, indices: Sequence[int] | None = None, min_len: int = 0) -> Iterator[Braid]:
    """Freely reduced words in shortlex order."""
    alphabet = signed_generators(n, indices)
    level: list[tuple[int, ...]] = [()]
    if min_len == 0:
        yield Braid(n, ())
    for length in range(1, max_len + 1):
        nxt = []
        for w in level:
            for x in alphabet:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        if length >= min_len:
            for w in nxt:
                yield Braid(n, w)
        level = nxt


def random_word(rng: random.Random, n: int, length: int) -> Braid:
    out: list[int] = []
    while len(out) < length:
        x = rng.randint(1, n - 1) * rng.choice((1, -1))
        if out and out[-1] == -x:
            continue
        out.append(x)
    return Braid(n, tuple(out))


def center_window(y: Braid) -> Braid:
    """``y Delta^(2k)`` with exponent sum in ``(-n(n-1)/2, n(n-1)/2]``.

    Short words have small exponent sum, so this picks the one lift of a
    residue that can be short."""
    n = y.n
    step = n * (n - 1)
    e = y.exponent_sum()
    k = 0
    while e + k * step > step // 2:
        k -= 1
    while e + k * step <= -(step // 2):
        k += 1
    return product(y, Braid.delta(n, 2 * k)) if k else y


def _reverse(w: Braid) -> Braid:
    return Braid(w.n, tuple(reversed(w.letters)))


def short_word_mod(y: Braid) -> Braid:
    """A short word for the element of ``y Delta^2Z`` with exponent sum in
    the central window: the best of the reduced word and the two symmetric
    forms."""
    x = center_window(y)
    cands = [Braid(x.n, free_reduce(x.letters)), parabolic_word(x), _reverse(parabolic_word(_reverse(x)))]
    return min(cands, key=lambda w: (len(w), w.letters))


def unconjugate_short(z: Braid, ys: Sequence[Braid], max_len: int) -> list[Braid] | None:
    """Short words ``x_i`` with ``z x_i z^-1 = y_i`` mod Delta^2, or None if
    some ``z^-1 y_i z`` has no word of length ``<= max_len`` we can find."""
    zi = inverse(z)
    out = []
    for y in ys:
        x = short_word_mod(product(zi, y, z))
        if len(x) > max_len:
            return None
        out.append(x)
    return out


def nf_key(w: Braid) -> tuple:
    return normal_form(w).key()
