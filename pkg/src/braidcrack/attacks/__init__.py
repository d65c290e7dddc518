"""Attacks on simultaneous conjugacy systems and their shifted variants."""

from __future__ import annotations

from ..braid import Braid
from ..conjugacy import MSCSPInstance
from ..ttp import MSCSPvInstance
from .ce import attack_ce_partial, attack_ce_subgroup, ce_recover
from .centralizer_attack import (
    PairGroup,
    attack_centralizer,
    attack_general_mscspv,
    bounded_conjugators,
    guess_hit_rate,
)
from .common import (
    EXIT_CODES,
    FAILED,
    PARTIAL,
    RESERVED,
    SOLVED,
    STRATEGIES,
    AcceptOracle,
    AttackConfig,
    AttackReport,
    short_word_mod,
)
from .length import attack_length, attack_mscsp_ce_length
from .shifted import (
    MSSDPInstance,
    correction_subgroup,
    ce_transform,
    dsc_attack,
    lift_to_bn1,
    recover_secret,
    shifted_conjugate,
    solve_mssdp,
    solve_mssdpv,
)
from .subgroups import SubgroupRecovery, recover_subgroups

MSCSPV_STRATEGIES = ("centralizer", "general", "length", "ce-subgroup", "ce-partial")


def _subgroup(cfg: AttackConfig, data: dict) -> list[int]:
    idx = cfg.subgroup if cfg.subgroup is not None else data.get("subgroup")
    if not idx:
        raise ValueError(f"strategy {cfg.strategy!r} needs a subgroup (generator indices)")
    return [int(i) for i in idx]


def run_attack(cfg: AttackConfig, data: dict, accept: AcceptOracle | None = None) -> AttackReport:
    """Parse an instance file's contents for ``cfg.strategy`` and run it."""
    cfg.validate()
    s = cfg.strategy
    if s in RESERVED:
        raise NotImplementedError(f"strategy {s!r} is reserved but not implemented")
    if s in MSCSPV_STRATEGIES:
        inst = MSCSPvInstance.from_json(data)
        if s == "centralizer":
            return attack_centralizer(inst, cfg, accept)
        if s == "general":
            return attack_general_mscspv(inst, cfg, accept)
        if s == "length":
            return attack_length(inst, cfg, accept)
        if s == "ce-subgroup":
            return attack_ce_subgroup(inst, _subgroup(cfg, data), cfg, accept)
        return attack_ce_partial(inst, cfg, accept)
    if s == "mscsp-ce":
        inst = MSCSPInstance.from_json(data)
        B = [Braid(inst.n, (i,)) for i in _subgroup(cfg, data)]
        return attack_mscsp_ce_length(inst, cfg, B, accept)
    sinst = MSSDPInstance.from_json(data)
    if s == "mssdp":
        return solve_mssdp(sinst.public(), cfg)
    if s == "mssdpv":
        return solve_mssdpv(sinst.hidden(), cfg)
    if "rs" not in data:
        raise ValueError("dsc instance needs the public 'rs' word")
    rs = Braid(sinst.n + 1, tuple(data["rs"]))
    return dsc_attack([(c, y) for c, y in sinst.equations], rs, cfg)


__all__ = [
    "EXIT_CODES",
    "FAILED",
    "PARTIAL",
    "SOLVED",
    "STRATEGIES",
    "AcceptOracle",
    "AttackConfig",
    "AttackReport",
    "MSSDPInstance",
    "PairGroup",
    "SubgroupRecovery",
    "attack_ce_partial",
    "attack_ce_subgroup",
    "attack_centralizer",
    "attack_general_mscspv",
    "attack_length",
    "attack_mscsp_ce_length",
    "bounded_conjugators",
    "ce_recover",
    "ce_transform",
    "correction_subgroup",
    "dsc_attack",
    "guess_hit_rate",
    "lift_to_bn1",
    "recover_secret",
    "recover_subgroups",
    "run_attack",
    "short_word_mod",
    "shifted_conjugate",
    "solve_mssdp",
    "solve_mssdpv",
]
