"""Grow/shrink CI search with bounded memory and repeated memory erasing."""

from __future__ import annotations

import json
import logging
import warnings
from dataclasses import dataclass, field

from .citest import assoc
from .dataset import Dataset
from .errors import CapacityError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CitmParams:
    """Erase-round budget, per-round memory capacity and significance level."""

    layers: int = 1
    memory: int = 1
    alpha: float = 0.01

    def __post_init__(self):
        if self.layers < 0:
            raise ValueError("layers must be >= 0")
        if self.memory < 1:
            raise ValueError("CI-test memory capacity must be >= 1")
        if self.memory > 2:
            warnings.warn(
                f"CI-test memory {self.memory} > 2: conditioning sets this large "
                "usually wash out real dependencies at small sample sizes",
                stacklevel=3,
            )
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")


@dataclass
class CpcResult:
    """Accumulated candidate parents/children, the untouched remainder and a trace."""

    target: int
    cpc: list[int]
    residual: list[int]
    trace: list[dict] = field(default_factory=list)

    def trace_jsonl(self) -> str:
        return "".join(json.dumps(e, sort_keys=True) + "\n" for e in self.trace)


def _event(trace, **kw):
    trace.append(kw)


def citm(data: Dataset, target, candidates, params: CitmParams) -> CpcResult:
    """Collect candidate neighbours of ``target`` over several memory-erase rounds.

    Each round starts with an empty conditioning memory. The grow phase adds
    the candidate with the smallest association p-value given the memory
    while that p-value is below ``alpha`` and the memory has room; the shrink
    phase then drops any member that becomes independent given the others.
    The round's survivors join the result and leave the candidate pool, and
    the memory is erased. The search stops after ``params.layers`` rounds or
    as soon as a round contributes nothing.
    """
    t = data.index(target)
    residual = sorted({data.index(c) for c in candidates})
    if t in residual:
        raise ValueError("target must not be among its own candidates")
    alpha = params.alpha
    total: list[int] = []
    trace: list[dict] = []

    for rnd in range(params.layers):
        cpc: list[int] = []
        while len(cpc) < params.memory:
            best = None
            for v in residual:
                if v in cpc:
                    continue
                try:
                    r = assoc(data, t, v, cpc, alpha)
                except CapacityError:
                    _event(trace, layer="citm", target=t, round=rnd, event="skip", var=v, cond=list(cpc))
                    log.info("citm: capacity exceeded testing %s | %s, skipped", v, cpc)
                    continue
                if best is None or r.log_p < best[0].log_p:
                    best = (r, v)
            if best is None or not best[0].p_value < alpha:
                break
            r, v = best
            cpc.append(v)
            _event(trace, layer="citm", target=t, round=rnd, event="add", var=v,
                   cond=cpc[:-1], p=r.p_value, g2=r.g2, dof=r.dof)

        while cpc:
            worst = None
            for x in sorted(cpc):
                rest = [c for c in cpc if c != x]
                try:
                    r = assoc(data, t, x, rest, alpha)
                except CapacityError:
                    continue
                if worst is None or r.log_p > worst[0].log_p:
                    worst = (r, x)
            if worst is None or not worst[0].p_value > alpha:
                break
            r, x = worst
            cpc.remove(x)
            _event(trace, layer="citm", target=t, round=rnd, event="remove", var=x,
                   cond=list(cpc), p=r.p_value, g2=r.g2, dof=r.dof)

        _event(trace, layer="citm", target=t, round=rnd, event="erase", kept=list(cpc))
        if not cpc:
            break
        total.extend(cpc)
        residual = [v for v in residual if v not in cpc]

    return CpcResult(t, total, residual, trace)
