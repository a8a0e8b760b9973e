"""Complementary neighbour screening by entropy-eliminated mutual information."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .citm import CpcResult
from .dataset import Dataset
from .errors import CapacityError
from .info import eemi

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EemiParams:
    """Selection budget, conditioning memory and EEMI threshold.

    ``memory = 0`` makes every selection unconditional. With ``memory = 1``
    the memory is erased whenever it is full, so conditioned and
    unconditioned picks alternate.
    """

    layers: int = 1
    memory: int = 1
    alpha: float = 0.55

    def __post_init__(self):
        if self.layers < 0:
            raise ValueError("layers must be >= 0")
        if self.memory < 0:
            raise ValueError("memory must be >= 0")
        if not 0 <= self.alpha <= 1:
            raise ValueError("EEMI threshold must lie in [0, 1]")


def eemi_search(data: Dataset, target, candidates, params: EemiParams) -> CpcResult:
    """Pick up to ``params.layers`` candidates whose EEMI with ``target`` exceeds ``alpha``.

    Every iteration erases the memory if it is full, then selects the
    candidate of largest EEMI given the memory (lowest index on ties). The
    search stops at the first maximum that does not exceed the threshold.
    """
    t = data.index(target)
    residual = sorted({data.index(c) for c in candidates})
    if t in residual:
        raise ValueError("target must not be among its own candidates")
    cpc: list[int] = []
    total: list[int] = []
    trace: list[dict] = []

    for it in range(params.layers):
        if len(cpc) >= params.memory:
            if cpc:
                trace.append(dict(layer="eemi", target=t, iteration=it, event="erase", kept=list(cpc)))
            cpc = []
        best = None
        for v in residual:
            try:
                score = eemi(data, t, v, cpc)
            except CapacityError:
                trace.append(dict(layer="eemi", target=t, iteration=it, event="skip", var=v, cond=list(cpc)))
                log.info("eemi: capacity exceeded for %s | %s, skipped", v, cpc)
                continue
            if best is None or score > best[0]:
                best = (score, v)
        if best is None or not best[0] > params.alpha:
            if best is not None:
                trace.append(dict(layer="eemi", target=t, iteration=it, event="stop", var=best[1],
                                  eemi=best[0], cond=list(cpc)))
            break
        score, v = best
        trace.append(dict(layer="eemi", target=t, iteration=it, event="add", var=v, eemi=score, cond=list(cpc)))
        if params.memory > 0:
            cpc.append(v)
        residual.remove(v)
        total.append(v)

    return CpcResult(t, total, residual, trace)
