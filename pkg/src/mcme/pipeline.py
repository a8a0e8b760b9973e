"""Per-target CITM + EEMI composition and skeleton integration."""

from __future__ import annotations

import json
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

from .citm import CitmParams, CpcResult, citm
from .dataset import Dataset
from .eemi_search import EemiParams, eemi_search


@dataclass(frozen=True)
class McmeConfig:
    """The seven MCME hyperparameters.

    Defaults follow the best ASIA row of the parameter study: one erase
    round and memory one for both layers, CI significance 0.01, EEMI
    threshold 0.55 and TN penalty 0.3.
    """

    citm: CitmParams = field(default_factory=CitmParams)
    eemi: EemiParams = field(default_factory=EemiParams)
    lambda_hat: float = 0.3

    def __post_init__(self):
        if not 0 < self.lambda_hat < 1:
            warnings.warn(f"lambda_hat={self.lambda_hat} outside (0, 1)", stacklevel=3)

    FLAT_KEYS = ("ct_layer", "ct_memory", "ct_alpha", "ee_layer", "ee_memory", "ee_alpha", "lambda_hat")

    @classmethod
    def from_flat(cls, **kw) -> "McmeConfig":
        unknown = set(kw) - set(cls.FLAT_KEYS)
        if unknown:
            raise ValueError(f"unknown MCME parameters: {sorted(unknown)}")
        d = cls().to_flat()
        d.update({k: v for k, v in kw.items() if v is not None})
        return cls(
            CitmParams(int(d["ct_layer"]), int(d["ct_memory"]), float(d["ct_alpha"])),
            EemiParams(int(d["ee_layer"]), int(d["ee_memory"]), float(d["ee_alpha"])),
            float(d["lambda_hat"]),
        )

    def to_flat(self) -> dict:
        return {
            "ct_layer": self.citm.layers,
            "ct_memory": self.citm.memory,
            "ct_alpha": self.citm.alpha,
            "ee_layer": self.eemi.layers,
            "ee_memory": self.eemi.memory,
            "ee_alpha": self.eemi.alpha,
            "lambda_hat": self.lambda_hat,
        }


@dataclass
class TargetResult:
    target: int
    citm: CpcResult
    eemi: CpcResult

    @property
    def cpc(self) -> list[int]:
        return self.citm.cpc + self.eemi.cpc

    @property
    def trace(self) -> list[dict]:
        return self.citm.trace + self.eemi.trace


def mcme_target(data: Dataset, target, candidates, cfg: McmeConfig) -> TargetResult:
    """Run the CITM layer, then the EEMI layer on whatever CITM left untested."""
    first = citm(data, target, candidates, cfg.citm)
    second = eemi_search(data, target, first.residual, cfg.eemi)
    return TargetResult(first.target, first, second)


def mcme_cpc(data: Dataset, target, candidates, cfg: McmeConfig) -> set[int]:
    """Candidate parents and children of ``target`` (union of both layers)."""
    return set(mcme_target(data, target, candidates, cfg).cpc)


class Skeleton:
    """Undirected graph with per-edge provenance.

    ``provenance[(u, v)]`` (u < v) holds ``layers`` (subset of {"citm", "eemi"})
    and ``proposed_by`` (the endpoints whose search proposed the edge).
    """

    def __init__(self, n_nodes, names=None):
        self.n_nodes = n_nodes
        self.names = list(names) if names is not None else [str(i) for i in range(n_nodes)]
        self.provenance: dict[tuple[int, int], dict] = {}

    def add(self, u, v, layer=None, proposer=None):
        if u == v:
            raise ValueError("self-pairs are not allowed")
        key = (min(u, v), max(u, v))
        rec = self.provenance.setdefault(key, {"layers": set(), "proposed_by": set()})
        if layer:
            rec["layers"].add(layer)
        if proposer is not None:
            rec["proposed_by"].add(proposer)

    @property
    def edges(self) -> set[tuple[int, int]]:
        return set(self.provenance)

    def tag(self, edge) -> str:
        layers = self.provenance[edge]["layers"]
        return "both" if len(layers) == 2 else next(iter(layers), "")

    def neighbours(self, node) -> set[int]:
        return {v if u == node else u for u, v in self.provenance if node in (u, v)}

    def __len__(self):
        return len(self.provenance)

    def to_edge_list(self) -> str:
        return "".join(f"{self.names[u]} -- {self.names[v]}\n" for u, v in sorted(self.provenance))

    def to_dict(self) -> dict:
        return {
            "nodes": self.names,
            "edges": [
                {
                    "u": self.names[u],
                    "v": self.names[v],
                    "tag": self.tag((u, v)),
                    "proposed_by": sorted(self.names[p] for p in rec["proposed_by"]),
                }
                for (u, v), rec in sorted(self.provenance.items())
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d) -> "Skeleton":
        names = d["nodes"]
        idx = {n: i for i, n in enumerate(names)}
        sk = cls(len(names), names)
        for e in d["edges"]:
            u, v = idx[e["u"]], idx[e["v"]]
            tag = e.get("tag", "")
            layers = ["citm", "eemi"] if tag == "both" else [tag] if tag else [None]
            for layer in layers:
                sk.add(u, v, layer)
            for p in e.get("proposed_by", []):
                sk.add(u, v, proposer=idx[p])
        return sk


def build_skeleton(data: Dataset, cfg: McmeConfig, jobs=1, rule="or", results=None) -> Skeleton:
    """Run the per-target search for every variable and merge the proposals.

    With ``rule="or"`` an edge is kept when either endpoint proposes it;
    ``rule="and"`` requires both. Pass a list as ``results`` to receive the
    per-target :class:`TargetResult` objects (in target order).
    """
    n = data.n_variables
    if n < 2:
        raise ValueError("need at least two variables")
    if rule not in ("or", "and"):
        raise ValueError("rule must be 'or' or 'and'")

    def run(t):
        return mcme_target(data, t, [v for v in range(n) if v != t], cfg)

    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_target = list(pool.map(run, range(n)))
    else:
        per_target = [run(t) for t in range(n)]
    if results is not None:
        results.extend(per_target)

    proposals: dict[tuple[int, int], list[tuple[int, str]]] = {}
    for res in per_target:
        for layer, part in (("citm", res.citm), ("eemi", res.eemi)):
            for v in part.cpc:
                key = (min(res.target, v), max(res.target, v))
                proposals.setdefault(key, []).append((res.target, layer))

    sk = Skeleton(n, data.names)
    for key, props in sorted(proposals.items()):
        if rule == "and" and len({p for p, _ in props}) < 2:
            continue
        for proposer, layer in props:
            sk.add(*key, layer=layer, proposer=proposer)
    return sk


def config_dict(cfg: McmeConfig) -> dict:
    return {"citm": asdict(cfg.citm), "eemi": asdict(cfg.eemi), "lambda_hat": cfg.lambda_hat}
