"""Structure-recovery metrics and the benchmark harness."""

from __future__ import annotations

import csv
import io
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from statistics import median

from .citest import assoc, chi2_isf, degrees_of_freedom, g2_statistic
from .dataset import Dataset
from .errors import CapacityError
from .info import eemi
from .network import REFERENCE_NETWORKS, BayesNet, Dag, forward_sample, parse_network, reference_path
from .orientation import generate_dag
from .pipeline import McmeConfig, build_skeleton
from .scores import bic_score, hill_climb

log = logging.getLogger(__name__)

ALGORITHMS = ("mcme", "hc")


@dataclass(frozen=True)
class StructureDiff:
    """Added/deleted parent relations (half-counted) and skeleton hit rates.

    ``a_g`` is half the number of (parent, child) pairs present in the
    learned graph but not in the truth, ``d_g`` the converse, ``h_g`` their
    sum. A reversed edge therefore costs 1 and a missing or extra edge 1/2.
    ``trueadd_pct``/``falseadd_pct`` count learned undirected edges that are
    / are not adjacencies of the truth, as a percentage of the true edge
    count.
    """

    a_g: float
    d_g: float
    trueadd_pct: float
    falseadd_pct: float

    @property
    def h_g(self) -> float:
        return self.a_g + self.d_g

    def to_dict(self) -> dict:
        d = asdict(self)
        d["h_g"] = self.h_g
        return d


def structure_diff(learned: Dag, truth: Dag) -> StructureDiff:
    if learned.n_nodes != truth.n_nodes:
        raise ValueError("graphs have different node counts")
    added = sum(len(set(learned.parents[i]) - set(truth.parents[i])) for i in range(truth.n_nodes))
    deleted = sum(len(set(truth.parents[i]) - set(learned.parents[i])) for i in range(truth.n_nodes))
    true_skel = truth.undirected_edges()
    learned_skel = learned.undirected_edges()
    n_true = len(true_skel)
    hits = len(learned_skel & true_skel)
    misses = len(learned_skel - true_skel)
    if n_true:
        ta, fa = 100.0 * hits / n_true, 100.0 * misses / n_true
    else:
        ta, fa = 100.0, (100.0 * misses if misses else 0.0)
    return StructureDiff(added / 2, deleted / 2, ta, fa)


def structure_diff_from_dict(d) -> StructureDiff:
    return StructureDiff(d["a_g"], d["d_g"], d["trueadd_pct"], d["falseadd_pct"])


# --- benchmark harness ------------------------------------------------------------


@dataclass
class AlgorithmResult:
    """Outcome of one algorithm on one sample; ``error`` is set instead of the rest on failure."""

    diff: StructureDiff | None = None
    bic: float | None = None
    wall_time: float | None = None
    error: str | None = None
    dag: dict | None = None


@dataclass
class BenchReport:
    """One (network, seed) run of every selected algorithm.

    ``to_dict`` keeps wall-clock times under ``meta`` so that the remaining
    fields are reproducible byte for byte.
    """

    network: str
    seed: int
    n: int
    config: McmeConfig
    results: dict = field(default_factory=dict)
    bic_truth: float | None = None
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None or any(r.error for r in self.results.values())

    def to_dict(self) -> dict:
        results, times = {}, {}
        for alg, r in self.results.items():
            results[alg] = {
                "diff": r.diff.to_dict() if r.diff else None,
                "bic": r.bic,
                "error": r.error,
                "dag": r.dag,
            }
            times[alg] = r.wall_time
        return {
            "network": self.network,
            "seed": self.seed,
            "n": self.n,
            "config": self.config.to_flat(),
            "bic_truth": self.bic_truth,
            "error": self.error,
            "results": results,
            "meta": {"wall_time": times},
        }

    @classmethod
    def from_dict(cls, d) -> "BenchReport":
        times = d.get("meta", {}).get("wall_time", {})
        results = {}
        for alg, r in d["results"].items():
            diff = structure_diff_from_dict(r["diff"]) if r.get("diff") else None
            results[alg] = AlgorithmResult(diff, r.get("bic"), times.get(alg), r.get("error"), r.get("dag"))
        return cls(d["network"], d["seed"], d["n"], McmeConfig.from_flat(**d["config"]), results,
                   d.get("bic_truth"), d.get("error"))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text) -> "BenchReport":
        return cls.from_dict(json.loads(text))


def _resolve_network(spec):
    """A BayesNet, a file path, or the name of a bundled network."""
    if isinstance(spec, BayesNet):
        return spec.name, spec
    path = Path(spec)
    if not path.exists() and str(spec) in REFERENCE_NETWORKS:
        path = reference_path(str(spec))
    name = path.stem
    return name, parse_network(path)


def learn_mcme(data: Dataset, cfg: McmeConfig, jobs=1, report=None, results=None) -> Dag:
    """Skeleton search followed by TN orientation."""
    skeleton = build_skeleton(data, cfg, jobs=jobs, results=results)
    return generate_dag(data, skeleton, cfg.lambda_hat, jobs=jobs, report=report)


def _run_algorithm(alg, data, truth, cfg, seed, bic_base):
    t0 = time.monotonic()
    try:
        if alg == "mcme":
            dag = learn_mcme(data, cfg)
        elif alg == "hc":
            dag = hill_climb(data, seed=seed)
        else:
            raise ValueError(f"unknown algorithm {alg!r}")
        elapsed = time.monotonic() - t0
        return AlgorithmResult(structure_diff(dag, truth), bic_score(data, dag, base=bic_base).total,
                               elapsed, dag=dag.to_dict())
    except Exception as exc:  # recorded, the rest of the benchmark carries on
        log.warning("%s failed: %s", alg, exc)
        return AlgorithmResult(wall_time=time.monotonic() - t0, error=f"{type(exc).__name__}: {exc}")


def run_benchmark(nets, cfg: McmeConfig | None = None, algorithms=ALGORITHMS, n=1000, seeds=(0,),
                  jobs=1, bic_base=None) -> list[BenchReport]:
    """Sample each network once per seed and score every selected algorithm.

    Parameters
    ----------
    nets : list
        Network file paths, bundled network names or :class:`BayesNet` objects.
    cfg : McmeConfig, optional
        MCME hyperparameters (defaults if omitted).
    algorithms : iterable of str
        Subset of ``("mcme", "hc")``. An empty selection yields no reports.
    n : int
        Sample size per run.
    seeds : iterable of int
        One run per seed; the seed drives the sampler.
    jobs : int
        Worker threads across (network, seed) runs.
    bic_base : float, optional
        Log base of reported BIC values (natural log if omitted).

    Returns
    -------
    list of BenchReport
        Ordered by network, then seed. A network that fails to load yields
        one failed report per seed.
    """
    cfg = cfg or McmeConfig()
    algorithms = [a for a in algorithms if a]
    if not algorithms:
        return []
    if n < 1:
        raise ValueError("sample size must be >= 1")
    seeds = list(seeds)
    tasks = []
    for spec in nets:
        try:
            name, net = _resolve_network(spec)
            err = None
        except Exception as exc:
            name, net, err = Path(str(spec)).stem, None, f"{type(exc).__name__}: {exc}"
            log.warning("cannot load network %s: %s", spec, err)
        tasks.extend((name, net, err, s) for s in seeds)

    def run(task):
        name, net, err, seed = task
        if net is None:
            return BenchReport(name, seed, n, cfg, error=err)
        data = forward_sample(net, n, seed)
        rep = BenchReport(name, seed, n, cfg, bic_truth=bic_score(data, net.dag, base=bic_base).total)
        for alg in algorithms:
            rep.results[alg] = _run_algorithm(alg, data, net.dag, cfg, seed, bic_base)
        return rep

    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run, tasks))
    return [run(t) for t in tasks]


def summarize(reports) -> list[dict]:
    """Median metrics per (network, algorithm) over the successful seeds."""
    groups: dict = {}
    for rep in reports:
        for alg, r in rep.results.items():
            if r.error is None:
                groups.setdefault((rep.network, alg), []).append(r)
    rows = []
    for (net, alg), rs in groups.items():
        rows.append({
            "network": net,
            "algorithm": alg,
            "runs": len(rs),
            "a_g": median(r.diff.a_g for r in rs),
            "d_g": median(r.diff.d_g for r in rs),
            "h_g": median(r.diff.h_g for r in rs),
            "trueadd_pct": median(r.diff.trueadd_pct for r in rs),
            "falseadd_pct": median(r.diff.falseadd_pct for r in rs),
            "bic": median(r.bic for r in rs),
            "wall_time": median(r.wall_time for r in rs),
        })
    return rows


_COLUMNS = ("network", "seed", "algorithm", "a_g", "d_g", "h_g", "trueadd_pct", "falseadd_pct",
            "bic", "wall_time", "error")


def _flat_rows(reports):
    for rep in reports:
        if rep.error:
            yield {"network": rep.network, "seed": rep.seed, "error": rep.error}
            continue
        for alg, r in rep.results.items():
            row = {"network": rep.network, "seed": rep.seed, "algorithm": alg, "error": r.error or ""}
            if r.diff:
                row.update(r.diff.to_dict())
                row.update(bic=r.bic, wall_time=r.wall_time)
            yield row


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.2f}" if abs(v) >= 1000 else f"{v:.4g}"
    return str(v)


def format_reports(reports, fmt="table") -> str:
    """Render reports as ``json`` (one object per line), ``csv`` or a text ``table``."""
    if fmt == "json":
        return "".join(r.to_json() + "\n" for r in reports)
    rows = list(_flat_rows(reports))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    if fmt != "table":
        raise ValueError(f"unknown format {fmt!r}")
    table = [list(_COLUMNS)] + [[_cell(r.get(c)) for c in _COLUMNS] for r in rows]
    summary = summarize(reports)
    if summary:
        cols = ("network", "algorithm", "runs", "a_g", "d_g", "h_g", "trueadd_pct", "falseadd_pct", "bic")
        table_s = [list(cols)] + [[_cell(r[c]) for c in cols] for r in summary]
    else:
        table_s = []
    return _render(table) + ("\nmedians\n" + _render(table_s) if table_s else "")


def _render(table) -> str:
    widths = [max(len(row[i]) for row in table) for i in range(len(table[0]))]
    return "".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n" for row in table)


# --- CI diagnostics -----------------------------------------------------------------

EXPLAIN_COLUMNS = ("candidate", "z_size", "conditioning", "g2", "dof", "quantile", "p_value",
                   "dependent", "eemi")


def explain_target(data: Dataset, target, candidates=None, alpha=0.01, max_z=4) -> list[dict]:
    """Association diagnostics of ``target`` against each candidate.

    For each candidate ``y`` the conditioning set grows one variable at a
    time, taking the other variables in order of decreasing marginal
    association with the target (smallest p-value first). Every step reports
    the G² statistic next to the critical value ``chi2_isf(alpha, dof)``, the
    p-value and the (conditional) EEMI. Rows with ``z_size == 0`` are the
    plain pairwise diagnostics. Growth stops early when the conditioning
    table exceeds the cell cap.
    """
    t = data.index(target)
    pool = [v for v in range(data.n_variables) if v != t] if candidates is None else [data.index(c) for c in candidates]
    others = [v for v in range(data.n_variables) if v != t]
    ranked = sorted(others, key=lambda v: (assoc(data, t, v, alpha=alpha).log_p, v))
    rows = []
    cards = data.cardinalities
    for y in pool:
        if y == t:
            raise ValueError("target cannot be its own candidate")
        order = [v for v in ranked if v != y]
        for k in range(0, min(max_z, len(order)) + 1):
            z = order[:k]
            try:
                g2 = g2_statistic(data, t, y, z)
                res = assoc(data, t, y, z, alpha)
                e = eemi(data, t, y, z)
            except CapacityError:
                break
            dof = degrees_of_freedom(t, y, z, cards)
            rows.append({
                "candidate": data.names[y],
                "z_size": k,
                "conditioning": " ".join(data.names[v] for v in z),
                "g2": g2,
                "dof": dof,
                "quantile": chi2_isf(alpha, dof) if dof > 0 else 0.0,
                "p_value": res.p_value,
                "dependent": not res.independent,
                "eemi": e,
            })
    return rows


def explain_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=EXPLAIN_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()
