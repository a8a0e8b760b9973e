"""Command-line interface: ``mcme sample|learn|score|evaluate|bench|explain``.

Exit status is 0 on success, 1 on data or run errors and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

from . import __version__
from .errors import McmeError
from .evaluation import (
    ALGORITHMS,
    explain_csv,
    explain_target,
    format_reports,
    run_benchmark,
    structure_diff,
)
from .dataset import load_csv
from .network import REFERENCE_NETWORKS, Dag, forward_sample, load_reference, parse_network
from .orientation import generate_dag
from .pipeline import McmeConfig, build_skeleton, config_dict
from .scores import bic_score, lld_score

log = logging.getLogger("mcme")

JOBS_ENV = "MCME_JOBS"

# flag dest -> McmeConfig flat key
_CONFIG_FLAGS = {
    "ct_layer": "ct_layer",
    "ct_memory": "ct_memory",
    "ct_alpha": "ct_alpha",
    "ee_layer": "ee_layer",
    "ee_memory": "ee_memory",
    "ee_alpha": "ee_alpha",
    "lambda_hat": "lambda_hat",
}
_CONFIG_ALIASES = {"lambda": "lambda_hat", "ctlayer": "ct_layer", "ctmemory": "ct_memory",
                   "ctalpha": "ct_alpha", "eelayer": "ee_layer", "eememory": "ee_memory",
                   "eealpha": "ee_alpha"}


class CliError(Exception):
    """Run-time failure reported with exit status 1."""


def _default_jobs():
    raw = os.environ.get(JOBS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines (``#`` comments, blank lines ignored)."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_").lower()
        key = _CONFIG_ALIASES.get(key.replace("_", ""), key)
        if key not in McmeConfig.FLAT_KEYS:
            raise CliError(f"{path}:{lineno}: unknown parameter {key!r}")
        out[key] = value
    return out


def resolve_config(args) -> McmeConfig:
    """Defaults, then the ``--config`` file, then explicit flags."""
    values = read_config_file(args.config) if getattr(args, "config", None) else {}
    for dest, key in _CONFIG_FLAGS.items():
        v = getattr(args, dest, None)
        if v is not None:
            values[key] = v
    try:
        return McmeConfig.from_flat(**values)
    except ValueError as exc:
        raise CliError(f"invalid configuration: {exc}") from exc


def _load_net(spec):
    if not Path(spec).exists() and spec in REFERENCE_NETWORKS:
        return load_reference(spec)
    return parse_network(spec)


def _write(path, text):
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _dag_for(names, dag: Dag) -> Dag:
    """Re-index ``dag`` onto the node order ``names``."""
    if sorted(names) != sorted(dag.names):
        raise CliError("graphs are over different variables")
    pos = {n: i for i, n in enumerate(names)}
    parents = [[] for _ in names]
    for i, n in enumerate(dag.names):
        parents[pos[n]] = [pos[dag.names[p]] for p in dag.parents[i]]
    return Dag(len(names), parents, list(names))


def _edges_output(dag: Dag, fmt) -> str:
    if fmt == "json":
        return json.dumps(dag.to_dict(), indent=2) + "\n"
    if fmt == "csv":
        return "parent,child\n" + "".join(f"{dag.names[u]},{dag.names[v]}\n" for u, v in dag.edges())
    return dag.to_edge_list()


# --- subcommands -------------------------------------------------------------------


def cmd_sample(args):
    net = _load_net(args.net)
    data = forward_sample(net, args.n, args.seed)
    if args.out in (None, "-"):
        data.write_csv(sys.stdout, args.delimiter)
    else:
        data.to_csv(args.out, delimiter=args.delimiter)
        log.info("wrote %d rows of %s to %s", args.n, net.name, args.out)
    return 0


def cmd_learn(args):
    cfg = resolve_config(args)
    network = _load_net(args.net) if args.net else None
    data = load_csv(args.data, delimiter=args.delimiter, network=network)
    t0 = time.monotonic()
    results = []
    skeleton = build_skeleton(data, cfg, jobs=args.jobs, results=results)
    t1 = time.monotonic()
    repairs: list = []
    dag = generate_dag(data, skeleton, cfg.lambda_hat, jobs=args.jobs, report=repairs)
    t2 = time.monotonic()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "dag.json").write_text(json.dumps(dag.to_dict(), indent=2) + "\n", encoding="utf-8")
    (out / "skeleton.txt").write_text(skeleton.to_edge_list(), encoding="utf-8")
    report = {
        "data": str(args.data),
        "n_samples": data.n_samples,
        "config": config_dict(cfg),
        "skeleton": skeleton.to_dict()["edges"],
        "repairs": repairs,
        "bic": bic_score(data, dag).total,
        "meta": {"wall_time": {"skeleton": t1 - t0, "orientation": t2 - t1}},
    }
    (out / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if args.trace:
        lines = []
        for res in results:
            lines.append(res.citm.trace_jsonl())
            lines.append(res.eemi.trace_jsonl())
        (out / "trace.jsonl").write_text("".join(lines), encoding="utf-8")
    sys.stdout.write(_edges_output(dag, args.format))
    return 0


def cmd_score(args):
    data = load_csv(args.data, delimiter=args.delimiter)
    dag = _dag_for(data.names, Dag.from_dict(json.loads(Path(args.dag).read_text(encoding="utf-8"))))
    lld = lld_score(data, dag, base=args.base)
    bic = bic_score(data, dag, base=args.base)
    rows = [{"node": data.names[i], "lld": lld.per_node[i], "bic": bic.per_node[i]} for i in range(dag.n_nodes)]
    if args.format == "json":
        text = json.dumps({"lld": lld.total, "bic": bic.total, "per_node": rows}, indent=2) + "\n"
    elif args.format == "csv":
        text = "node,lld,bic\n" + "".join(f"{r['node']},{r['lld']!r},{r['bic']!r}\n" for r in rows)
        text += f"TOTAL,{lld.total!r},{bic.total!r}\n"
    else:
        text = "".join(f"{r['node']:<24} {r['lld']:>14.4f} {r['bic']:>14.4f}\n" for r in rows)
        text += f"{'TOTAL':<24} {lld.total:>14.4f} {bic.total:>14.4f}\n"
    _write(args.out, text)
    return 0


def cmd_evaluate(args):
    truth = _load_net(args.truth).dag
    learned = _dag_for(truth.names, Dag.from_dict(json.loads(Path(args.learned).read_text(encoding="utf-8"))))
    diff = structure_diff(learned, truth).to_dict()
    if args.format == "json":
        text = json.dumps(diff, indent=2) + "\n"
    elif args.format == "csv":
        keys = list(diff)
        text = ",".join(keys) + "\n" + ",".join(repr(diff[k]) for k in keys) + "\n"
    else:
        text = "".join(f"{k:<14} {v:g}\n" for k, v in diff.items())
    _write(args.out, text)
    return 0


def _network_specs(items):
    specs = []
    for item in items:
        p = Path(item)
        if p.is_dir():
            specs.extend(sorted(str(f) for f in p.iterdir() if f.suffix in (".net", ".bif")))
        else:
            specs.append(item)
    return specs


def cmd_bench(args):
    cfg = resolve_config(args)
    algorithms = [a.strip() for a in args.algorithms.split(",") if a.strip()]
    unknown = set(algorithms) - set(ALGORITHMS)
    if unknown:
        raise CliError(f"unknown algorithms: {sorted(unknown)}")
    seeds = list(range(args.seed, args.seed + args.seeds))
    reports = run_benchmark(_network_specs(args.nets), cfg, algorithms, n=args.n, seeds=seeds,
                            jobs=args.jobs, bic_base=args.base)
    _write(args.out, format_reports(reports, args.format))
    if args.json_out:
        Path(args.json_out).write_text(format_reports(reports, "json"), encoding="utf-8")
    failed = [r for r in reports if r.failed]
    for r in failed:
        errors = [r.error] if r.error else [f"{a}: {x.error}" for a, x in r.results.items() if x.error]
        print(f"mcme: run {r.network} seed {r.seed} failed: {'; '.join(errors)}", file=sys.stderr)
    return 1 if failed else 0


def cmd_explain(args):
    data = load_csv(args.data, delimiter=args.delimiter)
    if args.target not in data.names:
        raise CliError(f"unknown target {args.target!r}")
    candidates = None
    if args.candidates is not None:
        candidates = [c.strip() for c in args.candidates.split(",") if c.strip()]
        missing = [c for c in candidates if c not in data.names]
        if missing:
            raise CliError(f"unknown candidates: {missing}")
    rows = explain_target(data, args.target, candidates, alpha=args.alpha, max_z=args.max_z)
    _write(args.out, explain_csv(rows))
    return 0


# --- parser ------------------------------------------------------------------------


def _add_config_flags(p):
    g = p.add_argument_group("MCME parameters (defaults: 1, 1, 0.01, 1, 1, 0.55, 0.3)")
    g.add_argument("--ct-layer", type=int, dest="ct_layer", help="CI-test erase rounds (default 1)")
    g.add_argument("--ct-memory", type=int, dest="ct_memory", help="CI-test memory capacity (default 1)")
    g.add_argument("--ct-alpha", type=float, dest="ct_alpha", help="CI-test significance (default 0.01)")
    g.add_argument("--ee-layer", type=int, dest="ee_layer", help="EEMI erase rounds (default 1)")
    g.add_argument("--ee-memory", type=int, dest="ee_memory", help="EEMI memory capacity (default 1)")
    g.add_argument("--ee-alpha", type=float, dest="ee_alpha", help="EEMI threshold (default 0.55)")
    g.add_argument("--lambda", type=float, dest="lambda_hat", help="TN penalty weight (default 0.3)")
    g.add_argument("--config", help="key=value file; flags override its entries")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--jobs", type=int, default=_default_jobs(),
                        help=f"worker threads (default ${JOBS_ENV} or 1)")
    common.add_argument("--delimiter", default=",", help="CSV delimiter (default ',')")
    common.add_argument("-v", "--verbose", action="count", default=0)

    ap = argparse.ArgumentParser(prog="mcme", description="MCME Bayesian-network structure learning")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", parents=[common], help="forward-sample a network to CSV")
    p.add_argument("--net", required=True, help="network file or bundled name")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output CSV (default stdout)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("learn", parents=[common], help="learn a DAG with MCME")
    p.add_argument("--data", required=True, help="CSV with a header row")
    p.add_argument("--net", help="network whose state lists define the coding")
    p.add_argument("--out-dir", default="mcme-out", help="directory for dag.json, skeleton.txt, report.json")
    p.add_argument("--trace", action="store_true", help="also write trace.jsonl")
    p.add_argument("--format", choices=("json", "table", "csv"), default="table")
    _add_config_flags(p)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("score", parents=[common], help="LLD and BIC of a DAG on data")
    p.add_argument("--data", required=True)
    p.add_argument("--dag", required=True, help="DAG JSON as written by learn")
    p.add_argument("--base", type=float, help="log base (default e)")
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "table", "csv"), default="table")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("evaluate", parents=[common], help="compare a learned DAG with a true network")
    p.add_argument("--learned", required=True, help="DAG JSON")
    p.add_argument("--truth", required=True, help="network file or bundled name")
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "table", "csv"), default="table")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bench", parents=[common], help="benchmark MCME and hill climbing")
    p.add_argument("--nets", nargs="+", default=["asia", "sports", "property", "alarm"],
                   help="network files, directories or bundled names")
    p.add_argument("--algorithms", default=",".join(ALGORITHMS))
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seeds", type=int, default=10, help="number of seeds")
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--base", type=float, help="log base of reported BIC (default e)")
    p.add_argument("--out")
    p.add_argument("--json-out", help="also write JSON-lines reports here")
    p.add_argument("--format", choices=("json", "table", "csv"), default="table")
    _add_config_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("explain", parents=[common], help="per-candidate CI and EEMI diagnostics (CSV)")
    p.add_argument("--data", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--candidates", help="comma-separated subset (default all other variables)")
    p.add_argument("--alpha", type=float, default=0.01)
    p.add_argument("--max-z", type=int, default=4, help="largest conditioning set")
    p.add_argument("--out")
    p.set_defaults(func=cmd_explain)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    try:
        return args.func(args)
    except (CliError, McmeError, OSError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"mcme: error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
