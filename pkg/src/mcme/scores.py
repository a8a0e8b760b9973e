"""Decomposable LLD/BIC scores and the hill-climbing baseline."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, contingency
from .errors import CapacityError
from .network import Dag


@dataclass(frozen=True)
class ScoreValue:
    total: float
    per_node: dict

    def __float__(self):
        return self.total


def family_lld(data: Dataset, child, parents) -> float:
    """sum_jk N_ijk ln(N_ijk / N_ij) for one node and its parent set."""
    parents = list(parents)
    if not parents:
        c = contingency(data, [child]).counts.astype(float)
        nz = c[c > 0]
        return float(np.sum(nz * np.log(nz / data.n_samples)))
    t = contingency(data, [*parents, child]).counts.astype(float)
    t = t.reshape(-1, t.shape[-1])
    nij = t.sum(axis=1, keepdims=True)
    mask = t > 0
    return float(np.sum(t[mask] * np.log((t / np.where(nij > 0, nij, 1.0))[mask])))


def family_parameters(data: Dataset, child, parents) -> int:
    card = data.cardinalities
    return (card[child] - 1) * math.prod(card[p] for p in parents)


def family_bic(data: Dataset, child, parents) -> float:
    return family_lld(data, child, parents) - 0.5 * math.log(data.n_samples) * family_parameters(
        data, child, parents
    )


def _check(data, dag):
    if dag.n_nodes != data.n_variables:
        raise ValueError("graph and data disagree on the number of variables")


def _unit(base):
    if base is None:
        return 1.0
    if base <= 0 or base == 1:
        raise ValueError("log base must be positive and not 1")
    return 1.0 / math.log(base)


def lld_score(data: Dataset, dag: Dag, base=None) -> ScoreValue:
    """Log-likelihood of the maximum-likelihood parameters, one term per family.

    Natural log by default; ``base=2`` reports bits.
    """
    _check(data, dag)
    k = _unit(base)
    per = {i: k * family_lld(data, i, dag.parents[i]) for i in range(dag.n_nodes)}
    return ScoreValue(float(sum(per.values())), per)


def bic_score(data: Dataset, dag: Dag, base=None) -> ScoreValue:
    """LLD minus (ln N / 2) free parameters, per family.

    ``base`` rescales the whole score (both terms) to another log base, so
    the ranking of graphs is unchanged.
    """
    _check(data, dag)
    k = _unit(base)
    per = {i: k * family_bic(data, i, dag.parents[i]) for i in range(dag.n_nodes)}
    return ScoreValue(float(sum(per.values())), per)


def hill_climb(data: Dataset, max_iters=10_000, seed=0, start=None, tol=1e-9):
    """Greedy BIC search over single-edge additions, deletions and reversals.

    Starts from ``start`` (default: the empty graph) and applies the best
    improving move until none improves the score by more than ``tol`` or
    ``max_iters`` moves were made. Candidate moves are scanned in
    lexicographic (u, v, kind) order and the first best one wins, so the
    search is deterministic; ``seed`` is accepted for interface symmetry and
    does not influence the result.
    """
    n = data.n_variables
    dag = start.copy() if start is not None else Dag(n, names=data.names)
    cache: dict = {}

    def fam(child, parents):
        key = (child, frozenset(parents))
        if key not in cache:
            try:
                cache[key] = family_bic(data, child, sorted(parents))
            except CapacityError:
                cache[key] = -math.inf
        return cache[key]

    for _ in range(max_iters):
        best_delta, best_move = tol, None
        current = [fam(i, dag.parents[i]) for i in range(n)]
        for u in range(n):
            for v in range(n):
                if u == v:
                    continue
                pv = dag.parents[v]
                if u in pv:
                    d_del = fam(v, [p for p in pv if p != u]) - current[v]
                    if d_del > best_delta:
                        best_delta, best_move = d_del, ("delete", u, v)
                    d_rev = d_del + fam(u, dag.parents[u] + [v]) - current[u]
                    if d_rev > best_delta:
                        dag.remove_edge(u, v)
                        ok = not dag.has_path(u, v)
                        dag.parents[v].append(u)
                        if ok:
                            best_delta, best_move = d_rev, ("reverse", u, v)
                elif v not in dag.parents[u]:
                    d_add = fam(v, pv + [u]) - current[v]
                    if d_add > best_delta and not dag.has_path(v, u):
                        best_delta, best_move = d_add, ("add", u, v)
        if best_move is None:
            break
        kind, u, v = best_move
        if kind == "add":
            dag.add_edge(u, v, check_acyclic=False)
        elif kind == "delete":
            dag.remove_edge(u, v)
        else:
            dag.remove_edge(u, v)
            dag.add_edge(v, u, check_acyclic=False)
    return dag
